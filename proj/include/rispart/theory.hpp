#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>

namespace rispart {

/// Gaussian summary of the UE1 decision variables. A is modelled as a real
/// Gaussian N(mu_a, var_a) (co-phased BF sum), B as a circularly symmetric
/// complex Gaussian with E|B|^2 = var_b.
struct Moments {
    double mu_a = 0.0;
    double var_a = 0.0;
    double var_b = 0.0;

    void validate() const;
};

/// Quadrature knobs for the CDF inversion. `truncation` is the upper
/// frequency limit in normalised units (frequency times scale, where
/// scale = mu_a^2 + var_a + r var_b); 0 selects it automatically from a
/// tail bound.
struct InversionSettings {
    double truncation = 0.0;
    double tolerance = 1e-6;
    double small_omega_floor = 1e-7;
    std::size_t max_intervals = 400000;

    void validate() const;
};

/// Closed-form moments for a uniformly random split of i.i.d. Rayleigh
/// elements. Variances are per-element complex variances (E|v|^2 = sigma_v2).
/// Set include_probe_terms = false to drop the h-terms from B.
Moments moments_unsorted(int n, int n_id, double sigma_v2, double sigma_g2, double sigma_h2,
                         bool include_probe_terms = true);

/// Unit-variance order statistics of the sorted split, averaged over trials.
/// "Product" is |v_i||g_i| for an element of the given set.
struct SortedStatistics {
    int n = 0;
    int n_id = 0;
    std::size_t trials = 0;
    double bf_product_mean = 0.0;
    double bf_product_square = 0.0;
    double id_product_square = 0.0;
    double bf_g_square = 0.0;  // E|g|^2 over the BF positions
    double id_g_square = 0.0;
};

inline constexpr std::size_t kMinSortedTrials = 10000;
inline constexpr std::size_t kDefaultSortedTrials = 100000;

/// Monte-Carlo estimate of the sorted-split statistics; memoised per
/// (n, n_id, trials, seed).
SortedStatistics sorted_statistics(int n, int n_id, std::size_t trials, std::uint64_t seed);

/// Sorted-allocation moments: the unsorted structure with per-set effective
/// statistics of the selected elements.
Moments moments_sorted(int n, int n_id, double sigma_v2, double sigma_g2, double sigma_h2,
                       std::size_t trials = kDefaultSortedTrials, std::uint64_t seed = 1,
                       bool include_probe_terms = true);

/// Characteristic function of Upsilon = |A|^2 - r |B|^2:
///   exp(j w mu^2 / (1 - 2 j w sA^2)) / ((1 - 2 j w sA^2)^0.5 (1 + 2 j w r sB^2))
/// with sB^2 = var_b / 2, the per-quadrature variance of B.
std::complex<double> char_fn(double omega, const Moments& m, double r);

/// E[Upsilon].
double upsilon_mean(const Moments& m, double r);

struct CdfResult {
    double probability = 0.0;  // clamped into [0, 1]
    double raw = 0.0;          // before clamping
    double error_estimate = 0.0;
    double truncation = 0.0;   // upper limit actually used
    std::size_t intervals = 0;
    bool clamped = false;
};

/// P(Upsilon < y) by Gil-Pelaez inversion.
CdfResult gil_pelaez_cdf(double y, const Moments& m, double r,
                         const InversionSettings& settings = {});

/// Gil-Pelaez inversion of an arbitrary characteristic function on
/// (0, settings.truncation]; `mean` supplies the finite omega -> 0 limit.
CdfResult gil_pelaez_cdf(double y, const std::function<std::complex<double>(double)>& cf,
                         double mean, const InversionSettings& settings);

/// P_out = P(Upsilon < r sigma^2 / P_t).
CdfResult outage_theoretical(double transmit_power_w, double noise_power_w, double r,
                             const Moments& m, const InversionSettings& settings = {});

}  // namespace rispart
