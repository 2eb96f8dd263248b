#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "rispart/channel.hpp"
#include "rispart/theory.hpp"

namespace rispart {

enum class Mode { sorted, unsorted };

std::string to_string(Mode mode);
Mode parse_mode(std::string_view text);

/// One experiment definition. Defaults reproduce the reference setup:
/// 8x8 RIS at half-wavelength pitch, 1.8 GHz, -130 dBm noise,
/// P_t from -10 to 45 dBm.
struct SweepConfig {
    RisGeometry geometry{8, 8, 0.5, 1.8e9};
    LinkDistances distances{};
    double noise_dbm = -130.0;
    std::vector<double> pt_dbm_grid = default_pt_grid();
    int n_id = -1;  // -1: half of the elements
    std::size_t trials = 10000;
    std::uint64_t seed = 1;
    unsigned workers = 0;  // 0: hardware concurrency

    double sinr_threshold = 0.1;  // r, linear
    bool include_probe_terms = true;

    std::vector<double> rbar_grid = default_rbar_grid();
    int psrp_length = 16;
    std::uint64_t psrp_id = 1;
    double detector_pt_dbm = 20.0;
    std::vector<int> pmiss_n_set{64, 128, 256};

    InversionSettings inversion{};
    std::size_t sorted_moment_trials = kDefaultSortedTrials;

    int n() const noexcept { return geometry.count(); }
    int resolved_n_id() const noexcept { return n_id < 0 ? n() / 2 : n_id; }
    LinkBudget link_budget() const;
    unsigned resolved_workers() const noexcept;
    void validate() const;

    static std::vector<double> default_pt_grid();
    static std::vector<double> default_rbar_grid();
};

/// One curve of a figure panel.
struct CurveResult {
    std::string metric;  // "outage", "snr_db", "pmiss"
    std::string mode;    // "sorted" / "unsorted", suffixed "_n<N>" for P_miss
    std::string source;  // "montecarlo" or "theory"
    std::vector<double> x_values;
    std::vector<double> estimates;        // NaN marks a missing point
    std::vector<double> half_widths;      // 95 %
    std::vector<double> standard_errors;
    std::vector<std::uint64_t> events;    // Monte-Carlo probability curves only
    std::size_t trials = 0;
    std::map<std::string, std::string> metadata;

    std::size_t size() const noexcept { return x_values.size(); }
    double ci_low(std::size_t i) const;
    double ci_high(std::size_t i) const;
};

/// Monte-Carlo P(SINR < r) per transmit power.
CurveResult run_outage_sweep(const SweepConfig& config, Mode mode);

/// Mean received beamforming SNR P_t |A|^2 / sigma^2 in dB per transmit power.
CurveResult run_snr_sweep(const SweepConfig& config, Mode mode);

/// Normalised detection statistic for one RIS size, one value per trial:
/// |sum_m s_m y_m| / E0 where E0 = M beta_h sqrt(pi N' / 2).
std::vector<double> pmiss_statistics(const SweepConfig& config, Mode mode, int n);

/// P_miss over config.rbar_grid, one curve per N in config.pmiss_n_set.
std::vector<CurveResult> run_pmiss_sweep(const SweepConfig& config, Mode mode);

/// Analytical outage curve; sorted mode uses order-statistic moments.
CurveResult theory_outage_curve(const SweepConfig& config, Mode mode);

/// Moments fed to the theory for a given mode under the config's link budget.
Moments config_moments(const SweepConfig& config, Mode mode);

struct Dataset {
    std::vector<CurveResult> snr;
    std::vector<CurveResult> pmiss;
    std::vector<CurveResult> outage;  // Monte-Carlo then theory
};

/// Every panel in both modes plus theory curves.
Dataset reproduce(const SweepConfig& config);

}  // namespace rispart
