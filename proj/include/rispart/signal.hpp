#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rispart/channel.hpp"
#include "rispart/partition.hpp"

namespace rispart {

/// theta[k] is the phase of bf_set[k] (radians in [0, 2pi)); phi[k] is the
/// phase of id_set[k], restricted to {0, pi}.
struct PhaseConfig {
    std::vector<double> theta;
    std::vector<double> phi;

    void validate() const;
    /// Phase per element index, length p.n.
    std::vector<double> per_element(const Partition& p) const;
};

/// Binary predefined reflection pattern: rows are symbol slots, columns are
/// ID-set elements. Entry true means a phase of pi.
class PsrpPattern {
public:
    PsrpPattern(int rows, int cols, std::vector<std::uint8_t> flips);

    static PsrpPattern zeros(int rows, int cols);
    /// Entry (m, i) = pi when m + i is odd.
    static PsrpPattern alternating(int rows, int cols);
    /// Every element replays the same +-1 signature (+1 -> 0, -1 -> pi).
    static PsrpPattern from_signature(std::span<const int> signature, int cols);
    /// Balanced signature (sum zero for even length) fixed by `pattern_id`.
    static std::vector<int> balanced_signature(std::uint64_t pattern_id, int length);

    int rows() const noexcept { return rows_; }
    int cols() const noexcept { return cols_; }
    double phase(int m, int i) const;

private:
    int rows_;
    int cols_;
    std::vector<std::uint8_t> flips_;
};

/// Row m of the pattern as phases in {0, pi}.
std::vector<double> psrp_row(const PsrpPattern& pattern, int m);

/// Co-phasing: theta_k = -arg(v_i g_i) mod 2pi for i = bf_set[k], so every
/// BF term v_i e^{j theta_i} g_i is real and non-negative.
std::vector<double> bf_cophase(std::span<const Complex> v, std::span<const Complex> g,
                               std::span<const int> bf_set);

/// Identification-phase sample for the unmodulated probe x = 1:
/// sum_i f_i^2 e^{j phi_i} + noise.
Complex received_identification(std::span<const Complex> f, std::span<const double> phases,
                                 Complex noise);

/// Hybrid-phase aggregate sums at UE1.
struct AggregateTerms {
    Complex v_bf;  // sum_BF v e^{j theta} g
    Complex v_id;  // sum_ID v e^{j phi} g
    Complex h_bf;  // sum_BF h e^{j theta} g
    Complex h_id;  // sum_ID h e^{j phi} g
    Complex a;     // v_bf
    Complex b;     // v_id + h_bf + h_id

    /// Same terms with UE1's own probe switched off: h_bf = h_id = 0, b = v_id.
    AggregateTerms without_probe() const;
};

AggregateTerms aggregate_terms_ue1(std::span<const Complex> v, std::span<const Complex> g,
                                   std::span<const Complex> h, const Partition& partition,
                                   const PhaseConfig& phases);

/// Received sample at UE2 and its labelled components.
struct Ue2Signal {
    Complex total;
    Complex id_signal;        // x sum_ID h^2 e^{j phi}
    Complex bf_signal;        // x sum_BF h^2 e^{j theta}
    Complex id_interference;  // q sum_ID v e^{j phi} h
    Complex bf_interference;  // q sum_BF v e^{j theta} h
    Complex noise;
};

Ue2Signal received_ue2(Complex x, Complex q, std::span<const Complex> h,
                       std::span<const Complex> v, const Partition& partition,
                       const PhaseConfig& phases, Complex noise);

/// |A|^2 / (|B|^2 + sigma^2 / P_t); powers in watts.
double sinr_ue1(const AggregateTerms& terms, double noise_power_w, double transmit_power_w);

/// Unit-power QPSK symbol drawn from `stream`.
Complex qpsk_symbol(RandomStream& stream);

}  // namespace rispart
