#include "rispart/signal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rispart/error.hpp"

namespace rispart {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool is_binary_phase(double p) { return p == 0.0 || p == std::numbers::pi; }

Complex unit_phasor(double phase) {
    // exact +-1 for the binary PSRP phases
    if (phase == 0.0) return {1.0, 0.0};
    if (phase == std::numbers::pi) return {-1.0, 0.0};
    return std::polar(1.0, phase);
}

void check_phases(const Partition& p, const PhaseConfig& phases) {
    if (phases.theta.size() != p.bf_set.size() || phases.phi.size() != p.id_set.size()) {
        throw InvalidArgument("phase configuration does not match the partition");
    }
}

}  // namespace

void PhaseConfig::validate() const {
    for (double t : theta) {
        if (!(t >= 0.0 && t < kTwoPi)) throw InvalidArgument("theta must lie in [0, 2pi)");
    }
    for (double p : phi) {
        if (!is_binary_phase(p)) throw InvalidArgument("phi must be 0 or pi");
    }
}

std::vector<double> PhaseConfig::per_element(const Partition& p) const {
    check_phases(p, *this);
    std::vector<double> out(static_cast<std::size_t>(p.n), 0.0);
    for (std::size_t k = 0; k < p.bf_set.size(); ++k) out[static_cast<std::size_t>(p.bf_set[k])] = theta[k];
    for (std::size_t k = 0; k < p.id_set.size(); ++k) out[static_cast<std::size_t>(p.id_set[k])] = phi[k];
    return out;
}

PsrpPattern::PsrpPattern(int rows, int cols, std::vector<std::uint8_t> flips)
    : rows_(rows), cols_(cols), flips_(std::move(flips)) {
    if (rows < 0 || cols < 0 ||
        flips_.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {
        throw InvalidArgument("PSRP pattern shape mismatch");
    }
    for (auto f : flips_) {
        if (f > 1) throw InvalidArgument("PSRP entries must be binary");
    }
}

PsrpPattern PsrpPattern::zeros(int rows, int cols) {
    return {rows, cols, std::vector<std::uint8_t>(static_cast<std::size_t>(rows * cols), 0)};
}

PsrpPattern PsrpPattern::alternating(int rows, int cols) {
    std::vector<std::uint8_t> flips(static_cast<std::size_t>(rows * cols));
    for (int m = 0; m < rows; ++m) {
        for (int i = 0; i < cols; ++i) flips[static_cast<std::size_t>(m * cols + i)] = (m + i) % 2;
    }
    return {rows, cols, std::move(flips)};
}

PsrpPattern PsrpPattern::from_signature(std::span<const int> signature, int cols) {
    const int rows = static_cast<int>(signature.size());
    std::vector<std::uint8_t> flips(static_cast<std::size_t>(rows) * static_cast<std::size_t>(std::max(cols, 0)));
    for (int m = 0; m < rows; ++m) {
        const int s = signature[static_cast<std::size_t>(m)];
        if (s != 1 && s != -1) throw InvalidArgument("PSRP signature entries must be +1 or -1");
        for (int i = 0; i < cols; ++i) flips[static_cast<std::size_t>(m * cols + i)] = s < 0 ? 1 : 0;
    }
    return {rows, cols, std::move(flips)};
}

std::vector<int> PsrpPattern::balanced_signature(std::uint64_t pattern_id, int length) {
    if (length < 0) throw InvalidArgument("PSRP length must be non-negative");
    std::vector<int> s(static_cast<std::size_t>(length));
    for (int m = 0; m < length; ++m) s[static_cast<std::size_t>(m)] = m < length / 2 ? 1 : -1;
    RandomStream stream(pattern_id, 0, 0, StreamPurpose::pattern);
    for (int m = length - 1; m > 0; --m) {
        std::swap(s[static_cast<std::size_t>(m)], s[static_cast<std::size_t>(stream.uniform_int(0, m))]);
    }
    return s;
}

double PsrpPattern::phase(int m, int i) const {
    if (m < 0 || m >= rows_ || i < 0 || i >= cols_) throw InvalidArgument("PSRP index out of range");
    return flips_[static_cast<std::size_t>(m * cols_ + i)] ? std::numbers::pi : 0.0;
}

std::vector<double> psrp_row(const PsrpPattern& pattern, int m) {
    if (m < 0 || m >= pattern.rows()) {
        throw InvalidArgument("PSRP row " + std::to_string(m) + " out of range");
    }
    std::vector<double> row(static_cast<std::size_t>(pattern.cols()));
    for (int i = 0; i < pattern.cols(); ++i) row[static_cast<std::size_t>(i)] = pattern.phase(m, i);
    return row;
}

std::vector<double> bf_cophase(std::span<const Complex> v, std::span<const Complex> g,
                               std::span<const int> bf_set) {
    if (v.size() != g.size()) throw InvalidArgument("bf_cophase: v and g differ in length");
    std::vector<double> theta;
    theta.reserve(bf_set.size());
    for (int i : bf_set) {
        if (i < 0 || static_cast<std::size_t>(i) >= v.size()) {
            throw InvalidArgument("bf_cophase: BF index out of range");
        }
        double t = std::fmod(-std::arg(v[static_cast<std::size_t>(i)] * g[static_cast<std::size_t>(i)]), kTwoPi);
        if (t < 0.0) t += kTwoPi;
        if (t >= kTwoPi) t = 0.0;
        theta.push_back(t);
    }
    return theta;
}

Complex received_identification(std::span<const Complex> f, std::span<const double> phases,
                                 Complex noise) {
    if (f.size() != phases.size()) throw InvalidArgument("received_identification: length mismatch");
    Complex y = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) y += f[i] * f[i] * unit_phasor(phases[i]);
    return y + noise;
}

AggregateTerms AggregateTerms::without_probe() const {
    AggregateTerms t = *this;
    t.h_bf = 0.0;
    t.h_id = 0.0;
    t.b = v_id;
    return t;
}

AggregateTerms aggregate_terms_ue1(std::span<const Complex> v, std::span<const Complex> g,
                                   std::span<const Complex> h, const Partition& partition,
                                   const PhaseConfig& phases) {
    const auto n = static_cast<std::size_t>(partition.n);
    if (v.size() != n || g.size() != n || h.size() != n) {
        throw InvalidArgument("aggregate_terms_ue1: channel length does not match partition");
    }
    check_phases(partition, phases);
    AggregateTerms t{};
    for (std::size_t k = 0; k < partition.bf_set.size(); ++k) {
        const auto i = static_cast<std::size_t>(partition.bf_set[k]);
        const Complex e = unit_phasor(phases.theta[k]);
        t.v_bf += v[i] * e * g[i];
        t.h_bf += h[i] * e * g[i];
    }
    for (std::size_t k = 0; k < partition.id_set.size(); ++k) {
        const auto i = static_cast<std::size_t>(partition.id_set[k]);
        const Complex e = unit_phasor(phases.phi[k]);
        t.v_id += v[i] * e * g[i];
        t.h_id += h[i] * e * g[i];
    }
    t.a = t.v_bf;
    t.b = t.v_id + t.h_bf + t.h_id;
    return t;
}

Ue2Signal received_ue2(Complex x, Complex q, std::span<const Complex> h,
                       std::span<const Complex> v, const Partition& partition,
                       const PhaseConfig& phases, Complex noise) {
    const auto n = static_cast<std::size_t>(partition.n);
    if (v.size() != n || h.size() != n) {
        throw InvalidArgument("received_ue2: channel length does not match partition");
    }
    check_phases(partition, phases);
    Complex sig_id = 0.0, sig_bf = 0.0, int_id = 0.0, int_bf = 0.0;
    for (std::size_t k = 0; k < partition.id_set.size(); ++k) {
        const auto i = static_cast<std::size_t>(partition.id_set[k]);
        const Complex e = unit_phasor(phases.phi[k]);
        sig_id += h[i] * h[i] * e;
        int_id += v[i] * e * h[i];
    }
    for (std::size_t k = 0; k < partition.bf_set.size(); ++k) {
        const auto i = static_cast<std::size_t>(partition.bf_set[k]);
        const Complex e = unit_phasor(phases.theta[k]);
        sig_bf += h[i] * h[i] * e;
        int_bf += v[i] * e * h[i];
    }
    Ue2Signal s;
    s.id_signal = x * sig_id;
    s.bf_signal = x * sig_bf;
    s.id_interference = q * int_id;
    s.bf_interference = q * int_bf;
    s.noise = noise;
    s.total = s.id_signal + s.bf_signal + s.id_interference + s.bf_interference + noise;
    return s;
}

double sinr_ue1(const AggregateTerms& terms, double noise_power_w, double transmit_power_w) {
    if (!(noise_power_w > 0.0) || !(transmit_power_w > 0.0)) {
        throw InvalidArgument("sinr_ue1: noise and transmit power must be positive");
    }
    return std::norm(terms.a) / (std::norm(terms.b) + noise_power_w / transmit_power_w);
}

Complex qpsk_symbol(RandomStream& stream) {
    const double s = std::sqrt(0.5);
    const auto bits = stream.engine()();
    return {(bits & 1U) ? -s : s, (bits & 2U) ? -s : s};
}

}  // namespace rispart
