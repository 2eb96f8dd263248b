#include "rispart/theory.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <tuple>
#include <vector>

#include "rispart/error.hpp"
#include "rispart/partition.hpp"
#include "rispart/quadrature.hpp"
#include "rispart/rng.hpp"

namespace rispart {

namespace {

using Complex = std::complex<double>;
constexpr double kPi = std::numbers::pi;

void check_counts(int n, int n_id) {
    if (n < 1 || n_id < 0 || n_id > n) {
        throw InvalidArgument("moments: need 0 <= n_id <= n and n >= 1");
    }
}

void check_variances(double sv2, double sg2, double sh2) {
    if (!(sv2 >= 0.0) || !(sg2 >= 0.0) || !(sh2 >= 0.0)) {
        throw InvalidArgument("moments: channel variances must be non-negative");
    }
}

// Upsilon / scale in normalised units.
struct Normalized {
    double scale;
    double mu2;  // mu_a^2 / scale
    double a;    // var_a / scale
    double rb;   // r * (var_b / 2) / scale
};

Normalized normalize(const Moments& m, double r) {
    const double scale = m.mu_a * m.mu_a + m.var_a + r * m.var_b;
    if (!(scale > 0.0)) return {0.0, 0.0, 0.0, 0.0};
    return {scale, m.mu_a * m.mu_a / scale, m.var_a / scale, 0.5 * r * m.var_b / scale};
}

Complex normalized_cf(double w, const Normalized& z) {
    const Complex one_minus = {1.0, -2.0 * w * z.a};
    const Complex exponent = Complex{0.0, w * z.mu2} / one_minus;
    return std::exp(exponent) / (std::sqrt(one_minus) * Complex{1.0, 2.0 * w * z.rb});
}

// Bound on |int_W^inf Im(e^{-jwy} Psi(w)) / w dw| for the Upsilon characteristic function.
double tail_bound(double w, const Normalized& z) {
    const double envelope = std::exp(-2.0 * w * w * z.a * z.mu2 / (1.0 + 4.0 * w * w * z.a * z.a));
    double k = 1.0;
    double p = 0.0;
    if (z.a > 0.0) {
        k *= 1.0 / std::sqrt(2.0 * z.a);
        p += 0.5;
    }
    if (z.rb > 0.0) {
        k *= 1.0 / (2.0 * z.rb);
        p += 1.0;
    }
    return envelope * k * std::pow(w, -p) / p;
}

std::vector<double> panels(double truncation, double y) {
    // geometric panels resolve the decay; the width cap resolves oscillation at rate |y|
    std::vector<double> pts{0.0};
    double w = std::min(1e-3, truncation);
    while (w < truncation) {
        pts.push_back(w);
        w *= 2.0;
    }
    pts.push_back(truncation);
    const double max_width = std::abs(y) > 0.0 ? 4.0 * kPi / std::abs(y) : truncation;
    std::vector<double> out{0.0};
    for (std::size_t i = 1; i < pts.size(); ++i) {
        const double a = pts[i - 1];
        const double b = pts[i];
        const auto pieces = static_cast<std::size_t>(std::ceil((b - a) / max_width));
        for (std::size_t k = 1; k < pieces; ++k) out.push_back(a + (b - a) * static_cast<double>(k) / static_cast<double>(pieces));
        out.push_back(b);
    }
    return out;
}

CdfResult finish(double integral, double error, double truncation, std::size_t intervals,
                 bool converged, const InversionSettings& settings) {
    CdfResult res;
    res.raw = 0.5 - integral / kPi;
    res.error_estimate = error / kPi;
    res.truncation = truncation;
    res.intervals = intervals;
    if (!converged) {
        std::ostringstream msg;
        msg << "Gil-Pelaez quadrature did not converge: error estimate " << res.error_estimate
            << " exceeds tolerance " << settings.tolerance << " after " << intervals
            << " intervals";
        throw NumericalError(msg.str());
    }
    res.probability = std::clamp(res.raw, 0.0, 1.0);
    res.clamped = res.probability != res.raw;
    return res;
}

}  // namespace

void Moments::validate() const {
    if (!(var_a >= 0.0) || !(var_b >= 0.0) || !(mu_a >= 0.0) || !std::isfinite(mu_a) ||
        !std::isfinite(var_a) || !std::isfinite(var_b)) {
        throw InvalidArgument("moments must be finite with mu_a, var_a, var_b >= 0");
    }
}

void InversionSettings::validate() const {
    if (!(truncation >= 0.0)) throw InvalidArgument("truncation must be >= 0 (0 = automatic)");
    if (!(tolerance > 0.0)) throw InvalidArgument("inversion tolerance must be positive");
    if (!(small_omega_floor >= 0.0)) throw InvalidArgument("small_omega_floor must be >= 0");
    if (max_intervals < 1) throw InvalidArgument("max_intervals must be positive");
}

Moments moments_unsorted(int n, int n_id, double sigma_v2, double sigma_g2, double sigma_h2,
                         bool include_probe_terms) {
    check_counts(n, n_id);
    check_variances(sigma_v2, sigma_g2, sigma_h2);
    const double n_bf = n - n_id;
    const double vg = sigma_v2 * sigma_g2;
    Moments m;
    m.mu_a = n_bf * std::sqrt(vg) * kPi / 4.0;
    m.var_a = n_bf * vg * (1.0 - kPi * kPi / 16.0);
    m.var_b = n_id * vg;
    if (include_probe_terms) m.var_b += n_bf * sigma_h2 * sigma_g2 + n_id * sigma_h2 * sigma_g2;
    return m;
}

SortedStatistics sorted_statistics(int n, int n_id, std::size_t trials, std::uint64_t seed) {
    check_counts(n, n_id);
    if (trials < kMinSortedTrials) {
        throw InvalidArgument("moments_sorted needs at least " + std::to_string(kMinSortedTrials) +
                              " trials (got " + std::to_string(trials) + ")");
    }
    using Key = std::tuple<int, int, std::size_t, std::uint64_t>;
    static std::mutex mutex;
    static std::map<Key, SortedStatistics> cache;
    const Key key{n, n_id, trials, seed};
    {
        std::lock_guard lock(mutex);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
    }

    const auto count = static_cast<std::size_t>(n);
    std::vector<double> v_abs(count), g_abs(count), prod(count);
    double bf_p = 0.0, bf_p2 = 0.0, id_p2 = 0.0, bf_g2 = 0.0, id_g2 = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
        RandomStream stream(seed, 0, t, StreamPurpose::order_statistics);
        for (std::size_t i = 0; i < count; ++i) v_abs[i] = std::abs(stream.complex_normal(1.0));
        for (std::size_t i = 0; i < count; ++i) {
            g_abs[i] = std::abs(stream.complex_normal(1.0));
            prod[i] = v_abs[i] * g_abs[i];
        }
        const Partition p = partition_sorted(prod, n_id);
        double s_p = 0.0, s_p2 = 0.0, s_g2 = 0.0;
        for (int i : p.bf_set) {
            const auto k = static_cast<std::size_t>(i);
            s_p += prod[k];
            s_p2 += prod[k] * prod[k];
            s_g2 += g_abs[k] * g_abs[k];
        }
        double i_p2 = 0.0, i_g2 = 0.0;
        for (int i : p.id_set) {
            const auto k = static_cast<std::size_t>(i);
            i_p2 += prod[k] * prod[k];
            i_g2 += g_abs[k] * g_abs[k];
        }
        bf_p += s_p;
        bf_p2 += s_p2;
        bf_g2 += s_g2;
        id_p2 += i_p2;
        id_g2 += i_g2;
    }

    SortedStatistics s;
    s.n = n;
    s.n_id = n_id;
    s.trials = trials;
    const double tr = static_cast<double>(trials);
    const double n_bf = n - n_id;
    if (n_bf > 0) {
        s.bf_product_mean = bf_p / (tr * n_bf);
        s.bf_product_square = bf_p2 / (tr * n_bf);
        s.bf_g_square = bf_g2 / (tr * n_bf);
    }
    if (n_id > 0) {
        s.id_product_square = id_p2 / (tr * n_id);
        s.id_g_square = id_g2 / (tr * n_id);
    }
    std::lock_guard lock(mutex);
    cache.emplace(key, s);
    return s;
}

Moments moments_sorted(int n, int n_id, double sigma_v2, double sigma_g2, double sigma_h2,
                       std::size_t trials, std::uint64_t seed, bool include_probe_terms) {
    check_variances(sigma_v2, sigma_g2, sigma_h2);
    const SortedStatistics s = sorted_statistics(n, n_id, trials, seed);
    const double n_bf = n - n_id;
    const double vg = sigma_v2 * sigma_g2;
    Moments m;
    m.mu_a = n_bf * s.bf_product_mean * std::sqrt(vg);
    m.var_a = n_bf * std::max(0.0, s.bf_product_square - s.bf_product_mean * s.bf_product_mean) * vg;
    m.var_b = n_id * s.id_product_square * vg;
    if (include_probe_terms) {
        m.var_b += sigma_h2 * sigma_g2 * (n_bf * s.bf_g_square + n_id * s.id_g_square);
    }
    return m;
}

Complex char_fn(double omega, const Moments& m, double r) {
    if (!(r > 0.0)) throw InvalidArgument("char_fn: threshold r must be positive");
    const Complex one_minus = {1.0, -2.0 * omega * m.var_a};
    const Complex exponent = Complex{0.0, omega * m.mu_a * m.mu_a} / one_minus;
    return std::exp(exponent) /
           (std::sqrt(one_minus) * Complex{1.0, 2.0 * omega * r * 0.5 * m.var_b});
}

double upsilon_mean(const Moments& m, double r) {
    return m.mu_a * m.mu_a + m.var_a - r * m.var_b;
}

CdfResult gil_pelaez_cdf(double y, const Moments& m, double r, const InversionSettings& settings) {
    m.validate();
    settings.validate();
    if (!(r > 0.0)) throw InvalidArgument("gil_pelaez_cdf: threshold r must be positive");

    const Normalized z = normalize(m, r);
    const double tiny = 1e-14;
    if (z.scale == 0.0 || (z.a < tiny && z.rb < tiny)) {
        // Upsilon is (numerically) the constant mu_a^2
        CdfResult res;
        res.raw = res.probability = (m.mu_a * m.mu_a < y) ? 1.0 : 0.0;
        return res;
    }
    const double yn = y / z.scale;
    const double limit = z.mu2 + z.a - 2.0 * z.rb - yn;  // (E[Upsilon] - y) / scale

    double truncation = settings.truncation;
    if (truncation == 0.0) {
        truncation = 1.0;
        while (tail_bound(truncation, z) / kPi > 0.1 * settings.tolerance && truncation < 1e12) {
            truncation *= 2.0;
        }
    }
    const double tail = tail_bound(truncation, z);

    const double floor = settings.small_omega_floor;
    auto integrand = [&](double w) {
        if (w < floor) return limit;
        const Complex e = std::exp(Complex{0.0, -w * yn}) * normalized_cf(w, z);
        return e.imag() / w;
    };
    const auto pts = panels(truncation, yn);
    if (pts.size() > settings.max_intervals) {
        throw NumericalError("Gil-Pelaez inversion: integration range needs more panels than max_intervals");
    }
    const double budget = std::max(0.9 * kPi * settings.tolerance - tail, 0.5 * kPi * settings.tolerance);
    const auto q = quad::integrate(integrand, pts, budget, settings.max_intervals);
    return finish(q.value, q.error + tail, truncation, q.intervals, q.converged, settings);
}

CdfResult gil_pelaez_cdf(double y, const std::function<Complex(double)>& cf, double mean,
                         const InversionSettings& settings) {
    settings.validate();
    if (!(settings.truncation > 0.0)) {
        throw InvalidArgument("generic Gil-Pelaez inversion needs an explicit truncation");
    }
    const double limit = mean - y;
    auto integrand = [&](double w) {
        if (w < settings.small_omega_floor) return limit;
        return (std::exp(Complex{0.0, -w * y}) * cf(w)).imag() / w;
    };
    const auto pts = panels(settings.truncation, y);
    const auto q = quad::integrate(integrand, pts, 0.9 * kPi * settings.tolerance,
                                   settings.max_intervals);
    return finish(q.value, q.error, settings.truncation, q.intervals, q.converged, settings);
}

CdfResult outage_theoretical(double transmit_power_w, double noise_power_w, double r,
                             const Moments& m, const InversionSettings& settings) {
    if (!(transmit_power_w > 0.0)) throw InvalidArgument("transmit power must be positive");
    if (!(noise_power_w >= 0.0)) throw InvalidArgument("noise power must be non-negative");
    return gil_pelaez_cdf(r * noise_power_w / transmit_power_w, m, r, settings);
}

}  // namespace rispart
