#include "rispart/validation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <map>
#include <mutex>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>

#include "rispart/channel.hpp"
#include "rispart/config.hpp"
#include "rispart/partition.hpp"
#include "rispart/signal.hpp"
#include "rispart/simulate.hpp"

namespace rispart::validation {

namespace {

using Clock = std::chrono::steady_clock;
constexpr double kPi = std::numbers::pi;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double x, int precision = 4) {
    std::ostringstream os;
    os << std::setprecision(precision) << x;
    return os.str();
}

CriterionResult make(int id, std::string name) {
    CriterionResult r;
    r.id = id;
    r.name = std::move(name);
    return r;
}

void finish(CriterionResult& r, Clock::time_point start, double limit_seconds, bool ok,
            std::string detail) {
    r.seconds = seconds_since(start);
    r.passed = ok && r.seconds < limit_seconds;
    r.detail = std::move(detail);
    if (r.seconds >= limit_seconds) {
        r.detail += "; runtime " + fmt(r.seconds) + " s exceeds " + fmt(limit_seconds) + " s";
    }
}

SweepConfig reference_config(const Options& o, int rows, int cols, std::size_t trials) {
    SweepConfig c;
    c.geometry.rows = rows;
    c.geometry.cols = cols;
    c.trials = trials;
    c.seed = o.seed;
    c.workers = o.workers;
    return c;
}

// N = 64 outage sweeps shared by criteria 3 and 4.
struct OutageRuns {
    CurveResult sorted;
    CurveResult unsorted;
    CurveResult theory_unsorted;
};

const OutageRuns& outage_runs(const Options& o) {
    static std::mutex mutex;
    static std::map<std::tuple<double, unsigned, std::uint64_t>, OutageRuns> cache;
    std::lock_guard lock(mutex);
    const auto key = std::make_tuple(o.trial_scale, o.workers, o.seed);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
    const SweepConfig c = reference_config(o, 8, 8, o.scaled(100000));
    OutageRuns runs{run_outage_sweep(c, Mode::sorted), run_outage_sweep(c, Mode::unsorted),
                    theory_outage_curve(c, Mode::unsorted)};
    return cache.emplace(key, std::move(runs)).first->second;
}

}  // namespace

Options Options::from_environment() {
    Options o;
    if (const char* s = std::getenv(kTrialScaleEnv)) {
        const double v = std::atof(s);
        if (v > 0.0) o.trial_scale = v;
    }
    if (const char* s = std::getenv(kSeedEnv)) {
        o.seed = std::strtoull(s, nullptr, 10);
    }
    return o;
}

std::size_t Options::scaled(std::size_t trials, std::size_t floor) const {
    const auto t = static_cast<std::size_t>(std::llround(static_cast<double>(trials) * trial_scale));
    return std::max(t, std::min(trials, floor));
}

CriterionResult moment_fidelity(const Options& o) {
    auto r = make(1, "moment fidelity (N=256, N'=128, random split)");
    const auto start = Clock::now();
    const int n = 256;
    const int n_id = 128;
    const std::size_t trials = o.scaled(200000);
    const ChannelModel model(CorrelationMatrix::identity(n), LinkBudget::unit());
    const PsrpPattern pattern = PsrpPattern::alternating(1, n_id);
    const std::vector<double> phi = psrp_row(pattern, 0);

    std::vector<double> a(trials);
    std::vector<Complex> b(trials);
    const unsigned workers = o.workers ? o.workers : std::max(1u, std::thread::hardware_concurrency());
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t t = w; t < trials; t += workers) {
                RandomStream ch_stream(o.seed, 0, t, StreamPurpose::channel);
                const ChannelRealization ch = model.draw(ch_stream);
                RandomStream p_stream(o.seed, 0, t, StreamPurpose::partition);
                const Partition part = partition_random(n, n_id, p_stream);
                const PhaseConfig phases{bf_cophase(ch.v, ch.g, part.bf_set), phi};
                const AggregateTerms terms = aggregate_terms_ue1(ch.v, ch.g, ch.h, part, phases);
                a[t] = terms.a.real();
                b[t] = terms.b;
            }
        });
    }
    for (auto& th : pool) th.join();

    double mean_a = 0.0;
    Complex mean_b = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
        mean_a += a[t];
        mean_b += b[t];
    }
    mean_a /= static_cast<double>(trials);
    mean_b /= static_cast<double>(trials);
    double var_a = 0.0, var_b = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
        var_a += (a[t] - mean_a) * (a[t] - mean_a);
        var_b += std::norm(b[t] - mean_b);
    }
    var_a /= static_cast<double>(trials - 1);
    var_b /= static_cast<double>(trials - 1);

    const Moments m = moments_unsorted(n, n_id, 1.0, 1.0, 1.0);
    const double e_mu = std::abs(mean_a / m.mu_a - 1.0);
    const double e_va = std::abs(var_a / m.var_a - 1.0);
    const double e_vb = std::abs(var_b / m.var_b - 1.0);
    finish(r, start, 60.0, e_mu <= 0.01 && e_va <= 0.03 && e_vb <= 0.03,
           "rel.err mean A " + fmt(e_mu) + " (<=0.01), var A " + fmt(e_va) + " (<=0.03), var B " +
               fmt(e_vb) + " (<=0.03), trials " + std::to_string(trials));
    return r;
}

CriterionResult inversion_correctness(const Options& o, const CharFn& cf) {
    auto r = make(2, "Gil-Pelaez inversion vs Gaussian oracle");
    const auto start = Clock::now();
    struct Case {
        Moments m;
        double r;
    };
    const std::vector<Case> cases = {
        {{2.0, 0.5, 1.0}, 1.0},
        {{5.0, 2.0, 3.0}, 0.5},
        {{0.5, 1.0, 0.2}, 2.0},
    };
    const std::size_t samples = o.scaled(1000000, 100000);
    double worst = 0.0;
    for (std::size_t k = 0; k < cases.size(); ++k) {
        const auto& c = cases[k];
        RandomStream stream(o.seed, 7000 + k, 0, StreamPurpose::order_statistics);
        std::vector<double> ups(samples);
        const double sa = std::sqrt(c.m.var_a);
        for (auto& u : ups) {
            const double a = c.m.mu_a + sa * stream.normal();
            const Complex b = stream.complex_normal(c.m.var_b);
            u = a * a - c.r * std::norm(b);
        }
        std::sort(ups.begin(), ups.end());
        for (int q = 1; q <= 9; ++q) {
            const auto idx = static_cast<std::size_t>(q * 0.1 * static_cast<double>(samples));
            const double y = ups[idx];
            const double empirical =
                static_cast<double>(std::lower_bound(ups.begin(), ups.end(), y) - ups.begin()) /
                static_cast<double>(samples);
            double p = 0.0;
            if (cf) {
                InversionSettings s;
                s.truncation = 2000.0;
                const auto fn = [&](double w) { return cf(w, c.m, c.r); };
                p = gil_pelaez_cdf(y, fn, upsilon_mean(c.m, c.r), s).probability;
            } else {
                p = gil_pelaez_cdf(y, c.m, c.r).probability;
            }
            worst = std::max(worst, std::abs(p - empirical));
        }
    }
    finish(r, start, 30.0, worst <= 0.01,
           "max |CDF - empirical| " + fmt(worst) + " (<=0.01) over 3 moment sets x 9 quantiles");
    return r;
}

CriterionResult theory_agreement(const Options& o) {
    auto r = make(3, "theory vs Monte-Carlo outage (N=64, unsorted)");
    const auto start = Clock::now();
    const OutageRuns& runs = outage_runs(o);
    double worst = 0.0;
    int compared = 0;
    for (std::size_t i = 0; i < runs.unsorted.size(); ++i) {
        const double mc = runs.unsorted.estimates[i];
        if (mc < 0.05 || mc > 0.95) continue;
        ++compared;
        worst = std::max(worst, std::abs(mc - runs.theory_unsorted.estimates[i]));
    }
    finish(r, start, 600.0, compared > 0 && worst <= 0.03,
           "max |theory - MC| " + fmt(worst) + " (<=0.03) over " + std::to_string(compared) +
               " points with MC in [0.05, 0.95]");
    return r;
}

CriterionResult outage_sorting_gain(const Options& o) {
    auto r = make(4, "sorting gain in outage (N=64)");
    const auto start = Clock::now();
    const OutageRuns& runs = outage_runs(o);
    const auto& s = runs.sorted;
    const auto& u = runs.unsorted;
    bool dominated = true;
    double best_ratio = 0.0;
    double best_at = 0.0;
    double worst_high_ratio = 0.0;
    // (k+1)-smoothed event ratio: finite when counts are zero, biased toward 1
    auto ratio = [&](std::size_t i) {
        return (static_cast<double>(u.events[i]) + 1.0) / (static_cast<double>(s.events[i]) + 1.0);
    };
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s.estimates[i] > u.estimates[i] + s.half_widths[i] + u.half_widths[i]) dominated = false;
        if (ratio(i) > best_ratio) {
            best_ratio = ratio(i);
            best_at = s.x_values[i];
        }
        if (s.x_values[i] >= 35.0) worst_high_ratio = std::max(worst_high_ratio, ratio(i));
    }
    finish(r, start, 600.0, dominated && best_ratio >= 5.0 && worst_high_ratio < 2.0,
           std::string("sorted <= unsorted: ") + (dominated ? "yes" : "NO") + "; max ratio " +
               fmt(best_ratio) + " at " + fmt(best_at) + " dBm (>=5); max ratio at >=35 dBm " +
               fmt(worst_high_ratio) + " (<2)");
    return r;
}

CriterionResult snr_sorting_gain(const Options& o) {
    auto r = make(5, "sorting gain in mean SNR (N=64, 256)");
    const auto start = Clock::now();
    bool ok = true;
    std::string detail;
    for (auto [rows, cols] : {std::pair{8, 8}, std::pair{16, 16}}) {
        const SweepConfig c = reference_config(o, rows, cols, o.scaled(4000));
        const CurveResult s = run_snr_sweep(c, Mode::sorted);
        const CurveResult u = run_snr_sweep(c, Mode::unsorted);
        double min_margin = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < s.size(); ++i) {
            const double margin = (s.estimates[i] - u.estimates[i]) -
                                  2.0 * (s.standard_errors[i] + u.standard_errors[i]);
            if (!(margin > 0.0)) ok = false;
            min_margin = std::min(min_margin, margin);
        }
        detail += "N=" + std::to_string(c.n()) + " min(gain - 2 SE) " + fmt(min_margin) + " dB; ";
    }
    finish(r, start, 600.0, ok, detail + "all points must be > 0");
    return r;
}

CriterionResult identification_invariance(const Options& o) {
    auto r = make(6, "P_miss overlap sorted vs unsorted (N=64,128,256)");
    const auto start = Clock::now();
    SweepConfig c = reference_config(o, 8, 8, o.scaled(10000));
    c.pmiss_n_set = {64, 128, 256};
    const auto sorted = run_pmiss_sweep(c, Mode::sorted);
    const auto unsorted = run_pmiss_sweep(c, Mode::unsorted);
    bool ok = true;
    std::string detail;
    for (std::size_t k = 0; k < sorted.size(); ++k) {
        double worst_excess = -std::numeric_limits<double>::infinity();
        double worst_diff = 0.0;
        for (std::size_t i = 0; i < sorted[k].size(); ++i) {
            const double diff = std::abs(sorted[k].estimates[i] - unsorted[k].estimates[i]);
            const double bound = 2.0 * (sorted[k].half_widths[i] + unsorted[k].half_widths[i]);
            if (diff > bound) ok = false;
            worst_diff = std::max(worst_diff, diff);
            worst_excess = std::max(worst_excess, diff - bound);
        }
        detail += "N=" + std::to_string(c.pmiss_n_set[k]) + " max diff " + fmt(worst_diff) + "; ";
    }
    finish(r, start, 600.0, ok, detail + "bound 2 x (CI_s + CI_u) per point");
    return r;
}

CriterionResult partition_correctness(const Options& o) {
    auto r = make(7, "partition property suite (1e4 instances)");
    const auto start = Clock::now();
    const std::size_t instances = o.scaled(10000);
    std::size_t failures = 0;
    std::string first_failure;
    for (std::size_t t = 0; t < instances; ++t) {
        RandomStream stream(o.seed, 9000, t, StreamPurpose::partition);
        const int n = stream.uniform_int(1, 300);
        const int n_id = stream.uniform_int(0, n);
        const bool quantized = stream.uniform() < 0.5;  // force ties
        std::vector<double> gains(static_cast<std::size_t>(n));
        for (auto& g : gains) g = quantized ? std::floor(stream.uniform() * 5.0) : stream.uniform();
        auto fail = [&](const std::string& why) {
            if (failures++ == 0) first_failure = "instance " + std::to_string(t) + ": " + why;
        };
        try {
            const Partition p = partition_sorted(gains, n_id);
            p.validate();
            if (p.n_id() != n_id || p.n != n) fail("cardinality");
            for (int i : p.bf_set) {
                for (int j : p.id_set) {
                    const double gi = gains[static_cast<std::size_t>(i)];
                    const double gj = gains[static_cast<std::size_t>(j)];
                    if (gi < gj) fail("dominance");
                    if (gi == gj && i > j) fail("tie-break");
                }
            }
            const Partition again = partition_sorted(gains, n_id);
            if (again.id_set != p.id_set || again.bf_set != p.bf_set) fail("determinism");
            const Partition rnd = partition_random(n, n_id, stream);
            rnd.validate();
            if (rnd.n_id() != n_id) fail("random cardinality");
        } catch (const std::exception& e) {
            fail(e.what());
        }
    }
    finish(r, start, 600.0, failures == 0,
           std::to_string(failures) + " failures in " + std::to_string(instances) + " instances" +
               (first_failure.empty() ? "" : " (" + first_failure + ")"));
    return r;
}

CriterionResult determinism(const Options& o) {
    auto r = make(8, "reproduce is byte-identical across worker counts");
    const auto start = Clock::now();
    SweepConfig c = reference_config(o, 8, 8, o.scaled(2000, 500));
    c.pmiss_n_set = {64, 128};
    c.sorted_moment_trials = kMinSortedTrials;
    auto render = [&](unsigned workers) {
        SweepConfig cw = c;
        cw.workers = workers;
        const Dataset d = reproduce(cw);
        std::ostringstream os;
        write_csv(os, d.snr);
        write_csv(os, d.pmiss);
        write_csv(os, d.outage);
        return os.str();
    };
    const unsigned many = std::max(4u, std::thread::hardware_concurrency());
    const std::string one = render(1);
    const std::string multi = render(many);
    finish(r, start, 600.0, one == multi && !one.empty(),
           "workers 1 vs " + std::to_string(many) + ": " + (one == multi ? "identical" : "DIFFERENT") +
               " (" + std::to_string(one.size()) + " bytes)");
    return r;
}

CriterionResult correlation_model(const Options& o) {
    auto r = make(9, "correlation matrix and sampler");
    const auto start = Clock::now();
    bool ok = true;
    std::string detail;
    const std::vector<RisGeometry> geometries = {
        {1, 1, 0.25, 1.8e9}, {2, 2, 0.25, 1.8e9},  {4, 4, 0.25, 1.8e9},  {8, 8, 0.25, 1.8e9},
        {8, 8, 0.5, 1.8e9},  {8, 16, 0.5, 1.8e9},  {16, 16, 0.5, 1.8e9}, {32, 32, 0.25, 1.8e9},
    };
    double min_eig = std::numeric_limits<double>::infinity();
    for (const auto& g : geometries) {
        try {
            const CorrelationMatrix rm = correlation_matrix(element_positions(g), g.wavelength());
            const auto& e = rm.entries();
            for (int i = 0; i < rm.dimension(); ++i) {
                if (e(i, i) != 1.0) ok = false;
                for (int j = 0; j < i; ++j) {
                    if (e(i, j) != e(j, i) || std::abs(e(i, j)) > 1.0) ok = false;
                }
            }
            min_eig = std::min(min_eig, rm.min_eigenvalue());
            if (rm.min_eigenvalue() < -1e-10) ok = false;
        } catch (const std::exception& ex) {
            ok = false;
            detail += std::string("geometry failed: ") + ex.what() + "; ";
        }
    }
    detail += "min eigenvalue " + fmt(min_eig, 3) + "; ";

    // empirical covariance on a correlated 4x4 quarter-wavelength array
    const RisGeometry g{4, 4, 0.25, 1.8e9};
    const CorrelationMatrix rm = correlation_matrix(element_positions(g), g.wavelength());
    const int n = rm.dimension();
    const std::size_t draws = o.scaled(100000, 20000);
    const double variance = 2.0;
    std::vector<ComplexVector> z(draws);
    for (std::size_t t = 0; t < draws; ++t) {
        RandomStream stream(o.seed, 8000, t, StreamPurpose::channel);
        z[t] = sample_correlated(rm, variance, stream);
    }
    double worst_z = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            double s_re = 0.0, s2_re = 0.0, s_im = 0.0, s2_im = 0.0;
            for (const auto& zt : z) {
                const Complex p = zt[static_cast<std::size_t>(i)] * std::conj(zt[static_cast<std::size_t>(j)]);
                s_re += p.real();
                s2_re += p.real() * p.real();
                s_im += p.imag();
                s2_im += p.imag() * p.imag();
            }
            const double dn = static_cast<double>(draws);
            const double m_re = s_re / dn, m_im = s_im / dn;
            const double se_re = std::sqrt(std::max(s2_re / dn - m_re * m_re, 1e-300) / dn);
            const double se_im = std::sqrt(std::max(s2_im / dn - m_im * m_im, 1e-300) / dn);
            const double target = variance * rm(i, j);
            worst_z = std::max(worst_z, std::abs(m_re - target) / se_re);
            if (i != j) worst_z = std::max(worst_z, std::abs(m_im) / se_im);
        }
    }
    if (worst_z > 5.0) ok = false;
    finish(r, start, 600.0, ok,
           detail + "max covariance deviation " + fmt(worst_z) + " SE (<=5) over " +
               std::to_string(draws) + " draws");
    return r;
}

std::vector<CriterionResult> run_all(const Options& o, std::ostream* log) {
    using Fn = CriterionResult (*)(const Options&);
    const Fn checks[] = {
        moment_fidelity,    [](const Options& x) { return inversion_correctness(x); },
        theory_agreement,   outage_sorting_gain,
        snr_sorting_gain,   identification_invariance,
        partition_correctness, determinism,
        correlation_model,
    };
    std::vector<CriterionResult> out;
    for (Fn f : checks) {
        CriterionResult res;
        try {
            res = f(o);
        } catch (const std::exception& e) {
            res.id = static_cast<int>(out.size()) + 1;
            res.name = "criterion " + std::to_string(res.id);
            res.passed = false;
            res.detail = std::string("error: ") + e.what();
        }
        if (log) *log << format_line(res) << std::endl;
        out.push_back(std::move(res));
    }
    return out;
}

std::string format_line(const CriterionResult& r) {
    std::ostringstream os;
    os << (r.passed ? "PASS" : "FAIL") << "  [" << r.id << "] " << r.name << " -- " << r.detail
       << " (" << std::fixed << std::setprecision(1) << r.seconds << " s)";
    return os.str();
}

void print_table(std::ostream& out, const std::vector<CriterionResult>& results) {
    int passed = 0;
    for (const auto& r : results) passed += r.passed ? 1 : 0;
    out << passed << "/" << results.size() << " acceptance criteria passed\n";
}

}  // namespace rispart::validation
