#include "rispart/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "rispart/error.hpp"
#include "rispart/partition.hpp"
#include "rispart/signal.hpp"

namespace rispart {

namespace {

constexpr double kZ95 = 1.959963984540054;
constexpr std::uint64_t kPmissPointBase = 1ULL << 32;

// Runs body(t) for t in [0, trials) on `workers` threads over contiguous
// blocks. Results must be written by trial index only.
template <class Body>
void for_each_trial(std::size_t trials, unsigned workers, Body&& body) {
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(trials, 1))));
    if (workers == 1) {
        for (std::size_t t = 0; t < trials; ++t) body(t);
        return;
    }
    std::vector<std::thread> pool;
    std::exception_ptr failure;
    std::mutex failure_mutex;
    const std::size_t block = (trials + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t begin = w * block;
        const std::size_t end = std::min(trials, begin + block);
        if (begin >= end) break;
        pool.emplace_back([&, begin, end] {
            try {
                for (std::size_t t = begin; t < end; ++t) body(t);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

// Neumaier compensated sum in index order.
double stable_sum(const std::vector<double>& values) {
    double sum = 0.0;
    double c = 0.0;
    for (double x : values) {
        const double t = sum + x;
        c += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
        sum = t;
    }
    return sum + c;
}

Partition choose_partition(Mode mode, const ChannelRealization& ch, int n_id, std::uint64_t seed,
                           std::uint64_t point, std::uint64_t trial) {
    if (mode == Mode::sorted) return partition_sorted(element_gains(ch.v, ch.g), n_id);
    RandomStream stream(seed, point, trial, StreamPurpose::partition);
    return partition_random(ch.size(), n_id, stream);
}

PsrpPattern make_pattern(const SweepConfig& c, int n_id) {
    return PsrpPattern::from_signature(PsrpPattern::balanced_signature(c.psrp_id, c.psrp_length), n_id);
}

void fill_binomial(CurveResult& curve, std::uint64_t events) {
    const double n = static_cast<double>(curve.trials);
    const double p = static_cast<double>(events) / n;
    const double se = std::sqrt(p * (1.0 - p) / n);
    curve.events.push_back(events);
    curve.estimates.push_back(p);
    curve.standard_errors.push_back(se);
    curve.half_widths.push_back(kZ95 * se);
}

std::string format_double(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

void stamp(CurveResult& c, const SweepConfig& config, int n, int n_id) {
    c.metadata["seed"] = std::to_string(config.seed);
    c.metadata["n"] = std::to_string(n);
    c.metadata["n_id"] = std::to_string(n_id);
    c.metadata["trials"] = std::to_string(config.trials);
    c.metadata["sinr_threshold"] = format_double(config.sinr_threshold);
}

}  // namespace

std::string to_string(Mode mode) { return mode == Mode::sorted ? "sorted" : "unsorted"; }

Mode parse_mode(std::string_view text) {
    if (text == "sorted") return Mode::sorted;
    if (text == "unsorted") return Mode::unsorted;
    throw InvalidArgument("mode must be 'sorted' or 'unsorted'");
}

std::vector<double> SweepConfig::default_pt_grid() {
    std::vector<double> g;
    for (int k = 0; k <= 22; ++k) g.push_back(-10.0 + 2.5 * k);
    return g;
}

std::vector<double> SweepConfig::default_rbar_grid() {
    std::vector<double> g;
    for (int k = 0; k <= 20; ++k) g.push_back(k / 20.0);
    return g;
}

LinkBudget SweepConfig::link_budget() const {
    return LinkBudget::from_distances(distances, geometry.carrier_hz, noise_dbm);
}

unsigned SweepConfig::resolved_workers() const noexcept {
    if (workers > 0) return workers;
    return std::max(1u, std::thread::hardware_concurrency());
}

void SweepConfig::validate() const {
    geometry.validate();
    link_budget().validate();
    if (pt_dbm_grid.empty()) throw InvalidArgument("transmit power grid is empty");
    if (rbar_grid.empty()) throw InvalidArgument("detection threshold grid is empty");
    for (double r : rbar_grid) {
        if (!(r >= 0.0 && r <= 1.0)) throw InvalidArgument("detection thresholds must lie in [0, 1]");
    }
    if (trials < 1) throw InvalidArgument("trials must be >= 1");
    if (!(sinr_threshold > 0.0)) throw InvalidArgument("SINR threshold must be positive");
    if (resolved_n_id() > n()) throw InvalidArgument("IDset size exceeds element count");
    if (psrp_length < 2) throw InvalidArgument("PSRP length must be >= 2");
    for (int n_k : pmiss_n_set) {
        if (n_k < 1) throw InvalidArgument("P_miss element counts must be positive");
    }
    inversion.validate();
}

double CurveResult::ci_low(std::size_t i) const {
    const double lo = estimates[i] - half_widths[i];
    return (metric == "snr_db") ? lo : std::max(0.0, lo);
}

double CurveResult::ci_high(std::size_t i) const {
    const double hi = estimates[i] + half_widths[i];
    return (metric == "snr_db") ? hi : std::min(1.0, hi);
}

CurveResult run_outage_sweep(const SweepConfig& config, Mode mode) {
    config.validate();
    const LinkBudget budget = config.link_budget();
    const ChannelModel model(config.geometry, budget);
    const int n_id = config.resolved_n_id();
    const PsrpPattern pattern = make_pattern(config, n_id);
    const std::vector<double> phi = psrp_row(pattern, 0);
    const double noise = budget.noise_watts();

    CurveResult curve{"outage", to_string(mode), "montecarlo", {}, {}, {}, {}, {}, config.trials, {}};
    stamp(curve, config, config.n(), n_id);
    std::vector<std::uint8_t> outage(config.trials);
    for (std::size_t p = 0; p < config.pt_dbm_grid.size(); ++p) {
        const double pt = dbm_to_watts(config.pt_dbm_grid[p]);
        for_each_trial(config.trials, config.resolved_workers(), [&](std::size_t t) {
            RandomStream stream(config.seed, p, t, StreamPurpose::channel);
            const ChannelRealization ch = model.draw(stream);
            const Partition part = choose_partition(mode, ch, n_id, config.seed, p, t);
            const PhaseConfig phases{bf_cophase(ch.v, ch.g, part.bf_set), phi};
            AggregateTerms terms = aggregate_terms_ue1(ch.v, ch.g, ch.h, part, phases);
            if (!config.include_probe_terms) terms = terms.without_probe();
            outage[t] = sinr_ue1(terms, noise, pt) < config.sinr_threshold ? 1 : 0;
        });
        std::uint64_t events = 0;
        for (auto o : outage) events += o;
        curve.x_values.push_back(config.pt_dbm_grid[p]);
        fill_binomial(curve, events);
    }
    return curve;
}

CurveResult run_snr_sweep(const SweepConfig& config, Mode mode) {
    config.validate();
    const LinkBudget budget = config.link_budget();
    const ChannelModel model(config.geometry, budget);
    const int n_id = config.resolved_n_id();
    const double noise = budget.noise_watts();

    CurveResult curve{"snr_db", to_string(mode), "montecarlo", {}, {}, {}, {}, {}, config.trials, {}};
    stamp(curve, config, config.n(), n_id);
    std::vector<double> snr(config.trials);
    const double to_db = 10.0 / std::numbers::ln10;
    for (std::size_t p = 0; p < config.pt_dbm_grid.size(); ++p) {
        const double pt = dbm_to_watts(config.pt_dbm_grid[p]);
        for_each_trial(config.trials, config.resolved_workers(), [&](std::size_t t) {
            RandomStream stream(config.seed, p, t, StreamPurpose::channel);
            const ChannelRealization ch = model.draw(stream);
            const Partition part = choose_partition(mode, ch, n_id, config.seed, p, t);
            double a = 0.0;  // co-phased BF sum is sum |v||g|
            for (int i : part.bf_set) {
                const auto k = static_cast<std::size_t>(i);
                a += std::abs(ch.v[k]) * std::abs(ch.g[k]);
            }
            snr[t] = pt * a * a / noise;
        });
        const double n = static_cast<double>(config.trials);
        const double mean = stable_sum(snr) / n;
        std::vector<double> dev(snr.size());
        for (std::size_t t = 0; t < snr.size(); ++t) dev[t] = (snr[t] - mean) * (snr[t] - mean);
        const double se = config.trials > 1 ? std::sqrt(stable_sum(dev) / (n - 1.0) / n) : 0.0;
        curve.x_values.push_back(config.pt_dbm_grid[p]);
        if (mean > 0.0 && std::isfinite(mean)) {
            const double se_db = to_db * se / mean;
            curve.estimates.push_back(10.0 * std::log10(mean));
            curve.standard_errors.push_back(se_db);
            curve.half_widths.push_back(kZ95 * se_db);
        } else {
            const double nan = std::numeric_limits<double>::quiet_NaN();
            curve.estimates.push_back(nan);
            curve.standard_errors.push_back(nan);
            curve.half_widths.push_back(nan);
        }
    }
    return curve;
}

std::vector<double> pmiss_statistics(const SweepConfig& config, Mode mode, int n) {
    config.validate();
    const LinkBudget budget = config.link_budget();
    const RisGeometry geometry =
        RisGeometry::near_square(n, config.geometry.spacing, config.geometry.carrier_hz);
    const ChannelModel model(geometry, budget);
    const int n_id = static_cast<int>(static_cast<long long>(n) * config.resolved_n_id() / config.n());
    const std::vector<int> signature = PsrpPattern::balanced_signature(config.psrp_id, config.psrp_length);
    const PsrpPattern pattern = PsrpPattern::from_signature(signature, n_id);
    std::vector<std::vector<double>> rows;
    for (int m = 0; m < pattern.rows(); ++m) rows.push_back(psrp_row(pattern, m));

    const double noise_var = budget.noise_watts() / dbm_to_watts(config.detector_pt_dbm);
    const double expected = config.psrp_length * budget.beta_h *
                            std::sqrt(std::numbers::pi * n_id / 2.0);
    const std::uint64_t point = kPmissPointBase + static_cast<std::uint64_t>(n);

    std::vector<double> stat(config.trials);
    for_each_trial(config.trials, config.resolved_workers(), [&](std::size_t t) {
        RandomStream ch_stream(config.seed, point, t, StreamPurpose::channel);
        const ChannelRealization ch = model.draw(ch_stream);
        const Partition part = choose_partition(mode, ch, n_id, config.seed, point, t);
        const std::vector<double> theta = bf_cophase(ch.v, ch.g, part.bf_set);
        RandomStream sym(config.seed, point, t, StreamPurpose::symbols);
        Complex acc = 0.0;
        for (int m = 0; m < config.psrp_length; ++m) {
            const Complex q = qpsk_symbol(sym);
            const Complex noise = sym.complex_normal(noise_var);
            const PhaseConfig phases{theta, rows[static_cast<std::size_t>(m)]};
            const Ue2Signal y = received_ue2(1.0, q, ch.h, ch.v, part, phases, noise);
            acc += static_cast<double>(signature[static_cast<std::size_t>(m)]) * y.total;
        }
        stat[t] = expected > 0.0 ? std::abs(acc) / expected : std::numeric_limits<double>::infinity();
    });
    return stat;
}

std::vector<CurveResult> run_pmiss_sweep(const SweepConfig& config, Mode mode) {
    config.validate();
    std::vector<CurveResult> out;
    for (int n : config.pmiss_n_set) {
        const std::vector<double> stat = pmiss_statistics(config, mode, n);
        CurveResult curve{"pmiss", to_string(mode) + "_n" + std::to_string(n), "montecarlo",
                          {}, {}, {}, {}, {}, config.trials, {}};
        stamp(curve, config, n, static_cast<int>(static_cast<long long>(n) * config.resolved_n_id() / config.n()));
        curve.metadata["detector_pt_dbm"] = format_double(config.detector_pt_dbm);
        curve.metadata["psrp_length"] = std::to_string(config.psrp_length);
        for (double rbar : config.rbar_grid) {
            std::uint64_t misses = 0;
            for (double s : stat) misses += s < rbar ? 1 : 0;
            curve.x_values.push_back(rbar);
            fill_binomial(curve, misses);
        }
        out.push_back(std::move(curve));
    }
    return out;
}

Moments config_moments(const SweepConfig& config, Mode mode) {
    const LinkBudget b = config.link_budget();
    if (mode == Mode::unsorted) {
        return moments_unsorted(config.n(), config.resolved_n_id(), b.beta_v, b.beta_g, b.beta_h,
                                config.include_probe_terms);
    }
    return moments_sorted(config.n(), config.resolved_n_id(), b.beta_v, b.beta_g, b.beta_h,
                          config.sorted_moment_trials, config.seed, config.include_probe_terms);
}

CurveResult theory_outage_curve(const SweepConfig& config, Mode mode) {
    config.validate();
    const Moments m = config_moments(config, mode);
    const double noise = config.link_budget().noise_watts();
    CurveResult curve{"outage", to_string(mode), "theory", {}, {}, {}, {}, {}, 0, {}};
    stamp(curve, config, config.n(), config.resolved_n_id());
    curve.metadata["mu_a"] = format_double(m.mu_a);
    curve.metadata["var_a"] = format_double(m.var_a);
    curve.metadata["var_b"] = format_double(m.var_b);
    for (double pt_dbm : config.pt_dbm_grid) {
        const CdfResult r = outage_theoretical(dbm_to_watts(pt_dbm), noise, config.sinr_threshold,
                                               m, config.inversion);
        curve.x_values.push_back(pt_dbm);
        curve.estimates.push_back(r.probability);
        curve.half_widths.push_back(r.error_estimate);
        curve.standard_errors.push_back(r.error_estimate);
        if (r.clamped) curve.metadata["clamped"] = "true";
    }
    return curve;
}

Dataset reproduce(const SweepConfig& config) {
    config.validate();
    Dataset d;
    for (Mode mode : {Mode::sorted, Mode::unsorted}) d.snr.push_back(run_snr_sweep(config, mode));
    for (Mode mode : {Mode::sorted, Mode::unsorted}) {
        for (auto& c : run_pmiss_sweep(config, mode)) d.pmiss.push_back(std::move(c));
    }
    for (Mode mode : {Mode::sorted, Mode::unsorted}) d.outage.push_back(run_outage_sweep(config, mode));
    for (Mode mode : {Mode::sorted, Mode::unsorted}) d.outage.push_back(theory_outage_curve(config, mode));
    return d;
}

}  // namespace rispart
