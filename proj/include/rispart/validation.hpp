#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "rispart/theory.hpp"

namespace rispart::validation {

inline constexpr const char* kTrialScaleEnv = "RISPART_TRIAL_SCALE";

struct Options {
    double trial_scale = 1.0;  // multiplies every Monte-Carlo budget
    unsigned workers = 0;
    std::uint64_t seed = 1;

    /// Reads RISPART_TRIAL_SCALE and RISPART_SEED when set.
    static Options from_environment();
    std::size_t scaled(std::size_t trials, std::size_t floor = 1000) const;
};

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

using CharFn = std::function<std::complex<double>(double, const Moments&, double)>;

CriterionResult moment_fidelity(const Options& o);
/// `cf` replaces the production characteristic function (mutation testing).
CriterionResult inversion_correctness(const Options& o, const CharFn& cf = {});
CriterionResult theory_agreement(const Options& o);
CriterionResult outage_sorting_gain(const Options& o);
CriterionResult snr_sorting_gain(const Options& o);
CriterionResult identification_invariance(const Options& o);
CriterionResult partition_correctness(const Options& o);
CriterionResult determinism(const Options& o);
CriterionResult correlation_model(const Options& o);

/// Runs every criterion in order, echoing one line per criterion to `log`.
std::vector<CriterionResult> run_all(const Options& o, std::ostream* log = nullptr);

std::string format_line(const CriterionResult& r);
void print_table(std::ostream& out, const std::vector<CriterionResult>& results);

}  // namespace rispart::validation
