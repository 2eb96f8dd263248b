#include <gtest/gtest.h>

#include <cmath>

#include "rispart/error.hpp"
#include "rispart/simulate.hpp"

using namespace rispart;

namespace {

SweepConfig small_config(std::size_t trials = 400) {
    SweepConfig c;
    c.trials = trials;
    c.pt_dbm_grid = {-5.0, 0.0, 2.5, 10.0};
    c.pmiss_n_set = {16, 36};
    c.sorted_moment_trials = kMinSortedTrials;
    return c;
}

void expect_probability_curve(const CurveResult& c) {
    ASSERT_EQ(c.estimates.size(), c.size());
    ASSERT_EQ(c.half_widths.size(), c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        EXPECT_GE(c.estimates[i], 0.0);
        EXPECT_LE(c.estimates[i], 1.0);
        EXPECT_GE(c.half_widths[i], 0.0);
        EXPECT_LE(c.ci_low(i), c.estimates[i]);
        EXPECT_GE(c.ci_high(i), c.estimates[i]);
    }
}

}  // namespace

TEST(Mode, Parsing) {
    EXPECT_EQ(parse_mode("sorted"), Mode::sorted);
    EXPECT_EQ(parse_mode("unsorted"), Mode::unsorted);
    EXPECT_EQ(to_string(Mode::sorted), "sorted");
    EXPECT_THROW(parse_mode("both"), InvalidArgument);
}

TEST(SweepConfig, Validation) {
    SweepConfig c;
    EXPECT_NO_THROW(c.validate());
    EXPECT_EQ(c.n(), 64);
    EXPECT_EQ(c.resolved_n_id(), 32);
    c.trials = 0;
    EXPECT_THROW(c.validate(), InvalidArgument);
    c = SweepConfig{};
    c.sinr_threshold = 0.0;
    EXPECT_THROW(c.validate(), InvalidArgument);
    c = SweepConfig{};
    c.rbar_grid = {1.5};
    EXPECT_THROW(c.validate(), InvalidArgument);
    c = SweepConfig{};
    c.n_id = 65;
    EXPECT_THROW(c.validate(), InvalidArgument);
    EXPECT_EQ(SweepConfig::default_pt_grid().size(), 23u);
    EXPECT_EQ(SweepConfig::default_pt_grid().front(), -10.0);
    EXPECT_EQ(SweepConfig::default_pt_grid().back(), 45.0);
}

TEST(Outage, ThresholdLimits) {
    auto c = small_config(300);
    c.sinr_threshold = 1e-300;
    for (double p : run_outage_sweep(c, Mode::unsorted).estimates) EXPECT_EQ(p, 0.0);
    c.sinr_threshold = 1e300;
    for (double p : run_outage_sweep(c, Mode::sorted).estimates) EXPECT_EQ(p, 1.0);
}

TEST(Outage, EstimatesAreProbabilities) {
    const auto c = small_config();
    expect_probability_curve(run_outage_sweep(c, Mode::sorted));
    expect_probability_curve(run_outage_sweep(c, Mode::unsorted));
}

TEST(Outage, IndependentOfWorkerCount) {
    auto c = small_config(500);
    c.workers = 1;
    const auto one = run_outage_sweep(c, Mode::unsorted);
    c.workers = 3;
    const auto three = run_outage_sweep(c, Mode::unsorted);
    EXPECT_EQ(one.events, three.events);
    EXPECT_EQ(one.estimates, three.estimates);
}

TEST(Outage, HalfWidthShrinksAsRootTrials) {
    auto c = small_config();
    c.pt_dbm_grid = {2.5};  // unsorted outage near 0.3
    c.trials = 2000;
    const auto a = run_outage_sweep(c, Mode::unsorted);
    c.trials = 8000;
    const auto b = run_outage_sweep(c, Mode::unsorted);
    EXPECT_NEAR(a.half_widths[0] / b.half_widths[0], 2.0, 0.2);
}

TEST(Outage, SortingDoesNotHurt) {
    auto c = small_config(10000);
    c.pt_dbm_grid = {-5.0, -2.5, 0.0, 2.5, 5.0, 7.5};
    const auto s = run_outage_sweep(c, Mode::sorted);
    const auto u = run_outage_sweep(c, Mode::unsorted);
    for (std::size_t i = 0; i < s.size(); ++i) {
        EXPECT_LE(s.estimates[i], u.estimates[i] + s.half_widths[i] + u.half_widths[i]) << s.x_values[i];
    }
}

TEST(Outage, ProbeSwitchLowersInterference) {
    auto c = small_config(3000);
    c.pt_dbm_grid = {2.5};
    const auto with = run_outage_sweep(c, Mode::unsorted);
    c.include_probe_terms = false;
    const auto without = run_outage_sweep(c, Mode::unsorted);
    EXPECT_LT(without.estimates[0], with.estimates[0]);
}

TEST(Snr, DoublingPowerAddsThreeDecibels) {
    auto c = small_config(300);
    const double shift = 10.0 * std::log10(2.0);
    c.pt_dbm_grid = {0.0, 20.0};
    const auto base = run_snr_sweep(c, Mode::sorted);
    c.pt_dbm_grid = {shift, 20.0 + shift};
    const auto doubled = run_snr_sweep(c, Mode::sorted);
    for (std::size_t i = 0; i < 2; ++i) {
        EXPECT_NEAR(doubled.estimates[i] - base.estimates[i], 3.0103, 1e-4);
    }
}

TEST(Snr, SortedAboveUnsorted) {
    const auto c = small_config(2000);
    const auto s = run_snr_sweep(c, Mode::sorted);
    const auto u = run_snr_sweep(c, Mode::unsorted);
    for (std::size_t i = 0; i < s.size(); ++i) {
        EXPECT_GT(s.estimates[i] - u.estimates[i], 2.0 * (s.standard_errors[i] + u.standard_errors[i]));
    }
}

TEST(Snr, EmptyBeamformingSetIsMissing) {
    auto c = small_config(50);
    c.n_id = 64;
    const auto s = run_snr_sweep(c, Mode::unsorted);
    for (double x : s.estimates) EXPECT_TRUE(std::isnan(x));
}

TEST(Pmiss, ZeroThresholdNeverMisses) {
    auto c = small_config(500);
    c.rbar_grid = {0.0, 0.5, 1.0};
    for (const auto& curve : run_pmiss_sweep(c, Mode::sorted)) {
        EXPECT_EQ(curve.estimates[0], 0.0);
        expect_probability_curve(curve);
    }
}

TEST(Pmiss, NoiselessUnitThresholdIsInterior) {
    auto c = small_config(2000);
    c.noise_dbm = -std::numeric_limits<double>::infinity();
    c.rbar_grid = {1.0};
    for (Mode m : {Mode::sorted, Mode::unsorted}) {
        for (const auto& curve : run_pmiss_sweep(c, m)) {
            EXPECT_GT(curve.estimates[0], 0.05) << curve.mode;
            EXPECT_LT(curve.estimates[0], 0.95) << curve.mode;
        }
    }
}

TEST(Pmiss, CurvesPerElementCount) {
    const auto c = small_config(200);
    const auto curves = run_pmiss_sweep(c, Mode::unsorted);
    ASSERT_EQ(curves.size(), 2u);
    EXPECT_EQ(curves[0].mode, "unsorted_n16");
    EXPECT_EQ(curves[1].mode, "unsorted_n36");
    EXPECT_EQ(curves[0].size(), c.rbar_grid.size());
}

TEST(Theory, CurvesAreMonotoneAndSortedBelow) {
    auto c = small_config();
    c.pt_dbm_grid = {-5.0, -2.5, 0.0, 2.5, 5.0, 10.0, 20.0};
    const auto s = theory_outage_curve(c, Mode::sorted);
    const auto u = theory_outage_curve(c, Mode::unsorted);
    EXPECT_EQ(s.source, "theory");
    for (std::size_t i = 1; i < u.size(); ++i) {
        EXPECT_LE(u.estimates[i], u.estimates[i - 1] + 2e-6);
        EXPECT_LE(s.estimates[i], s.estimates[i - 1] + 2e-6);
    }
    for (std::size_t i = 0; i < u.size(); ++i) EXPECT_LE(s.estimates[i], u.estimates[i] + 1e-6);
}

TEST(Reproduce, ShapeAndDeterminism) {
    auto c = small_config(200);
    const auto a = reproduce(c);
    EXPECT_EQ(a.snr.size(), 2u);
    EXPECT_EQ(a.pmiss.size(), 4u);
    ASSERT_EQ(a.outage.size(), 4u);
    for (const auto& curve : a.outage) EXPECT_EQ(curve.size(), c.pt_dbm_grid.size());
    c.workers = 2;
    const auto b = reproduce(c);
    for (std::size_t k = 0; k < a.outage.size(); ++k) EXPECT_EQ(a.outage[k].estimates, b.outage[k].estimates);
    for (std::size_t k = 0; k < a.snr.size(); ++k) EXPECT_EQ(a.snr[k].estimates, b.snr[k].estimates);
    for (std::size_t k = 0; k < a.pmiss.size(); ++k) EXPECT_EQ(a.pmiss[k].estimates, b.pmiss[k].estimates);
}
