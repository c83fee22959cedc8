#include <chrono>
#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "polsq/error.hpp"
#include "polsq/explorer.hpp"

using namespace polsq;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST(Optimizer, FindsKnownOptimum) {
    for (double t : {0.25, 0.5, 1.0, 2.0}) {
        const OptimumReport r = optimize_factor(InteractionTime(t));
        EXPECT_NEAR(r.factor_min, std::exp(-2 * t), 1e-6);
        EXPECT_NEAR(r.degree_max, 1 - std::exp(-2 * t), 1e-6);
        EXPECT_LE(std::abs(r.theta_star - kPi / 4), r.grid_resolution);
        EXPECT_LE(std::abs(r.phase_sum_star - 1.5 * kPi), r.grid_resolution);
        EXPECT_EQ(r.theta_points, 721);
        EXPECT_FALSE(r.all_optima.empty());
        EXPECT_LE(r.factor_min, r.grid_factor_min);
    }
}

TEST(Optimizer, CoarseGridStillConverges) {
    const OptimumReport r = optimize_factor(InteractionTime(0.8), 0.1);
    EXPECT_NEAR(r.factor_min, std::exp(-1.6), 1e-6);
    EXPECT_LE(std::abs(r.theta_star - kPi / 4), 0.1);
}

TEST(Optimizer, Errors) {
    EXPECT_THROW(optimize_factor(InteractionTime(0.0)), DegenerateOptimum);
    EXPECT_THROW(optimize_factor(InteractionTime(1.0), 0.0), InvalidInput);
    EXPECT_THROW(optimize_factor(InteractionTime(1.0), 0.2), InvalidInput);
}

TEST(Boundary, PhaseAndCurve) {
    EXPECT_EQ(boundary_phase(0.0), 0.0);
    for (double t : {0.01, 0.5, 1.0, 3.0}) {
        EXPECT_NEAR(boundary_phase(t), std::asin(std::tanh(t)), 1e-9);
        const double phi1 = boundary_phase(t);
        EXPECT_NEAR(s1_factor(kPi / 4, phi1, InteractionTime(t)), 1.0, 1e-9);
        EXPECT_LT(s1_factor(kPi / 4, phi1 - 0.01, InteractionTime(t)), 1.0);
        EXPECT_GT(s1_factor(kPi / 4, phi1 + 0.01, InteractionTime(t)), 1.0);
    }
    // Large T: asin(tanh T) rounds to pi/2, the atan form stays below it.
    EXPECT_LT(boundary_phase(20.0), kPi / 2);
    EXPECT_NEAR(boundary_phase(20.0), kPi / 2 - 1 / std::sinh(20.0), 1e-15);
    const BoundaryCurve c = boundary_curve(3.0, 2);
    ASSERT_EQ(c.samples.size(), 2u);
    EXPECT_DOUBLE_EQ(c.samples[0].time, 1.5);
    EXPECT_DOUBLE_EQ(c.samples[1].time, 3.0);
    for (const auto &s : c.samples)
        EXPECT_NEAR(s.phi1 + s.phi2, kPi, 1e-15);
    EXPECT_THROW(boundary_curve(3.0, 1), InvalidInput);
    EXPECT_THROW(boundary_curve(0.0, 5), InvalidInput);
    EXPECT_THROW(boundary_curve(-1.0, 5), InvalidInput);
}

TEST(SweepGrid, Parse) {
    const SweepGrid g = SweepGrid::parse("A=1;theta=0:1.5:4;T=0.5, 1,2");
    EXPECT_EQ(g.amplitude, std::vector<double>{1.0});
    ASSERT_EQ(g.theta.size(), 4u);
    EXPECT_DOUBLE_EQ(g.theta[3], 1.5);
    EXPECT_DOUBLE_EQ(g.theta[1], 0.5);
    EXPECT_EQ(g.time, (std::vector<double>{0.5, 1.0, 2.0}));
    EXPECT_EQ(g.size(), 12);
    EXPECT_THROW(SweepGrid::parse("B=1"), InvalidInput);
    EXPECT_THROW(SweepGrid::parse("A=x"), InvalidInput);
    EXPECT_THROW(SweepGrid::parse("A=0:1:0"), InvalidInput);
    EXPECT_THROW(SweepGrid::parse("A=0:1"), InvalidInput);
    EXPECT_THROW(SweepGrid::parse("A"), InvalidInput);
}

TEST(Sweep, OrderAndAgreement) {
    SweepGrid g;
    g.amplitude = {0.5, 1.0};
    g.time = {0.2, 0.6};
    const SweepTable table = sweep(g, SweepMethod::both);
    ASSERT_EQ(table.records.size(), 4u);
    EXPECT_EQ(table.records[0].amplitude, 0.5);
    EXPECT_EQ(table.records[1].time, 0.6);
    EXPECT_EQ(table.records[2].amplitude, 1.0);
    for (const SweepRecord &r : table.records) {
        ASSERT_TRUE(r.max_scaled_delta.has_value());
        EXPECT_LT(*r.max_scaled_delta, 1e-6);
    }
}

TEST(Sweep, BudgetRefusedBeforeWork) {
    SweepGrid g = SweepGrid::parse("A=0:1:1001");
    const auto t0 = std::chrono::steady_clock::now();
    try {
        sweep(g, SweepMethod::fock);
        FAIL() << "expected BudgetExceeded";
    } catch (const BudgetExceeded &e) {
        EXPECT_EQ(e.count(), 1001);
    }
    EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(), 0.5);
    SweepOptions opt;
    opt.budget.analytic_points = 3;
    EXPECT_THROW(sweep(SweepGrid::parse("T=1,2,3,4"), SweepMethod::analytic, opt), BudgetExceeded);
    EXPECT_NO_THROW(sweep(SweepGrid::parse("T=1,2,3"), SweepMethod::analytic, opt));
}

TEST(Sweep, MethodNames) {
    EXPECT_EQ(parse_sweep_method("fock"), SweepMethod::fock);
    EXPECT_STREQ(to_string(SweepMethod::both), "both");
    EXPECT_THROW(parse_sweep_method("exact"), InvalidInput);
}

TEST(ScaledDelta, FloorsSmallReferences) {
    EXPECT_DOUBLE_EQ(scaled_delta(1.0, 2.0), 0.5);
    EXPECT_DOUBLE_EQ(scaled_delta(1e-8, 0.0), 1e-6);
}

TEST(Scenario, EqualSplit) {
    const ScenarioReport r = equal_split_scenario(1.0, InteractionTime(1.0), 0.75 * kPi);
    EXPECT_LT(std::abs(r.moments.mean[2]), 1e-6);
    EXPECT_NEAR(r.i_plus + r.i_minus, r.moments.s0, 1e-9);
    EXPECT_NEAR(r.i_right + r.i_left, r.moments.s0, 1e-9);
    EXPECT_NEAR(r.i_plus - r.i_minus, r.moments.mean[1], 1e-9);
    EXPECT_NEAR(*r.s1.degree, 1 - std::exp(-2.0), 1e-6);
    EXPECT_DOUBLE_EQ(r.recommended_phase, 0.75 * kPi);
}

TEST(DirectionScan, Deterministic) {
    const StokesMoments m = oracle_moments(make_coherent_input(1.0, 1.0, 0.3, 2.2), InteractionTime(0.7));
    const DirectionScan a = scan_directions(m, 2000, 99);
    const DirectionScan b = scan_directions(m, 2000, 99);
    EXPECT_EQ(a.best_factor, b.best_factor);
    EXPECT_EQ(a.best_direction, b.best_direction);
    EXPECT_NEAR(a.best_direction.norm(), 1.0, 1e-12);
    EXPECT_THROW(scan_directions(variance_stokes(make_coherent_input(1, 1, 0, 0), InteractionTime(1)), 10, 1),
                 UnsupportedDirection);
    EXPECT_THROW(scan_directions(m, 0, 1), InvalidInput);
}
