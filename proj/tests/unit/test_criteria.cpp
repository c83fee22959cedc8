#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Geometry>
#include <gtest/gtest.h>

#include "polsq/criteria.hpp"
#include "polsq/error.hpp"
#include "polsq/fock_oracle.hpp"

using namespace polsq;

namespace {

constexpr double kPi = std::numbers::pi;

StokesMoments synthetic(double s0, Eigen::Vector3d mean, Eigen::Matrix3d cov) {
    StokesMoments m;
    m.s0 = s0;
    m.mean = mean;
    m.covariance = cov;
    m.full_covariance = true;
    m.source = MomentSource::fock_oracle;
    return m;
}

Eigen::Vector3d random_unit(std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    Eigen::Vector3d v(g(rng), g(rng), g(rng));
    return v.normalized();
}

} // namespace

TEST(Direction, Validation) {
    EXPECT_THROW(Direction(Eigen::Vector3d(1, 1, 0)), InvalidInput);
    EXPECT_THROW(Direction::normalized(Eigen::Vector3d::Zero()), InvalidInput);
    EXPECT_THROW(Direction::normalized(Eigen::Vector3d(NAN, 0, 0)), InvalidInput);
    EXPECT_THROW(Direction::axis(3), InvalidInput);
    EXPECT_EQ(Direction::axis(2).principal_axis(), 2);
    EXPECT_EQ(Direction(Eigen::Vector3d(0, -1, 0)).principal_axis(), 1);
    EXPECT_FALSE(Direction::normalized(Eigen::Vector3d(1, 1, 0)).principal_axis().has_value());
}

TEST(Assess, HeadlineDegree) {
    const CoherentInput in = make_coherent_input(1.0, kPi / 4, 0.75 * kPi, 0.75 * kPi);
    for (double t : {1.0, 2.0}) {
        const SqueezingAssessment a = assess(variance_stokes(in, InteractionTime(t)), Direction::axis(0));
        ASSERT_TRUE(a.degree.has_value());
        EXPECT_NEAR(*a.degree, 1.0 - std::exp(-2 * t), 1e-12);
        EXPECT_NEAR(*a.db, 10 * std::log10(std::exp(-2 * t)), 1e-10);
        EXPECT_TRUE(a.verdicts.chirkin);
        EXPECT_TRUE(a.verdicts.luis_max);
        EXPECT_TRUE(a.verdicts.luis_pair);
        // Perpendicular is S2, the third axis S3 is principal, so Heersink is available.
        ASSERT_TRUE(a.verdicts.heersink.has_value());
        EXPECT_TRUE(*a.verdicts.heersink);
    }
    EXPECT_NEAR(*assess(variance_stokes(in, InteractionTime(1.0)), Direction::axis(0)).degree,
                0.8646647, 5e-8);
    EXPECT_NEAR(*assess(variance_stokes(in, InteractionTime(2.0)), Direction::axis(0)).degree,
                0.9816844, 5e-8);
}

TEST(Assess, AnalyticOffAxisIsUnsupported) {
    const StokesMoments m =
        variance_stokes(make_coherent_input(1.0, 0.3, 0.1, 0.2), InteractionTime(0.5));
    EXPECT_THROW(assess(m, Direction::normalized(Eigen::Vector3d(1, 1, 0))), UnsupportedDirection);
    // Mixed perpendicular: the third direction is off-axis, Heersink is unknown.
    const SqueezingAssessment a = assess(m, Direction::axis(0));
    EXPECT_FALSE(a.verdicts.heersink.has_value());
}

TEST(Assess, CoherentStateIsNotSqueezed) {
    std::mt19937_64 rng(23);
    const CoherentInput in = make_coherent_input(1.1, 0.5, 0.7, 2.9);
    const StokesMoments analytic = variance_stokes(in, InteractionTime(0.0));
    for (int k = 0; k < 3; ++k) {
        const SqueezingAssessment a = assess(analytic, Direction::axis(k));
        if (a.factor) {
            EXPECT_GE(*a.factor, 1.0);
        }
        EXPECT_FALSE(a.verdicts.chirkin);
        EXPECT_FALSE(a.verdicts.luis_max);
        EXPECT_FALSE(a.verdicts.luis_pair);
    }
    const StokesMoments oracle = measure_moments(decompose_input(in));
    for (int i = 0; i < 50; ++i) {
        const Direction n(random_unit(rng));
        const SqueezingAssessment a = assess(oracle, n);
        ASSERT_TRUE(a.factor.has_value());
        EXPECT_GE(*a.factor, 1.0 - 1e-9);
        EXPECT_FALSE(a.verdicts.luis_max);
        EXPECT_FALSE(a.verdicts.luis_pair);
    }
}

TEST(Assess, BoundaryHasUnitFactor) {
    for (double t : {0.3, 1.0, 2.0}) {
        const double phi1 = std::asin(std::tanh(t));
        const CoherentInput in = make_coherent_input(1.0, kPi / 4, 0.5 * phi1, 0.5 * phi1);
        const SqueezingAssessment a = assess(variance_stokes(in, InteractionTime(t)), Direction::axis(0));
        EXPECT_NEAR(*a.factor, 1.0, 1e-9);
    }
}

TEST(Assess, FactorAbsentWhenMeanParallel) {
    const StokesMoments m = variance_stokes(make_coherent_input(1.0, 0.0, 0.0, 0.0), InteractionTime(0.0));
    const SqueezingAssessment a = assess(m, Direction::axis(0));
    EXPECT_FALSE(a.factor.has_value());
    EXPECT_FALSE(a.degree.has_value());
    EXPECT_FALSE(a.db.has_value());
    EXPECT_FALSE(a.verdicts.luis_max);
    EXPECT_EQ(a.verdicts.heersink, std::optional<bool>(false));
}

TEST(Assess, RotationInvariance) {
    std::mt19937_64 rng(31);
    std::normal_distribution<double> g;
    for (int i = 0; i < 100; ++i) {
        Eigen::Matrix3d b;
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c)
                b(r, c) = g(rng);
        const Eigen::Matrix3d cov = b * b.transpose() + 0.1 * Eigen::Matrix3d::Identity();
        const Eigen::Vector3d mean(g(rng), g(rng), g(rng));
        const StokesMoments m = synthetic(10.0, mean, cov);
        const Eigen::Matrix3d rot =
            Eigen::AngleAxisd(2 * kPi * std::abs(g(rng)), random_unit(rng)).toRotationMatrix();
        const StokesMoments mr = synthetic(10.0, rot * mean, rot * cov * rot.transpose());
        const Eigen::Vector3d n = random_unit(rng);
        const SqueezingAssessment a = assess(m, Direction(n));
        const SqueezingAssessment ar = assess(mr, Direction::normalized(rot * n));
        EXPECT_NEAR(a.variance_along, ar.variance_along, 1e-10 * std::max(1.0, a.variance_along));
        EXPECT_NEAR(a.rhs_luis, ar.rhs_luis, 1e-10 * std::max(1.0, a.rhs_luis));
        ASSERT_EQ(a.factor.has_value(), ar.factor.has_value());
        if (a.factor) {
            EXPECT_NEAR(*a.factor, *ar.factor, 1e-9 * std::max(1.0, *a.factor));
        }
        EXPECT_EQ(a.verdicts.luis_max, ar.verdicts.luis_max);
    }
}

TEST(Assess, MaxPerpIsAMaximum) {
    std::mt19937_64 rng(41);
    const StokesMoments m = synthetic(5.0, Eigen::Vector3d(1.0, -2.0, 0.5), Eigen::Matrix3d::Identity());
    const Direction n(random_unit(rng));
    const double best = max_perp_expectation(m, n);
    EXPECT_NEAR(best * best, m.mean.squaredNorm() - std::pow(m.mean.dot(n.vector()), 2), 1e-12);
    for (int i = 0; i < 200; ++i) {
        Eigen::Vector3d u = random_unit(rng);
        u -= u.dot(n.vector()) * n.vector();
        if (u.norm() < 1e-6)
            continue;
        EXPECT_LE(std::abs(m.mean.dot(u.normalized())), best + 1e-12);
    }
}

TEST(Decibel, RoundTrip) {
    EXPECT_NEAR(factor_of_db(-3.4), 0.4570882, 1e-7);
    EXPECT_NEAR(db_of_factor(factor_of_db(-3.4)), -3.4, 1e-9);
    EXPECT_NEAR(db_of_factor(0.4570882), -3.4, 1e-6);
    EXPECT_THROW(db_of_factor(0.0), DomainError);
    EXPECT_THROW(db_of_factor(-1.0), DomainError);
    EXPECT_THROW(db_of_factor(INFINITY), DomainError);
    EXPECT_THROW(factor_of_db(NAN), DomainError);
}

TEST(Uncertainty, ProductsAndChain) {
    const StokesMoments m =
        variance_stokes(make_coherent_input(1.0, kPi / 4, 0.75 * kPi, 0.75 * kPi), InteractionTime(1.0));
    const UncertaintyProducts u = uncertainty_products(m);
    EXPECT_GE(u.min_relative_margin(), 0.0);
    EXPECT_NEAR(u.bounds[1], std::exp(4.0), 1e-10);
    EXPECT_NEAR(u.bounds[2], 0.0, 1e-20);
    const StringencyChain c = stringency_chain(m, Direction::axis(0));
    EXPECT_TRUE(c.precondition);
    EXPECT_TRUE(c.holds);
    EXPECT_NEAR(c.middle, std::exp(2.0), 1e-12);
    // Sub-Poissonian mean: |S_perp| > S0 breaks the precondition.
    const StokesMoments odd = synthetic(1.0, Eigen::Vector3d(0, 2, 0), Eigen::Matrix3d::Identity());
    EXPECT_FALSE(stringency_chain(odd, Direction::axis(0)).precondition);
}
