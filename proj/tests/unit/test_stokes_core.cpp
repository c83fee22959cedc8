#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "polsq/error.hpp"
#include "polsq/stokes_core.hpp"

using namespace polsq;

namespace {

constexpr double kPi = std::numbers::pi;

// Reference means written out from the Heisenberg maps
// a_x -> c a_x - i s a_y^dag, a_y -> c a_y - i s a_x^dag, expanded by hand
// in terms of alpha and beta rather than (A, theta, phi).
struct Reference {
    double s0, s1, s2, s3;
};

Reference reference(std::complex<double> a, std::complex<double> b, double t) {
    const double c = std::cosh(t), s = std::sinh(t);
    const std::complex<double> I{0.0, 1.0};
    // Displacements of the evolved modes.
    const std::complex<double> ax = c * a - I * s * std::conj(b);
    const std::complex<double> ay = c * b - I * s * std::conj(a);
    // <a_x^dag a_x> = |ax|^2 + s^2, same for y; <a_x^dag a_y> = ax* ay
    // (the vacuum part of a_x^dag a_y vanishes).
    Reference r;
    r.s0 = std::norm(ax) + std::norm(ay) + 2 * s * s;
    r.s1 = std::norm(ax) - std::norm(ay);
    const std::complex<double> k = std::conj(ax) * ay;
    r.s2 = 2 * k.real();
    r.s3 = 2 * k.imag();
    return r;
}

} // namespace

TEST(CoherentInput, FoldingPreservesAmplitudes) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> any(-10.0, 10.0);
    for (int i = 0; i < 200; ++i) {
        const double a = std::abs(any(rng)), th = any(rng), px = any(rng), py = any(rng);
        const CoherentInput in = make_coherent_input(a, th, px, py);
        const std::complex<double> alpha = std::polar(a * std::cos(th), px);
        const std::complex<double> beta = std::polar(a * std::sin(th), py);
        EXPECT_NEAR(std::abs(in.alpha() - alpha), 0.0, 1e-12);
        EXPECT_NEAR(std::abs(in.beta() - beta), 0.0, 1e-12);
        EXPECT_GE(in.theta, 0.0);
        EXPECT_LE(in.theta, kPi / 2);
        EXPECT_GE(in.phi_x, 0.0);
        EXPECT_LT(in.phi_x, 2 * kPi);
        EXPECT_GE(in.phi_y, 0.0);
        EXPECT_LT(in.phi_y, 2 * kPi);
    }
}

TEST(CoherentInput, RejectsBadValues) {
    EXPECT_THROW(make_coherent_input(-1.0, 0, 0, 0), InvalidInput);
    EXPECT_THROW(make_coherent_input(std::nan(""), 0, 0, 0), InvalidInput);
    EXPECT_THROW(make_coherent_input(1.0, INFINITY, 0, 0), InvalidInput);
    EXPECT_THROW(make_coherent_input(1.0, 0, 0, -INFINITY), InvalidInput);
    try {
        make_coherent_input(-1.0, 0, 0, 0);
    } catch (const InvalidInput &e) {
        EXPECT_EQ(e.field(), "amplitude");
    }
}

TEST(InteractionTime, Validates) {
    EXPECT_THROW(InteractionTime(-0.1), InvalidInput);
    EXPECT_THROW(InteractionTime(std::nan("")), InvalidInput);
    EXPECT_NO_THROW(InteractionTime(0.0));
    EXPECT_THROW(bogoliubov(InteractionTime(kMaxInteractionTime + 1)), OverflowError);
    const auto bc = bogoliubov(InteractionTime(0.7));
    EXPECT_NEAR(bc.c * bc.c - bc.s * bc.s, 1.0, 1e-14);
}

TEST(ExpectStokes, HeadlinePoint) {
    const CoherentInput in = make_coherent_input(1.0, kPi / 4, 0.75 * kPi, 0.75 * kPi);
    const StokesMoments m = variance_stokes(in, InteractionTime(1.0));
    EXPECT_NEAR(m.mean[1], std::exp(2.0), 1e-12);
    EXPECT_NEAR(m.mean[2], 0.0, 1e-12);
    EXPECT_NEAR(m.mean[0], 0.0, 1e-12);
    // Dense matrix-exponential reference values.
    EXPECT_NEAR(m.s0, 10.15125179, 1e-8);
    EXPECT_NEAR(m.covariance(1, 1), 67.7522664512, 1e-9);
    EXPECT_NEAR(m.covariance(2, 2), 67.7522664512, 1e-9);
    EXPECT_EQ(m.covariance(0, 0), 1.0);
    EXPECT_TRUE(std::isnan(m.covariance(0, 1)));
    EXPECT_FALSE(m.full_covariance);
}

TEST(ExpectStokes, DenseReferencePoints) {
    struct Case {
        double a, th, px, py, t, s0, s1, s2, s3, v2;
    } cases[] = {
        {1.0, kPi / 3, 0.3, 0.9, 0.5, 1.13757467948, -0.5, 0.0786924967, 0.3118183126, 2.2158023412},
        {0.7, 0.4, 1.1, 2.5, 0.3, 0.86537331585, std::nan(""), std::nan(""), std::nan(""), 1.527342586},
    };
    for (const Case &c : cases) {
        const StokesMoments m =
            variance_stokes(make_coherent_input(c.a, c.th, c.px, c.py), InteractionTime(c.t));
        EXPECT_NEAR(m.s0, c.s0, 1e-9);
        if (!std::isnan(c.s1)) {
            EXPECT_NEAR(m.mean[0], c.s1, 1e-9);
            EXPECT_NEAR(m.mean[1], c.s2, 1e-9);
            EXPECT_NEAR(m.mean[2], c.s3, 1e-9);
        }
        EXPECT_NEAR(m.covariance(1, 1), c.v2, 1e-8);
    }
}

TEST(ExpectStokes, MatchesHeisenbergDisplacements) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> amp(0.0, 3.0), ang(0.0, 2 * kPi), tm(0.0, 3.0);
    for (int i = 0; i < 500; ++i) {
        const CoherentInput in = make_coherent_input(amp(rng), ang(rng), ang(rng), ang(rng));
        const double t = tm(rng);
        const Reference r = reference(in.alpha(), in.beta(), t);
        const StokesMoments m = expect_stokes(in, InteractionTime(t));
        const double scale = std::max(1.0, r.s0);
        EXPECT_NEAR(m.s0, r.s0, 1e-12 * scale);
        EXPECT_NEAR(m.mean[0], r.s1, 1e-12 * scale);
        EXPECT_NEAR(m.mean[1], r.s2, 1e-12 * scale);
        EXPECT_NEAR(m.mean[2], r.s3, 1e-12 * scale);
    }
}

TEST(ExpectStokes, S1IsConservedExactly) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> amp(0.0, 3.0), ang(0.0, 2 * kPi), tm(0.0, 5.0);
    for (int i = 0; i < 200; ++i) {
        const CoherentInput in = make_coherent_input(amp(rng), ang(rng), ang(rng), ang(rng));
        const StokesMoments m0 = variance_stokes(in, InteractionTime(0.0));
        const StokesMoments m = variance_stokes(in, InteractionTime(tm(rng)));
        EXPECT_EQ(m.mean[0], m0.mean[0]);
        EXPECT_EQ(m.covariance(0, 0), in.amplitude * in.amplitude);
    }
}

TEST(ExpectStokes, UnevolvedIsCoherent) {
    const CoherentInput in = make_coherent_input(1.3, 0.4, 0.2, 1.0);
    const StokesMoments m = variance_stokes(in, InteractionTime(0.0));
    const double a2 = 1.3 * 1.3;
    EXPECT_NEAR(m.s0, a2, 1e-12);
    EXPECT_NEAR(m.mean.norm(), a2, 1e-12);
    for (int k = 0; k < 3; ++k)
        EXPECT_NEAR(m.covariance(k, k), a2, 1e-12);
}

TEST(ExpectStokes, VacuumInput) {
    const CoherentInput in = make_coherent_input(0.0, 0.3, 0, 0);
    const double t = 0.8;
    const StokesMoments m = variance_stokes(in, InteractionTime(t));
    EXPECT_NEAR(m.s0, 2 * std::pow(std::sinh(t), 2), 1e-12);
    EXPECT_NEAR(m.mean.norm(), 0.0, 1e-12);
    EXPECT_NEAR(m.covariance(1, 1), std::pow(std::sinh(2 * t), 2), 1e-12);
}

TEST(ExpectStokes, OverflowIsTyped) {
    const CoherentInput in = make_coherent_input(1.0, 0.3, 0, 0);
    EXPECT_THROW(variance_stokes(in, InteractionTime(400.0)), OverflowError);
}

TEST(RParameter, MatchesMeanNorm) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> amp(0.1, 2.0), ang(0.0, 2 * kPi), tm(0.0, 2.0);
    for (int i = 0; i < 200; ++i) {
        const CoherentInput in = make_coherent_input(amp(rng), ang(rng), ang(rng), ang(rng));
        const InteractionTime t(tm(rng));
        const StokesMoments m = expect_stokes(in, t);
        const double a4 = std::pow(in.amplitude, 4);
        const double perp2 = m.mean[1] * m.mean[1] + m.mean[2] * m.mean[2];
        EXPECT_NEAR(a4 * r_parameter(in, t), perp2, 1e-10 * std::max(1.0, perp2));
    }
}

TEST(S1Factor, OptimumAndBoundary) {
    for (double t : {0.1, 0.5, 1.0, 2.0, 4.0}) {
        EXPECT_NEAR(s1_factor(kPi / 4, 1.5 * kPi, InteractionTime(t)), std::exp(-2 * t), 1e-12);
        const double phi1 = std::asin(std::tanh(t));
        EXPECT_NEAR(s1_factor(kPi / 4, phi1, InteractionTime(t)), 1.0, 1e-9);
    }
    // Mean Stokes vector parallel to S1 at T = 0 with theta = 0.
    EXPECT_TRUE(std::isinf(s1_factor(0.0, 0.0, InteractionTime(0.0))));
}
