#include "polsq/validation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include "polsq/criteria.hpp"
#include "polsq/error.hpp"
#include "polsq/explorer.hpp"
#include "polsq/kernels.hpp"

namespace polsq {

namespace {

constexpr double kPi = std::numbers::pi;

struct Sample {
    double amplitude, theta, phi_x, phi_y, time;
};

std::vector<Sample> random_samples(int count, std::uint64_t seed, double a_max, double t_max) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> amp(0.05, a_max);
    std::uniform_real_distribution<double> theta(0.0, 0.5 * kPi);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
    std::uniform_real_distribution<double> time(0.0, t_max);
    std::vector<Sample> out;
    for (int i = 0; i < count; ++i) {
        Sample s{amp(rng), theta(rng), phase(rng), phase(rng), time(rng)};
        out.push_back(s);
    }
    return out;
}

// Uncorrected variants kept only to demonstrate that they disagree with the
// oracle: sin^2(theta) in place of sin(2 theta) in the cosh 2T terms of <S2>,
// and an extra (cosh^2 T + sinh^2 T) factor on the last variance term.
double uncorrected_mean_s2(const CoherentInput &in, double t) {
    const double a2 = in.amplitude * in.amplitude;
    const double s2 = std::pow(std::sin(in.theta), 2);
    const double c2 = std::pow(std::cos(in.theta), 2);
    return a2 * (std::cosh(2 * t) * s2 * std::cos(in.phi_x - in.phi_y) -
                 std::sinh(2 * t) * (c2 * std::sin(2 * in.phi_x) + s2 * std::sin(2 * in.phi_y)));
}

double uncorrected_variance(const CoherentInput &in, double t) {
    const double a2 = in.amplitude * in.amplitude;
    const double c = std::cosh(t);
    const double s = std::sinh(t);
    return a2 * std::pow(std::cosh(2 * t), 2) + std::pow(std::sinh(2 * t), 2) * (a2 + 1) -
           a2 * std::sinh(4 * t) * (c * c + s * s) * std::sin(2 * in.theta) *
               std::sin(in.phase_sum());
}

CheckResult timed(const std::string &name, const std::function<bool(std::ostringstream &)> &body,
                  bool informational = false) {
    CheckResult r;
    r.name = name;
    r.informational = informational;
    std::ostringstream detail;
    detail.precision(10);
    const auto t0 = std::chrono::steady_clock::now();
    try {
        r.passed = body(detail);
    } catch (const std::exception &e) {
        detail << "exception: " << e.what();
        r.passed = false;
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.detail = detail.str();
    if (informational)
        r.passed = true;
    return r;
}

} // namespace

bool within(double value, double reference, double rel, double abs) {
    return std::abs(value - reference) <= std::max(rel * std::abs(reference), abs);
}

std::vector<CheckResult> run_validation(const ValidationOptions &opt) {
    const double rel = opt.relative_tolerance;
    const double abs = opt.absolute_tolerance;
    const Direction s1_axis = Direction::axis(0);
    std::vector<CheckResult> results;

    results.push_back(timed("headline-degree", [&](std::ostringstream &d) {
        bool ok = true;
        const struct {
            double t;
            double printed;
        } cases[] = {{1.0, 0.8646647}, {2.0, 0.9816844}};
        for (const auto &c : cases) {
            const InteractionTime t(c.t);
            const CoherentInput in = make_coherent_input(1.0, kPi / 4, 0.75 * kPi, 0.75 * kPi);
            const auto t0 = std::chrono::steady_clock::now();
            const double analytic = *assess(variance_stokes(in, t), s1_axis).degree;
            const double analytic_ms =
                std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
            const auto t1 = std::chrono::steady_clock::now();
            const double fock = *assess(oracle_moments(in, t, opt.policy), s1_axis).degree;
            const double oracle_s =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t1).count();
            const double exact = 1.0 - std::exp(-2.0 * c.t);
            ok = ok && std::abs(analytic - exact) <= 1e-12 &&
                 std::abs(analytic - c.printed) <= 5e-8 && within(fock, exact, rel, 0.0) &&
                 analytic_ms < 1.0 && oracle_s < 60.0;
            d << "T=" << c.t << " analytic=" << analytic << " oracle=" << fock << " ("
              << analytic_ms << " ms / " << oracle_s << " s); ";
        }
        return ok;
    }));

    results.push_back(timed("optimum-location", [&](std::ostringstream &d) {
        bool ok = true;
        for (double t : {0.25, 0.5, 1.0, 2.0}) {
            const OptimumReport r = optimize_factor(InteractionTime(t));
            ok = ok && std::abs(r.factor_min - std::exp(-2 * t)) < 1e-6 &&
                 std::abs(r.theta_star - kPi / 4) <= r.grid_resolution &&
                 std::abs(r.phase_sum_star - 1.5 * kPi) <= r.grid_resolution;
            d << "T=" << t << " factor=" << r.factor_min << " at (" << r.theta_star << ", "
              << r.phase_sum_star << "); ";
        }
        return ok;
    }));

    const auto sample = random_samples(opt.random_points, opt.seed, 2.0, 1.5);
    std::vector<StokesMoments> sample_oracle;
    results.push_back(timed("formula-arbitration", [&](std::ostringstream &d) {
        double worst = 0.0;
        int failures = 0;
        for (const Sample &s : sample) {
            const CoherentInput in = make_coherent_input(s.amplitude, s.theta, s.phi_x, s.phi_y);
            const InteractionTime t(s.time);
            const StokesMoments a = variance_stokes(in, t);
            const StokesMoments o = oracle_moments(in, t, opt.policy);
            sample_oracle.push_back(o);
            bool point_ok = within(a.s0, o.s0, rel, abs);
            for (int j = 0; j < 3; ++j)
                point_ok = point_ok && within(a.mean[j], o.mean[j], rel, abs) &&
                           within(a.covariance(j, j), o.covariance(j, j), rel, abs);
            worst = std::max(worst, max_scaled_delta(a, o));
            failures += point_ok ? 0 : 1;
        }
        // Documented disagreement point for the uncorrected variants.
        const CoherentInput in = make_coherent_input(1.0, kPi / 4, 0.75 * kPi, 0.75 * kPi);
        const StokesMoments o = oracle_moments(in, InteractionTime(1.0), opt.policy);
        const double lit_s2 = uncorrected_mean_s2(in, 1.0);
        const double lit_v = uncorrected_variance(in, 1.0);
        const bool literal_disagrees =
            !within(lit_s2, o.mean[1], rel, abs) && !within(lit_v, o.covariance(1, 1), rel, abs);
        d << sample.size() << " points, worst scaled delta " << worst << ", failures "
          << failures << "; uncorrected <S2>=" << lit_s2 << " V2=" << lit_v << " vs oracle "
          << o.mean[1] << ", " << o.covariance(1, 1);
        return failures == 0 && sample.size() >= 100 && literal_disagrees;
    }));

    results.push_back(timed("conservation", [&](std::ostringstream &d) {
        double worst_mean = 0.0;
        double worst_var = 0.0;
        double worst_norm = 0.0;
        for (double a : {0.5, 1.0, 2.0}) {
            for (double t : {0.5, 1.0, 2.0}) {
                const CoherentInput in = make_coherent_input(a, 0.6, 0.4, 1.9);
                const FockState before = decompose_input(in, opt.policy);
                const FockState after = evolve(before, InteractionTime(t), opt.policy);
                const StokesMoments mb = measure_moments(before);
                const StokesMoments ma = measure_moments(after);
                worst_mean = std::max(worst_mean, std::abs(ma.mean[0] - mb.mean[0]));
                worst_var = std::max(worst_var, std::abs(ma.covariance(0, 0) - mb.covariance(0, 0)));
                worst_norm = std::max(worst_norm, std::abs(after.norm_squared() - before.norm_squared()));
            }
        }
        d << "max |d<S1>|=" << worst_mean << " |dV1|=" << worst_var << " |dnorm|=" << worst_norm;
        return worst_mean < 1e-9 && worst_var < 1e-9 && worst_norm <= opt.policy.epsilon_trunc;
    }));

    results.push_back(timed("boundary", [&](std::ostringstream &d) {
        std::mt19937_64 rng(opt.seed + 1);
        std::uniform_real_distribution<double> time(0.0, 3.0);
        bool ok = true;
        double worst_analytic = 0.0;
        double worst_oracle = 0.0;
        std::vector<double> times;
        for (int i = 0; i < opt.boundary_points; ++i) {
            const double t = time(rng);
            times.push_back(t == 0.0 ? 3.0 : t);
        }
        // The oracle is run at the smallest sampled times: near T = 3 the
        // pair-creation tail needs ladders far beyond max_cutoff.
        std::vector<double> oracle_times(times);
        std::sort(oracle_times.begin(), oracle_times.end());
        oracle_times.resize(std::min<std::size_t>(oracle_times.size(),
                                                  static_cast<std::size_t>(opt.boundary_oracle_points)));
        for (double t : times) {
            const InteractionTime tt(t);
            const double phi1 = boundary_phase(t);
            const double f = s1_factor(kPi / 4, phi1, tt);
            worst_analytic = std::max(worst_analytic, std::abs(f - 1.0));
            ok = ok && std::abs(f - 1.0) <= 1e-9 && s1_factor(kPi / 4, phi1 - 0.01, tt) < 1.0 &&
                 s1_factor(kPi / 4, phi1 + 0.01, tt) > 1.0;
            if (std::find(oracle_times.begin(), oracle_times.end(), t) != oracle_times.end()) {
                const CoherentInput in = make_coherent_input(1.0, kPi / 4, 0.5 * phi1, 0.5 * phi1);
                const double fo = *assess(oracle_moments(in, tt, opt.policy), s1_axis).factor;
                worst_oracle = std::max(worst_oracle, std::abs(fo - 1.0));
                ok = ok && std::abs(fo - 1.0) <= 1e-6;
            }
        }
        d << "max |factor-1| analytic " << worst_analytic << ", oracle " << worst_oracle;
        return ok;
    }));

    results.push_back(timed("operator-algebra", [&](std::ostringstream &d) {
        const SelfCheckReport r = operator_selfcheck(16);
        d << "cutoff 16 interior residual " << r.max_residual;
        return r.max_residual < 1e-12;
    }));

    results.push_back(timed("uncertainty-relations", [&](std::ostringstream &d) {
        double worst = std::numeric_limits<double>::infinity();
        for (const StokesMoments &m : sample_oracle)
            worst = std::min(worst, uncertainty_products(m).min_relative_margin());
        d << sample_oracle.size() << " states, min relative margin " << worst;
        return !sample_oracle.empty() && worst >= -1e-6;
    }));

    results.push_back(timed("scenario-preset", [&](std::ostringstream &d) {
        const ScenarioReport r =
            equal_split_scenario(1.0, InteractionTime(1.0), 0.75 * kPi, opt.policy);
        const double degree = *r.s1.degree;
        d << "S3=" << r.moments.mean[2] << " I+ + I- - S0=" << (r.i_plus + r.i_minus - r.moments.s0)
          << " degree=" << degree;
        return std::abs(r.moments.mean[2]) < 1e-6 &&
               std::abs(r.i_plus + r.i_minus - r.moments.s0) <= 1e-9 &&
               std::abs(r.i_right + r.i_left - r.moments.s0) <= 1e-9 &&
               within(degree, 1.0 - std::exp(-2.0), rel, 0.0);
    }));

    results.push_back(timed("db-roundtrip", [&](std::ostringstream &d) {
        const double f = factor_of_db(-3.4);
        const double back = db_of_factor(f);
        d << "-3.4 dB -> " << f << " -> " << back << " dB";
        return std::abs(f - 0.4570882) < 1e-7 && std::abs(back + 3.4) < 1e-9 &&
               std::abs(db_of_factor(0.4570882) + 3.4) < 1e-6;
    }));

    results.push_back(timed("kernel-equivalence", [&](std::ostringstream &d) {
        const kernels::KernelTable *simd = kernels::avx2_table();
        d << "active " << kernels::isa_name(kernels::active().isa);
        if (simd == nullptr) {
            d << "; no SIMD table on this CPU";
            return true;
        }
        const auto &ref = kernels::scalar_table();
        std::mt19937_64 rng(opt.seed + 2);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        const std::size_t n = 1031;
        std::vector<double> col(n), sin_u(n), out_a(n), out_b(n);
        std::vector<kernels::cplx> x(n), y(n), ya(n), yb(n);
        for (std::size_t i = 0; i < n; ++i) {
            col[i] = u(rng);
            sin_u[i] = u(rng);
            x[i] = {u(rng), u(rng)};
            y[i] = {u(rng), u(rng)};
        }
        const kernels::FactorRow row{3.7621956910836314, 3.0, 0.04};
        ref.s1_factor_row(row, sin_u.data(), out_a.data(), n);
        simd->s1_factor_row(row, sin_u.data(), out_b.data(), n);
        bool ok = out_a == out_b;
        const auto c_ref = ref.cdot(x.data(), y.data(), n);
        const auto c_simd = simd->cdot(x.data(), y.data(), n);
        const auto r_ref = ref.rdot(col.data(), x.data(), n);
        const auto r_simd = simd->rdot(col.data(), x.data(), n);
        ok = ok && std::abs(c_ref - c_simd) <= 1e-12 * n && std::abs(r_ref - r_simd) <= 1e-12 * n;
        ya = y;
        yb = y;
        ref.raxpy({0.3, -0.7}, col.data(), ya.data(), n);
        simd->raxpy({0.3, -0.7}, col.data(), yb.data(), n);
        for (std::size_t i = 0; i < n; ++i)
            ok = ok && std::abs(ya[i] - yb[i]) <= 1e-15;
        return ok;
    }));

    results.push_back(timed(
        "direction-scan",
        [&](std::ostringstream &d) {
            const CoherentInput in = make_coherent_input(1.0, 1.0, 0.3, 2.2);
            const StokesMoments m = oracle_moments(in, InteractionTime(0.7), opt.policy);
            const DirectionScan scan = scan_directions(m, opt.direction_samples, opt.seed);
            d << "best sampled factor " << scan.best_factor << " along (" << scan.best_direction[0]
              << ", " << scan.best_direction[1] << ", " << scan.best_direction[2]
              << "); S1 factor " << scan.s1_factor;
            return true;
        },
        true));

    return results;
}

} // namespace polsq
