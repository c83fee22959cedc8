#include "polsq/explorer.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "polsq/error.hpp"
#include "polsq/kernels.hpp"

namespace polsq {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kOptimaTolerance = 1e-9;

template <class F>
double golden_section(F &&f, double lo, double hi, double tol = 1e-12) {
    const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo;
    double b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > tol) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

} // namespace

OptimumReport optimize_factor(InteractionTime time, double grid_resolution) {
    if (time.value() == 0.0)
        throw DegenerateOptimum("no squeezing at T = 0: the S1 factor is >= 1 everywhere");
    if (!(grid_resolution > 0.0 && grid_resolution <= 0.1))
        throw InvalidInput("grid_resolution", "must lie in (0, 0.1]");

    const auto [c, s] = bogoliubov(time);
    const double ch2 = c * c + s * s;
    const double sh2 = 2.0 * c * s;

    const int n_theta = static_cast<int>(std::ceil(0.5 * kPi / grid_resolution - 1e-9)) + 1;
    const int n_u = static_cast<int>(std::ceil(kTwoPi / grid_resolution - 1e-9));
    const double step_theta = 0.5 * kPi / (n_theta - 1);
    const double step_u = kTwoPi / n_u;

    std::vector<double> sin_u(static_cast<std::size_t>(n_u));
    for (int j = 0; j < n_u; ++j)
        sin_u[static_cast<std::size_t>(j)] = std::sin(j * step_u);
    std::vector<double> row(sin_u.size());

    auto fill_row = [&](int i) {
        const double theta = i * step_theta;
        const double cos_2t = std::cos(2.0 * theta);
        kernels::s1_factor_row({ch2, sh2 * std::sin(2.0 * theta), cos_2t * cos_2t}, sin_u, row);
    };

    double best = std::numeric_limits<double>::infinity();
    int best_i = 0;
    int best_j = 0;
    for (int i = 0; i < n_theta; ++i) {
        fill_row(i);
        const auto it = std::min_element(row.begin(), row.end());
        if (*it < best) {
            best = *it;
            best_i = i;
            best_j = static_cast<int>(it - row.begin());
        }
    }

    OptimumReport report;
    report.time = time.value();
    report.grid_resolution = grid_resolution;
    report.theta_points = n_theta;
    report.phase_points = n_u;
    report.grid_factor_min = best;
    for (int i = 0; i < n_theta; ++i) {
        fill_row(i);
        for (int j = 0; j < n_u; ++j)
            if (row[static_cast<std::size_t>(j)] - best <= kOptimaTolerance)
                report.all_optima.push_back({i * step_theta, j * step_u});
    }

    // Coordinate-wise golden-section refinement around the best cell.
    double theta = best_i * step_theta;
    double u = best_j * step_u;
    for (int round = 0; round < 8; ++round) {
        const double prev_theta = theta;
        const double prev_u = u;
        theta = golden_section([&](double x) { return s1_factor(x, u, time); },
                               std::max(0.0, theta - step_theta),
                               std::min(0.5 * kPi, theta + step_theta));
        u = golden_section([&](double x) { return s1_factor(theta, x, time); }, u - step_u,
                           u + step_u);
        if (std::abs(theta - prev_theta) < 1e-13 && std::abs(u - prev_u) < 1e-13)
            break;
    }
    const double refined = s1_factor(theta, u, time);
    if (refined <= best) {
        report.theta_star = theta;
        report.phase_sum_star = wrap_two_pi(u);
        report.factor_min = refined;
    } else {
        report.theta_star = best_i * step_theta;
        report.phase_sum_star = best_j * step_u;
        report.factor_min = best;
    }
    report.degree_max = 1.0 - report.factor_min;
    return report;
}

double boundary_phase(double time) { return std::atan(std::sinh(time)); }

BoundaryCurve boundary_curve(double t_max, int steps) {
    if (!std::isfinite(t_max) || !(t_max > 0.0))
        throw InvalidInput("time_max", "must be finite and > 0");
    if (steps < 2)
        throw InvalidInput("steps", "must be >= 2");
    BoundaryCurve curve;
    curve.samples.reserve(static_cast<std::size_t>(steps));
    for (int i = 1; i <= steps; ++i) {
        const double t = t_max * i / steps;
        const double phi1 = boundary_phase(t);
        curve.samples.push_back({t, phi1, kPi - phi1});
    }
    return curve;
}

SweepMethod parse_sweep_method(const std::string &text) {
    if (text == "analytic")
        return SweepMethod::analytic;
    if (text == "fock")
        return SweepMethod::fock;
    if (text == "both")
        return SweepMethod::both;
    throw InvalidInput("method", "expected analytic, fock or both, got '" + text + "'");
}

const char *to_string(SweepMethod method) {
    switch (method) {
    case SweepMethod::analytic:
        return "analytic";
    case SweepMethod::fock:
        return "fock";
    case SweepMethod::both:
        return "both";
    }
    return "unknown";
}

long long SweepGrid::size() const {
    return static_cast<long long>(amplitude.size()) * static_cast<long long>(theta.size()) *
           static_cast<long long>(phi_x.size()) * static_cast<long long>(phi_y.size()) *
           static_cast<long long>(time.size());
}

namespace {

double parse_number(const std::string &text, const std::string &axis) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception &) {
        throw InvalidInput("grid", "axis " + axis + ": cannot parse '" + text + "'");
    }
    if (used != text.size() || !std::isfinite(v))
        throw InvalidInput("grid", "axis " + axis + ": cannot parse '" + text + "'");
    return v;
}

std::vector<std::string> split(const std::string &text, char sep) {
    std::vector<std::string> parts;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, sep))
        parts.push_back(item);
    return parts;
}

std::string trim(const std::string &s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

std::vector<double> parse_axis(const std::string &spec, const std::string &axis) {
    if (spec.find(':') != std::string::npos) {
        const auto parts = split(spec, ':');
        if (parts.size() != 3)
            throw InvalidInput("grid", "axis " + axis + ": expected start:stop:count");
        const double start = parse_number(trim(parts[0]), axis);
        const double stop = parse_number(trim(parts[1]), axis);
        const double count_d = parse_number(trim(parts[2]), axis);
        if (count_d < 1.0 || count_d != std::floor(count_d) || count_d > 1e9)
            throw InvalidInput("grid", "axis " + axis + ": count must be a positive integer");
        const auto count = static_cast<long long>(count_d);
        std::vector<double> values(static_cast<std::size_t>(count));
        for (long long k = 0; k < count; ++k)
            values[static_cast<std::size_t>(k)] =
                count == 1 ? start : start + (stop - start) * static_cast<double>(k) / (count - 1);
        return values;
    }
    std::vector<double> values;
    for (const auto &item : split(spec, ','))
        values.push_back(parse_number(trim(item), axis));
    if (values.empty())
        throw InvalidInput("grid", "axis " + axis + " has no values");
    return values;
}

} // namespace

SweepGrid SweepGrid::parse(const std::string &text) {
    SweepGrid grid;
    for (const auto &raw : split(text, ';')) {
        const std::string entry = trim(raw);
        if (entry.empty())
            continue;
        const auto eq = entry.find('=');
        if (eq == std::string::npos)
            throw InvalidInput("grid", "expected axis=values, got '" + entry + "'");
        const std::string name = trim(entry.substr(0, eq));
        const std::vector<double> values = parse_axis(trim(entry.substr(eq + 1)), name);
        if (name == "A" || name == "amplitude")
            grid.amplitude = values;
        else if (name == "theta")
            grid.theta = values;
        else if (name == "phi_x")
            grid.phi_x = values;
        else if (name == "phi_y")
            grid.phi_y = values;
        else if (name == "T" || name == "time")
            grid.time = values;
        else
            throw InvalidInput("grid", "unknown axis '" + name + "'");
    }
    return grid;
}

double scaled_delta(double value, double reference) {
    return std::abs(value - reference) / std::max(std::abs(reference), 0.01);
}

double max_scaled_delta(const StokesMoments &value, const StokesMoments &reference) {
    double d = scaled_delta(value.s0, reference.s0);
    for (int j = 0; j < 3; ++j) {
        d = std::max(d, scaled_delta(value.mean[j], reference.mean[j]));
        d = std::max(d, scaled_delta(value.covariance(j, j), reference.covariance(j, j)));
    }
    return d;
}

SweepTable sweep(const SweepGrid &grid, SweepMethod method, const SweepOptions &options) {
    const long long count = grid.size();
    const bool uses_oracle = method != SweepMethod::analytic;
    const long long limit =
        uses_oracle ? options.budget.oracle_points : options.budget.analytic_points;
    if (count > limit)
        throw BudgetExceeded("sweep grid has " + std::to_string(count) +
                                 " points, budget for method " + to_string(method) + " is " +
                                 std::to_string(limit),
                             count);

    SweepTable table;
    table.method = method;
    table.records.reserve(static_cast<std::size_t>(count));
    for (double a : grid.amplitude)
        for (double th : grid.theta)
            for (double px : grid.phi_x)
                for (double py : grid.phi_y)
                    for (double t : grid.time) {
                        SweepRecord rec;
                        rec.amplitude = a;
                        rec.theta = th;
                        rec.phi_x = px;
                        rec.phi_y = py;
                        rec.time = t;
                        const CoherentInput input = make_coherent_input(a, th, px, py);
                        const InteractionTime time(t);
                        if (method != SweepMethod::fock)
                            rec.analytic = variance_stokes(input, time);
                        if (uses_oracle)
                            rec.oracle = oracle_moments(input, time, options.policy);
                        rec.assessment = assess(method == SweepMethod::fock ? *rec.oracle
                                                                            : *rec.analytic,
                                                options.direction);
                        if (method == SweepMethod::both)
                            rec.max_scaled_delta = max_scaled_delta(*rec.analytic, *rec.oracle);
                        table.records.push_back(std::move(rec));
                    }
    return table;
}

ScenarioReport equal_split_scenario(double amplitude, InteractionTime time, double phase,
                                    const TruncationPolicy &policy) {
    ScenarioReport r;
    r.amplitude = amplitude;
    r.time = time.value();
    r.phase = phase;
    r.input = make_coherent_input(amplitude, 0.25 * kPi, phase, phase);
    r.moments = oracle_moments(r.input, time, policy);
    r.i_plus = 0.5 * (r.moments.s0 + r.moments.mean[1]);
    r.i_minus = 0.5 * (r.moments.s0 - r.moments.mean[1]);
    r.i_right = 0.5 * (r.moments.s0 + r.moments.mean[2]);
    r.i_left = 0.5 * (r.moments.s0 - r.moments.mean[2]);
    r.s1 = assess(r.moments, Direction::axis(0));
    return r;
}

DirectionScan scan_directions(const StokesMoments &moments, int samples, std::uint64_t seed) {
    if (!moments.full_covariance)
        throw UnsupportedDirection("direction scan needs full covariance (oracle moments)");
    if (samples < 1)
        throw InvalidInput("samples", "must be >= 1");
    DirectionScan scan;
    scan.samples = samples;
    scan.seed = seed;
    const SqueezingAssessment s1 = assess(moments, Direction::axis(0));
    scan.s1_factor = s1.factor.value_or(std::numeric_limits<double>::infinity());

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int k = 0; k < samples; ++k) {
        Eigen::Vector3d v(gauss(rng), gauss(rng), gauss(rng));
        if (v.norm() < 1e-8)
            continue;
        const Direction n = Direction::normalized(v);
        const SqueezingAssessment a = assess(moments, n);
        if (a.factor && *a.factor < scan.best_factor) {
            scan.best_factor = *a.factor;
            scan.best_direction = n.vector();
        }
    }
    return scan;
}

} // namespace polsq
