#include "polsq/report.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "polsq/error.hpp"

namespace polsq {

using nlohmann::json;

namespace {

json vec_json(const Eigen::Vector3d &v) { return json::array({v[0], v[1], v[2]}); }

json optional_json(const std::optional<double> &v) { return v ? json(*v) : json(nullptr); }

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

} // namespace

json to_json(const CoherentInput &input) {
    const auto a = input.alpha();
    const auto b = input.beta();
    return {{"amplitude", input.amplitude},
            {"theta", input.theta},
            {"phi_x", input.phi_x},
            {"phi_y", input.phi_y},
            {"alpha", json::array({a.real(), a.imag()})},
            {"beta", json::array({b.real(), b.imag()})}};
}

json to_json(const StokesMoments &m) {
    json cov = json::array();
    for (int j = 0; j < 3; ++j) {
        json row = json::array();
        for (int k = 0; k < 3; ++k)
            row.push_back(number_or_null(m.covariance(j, k)));
        cov.push_back(row);
    }
    return {{"source", m.source == MomentSource::analytic ? "analytic" : "fock_oracle"},
            {"S0", m.s0},
            {"mean", vec_json(m.mean)},
            {"covariance", cov},
            {"full_covariance", m.full_covariance}};
}

json to_json(const SqueezingAssessment &a) {
    return {{"direction", vec_json(a.direction.vector())},
            {"perpendicular", vec_json(a.perpendicular)},
            {"perpendicular_choice", "normalized component of <S> orthogonal to direction"},
            {"variance_along", a.variance_along},
            {"rhs_luis", a.rhs_luis},
            {"factor", optional_json(a.factor)},
            {"degree", optional_json(a.degree)},
            {"db", optional_json(a.db)},
            {"verdicts",
             {{"chirkin", a.verdicts.chirkin},
              {"heersink", a.verdicts.heersink ? json(*a.verdicts.heersink) : json(nullptr)},
              {"luis_pair", a.verdicts.luis_pair},
              {"luis_max", a.verdicts.luis_max}}}};
}

json to_json(const OracleDiagnostics &d) {
    return {{"discarded_probability", d.discarded_probability},
            {"top_leakage", d.top_leakage},
            {"cutoff", d.cutoff},
            {"enlargements", d.enlargements},
            {"sector_count", d.sector_count},
            {"doubling_delta", d.doubling_delta},
            {"doubling_cutoff", d.doubling_cutoff}};
}

json to_json(const OptimumReport &r) {
    json optima = json::array();
    for (const GridPoint &p : r.all_optima)
        optima.push_back(json::array({p.theta, p.phase_sum}));
    return {{"schema", "polsq.optimize/1"},
            {"T", r.time},
            {"theta_star", r.theta_star},
            {"phase_sum_star", r.phase_sum_star},
            {"factor_min", r.factor_min},
            {"degree_max", r.degree_max},
            {"grid_resolution", r.grid_resolution},
            {"theta_points", r.theta_points},
            {"phase_points", r.phase_points},
            {"grid_factor_min", r.grid_factor_min},
            {"all_optima", optima}};
}

json to_json(const ScenarioReport &r) {
    return {{"schema", "polsq.scenario/1"},
            {"amplitude", r.amplitude},
            {"T", r.time},
            {"phase", r.phase},
            {"input", to_json(r.input)},
            {"moments", to_json(r.moments)},
            {"intensities",
             {{"I_plus", r.i_plus},
              {"I_minus", r.i_minus},
              {"I_R", r.i_right},
              {"I_L", r.i_left}}},
            {"stokes_check",
             {{"S2_from_intensities", r.i_plus - r.i_minus},
              {"S3_from_intensities", r.i_right - r.i_left}}},
            {"recommended_phase", r.recommended_phase},
            {"assessment_s1", to_json(r.s1)}};
}

json to_json(const DirectionScan &s) {
    return {{"samples", s.samples},
            {"seed", s.seed},
            {"best_direction", vec_json(s.best_direction)},
            {"best_factor", number_or_null(s.best_factor)},
            {"s1_factor", number_or_null(s.s1_factor)}};
}

json to_json(const SweepTable &table) {
    json records = json::array();
    for (const SweepRecord &r : table.records) {
        json rec = {{"A", r.amplitude},     {"theta", r.theta}, {"phi_x", r.phi_x},
                    {"phi_y", r.phi_y},     {"T", r.time},
                    {"assessment", to_json(r.assessment)}};
        if (r.analytic)
            rec["analytic"] = to_json(*r.analytic);
        if (r.oracle)
            rec["fock"] = to_json(*r.oracle);
        if (r.max_scaled_delta)
            rec["max_scaled_delta"] = *r.max_scaled_delta;
        records.push_back(std::move(rec));
    }
    return {{"schema", "polsq.sweep/1"}, {"method", to_string(table.method)}, {"records", records}};
}

json evaluate_report(const EvaluateRequest &req) {
    const CoherentInput input = make_coherent_input(req.amplitude, req.theta, req.phi_x, req.phi_y);
    const InteractionTime time(req.time);

    json report = {{"schema", "polsq.evaluate/1"},
                   {"method", to_string(req.method)},
                   {"input",
                    {{"amplitude", req.amplitude},
                     {"theta", req.theta},
                     {"phi_x", req.phi_x},
                     {"phi_y", req.phi_y},
                     {"T", req.time},
                     {"canonical", to_json(input)}}},
                   {"direction", vec_json(req.direction.vector())}};

    std::optional<StokesMoments> analytic;
    std::optional<StokesMoments> oracle;
    if (req.method != SweepMethod::fock) {
        analytic = variance_stokes(input, time);
        report["moments"]["analytic"] = to_json(*analytic);
        report["R"] = r_parameter(input, time);
        try {
            report["assessment"]["analytic"] = to_json(assess(*analytic, req.direction));
        } catch (const UnsupportedDirection &e) {
            if (req.method == SweepMethod::analytic)
                throw;
            report["assessment"]["analytic"] = {{"unsupported", e.what()}};
        }
    }
    if (req.method != SweepMethod::analytic) {
        OracleDiagnostics diag;
        oracle = oracle_moments(input, time, req.policy, &diag);
        report["moments"]["fock"] = to_json(*oracle);
        report["assessment"]["fock"] = to_json(assess(*oracle, req.direction));
        report["oracle"] = to_json(diag);
    }
    if (analytic && oracle) {
        json deltas = {{"S0", scaled_delta(analytic->s0, oracle->s0)}};
        const char *mean_names[] = {"S1", "S2", "S3"};
        const char *var_names[] = {"V1", "V2", "V3"};
        for (int j = 0; j < 3; ++j) {
            deltas[mean_names[j]] = scaled_delta(analytic->mean[j], oracle->mean[j]);
            deltas[var_names[j]] =
                scaled_delta(analytic->covariance(j, j), oracle->covariance(j, j));
        }
        deltas["max_scaled"] = max_scaled_delta(*analytic, *oracle);
        report["deltas"] = deltas;
    }
    return report;
}

std::string format_csv_number(double value) {
    if (std::isnan(value))
        return {};
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

void write_sweep_csv(std::ostream &out, const SweepTable &table) {
    const bool both = table.method == SweepMethod::both;
    out << kSweepCsvHeader << (both ? ",max_scaled_delta" : "") << '\n';
    for (const SweepRecord &r : table.records) {
        const StokesMoments &m = table.method == SweepMethod::fock ? *r.oracle : *r.analytic;
        const double nan = std::numeric_limits<double>::quiet_NaN();
        const double cells[] = {r.amplitude,
                                r.theta,
                                r.phi_x,
                                r.phi_y,
                                r.time,
                                m.s0,
                                m.mean[0],
                                m.mean[1],
                                m.mean[2],
                                m.covariance(0, 0),
                                m.covariance(1, 1),
                                m.covariance(2, 2),
                                r.assessment.factor.value_or(nan),
                                r.assessment.degree.value_or(nan)};
        for (double c : cells)
            out << format_csv_number(c) << ',';
        out << (r.assessment.verdicts.luis_max ? "true" : "false");
        if (both)
            out << ',' << format_csv_number(r.max_scaled_delta.value_or(nan));
        out << '\n';
    }
}

void write_boundary_csv(std::ostream &out, const BoundaryCurve &curve) {
    out << kBoundaryCsvHeader << '\n';
    for (const BoundarySample &s : curve.samples)
        out << format_csv_number(s.time) << ',' << format_csv_number(s.phi1) << ','
            << format_csv_number(s.phi2) << '\n';
}

} // namespace polsq
