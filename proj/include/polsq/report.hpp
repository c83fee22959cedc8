#pragma once

// JSON and CSV serialization for the command-line surface. JSON numbers use
// the shortest round-trip representation; CSV numbers use 12 significant
// digits. Field names and CSV headers are versioned through the "schema"
// member of each JSON document.

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "polsq/criteria.hpp"
#include "polsq/explorer.hpp"
#include "polsq/fock_oracle.hpp"

namespace polsq {

inline constexpr const char *kSweepCsvHeader =
    "A,theta,phi_x,phi_y,T,S0,S1,S2,S3,V1,V2,V3,factor,degree,luis_max";
inline constexpr const char *kBoundaryCsvHeader = "T,phi1,phi2";

nlohmann::json to_json(const CoherentInput &input);
nlohmann::json to_json(const StokesMoments &moments);
nlohmann::json to_json(const SqueezingAssessment &assessment);
nlohmann::json to_json(const OracleDiagnostics &diagnostics);
nlohmann::json to_json(const OptimumReport &report);
nlohmann::json to_json(const ScenarioReport &report);
nlohmann::json to_json(const DirectionScan &scan);
nlohmann::json to_json(const SweepTable &table);

struct EvaluateRequest {
    double amplitude = 1.0;
    double theta = 0.0;
    double phi_x = 0.0;
    double phi_y = 0.0;
    double time = 0.0;
    SweepMethod method = SweepMethod::analytic;
    Direction direction = Direction::axis(0);
    TruncationPolicy policy;
};

/// Moments for the requested method(s), assessments along the direction and,
/// for method = both, per-quantity scaled deltas (analytic vs oracle).
nlohmann::json evaluate_report(const EvaluateRequest &request);

/// "%.12g"; empty string for NaN.
std::string format_csv_number(double value);

/// kSweepCsvHeader (plus ",max_scaled_delta" for method = both), one row
/// per record.
void write_sweep_csv(std::ostream &out, const SweepTable &table);
void write_boundary_csv(std::ostream &out, const BoundaryCurve &curve);

} // namespace polsq
