#pragma once

#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "polsq/criteria.hpp"
#include "polsq/fock_oracle.hpp"
#include "polsq/stokes_core.hpp"

namespace polsq {

// ---------------------------------------------------------------------------
// Optimizer over (theta, u = phi_x + phi_y) for the S1 squeezing factor.
// ---------------------------------------------------------------------------

/// Grid step shared by both axes; gives 721 theta points over [0, pi/2].
inline constexpr double kDefaultGridResolution = std::numbers::pi / 1440.0;

struct GridPoint {
    double theta = 0.0;
    double phase_sum = 0.0;
};

struct OptimumReport {
    double time = 0.0;
    double theta_star = 0.0;
    double phase_sum_star = 0.0;
    double factor_min = 1.0;
    double degree_max = 0.0;
    double grid_resolution = kDefaultGridResolution;
    int theta_points = 0;
    int phase_points = 0;
    double grid_factor_min = 1.0;
    /// Grid cells within 1e-9 of the grid minimum, lexicographic (theta, u).
    std::vector<GridPoint> all_optima;
};

/// Grid scan of 1/sqrt(R) plus golden-section refinement on each axis.
/// Throws DegenerateOptimum for T = 0 and InvalidInput for a resolution outside
/// (0, 0.1].
OptimumReport optimize_factor(InteractionTime time,
                              double grid_resolution = kDefaultGridResolution);

// ---------------------------------------------------------------------------
// No-squeezing band at theta = pi/4: phi1 < u < phi2.
// ---------------------------------------------------------------------------

struct BoundarySample {
    double time = 0.0;
    double phi1 = 0.0;
    double phi2 = 0.0;
};

struct BoundaryCurve {
    std::vector<BoundarySample> samples;
};

/// arcsin(tanh T), evaluated as atan(sinh T).
double boundary_phase(double time);

/// Samples T = t_max * i / steps for i = 1..steps (never T = 0).
BoundaryCurve boundary_curve(double t_max, int steps);

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

enum class SweepMethod { analytic, fock, both };

SweepMethod parse_sweep_method(const std::string &text);
const char *to_string(SweepMethod method);

/// Values for each axis; the table is the Cartesian product in the order
/// amplitude, theta, phi_x, phi_y, time (last varies fastest).
struct SweepGrid {
    std::vector<double> amplitude{1.0};
    std::vector<double> theta{std::numbers::pi / 4.0};
    std::vector<double> phi_x{0.75 * std::numbers::pi};
    std::vector<double> phi_y{0.75 * std::numbers::pi};
    std::vector<double> time{1.0};

    long long size() const;

    /// "A=1;theta=0:1.5:4;T=0.5,1,2": per axis a single value, a
    /// comma-separated list or start:stop:count (inclusive linspace). Axis
    /// names: A, theta, phi_x, phi_y, T. Omitted axes keep their defaults.
    static SweepGrid parse(const std::string &text);
};

struct SweepBudget {
    long long analytic_points = 1'000'000;
    long long oracle_points = 1'000;
};

struct SweepOptions {
    Direction direction = Direction::axis(0);
    TruncationPolicy policy;
    SweepBudget budget;
};

struct SweepRecord {
    double amplitude = 0.0;
    double theta = 0.0;
    double phi_x = 0.0;
    double phi_y = 0.0;
    double time = 0.0;
    std::optional<StokesMoments> analytic;
    std::optional<StokesMoments> oracle;
    /// Assessment from the oracle moments for `fock`, else from the analytic ones.
    SqueezingAssessment assessment;
    std::optional<double> max_scaled_delta; ///< method = both
};

struct SweepTable {
    SweepMethod method = SweepMethod::analytic;
    std::vector<SweepRecord> records;
};

/// Throws BudgetExceeded before any evaluation when the grid is too large.
SweepTable sweep(const SweepGrid &grid, SweepMethod method, const SweepOptions &options = {});

/// |a - b| / max(|b|, 0.01): below 1e-6 means relative 1e-6 or absolute 1e-8.
double scaled_delta(double value, double reference);

/// Largest scaled_delta over <S0>, means and principal variances.
double max_scaled_delta(const StokesMoments &value, const StokesMoments &reference);

// ---------------------------------------------------------------------------
// Equal-split linear input: theta = pi/4, phi_x = phi_y = phase.
// ---------------------------------------------------------------------------

struct ScenarioReport {
    double amplitude = 0.0;
    double time = 0.0;
    double phase = 0.0;
    CoherentInput input;
    StokesMoments moments; ///< oracle
    double i_plus = 0.0;   ///< linear +45 degree intensity
    double i_minus = 0.0;  ///< linear -45 degree intensity
    double i_right = 0.0;  ///< right circular intensity
    double i_left = 0.0;   ///< left circular intensity
    /// Phase giving phi_x + phi_y = 3 pi / 2: S3 vanishes and S1 squeezing is maximal.
    double recommended_phase = 0.75 * std::numbers::pi;
    SqueezingAssessment s1;
};

ScenarioReport equal_split_scenario(double amplitude, InteractionTime time, double phase,
                                    const TruncationPolicy &policy = {});

// ---------------------------------------------------------------------------
// Diagnostic: random-direction scan for the best squeezing direction.
// ---------------------------------------------------------------------------

struct DirectionScan {
    Eigen::Vector3d best_direction = Eigen::Vector3d::UnitX();
    double best_factor = std::numeric_limits<double>::infinity();
    double s1_factor = std::numeric_limits<double>::infinity();
    int samples = 0;
    std::uint64_t seed = 0;
};

/// Needs moments with a full covariance. Deterministic for a fixed seed.
DirectionScan scan_directions(const StokesMoments &moments, int samples, std::uint64_t seed);

} // namespace polsq
