#pragma once

#include <array>
#include <optional>

#include <Eigen/Dense>

#include "polsq/stokes_core.hpp"

namespace polsq {

/// Unit vector on the Poincare sphere; components index (S1, S2, S3).
class Direction {
  public:
    /// Throws InvalidInput unless | |n| - 1 | <= 1e-12.
    explicit Direction(const Eigen::Vector3d &n);

    /// Normalizes `v`; throws InvalidInput for a zero or non-finite vector.
    static Direction normalized(const Eigen::Vector3d &v);
    static Direction axis(int index); // 0, 1, 2 -> S1, S2, S3

    const Eigen::Vector3d &vector() const noexcept { return n_; }
    /// Index k when n = +/- e_k exactly.
    std::optional<int> principal_axis() const;

  private:
    Eigen::Vector3d n_;
};

/// Verdicts of the four squeezing criteria for S_n.
struct Verdicts {
    bool chirkin = false;             ///< V_n < <S0>
    std::optional<bool> heersink;     ///< V_n < |<S_perp>| < V_k; empty if V_k unavailable
    bool luis_pair = false;           ///< V_n < |<S_perp>| for the chosen perpendicular
    bool luis_max = false;            ///< V_n < max over perpendiculars of |<S_perp>|
};

struct SqueezingAssessment {
    Direction direction = Direction::axis(0);
    /// Perpendicular used by the pair criteria: the normalized component of
    /// <S> orthogonal to n (the maximizing choice). Zero when undefined.
    Eigen::Vector3d perpendicular = Eigen::Vector3d::Zero();
    double variance_along = 0.0;
    double rhs_luis = 0.0;
    std::optional<double> factor; ///< empty when rhs_luis < 1e-12
    std::optional<double> degree;
    std::optional<double> db;     ///< empty when factor is empty or zero
    Verdicts verdicts;
};

/// Denominator below which the squeezing factor is not applicable.
inline constexpr double kFactorDenominatorFloor = 1e-12;

/// n^T Cov n. Analytic moments only support principal axes.
double variance_along(const StokesMoments &moments, const Direction &n);

/// sqrt(|<S>|^2 - <S.n>^2), the largest |<S>.m| over unit m perpendicular to n.
double max_perp_expectation(const StokesMoments &moments, const Direction &n);

SqueezingAssessment assess(const StokesMoments &moments, const Direction &n);

/// 10 log10(factor); throws DomainError for factor <= 0 or non-finite.
double db_of_factor(double factor);
double factor_of_db(double db);

/// Cyclic uncertainty products V_j V_k against <S_l>^2, ordered
/// (j,k,l) = (2,3,1), (3,1,2), (1,2,3).
struct UncertaintyProducts {
    std::array<double, 3> products{};
    std::array<double, 3> bounds{};

    /// Smallest (product - bound) / max(bound, 1), negative when violated.
    double min_relative_margin() const;
};

UncertaintyProducts uncertainty_products(const StokesMoments &moments);

/// <S_perp>^2 / <S0> <= |<S_perp>| <= <S0> evaluated for the maximizing
/// perpendicular. The chain only holds when |<S_perp>| <= <S0>, which is
/// reported rather than assumed.
struct StringencyChain {
    double lower = 0.0;  ///< <S_perp>^2 / <S0>
    double middle = 0.0; ///< |<S_perp>|
    double upper = 0.0;  ///< <S0>
    bool precondition = false;
    bool holds = false;
};

StringencyChain stringency_chain(const StokesMoments &moments, const Direction &n);

} // namespace polsq
