#include "polsq/criteria.hpp"

#include <algorithm>
#include <cmath>

#include "polsq/error.hpp"

namespace polsq {

namespace {

constexpr double kUnitTolerance = 1e-12;

} // namespace

Direction::Direction(const Eigen::Vector3d &n) : n_(n) {
    if (!n.allFinite() || std::abs(n.norm() - 1.0) > kUnitTolerance)
        throw InvalidInput("direction", "must be a unit vector");
}

Direction Direction::normalized(const Eigen::Vector3d &v) {
    const double len = v.norm();
    if (!std::isfinite(len) || len == 0.0)
        throw InvalidInput("direction", "must be a finite non-zero vector");
    return Direction(v / len);
}

Direction Direction::axis(int index) {
    if (index < 0 || index > 2)
        throw InvalidInput("direction", "axis index must be 0, 1 or 2");
    return Direction(Eigen::Vector3d::Unit(index));
}

std::optional<int> Direction::principal_axis() const {
    for (int k = 0; k < 3; ++k) {
        bool off_axis_zero = true;
        for (int j = 0; j < 3; ++j)
            if (j != k && std::abs(n_[j]) > kUnitTolerance)
                off_axis_zero = false;
        if (off_axis_zero)
            return k;
    }
    return std::nullopt;
}

double variance_along(const StokesMoments &moments, const Direction &n) {
    if (moments.full_covariance)
        return n.vector().dot(moments.covariance * n.vector());
    if (const auto k = n.principal_axis(); k && std::isfinite(moments.covariance(*k, *k)))
        return moments.covariance(*k, *k);
    throw UnsupportedDirection(
        "variance along a non-principal direction needs the full covariance; "
        "use the Fock oracle moments");
}

double max_perp_expectation(const StokesMoments &moments, const Direction &n) {
    // Norm of the perpendicular component; equals sqrt(|S|^2 - (S.n)^2) without
    // the cancellation of the subtracted form.
    const Eigen::Vector3d &u = n.vector();
    return (moments.mean - moments.mean.dot(u) * u).norm();
}

SqueezingAssessment assess(const StokesMoments &moments, const Direction &n) {
    SqueezingAssessment a;
    a.direction = n;
    a.variance_along = variance_along(moments, n);
    const Eigen::Vector3d &u = n.vector();
    const Eigen::Vector3d perp = moments.mean - moments.mean.dot(u) * u;
    a.rhs_luis = perp.norm();

    a.verdicts.chirkin = a.variance_along < moments.s0;
    if (a.rhs_luis < kFactorDenominatorFloor) {
        a.verdicts.heersink = false;
        return a;
    }

    a.perpendicular = perp / a.rhs_luis;
    a.factor = a.variance_along / a.rhs_luis;
    a.degree = 1.0 - *a.factor;
    if (*a.factor > 0.0)
        a.db = db_of_factor(*a.factor);

    a.verdicts.luis_max = a.variance_along < a.rhs_luis;
    a.verdicts.luis_pair = a.variance_along < std::abs(moments.mean.dot(a.perpendicular));
    try {
        const Direction third = Direction::normalized(u.cross(a.perpendicular));
        const double v_third = variance_along(moments, third);
        a.verdicts.heersink = a.variance_along < a.rhs_luis && a.rhs_luis < v_third;
    } catch (const UnsupportedDirection &) {
        a.verdicts.heersink.reset();
    }
    return a;
}

double db_of_factor(double factor) {
    if (!std::isfinite(factor) || factor <= 0.0)
        throw DomainError("dB conversion needs a finite positive factor");
    return 10.0 * std::log10(factor);
}

double factor_of_db(double db) {
    if (!std::isfinite(db))
        throw DomainError("dB value must be finite");
    return std::pow(10.0, db / 10.0);
}

double UncertaintyProducts::min_relative_margin() const {
    double margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < 3; ++i)
        margin = std::min(margin, (products[i] - bounds[i]) / std::max(bounds[i], 1.0));
    return margin;
}

UncertaintyProducts uncertainty_products(const StokesMoments &moments) {
    const Eigen::Vector3d v = moments.covariance.diagonal();
    UncertaintyProducts u;
    u.products = {v[1] * v[2], v[2] * v[0], v[0] * v[1]};
    u.bounds = {moments.mean[0] * moments.mean[0], moments.mean[1] * moments.mean[1],
                moments.mean[2] * moments.mean[2]};
    return u;
}

StringencyChain stringency_chain(const StokesMoments &moments, const Direction &n) {
    StringencyChain c;
    c.middle = max_perp_expectation(moments, n);
    c.upper = moments.s0;
    c.lower = c.upper > 0.0 ? c.middle * c.middle / c.upper
                            : std::numeric_limits<double>::infinity();
    c.precondition = c.middle <= c.upper;
    c.holds = c.lower <= c.middle && c.middle <= c.upper;
    return c;
}

} // namespace polsq
