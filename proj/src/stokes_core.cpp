#include "polsq/stokes_core.hpp"

#include <cmath>
#include <string>

#include "polsq/error.hpp"

namespace polsq {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_finite(double value, const char *field) {
    if (!std::isfinite(value))
        throw InvalidInput(field, "must be finite");
}

} // namespace

double wrap_two_pi(double angle) {
    if (angle >= 0.0 && angle < kTwoPi)
        return angle;
    double r = std::fmod(angle, kTwoPi);
    if (r < 0.0)
        r += kTwoPi;
    if (r >= kTwoPi)
        r = 0.0;
    return r;
}

std::complex<double> CoherentInput::alpha() const {
    return std::polar(amplitude * std::cos(theta), phi_x);
}

std::complex<double> CoherentInput::beta() const {
    return std::polar(amplitude * std::sin(theta), phi_y);
}

CoherentInput make_coherent_input(double amplitude, double theta, double phi_x,
                                  double phi_y) {
    require_finite(amplitude, "amplitude");
    require_finite(theta, "theta");
    require_finite(phi_x, "phi_x");
    require_finite(phi_y, "phi_y");
    if (amplitude < 0.0)
        throw InvalidInput("amplitude", "must be >= 0");

    // Fold theta into [0, pi/2]; negative cos/sin become a pi shift of the
    // corresponding mode phase so that alpha and beta are unchanged.
    double t = wrap_two_pi(theta);
    double px = phi_x;
    double py = phi_y;
    if (t > 0.5 * kPi && t <= kPi) {
        t = kPi - t;
        px += kPi;
    } else if (t > kPi && t <= 1.5 * kPi) {
        t = t - kPi;
        px += kPi;
        py += kPi;
    } else if (t > 1.5 * kPi) {
        t = kTwoPi - t;
        py += kPi;
    }
    return CoherentInput{amplitude, t, wrap_two_pi(px), wrap_two_pi(py)};
}

InteractionTime::InteractionTime(double value) : value_(value) {
    if (!std::isfinite(value))
        throw InvalidInput("T", "must be finite");
    if (value < 0.0)
        throw InvalidInput("T", "must be >= 0");
}

BogoliubovCoefficients bogoliubov(InteractionTime time) {
    const double t = time.value();
    if (t > kMaxInteractionTime)
        throw OverflowError("interaction time " + std::to_string(t) +
                            " exceeds the maximum supported T = " +
                            std::to_string(kMaxInteractionTime));
    return {std::cosh(t), std::sinh(t)};
}

bool StokesMoments::has_variances() const {
    const auto d = covariance.diagonal();
    return std::isfinite(d[0]) && std::isfinite(d[1]) && std::isfinite(d[2]);
}

StokesMoments expect_stokes(const CoherentInput &input, InteractionTime time) {
    const auto [c, s] = bogoliubov(time);
    const double ch2 = c * c + s * s; // cosh 2T
    const double sh2 = 2.0 * c * s;   // sinh 2T
    const double a2 = input.amplitude * input.amplitude;
    const double cos_t = std::cos(input.theta);
    const double sin_t = std::sin(input.theta);
    const double cos2 = cos_t * cos_t;
    const double sin2 = sin_t * sin_t;
    const double sin_2t = std::sin(2.0 * input.theta);
    const double diff = input.phi_x - input.phi_y;
    const double sum = input.phi_x + input.phi_y;

    StokesMoments m;
    m.source = MomentSource::analytic;
    m.s0 = a2 * ch2 + 2.0 * s * s - a2 * sh2 * sin_2t * std::sin(sum);
    m.mean[0] = a2 * std::cos(2.0 * input.theta);
    m.mean[1] = a2 * (ch2 * sin_2t * std::cos(diff) -
                      sh2 * (cos2 * std::sin(2.0 * input.phi_x) +
                             sin2 * std::sin(2.0 * input.phi_y)));
    m.mean[2] = a2 * (-ch2 * sin_2t * std::sin(diff) -
                      sh2 * (cos2 * std::cos(2.0 * input.phi_x) -
                             sin2 * std::cos(2.0 * input.phi_y)));
    return m;
}

StokesMoments variance_stokes(const CoherentInput &input, InteractionTime time) {
    StokesMoments m = expect_stokes(input, time);
    const auto [c, s] = bogoliubov(time);
    const double ch2 = c * c + s * s;
    const double sh2 = 2.0 * c * s;
    const double sh4 = 2.0 * sh2 * ch2;
    const double a2 = input.amplitude * input.amplitude;

    const double v23 = a2 * ch2 * ch2 + (a2 + 1.0) * sh2 * sh2 -
                       a2 * sh4 * std::sin(2.0 * input.theta) * std::sin(input.phase_sum());
    if (!std::isfinite(v23) || !std::isfinite(m.s0))
        throw OverflowError("Stokes variances overflow double precision at T = " +
                            std::to_string(time.value()));
    m.covariance(0, 0) = a2;
    m.covariance(1, 1) = v23;
    m.covariance(2, 2) = v23;
    m.full_covariance = false;
    return m;
}

namespace {

double r_closed_form(double theta, double phase_sum, InteractionTime time) {
    const auto [c, s] = bogoliubov(time);
    const double ch2 = c * c + s * s;
    const double sh2 = 2.0 * c * s;
    const double root = ch2 - sh2 * std::sin(2.0 * theta) * std::sin(phase_sum);
    const double cos_2t = std::cos(2.0 * theta);
    return root * root - cos_2t * cos_2t;
}

} // namespace

double r_parameter(const CoherentInput &input, InteractionTime time) {
    return r_closed_form(input.theta, input.phase_sum(), time);
}

double s1_factor(double theta, double phase_sum, InteractionTime time) {
    const double r = r_closed_form(theta, phase_sum, time);
    if (!(r > 0.0))
        return std::numeric_limits<double>::infinity();
    return 1.0 / std::sqrt(r);
}

} // namespace polsq
