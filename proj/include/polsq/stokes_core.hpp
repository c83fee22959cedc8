#pragma once

#include <complex>
#include <limits>
#include <numbers>

#include <Eigen/Core>

namespace polsq {

/// Input coherent state |alpha, beta> with alpha = A cos(theta) e^{i phi_x},
/// beta = A sin(theta) e^{i phi_y}.
///
/// Stored canonically: theta in [0, pi/2], phases in [0, 2 pi). Signs of
/// cos(theta) and sin(theta) are absorbed into the phases, so alpha and beta
/// are preserved by normalization.
struct CoherentInput {
    double amplitude = 0.0;
    double theta = 0.0;
    double phi_x = 0.0;
    double phi_y = 0.0;

    std::complex<double> alpha() const;
    std::complex<double> beta() const;
    double mean_photons() const { return amplitude * amplitude; }
    double phase_sum() const { return phi_x + phi_y; }
};

CoherentInput make_coherent_input(double amplitude, double theta, double phi_x,
                                  double phi_y);

/// Reduce an angle into [0, 2 pi).
double wrap_two_pi(double angle);

/// Dimensionless interaction time T = k t.
class InteractionTime {
  public:
    InteractionTime() = default;
    explicit InteractionTime(double value);

    double value() const noexcept { return value_; }

  private:
    double value_ = 0.0;
};

/// Largest T for which cosh(2T) is finite in double precision (with margin).
inline constexpr double kMaxInteractionTime = 350.0;

struct BogoliubovCoefficients {
    double c = 1.0; // cosh T
    double s = 0.0; // sinh T
};

/// Heisenberg maps a_x(T) = c a_x - i s a_y^dag, a_y(T) = c a_y - i s a_x^dag.
BogoliubovCoefficients bogoliubov(InteractionTime time);

enum class MomentSource { analytic, fock_oracle };

/// First and second Stokes moments of a state.
///
/// `covariance` is the symmetrized covariance 1/2<{S_j,S_k}> - <S_j><S_k>
/// indexed (0,1,2) = (S1,S2,S3). Entries that the producing engine does not
/// provide hold NaN; `full_covariance` tells whether every entry is present.
struct StokesMoments {
    double s0 = 0.0;
    Eigen::Vector3d mean = Eigen::Vector3d::Zero();
    Eigen::Matrix3d covariance = Eigen::Matrix3d::Constant(std::numeric_limits<double>::quiet_NaN());
    bool full_covariance = false;
    MomentSource source = MomentSource::analytic;

    bool has_variances() const;
    Eigen::Vector3d principal_variances() const { return covariance.diagonal(); }
};

/// Closed-form <S0> and <S1>, <S2>, <S3> of the evolved state. Covariance is
/// left unset.
StokesMoments expect_stokes(const CoherentInput &input, InteractionTime time);

/// Closed-form means plus principal variances V1, V2, V3. Off-diagonal
/// covariance entries are not provided (NaN).
StokesMoments variance_stokes(const CoherentInput &input, InteractionTime time);

/// Everything the analytic engine knows; same as variance_stokes.
inline StokesMoments analytic_moments(const CoherentInput &input, InteractionTime time) {
    return variance_stokes(input, time);
}

/// R = [cosh 2T - sinh 2T sin 2theta sin(phi_x + phi_y)]^2 - cos^2 2theta.
/// For A > 0, A^4 R = <S2>^2 + <S3>^2.
double r_parameter(const CoherentInput &input, InteractionTime time);

/// Squeezing factor along S1 at theta, phase sum u: 1/sqrt(R). Infinite when
/// R <= 0 (mean Stokes vector parallel to S1).
double s1_factor(double theta, double phase_sum, InteractionTime time);

} // namespace polsq
