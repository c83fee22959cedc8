#pragma once

// Brute-force verifier: evolves the two-mode coherent state under
// H = k (a_x^dag a_y^dag + a_x a_y) in a truncated number basis and measures
// the Stokes moments directly. H conserves d = n_x - n_y, so the state is
// stored as independent sectors, each a ladder |n + d, n> (d >= 0) or
// |n, n - d> (d < 0) indexed by n = min(n_x, n_y).

#include <array>
#include <complex>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "polsq/stokes_core.hpp"

namespace polsq {

struct TruncationPolicy {
    double epsilon_trunc = 1e-10;  ///< probability mass allowed to be discarded
    double observable_tol = 1e-8;  ///< doubling-check tolerance (relative, floor 1)
    int max_cutoff = 512;          ///< largest working ladder length
    double growth_guard = 1.25;    ///< safety multiplier on the initial ladder estimate
    bool verify_doubling = true;   ///< re-run at twice the cutoff and compare moments
    int max_enlargements = 12;

    void validate() const;
};

struct SectorVector {
    int difference = 0;
    std::vector<std::complex<double>> amplitudes;

    int cutoff() const { return static_cast<int>(amplitudes.size()); }
    int n_x(int ladder) const { return ladder + (difference > 0 ? difference : 0); }
    int n_y(int ladder) const { return ladder + (difference < 0 ? -difference : 0); }
    double norm_squared() const;
};

struct OracleDiagnostics {
    double discarded_probability = 0.0; ///< mass dropped when building the input
    double top_leakage = 0.0;           ///< summed |psi|^2 on the top two ladder levels
    int cutoff = 0;                     ///< working ladder length after evolution
    int enlargements = 0;
    int sector_count = 0;
    double doubling_delta = 0.0; ///< max scaled moment change at twice the cutoff
    int doubling_cutoff = 0;
};

struct FockState {
    std::vector<SectorVector> sectors; ///< sorted by difference, unique
    double epsilon_trunc = 1e-10;
    CoherentInput input;
    InteractionTime time; ///< elapsed interaction time
    OracleDiagnostics diagnostics;

    double norm_squared() const;
    const SectorVector *find(int difference) const;
};

/// Coherent state regrouped by photon-number difference.
FockState decompose_input(const CoherentInput &input, const TruncationPolicy &policy = {});

/// Schroedinger evolution by exp(-i H T) sector by sector; cutoffs are enlarged
/// until leakage into the top two ladder levels is below epsilon_trunc and,
/// when enabled, doubling the cutoff changes no moment by more than
/// observable_tol.
FockState evolve(const FockState &state, InteractionTime time,
                 const TruncationPolicy &policy = {});

/// Means and full symmetrized covariance measured on the number basis.
StokesMoments measure_moments(const FockState &state);

/// decompose_input + evolve + measure_moments.
StokesMoments oracle_moments(const CoherentInput &input, InteractionTime time,
                             const TruncationPolicy &policy = {},
                             OracleDiagnostics *diagnostics = nullptr);

/// Off-diagonal of the real symmetric tridiagonal sector Hamiltonian (units of
/// k): element n couples ladder n <-> n+1 with sqrt((n+1)(n+|d|+1)).
std::vector<double> sector_couplings(int difference, int ladder_length);

/// Dense exp(-i H_d T) for one sector; for tests and diagnostics.
Eigen::MatrixXcd sector_propagator(int difference, int ladder_length, InteractionTime time);

/// Apply exp(-i H_d T) to `amplitudes` zero-padded to `ladder_length`.
std::vector<std::complex<double>>
propagate_sector(int difference, std::span<const std::complex<double>> amplitudes,
                 int ladder_length, InteractionTime time);

struct SelfCheckReport {
    int cutoff = 0;
    /// |[S_j,S_k] - 2i eps_jkl S_l| max entry on the interior, for
    /// (j,k) = (1,2), (2,3), (3,1).
    std::array<double, 3> stokes_residuals{};
    /// |[S0,S_j]| max entry on the interior, j = 1..3.
    std::array<double, 3> s0_residuals{};
    double max_residual = 0.0;
};

/// Explicit Stokes matrices on n_x, n_y < cutoff; residuals are taken over the
/// interior n_x, n_y <= cutoff - 2 where truncation does not touch products.
/// Throws SelfCheckError when max_residual > threshold.
SelfCheckReport operator_selfcheck(int cutoff, double threshold = 1e-10);

} // namespace polsq
