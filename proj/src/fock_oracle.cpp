#include "polsq/fock_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>

#include <Eigen/Sparse>
#include <lapacke.h>

#include "polsq/error.hpp"
#include "polsq/kernels.hpp"

namespace polsq {

using cplx = std::complex<double>;

void TruncationPolicy::validate() const {
    if (!(epsilon_trunc > 0.0 && epsilon_trunc < 1.0))
        throw InvalidInput("epsilon_trunc", "must lie in (0, 1)");
    if (!(observable_tol > 0.0))
        throw InvalidInput("observable_tol", "must be > 0");
    if (max_cutoff < 2)
        throw InvalidInput("max_cutoff", "must be >= 2");
    if (!(growth_guard >= 1.0) || !std::isfinite(growth_guard))
        throw InvalidInput("growth_guard", "must be finite and >= 1");
    if (max_enlargements < 0)
        throw InvalidInput("max_enlargements", "must be >= 0");
}

double SectorVector::norm_squared() const {
    double s = 0.0;
    for (const cplx &a : amplitudes)
        s += std::norm(a);
    return s;
}

double FockState::norm_squared() const {
    double s = 0.0;
    for (const SectorVector &sec : sectors)
        s += sec.norm_squared();
    return s;
}

const SectorVector *FockState::find(int difference) const {
    auto it = std::lower_bound(sectors.begin(), sectors.end(), difference,
                               [](const SectorVector &s, int d) { return s.difference < d; });
    return (it != sectors.end() && it->difference == difference) ? &*it : nullptr;
}

namespace {

double log_poisson(int k, double mean) {
    return -mean + k * std::log(mean) - std::lgamma(k + 1.0);
}

/// Smallest N with P(Poisson(mean) > N) <= tail, using the geometric bound
/// P(X > N) <= p(N+1) / (1 - mean/(N+2)) once N + 2 > mean.
int poisson_cutoff(double mean, double tail) {
    if (mean == 0.0)
        return 0;
    for (int n = 0;; ++n) {
        if (n + 2.0 > 2.0 * mean) {
            const double bound = std::exp(log_poisson(n + 1, mean)) / (1.0 - mean / (n + 2.0));
            if (bound <= tail)
                return n;
        }
    }
}

} // namespace

FockState decompose_input(const CoherentInput &input, const TruncationPolicy &policy) {
    policy.validate();
    const double eps = policy.epsilon_trunc;
    // Cross-sector observables (S2, S3 and their moments) are linear in the
    // amplitudes, so a dropped mass m perturbs them by ~sqrt(m). Budget the
    // input on eps^2 so the amplitude error stays at eps.
    const double budget = eps * eps;
    const cplx alpha = input.alpha();
    const cplx beta = input.beta();
    const double a2 = std::norm(alpha);
    const double b2 = std::norm(beta);
    const int nx_max = poisson_cutoff(a2, budget / 4.0);
    const int ny_max = poisson_cutoff(b2, budget / 4.0);

    const double log_a = a2 > 0.0 ? 0.5 * std::log(a2) : 0.0;
    const double log_b = b2 > 0.0 ? 0.5 * std::log(b2) : 0.0;
    const double half_mean = 0.5 * (a2 + b2);

    std::vector<SectorVector> all;
    std::vector<double> mass;
    for (int d = -ny_max; d <= nx_max; ++d) {
        SectorVector sec;
        sec.difference = d;
        const int length = d >= 0 ? std::min(ny_max, nx_max - d) + 1
                                  : std::min(nx_max, ny_max + d) + 1;
        if (length > policy.max_cutoff)
            throw CapacityError("input decomposition needs ladder length " +
                                    std::to_string(length) + " > max_cutoff " +
                                    std::to_string(policy.max_cutoff),
                                length);
        sec.amplitudes.resize(static_cast<std::size_t>(length));
        for (int n = 0; n < length; ++n) {
            const int nx = sec.n_x(n);
            const int ny = sec.n_y(n);
            const double log_mag = -half_mean + nx * log_a - 0.5 * std::lgamma(nx + 1.0) +
                                   ny * log_b - 0.5 * std::lgamma(ny + 1.0);
            sec.amplitudes[static_cast<std::size_t>(n)] =
                std::polar(std::exp(log_mag), nx * input.phi_x + ny * input.phi_y);
        }
        mass.push_back(sec.norm_squared());
        all.push_back(std::move(sec));
    }

    // Drop whole sectors from the far side of the mean imbalance while the
    // cumulative discarded mass stays within the half of the budget left
    // after the two Poisson tails.
    double discarded = 0.0;
    std::vector<std::size_t> order(all.size());
    std::iota(order.begin(), order.end(), 0);
    const double centre = a2 - b2;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        return std::abs(all[i].difference - centre) > std::abs(all[j].difference - centre);
    });
    std::vector<bool> keep(all.size(), true);
    for (std::size_t k = 0; k + 1 < order.size(); ++k) {
        const std::size_t i = order[k];
        if (discarded + mass[i] > 0.5 * budget)
            break;
        discarded += mass[i];
        keep[i] = false;
    }

    FockState state;
    state.epsilon_trunc = eps;
    state.input = input;
    state.time = InteractionTime(0.0);
    for (std::size_t i = 0; i < all.size(); ++i)
        if (keep[i])
            state.sectors.push_back(std::move(all[i]));
    state.diagnostics.discarded_probability = std::max(0.0, 1.0 - state.norm_squared());
    state.diagnostics.sector_count = static_cast<int>(state.sectors.size());
    state.diagnostics.cutoff = 0;
    for (const SectorVector &sec : state.sectors)
        state.diagnostics.cutoff = std::max(state.diagnostics.cutoff, sec.cutoff());
    return state;
}

std::vector<double> sector_couplings(int difference, int ladder_length) {
    const double ad = std::abs(difference);
    std::vector<double> e(static_cast<std::size_t>(std::max(ladder_length - 1, 0)));
    for (std::size_t n = 0; n < e.size(); ++n)
        e[n] = std::sqrt((n + 1.0) * (n + ad + 1.0));
    return e;
}

namespace {

struct SectorEigen {
    std::vector<double> values;
    std::vector<double> vectors; // column-major L x L
    int length = 0;

    std::span<const double> column(int j) const {
        return {vectors.data() + static_cast<std::size_t>(j) * length,
                static_cast<std::size_t>(length)};
    }
};

SectorEigen diagonalize_sector(int difference, int length) {
    SectorEigen eig;
    eig.length = length;
    std::vector<double> diag(static_cast<std::size_t>(length), 0.0);
    std::vector<double> off = sector_couplings(difference, length);
    off.resize(static_cast<std::size_t>(length)); // LAPACK workspace needs n entries
    eig.values.resize(static_cast<std::size_t>(length));
    eig.vectors.resize(static_cast<std::size_t>(length) * length);
    std::vector<lapack_int> support(2 * static_cast<std::size_t>(length));
    lapack_int found = 0;
    const lapack_int info =
        LAPACKE_dstevr(LAPACK_COL_MAJOR, 'V', 'A', length, diag.data(), off.data(), 0.0, 0.0,
                       0, 0, 0.0, &found, eig.values.data(), eig.vectors.data(), length,
                       support.data());
    if (info != 0 || found != length)
        throw ConvergenceError("tridiagonal eigensolver failed for sector d = " +
                               std::to_string(difference) + " (info " +
                               std::to_string(info) + ")");
    return eig;
}

std::vector<cplx> apply_propagator(const SectorEigen &eig, std::span<const cplx> amplitudes,
                                   double t) {
    const int length = eig.length;
    std::vector<cplx> out(static_cast<std::size_t>(length), cplx{});
    for (int j = 0; j < length; ++j) {
        // Input support is a prefix of the ladder, so only that prefix of
        // each eigenvector contributes.
        const cplx coeff = kernels::rdot(eig.column(j).first(amplitudes.size()), amplitudes);
        kernels::raxpy(coeff * std::polar(1.0, -eig.values[static_cast<std::size_t>(j)] * t),
                       eig.column(j), out);
    }
    return out;
}

} // namespace

std::vector<cplx> propagate_sector(int difference, std::span<const cplx> amplitudes,
                                   int ladder_length, InteractionTime time) {
    if (ladder_length < static_cast<int>(amplitudes.size()) || ladder_length < 1)
        throw InvalidInput("ladder_length", "must cover the input amplitudes");
    const SectorEigen eig = diagonalize_sector(difference, ladder_length);
    return apply_propagator(eig, amplitudes, time.value());
}

Eigen::MatrixXcd sector_propagator(int difference, int ladder_length, InteractionTime time) {
    if (ladder_length < 1)
        throw InvalidInput("ladder_length", "must be >= 1");
    const SectorEigen eig = diagonalize_sector(difference, ladder_length);
    const Eigen::Map<const Eigen::MatrixXd> q(eig.vectors.data(), ladder_length, ladder_length);
    Eigen::VectorXcd phase(ladder_length);
    for (int j = 0; j < ladder_length; ++j)
        phase[j] = std::polar(1.0, -eig.values[static_cast<std::size_t>(j)] * time.value());
    return q.cast<cplx>() * phase.asDiagonal() * q.transpose().cast<cplx>();
}

namespace {

FockState evolve_at(const FockState &state, double t, int length, InteractionTime total) {
    FockState out;
    out.epsilon_trunc = state.epsilon_trunc;
    out.input = state.input;
    out.time = total;
    out.diagnostics = state.diagnostics;
    out.sectors.reserve(state.sectors.size());
    for (const SectorVector &sec : state.sectors) {
        const SectorEigen eig = diagonalize_sector(sec.difference, length);
        out.sectors.push_back({sec.difference, apply_propagator(eig, sec.amplitudes, t)});
    }
    out.diagnostics.cutoff = length;
    out.diagnostics.sector_count = static_cast<int>(out.sectors.size());
    return out;
}

double top_leakage(const FockState &state) {
    double leak = 0.0;
    for (const SectorVector &sec : state.sectors) {
        const std::size_t n = sec.amplitudes.size();
        for (std::size_t k = n >= 2 ? n - 2 : 0; k < n; ++k)
            leak += std::norm(sec.amplitudes[k]);
    }
    return leak;
}

/// max over reported moments of |a - b| / scale, with scale max(1, |b|) for
/// <S0> and the means and max(1, sqrt(V_j V_k)) for covariance entries.
double moment_delta(const StokesMoments &a, const StokesMoments &b) {
    auto scaled = [](double x, double y, double scale) {
        return std::abs(x - y) / std::max(1.0, scale);
    };
    double d = scaled(a.s0, b.s0, std::abs(b.s0));
    for (int j = 0; j < 3; ++j) {
        d = std::max(d, scaled(a.mean[j], b.mean[j], std::abs(b.mean[j])));
        for (int k = 0; k < 3; ++k) {
            const double bound = std::sqrt(std::abs(b.covariance(j, j) * b.covariance(k, k)));
            d = std::max(d, scaled(a.covariance(j, k), b.covariance(j, k), bound));
        }
    }
    return d;
}

} // namespace

FockState evolve(const FockState &state, InteractionTime time, const TruncationPolicy &policy) {
    policy.validate();
    const double t = time.value();
    if (t == 0.0)
        return state;
    const InteractionTime total(state.time.value() + t);

    int input_length = 1;
    for (const SectorVector &sec : state.sectors)
        input_length = std::max(input_length, sec.cutoff());

    // Initial ladder estimate: input support, plus half the analytic photon
    // number at the final time, plus the levels needed for the
    // tanh^2(T)-geometric tail of pair creation to fall below epsilon_trunc.
    const double s0_final = expect_stokes(state.input, total).s0;
    const double tanh2 = std::pow(std::tanh(total.value()), 2);
    const double tail_levels =
        tanh2 > 0.0 && tanh2 < 1.0 ? std::log(policy.epsilon_trunc) / std::log(tanh2) : 0.0;
    const double estimate = policy.growth_guard * (input_length + 0.5 * s0_final + tail_levels);
    if (!std::isfinite(estimate) || estimate > 64.0 * policy.max_cutoff)
        throw CapacityError("interaction time " + std::to_string(total.value()) +
                                " needs a ladder far beyond max_cutoff " +
                                std::to_string(policy.max_cutoff),
                            std::isfinite(estimate) ? static_cast<int>(estimate) : -1);
    int length = std::clamp(static_cast<int>(std::ceil(estimate)) + 2, input_length + 2,
                            std::max(policy.max_cutoff, input_length + 2));
    if (length > policy.max_cutoff)
        throw CapacityError("evolution needs ladder length " + std::to_string(length) +
                                " > max_cutoff " + std::to_string(policy.max_cutoff),
                            length);

    std::ostringstream history;
    for (int attempt = 0; attempt <= policy.max_enlargements; ++attempt) {
        FockState out = evolve_at(state, t, length, total);
        out.diagnostics.enlargements = attempt;
        out.diagnostics.top_leakage = top_leakage(out);
        history << " [L=" << length << " leak=" << out.diagnostics.top_leakage;

        bool settled = out.diagnostics.top_leakage <= policy.epsilon_trunc;
        if (settled && policy.verify_doubling) {
            const FockState wide = evolve_at(state, t, 2 * length, total);
            out.diagnostics.doubling_cutoff = 2 * length;
            out.diagnostics.doubling_delta = moment_delta(measure_moments(out), measure_moments(wide));
            history << " doubling=" << out.diagnostics.doubling_delta;
            settled = out.diagnostics.doubling_delta <= policy.observable_tol;
        }
        history << "]";
        if (settled)
            return out;

        if (length >= policy.max_cutoff)
            throw CapacityError("truncation not converged at max_cutoff " +
                                    std::to_string(policy.max_cutoff) + ";" + history.str(),
                                length + length / 2);
        length = std::min(policy.max_cutoff, length + std::max(8, length / 2));
    }
    throw ConvergenceError("truncation not converged after " +
                           std::to_string(policy.max_enlargements) + " enlargements;" +
                           history.str());
}

namespace {

/// Sector-indexed amplitude field with a fixed rectangular footprint.
class Field {
  public:
    Field(int d_min, int d_max, int length)
        : d_min_(d_min), length_(length),
          data_(static_cast<std::size_t>(d_max - d_min + 1),
                std::vector<cplx>(static_cast<std::size_t>(length))) {}

    cplx &at_photons(int nx, int ny) {
        return data_[static_cast<std::size_t>(nx - ny - d_min_)]
                    [static_cast<std::size_t>(std::min(nx, ny))];
    }

    std::vector<cplx> &sector(int d) { return data_[static_cast<std::size_t>(d - d_min_)]; }
    const std::vector<cplx> &sector(int d) const { return data_[static_cast<std::size_t>(d - d_min_)]; }
    int d_min() const { return d_min_; }
    int d_max() const { return d_min_ + static_cast<int>(data_.size()) - 1; }
    int length() const { return length_; }

    /// <this|other>
    cplx inner(const Field &other) const {
        cplx s{};
        for (std::size_t i = 0; i < data_.size(); ++i)
            s += kernels::cdot(data_[i], other.data_[i]);
        return s;
    }

  private:
    int d_min_;
    int length_;
    std::vector<std::vector<cplx>> data_;
};

} // namespace

StokesMoments measure_moments(const FockState &state) {
    StokesMoments m;
    m.source = MomentSource::fock_oracle;
    m.full_covariance = true;
    const double norm = state.norm_squared();
    if (!(norm > 0.0))
        throw InvalidInput("state", "has zero norm");
    if (state.sectors.empty())
        throw InvalidInput("state", "has no sectors");

    int length = 1;
    for (const SectorVector &sec : state.sectors)
        length = std::max(length, sec.cutoff());
    const int d_min = state.sectors.front().difference - 2;
    const int d_max = state.sectors.back().difference + 2;
    // K = a_x^dag a_y moves (nx, ny) -> (nx+1, ny-1); the ladder index can grow
    // by one, hence the extra level.
    Field psi(d_min, d_max, length + 1);
    Field s1(d_min, d_max, length + 1);
    Field raise(d_min, d_max, length + 1); // K psi
    Field lower(d_min, d_max, length + 1); // K^dag psi

    double s0 = 0.0;
    for (const SectorVector &sec : state.sectors) {
        for (int n = 0; n < sec.cutoff(); ++n) {
            const cplx v = sec.amplitudes[static_cast<std::size_t>(n)];
            const int nx = sec.n_x(n);
            const int ny = sec.n_y(n);
            psi.at_photons(nx, ny) = v;
            s1.at_photons(nx, ny) = static_cast<double>(sec.difference) * v;
            s0 += (nx + ny) * std::norm(v);
            if (ny >= 1)
                raise.at_photons(nx + 1, ny - 1) += std::sqrt((nx + 1.0) * ny) * v;
            if (nx >= 1)
                lower.at_photons(nx - 1, ny + 1) += std::sqrt(nx * (ny + 1.0)) * v;
        }
    }

    Field s2(d_min, d_max, length + 1);
    Field s3(d_min, d_max, length + 1);
    const cplx minus_i{0.0, -1.0};
    for (int d = d_min; d <= d_max; ++d) {
        const auto &r = raise.sector(d);
        const auto &l = lower.sector(d);
        auto &o2 = s2.sector(d);
        auto &o3 = s3.sector(d);
        for (std::size_t n = 0; n < r.size(); ++n) {
            o2[n] = r[n] + l[n];
            o3[n] = minus_i * (r[n] - l[n]);
        }
    }

    const std::array<const Field *, 3> applied{&s1, &s2, &s3};
    m.s0 = s0 / norm;
    for (int j = 0; j < 3; ++j)
        m.mean[j] = psi.inner(*applied[static_cast<std::size_t>(j)]).real() / norm;
    for (int j = 0; j < 3; ++j) {
        for (int k = j; k < 3; ++k) {
            // Re<S_j psi|S_k psi> = 1/2 <{S_j, S_k}> for Hermitian S_j, S_k.
            const double second = applied[static_cast<std::size_t>(j)]
                                      ->inner(*applied[static_cast<std::size_t>(k)])
                                      .real() /
                                  norm;
            m.covariance(j, k) = second - m.mean[j] * m.mean[k];
            m.covariance(k, j) = m.covariance(j, k);
        }
    }
    return m;
}

StokesMoments oracle_moments(const CoherentInput &input, InteractionTime time,
                             const TruncationPolicy &policy, OracleDiagnostics *diagnostics) {
    const FockState evolved = evolve(decompose_input(input, policy), time, policy);
    if (diagnostics != nullptr)
        *diagnostics = evolved.diagnostics;
    return measure_moments(evolved);
}

SelfCheckReport operator_selfcheck(int cutoff, double threshold) {
    if (cutoff < 4 || cutoff > 256)
        throw InvalidInput("cutoff", "must lie in [4, 256]");
    using Sparse = Eigen::SparseMatrix<cplx>;
    const int dim = cutoff * cutoff;
    auto index = [cutoff](int nx, int ny) { return nx * cutoff + ny; };

    std::vector<Eigen::Triplet<cplx>> tx, ty;
    for (int nx = 0; nx < cutoff; ++nx) {
        for (int ny = 0; ny < cutoff; ++ny) {
            if (nx >= 1)
                tx.emplace_back(index(nx - 1, ny), index(nx, ny), std::sqrt(double(nx)));
            if (ny >= 1)
                ty.emplace_back(index(nx, ny - 1), index(nx, ny), std::sqrt(double(ny)));
        }
    }
    Sparse ax(dim, dim), ay(dim, dim);
    ax.setFromTriplets(tx.begin(), tx.end());
    ay.setFromTriplets(ty.begin(), ty.end());
    const Sparse ax_dag = ax.adjoint();
    const Sparse ay_dag = ay.adjoint();

    const Sparse s0 = ax_dag * ax + ay_dag * ay;
    const Sparse s1 = ax_dag * ax - ay_dag * ay;
    const Sparse k = ax_dag * ay;
    const Sparse k_dag = k.adjoint();
    const Sparse s2 = k + k_dag;
    const Sparse s3 = cplx{0.0, -1.0} * (k - k_dag);

    auto interior = [cutoff](int i) {
        return i / cutoff <= cutoff - 2 && i % cutoff <= cutoff - 2;
    };
    auto residual = [&](const Sparse &m) {
        double r = 0.0;
        for (int col = 0; col < m.outerSize(); ++col)
            for (Sparse::InnerIterator it(m, col); it; ++it)
                if (interior(static_cast<int>(it.row())) && interior(static_cast<int>(it.col())))
                    r = std::max(r, std::abs(it.value()));
        return r;
    };
    const cplx two_i{0.0, 2.0};

    SelfCheckReport report;
    report.cutoff = cutoff;
    report.stokes_residuals = {
        residual(Sparse(s1 * s2 - s2 * s1 - two_i * s3)),
        residual(Sparse(s2 * s3 - s3 * s2 - two_i * s1)),
        residual(Sparse(s3 * s1 - s1 * s3 - two_i * s2)),
    };
    report.s0_residuals = {
        residual(Sparse(s0 * s1 - s1 * s0)),
        residual(Sparse(s0 * s2 - s2 * s0)),
        residual(Sparse(s0 * s3 - s3 * s0)),
    };
    for (double r : report.stokes_residuals)
        report.max_residual = std::max(report.max_residual, r);
    for (double r : report.s0_residuals)
        report.max_residual = std::max(report.max_residual, r);
    if (report.max_residual > threshold) {
        std::ostringstream msg;
        msg << "Stokes operator algebra residual " << report.max_residual
            << " exceeds " << threshold << " at cutoff " << cutoff;
        throw SelfCheckError(msg.str());
    }
    return report;
}

} // namespace polsq
