#pragma once

// Data-parallel inner loops used by the optimizer grid scan and the Fock
// oracle. Each kernel has a scalar reference implementation; an AVX2/FMA
// variant is selected at runtime when the CPU supports it. Setting the
// environment variable POLSQ_FORCE_SCALAR=1 pins dispatch to the scalar
// table.

#include <complex>
#include <cstddef>
#include <span>

namespace polsq::kernels {

using cplx = std::complex<double>;

enum class Isa { scalar, avx2 };

const char *isa_name(Isa isa);

/// Row of the S1 squeezing-factor grid at fixed theta and T.
struct FactorRow {
    double cosh_2t = 1.0;
    double sinh_2t_sin_2theta = 0.0; // sinh 2T * sin 2theta
    double cos_2theta_sq = 0.0;      // cos^2 2theta
};

struct KernelTable {
    Isa isa;
    /// out[j] = 1/sqrt((cosh_2t - k sin_u[j])^2 - cos_2theta_sq); +inf where
    /// the radicand is <= 0.
    void (*s1_factor_row)(const FactorRow &row, const double *sin_u, double *out,
                          std::size_t n);
    /// sum_i conj(a[i]) b[i]
    cplx (*cdot)(const cplx *a, const cplx *b, std::size_t n);
    /// sum_i col[i] x[i], col real.
    cplx (*rdot)(const double *col, const cplx *x, std::size_t n);
    /// y[i] += a col[i], col real.
    void (*raxpy)(cplx a, const double *col, cplx *y, std::size_t n);
};

const KernelTable &scalar_table();

/// AVX2 table, or nullptr when not compiled in or unsupported by this CPU.
const KernelTable *avx2_table();

/// Table chosen for this process (resolved once).
const KernelTable &active();

inline void s1_factor_row(const FactorRow &row, std::span<const double> sin_u,
                          std::span<double> out) {
    active().s1_factor_row(row, sin_u.data(), out.data(), sin_u.size());
}

inline cplx cdot(std::span<const cplx> a, std::span<const cplx> b) {
    return active().cdot(a.data(), b.data(), a.size() < b.size() ? a.size() : b.size());
}

inline cplx rdot(std::span<const double> col, std::span<const cplx> x) {
    return active().rdot(col.data(), x.data(), col.size() < x.size() ? col.size() : x.size());
}

inline void raxpy(cplx a, std::span<const double> col, std::span<cplx> y) {
    active().raxpy(a, col.data(), y.data(), col.size() < y.size() ? col.size() : y.size());
}

} // namespace polsq::kernels
