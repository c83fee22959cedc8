// Reference kernels. Built with -ffp-contract=off so that the elementwise
// factor kernel rounds exactly like its AVX2 counterpart.

#include <cmath>
#include <limits>

#include "kernels_internal.hpp"

namespace polsq::kernels::detail {

void s1_factor_row_scalar(const FactorRow &row, const double *sin_u, double *out,
                          std::size_t n) {
    const double inf = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
        const double root = row.cosh_2t - row.sinh_2t_sin_2theta * sin_u[j];
        const double r = root * root - row.cos_2theta_sq;
        out[j] = r > 0.0 ? 1.0 / std::sqrt(r) : inf;
    }
}

cplx cdot_scalar(const cplx *a, const cplx *b, std::size_t n) {
    double re = 0.0;
    double im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
        im += a[i].real() * b[i].imag() - a[i].imag() * b[i].real();
    }
    return {re, im};
}

cplx rdot_scalar(const double *col, const cplx *x, std::size_t n) {
    double re = 0.0;
    double im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        re += col[i] * x[i].real();
        im += col[i] * x[i].imag();
    }
    return {re, im};
}

void raxpy_scalar(cplx a, const double *col, cplx *y, std::size_t n) {
    const double ar = a.real();
    const double ai = a.imag();
    for (std::size_t i = 0; i < n; ++i)
        y[i] = {y[i].real() + ar * col[i], y[i].imag() + ai * col[i]};
}

} // namespace polsq::kernels::detail
