#pragma once

#include "polsq/kernels.hpp"

namespace polsq::kernels::detail {

void s1_factor_row_scalar(const FactorRow &row, const double *sin_u, double *out,
                          std::size_t n);
cplx cdot_scalar(const cplx *a, const cplx *b, std::size_t n);
cplx rdot_scalar(const double *col, const cplx *x, std::size_t n);
void raxpy_scalar(cplx a, const double *col, cplx *y, std::size_t n);

#if defined(POLSQ_HAVE_AVX2)
void s1_factor_row_avx2(const FactorRow &row, const double *sin_u, double *out,
                        std::size_t n);
cplx cdot_avx2(const cplx *a, const cplx *b, std::size_t n);
cplx rdot_avx2(const double *col, const cplx *x, std::size_t n);
void raxpy_avx2(cplx a, const double *col, cplx *y, std::size_t n);
#endif

} // namespace polsq::kernels::detail
