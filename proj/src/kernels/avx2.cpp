// AVX2/FMA kernels. Compiled with -mavx2 -mfma; only called after the
// dispatcher has confirmed CPU support.

#include <immintrin.h>

#include <cmath>
#include <limits>

#include "kernels_internal.hpp"

namespace polsq::kernels::detail {

namespace {

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

} // namespace

void s1_factor_row_avx2(const FactorRow &row, const double *sin_u, double *out,
                        std::size_t n) {
    const __m256d ch = _mm256_set1_pd(row.cosh_2t);
    const __m256d k = _mm256_set1_pd(row.sinh_2t_sin_2theta);
    const __m256d c2 = _mm256_set1_pd(row.cos_2theta_sq);
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d zero = _mm256_setzero_pd();
    const __m256d inf = _mm256_set1_pd(std::numeric_limits<double>::infinity());

    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
        // Separate mul/sub (no FMA) to round identically to the scalar path.
        const __m256d s = _mm256_loadu_pd(sin_u + j);
        const __m256d root = _mm256_sub_pd(ch, _mm256_mul_pd(k, s));
        const __m256d r = _mm256_sub_pd(_mm256_mul_pd(root, root), c2);
        const __m256d pos = _mm256_cmp_pd(r, zero, _CMP_GT_OQ);
        const __m256d f = _mm256_div_pd(one, _mm256_sqrt_pd(r));
        _mm256_storeu_pd(out + j, _mm256_blendv_pd(inf, f, pos));
    }
    if (j < n)
        s1_factor_row_scalar(row, sin_u + j, out + j, n - j);
}

cplx cdot_avx2(const cplx *a, const cplx *b, std::size_t n) {
    const double *pa = reinterpret_cast<const double *>(a);
    const double *pb = reinterpret_cast<const double *>(b);
    __m256d acc_re0 = _mm256_setzero_pd();
    __m256d acc_im0 = _mm256_setzero_pd();
    __m256d acc_re1 = _mm256_setzero_pd();
    __m256d acc_im1 = _mm256_setzero_pd();

    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d a0 = _mm256_loadu_pd(pa + 2 * i);
        const __m256d b0 = _mm256_loadu_pd(pb + 2 * i);
        const __m256d a1 = _mm256_loadu_pd(pa + 2 * i + 4);
        const __m256d b1 = _mm256_loadu_pd(pb + 2 * i + 4);
        acc_re0 = _mm256_fmadd_pd(a0, b0, acc_re0);
        acc_re1 = _mm256_fmadd_pd(a1, b1, acc_re1);
        // [bi, br, bi, br]: even lanes give ar*bi, odd lanes ai*br.
        acc_im0 = _mm256_fmadd_pd(a0, _mm256_permute_pd(b0, 0b0101), acc_im0);
        acc_im1 = _mm256_fmadd_pd(a1, _mm256_permute_pd(b1, 0b0101), acc_im1);
    }
    const __m256d acc_re = _mm256_add_pd(acc_re0, acc_re1);
    const __m256d acc_im = _mm256_add_pd(acc_im0, acc_im1);
    alignas(32) double im_lanes[4];
    _mm256_store_pd(im_lanes, acc_im);

    cplx tail = i < n ? cdot_scalar(a + i, b + i, n - i) : cplx{};
    return {hsum(acc_re) + tail.real(),
            (im_lanes[0] - im_lanes[1]) + (im_lanes[2] - im_lanes[3]) + tail.imag()};
}

cplx rdot_avx2(const double *col, const cplx *x, std::size_t n) {
    const double *px = reinterpret_cast<const double *>(x);
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();

    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d c = _mm256_loadu_pd(col + i);
        const __m256d c_lo = _mm256_permute4x64_pd(c, 0b01010000); // c0 c0 c1 c1
        const __m256d c_hi = _mm256_permute4x64_pd(c, 0b11111010); // c2 c2 c3 c3
        acc0 = _mm256_fmadd_pd(c_lo, _mm256_loadu_pd(px + 2 * i), acc0);
        acc1 = _mm256_fmadd_pd(c_hi, _mm256_loadu_pd(px + 2 * i + 4), acc1);
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, _mm256_add_pd(acc0, acc1));

    cplx tail = i < n ? rdot_scalar(col + i, x + i, n - i) : cplx{};
    return {lanes[0] + lanes[2] + tail.real(), lanes[1] + lanes[3] + tail.imag()};
}

void raxpy_avx2(cplx a, const double *col, cplx *y, std::size_t n) {
    double *py = reinterpret_cast<double *>(y);
    const __m256d av = _mm256_setr_pd(a.real(), a.imag(), a.real(), a.imag());

    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d c = _mm256_loadu_pd(col + i);
        const __m256d c_lo = _mm256_permute4x64_pd(c, 0b01010000);
        const __m256d c_hi = _mm256_permute4x64_pd(c, 0b11111010);
        _mm256_storeu_pd(py + 2 * i,
                         _mm256_fmadd_pd(av, c_lo, _mm256_loadu_pd(py + 2 * i)));
        _mm256_storeu_pd(py + 2 * i + 4,
                         _mm256_fmadd_pd(av, c_hi, _mm256_loadu_pd(py + 2 * i + 4)));
    }
    if (i < n)
        raxpy_scalar(a, col + i, y + i, n - i);
}

} // namespace polsq::kernels::detail
