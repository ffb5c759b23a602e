#include <immintrin.h>

#include <cmath>

#include "epstein_kit/kernels.hpp"

namespace ek::kernels::avx2 {

namespace {

double reduce(__m256d acc) {
    alignas(32) double lane[4];
    _mm256_store_pd(lane, acc);
    return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

}  // namespace

double leaf_sum(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
    double s = reduce(acc);
    for (; i < n; ++i) s += x[i];
    return s;
}

double leaf_dot(const double* x, const double* w, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(w + i)));
    double s = reduce(acc);
    for (; i < n; ++i) {
        const double p = x[i] * w[i];
        s += p;
    }
    return s;
}

void zc_conjunction(const double* re_c2, const double* im_c2, std::size_t nc,
                    const double* base, const double* bound, std::size_t ntheta, double slack,
                    std::uint8_t* out) {
    const __m256d vslack = _mm256_set1_pd(slack);
    for (std::size_t k = 0; k < nc; ++k) {
        const double im = im_c2[k];
        const double im2 = im * im;
        const __m256d vre_c2 = _mm256_set1_pd(re_c2[k]);
        const __m256d vim2 = _mm256_set1_pd(im2);
        bool ok = true;
        std::size_t j = 0;
        for (; j + 4 <= ntheta && ok; j += 4) {
            const __m256d re = _mm256_add_pd(_mm256_loadu_pd(base + j), vre_c2);
            const __m256d mag = _mm256_sqrt_pd(_mm256_add_pd(_mm256_mul_pd(re, re), vim2));
            const __m256d lim = _mm256_add_pd(_mm256_loadu_pd(bound + j), vslack);
            ok = _mm256_movemask_pd(_mm256_cmp_pd(mag, lim, _CMP_LE_OQ)) == 0xF;
        }
        for (; j < ntheta && ok; ++j) {
            const double re = base[j] + re_c2[k];
            const double mag = std::sqrt(re * re + im2);
            ok = mag <= bound[j] + slack;
        }
        out[k] = ok ? 1 : 0;
    }
}

}  // namespace ek::kernels::avx2
