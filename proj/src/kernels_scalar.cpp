#include <cmath>

#include "epstein_kit/kernels.hpp"

namespace ek::kernels::scalar {

double leaf_sum(const double* x, std::size_t n) {
    double acc[4] = {0, 0, 0, 0};
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        for (int l = 0; l < 4; ++l) acc[l] += x[i + l];
    double s = (acc[0] + acc[1]) + (acc[2] + acc[3]);
    for (; i < n; ++i) s += x[i];
    return s;
}

double leaf_dot(const double* x, const double* w, std::size_t n) {
    double acc[4] = {0, 0, 0, 0};
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        for (int l = 0; l < 4; ++l) {
            const double p = x[i + l] * w[i + l];
            acc[l] += p;
        }
    double s = (acc[0] + acc[1]) + (acc[2] + acc[3]);
    for (; i < n; ++i) {
        const double p = x[i] * w[i];
        s += p;
    }
    return s;
}

void zc_conjunction(const double* re_c2, const double* im_c2, std::size_t nc,
                    const double* base, const double* bound, std::size_t ntheta, double slack,
                    std::uint8_t* out) {
    for (std::size_t k = 0; k < nc; ++k) {
        const double im = im_c2[k];
        const double im2 = im * im;
        bool ok = true;
        for (std::size_t j = 0; j < ntheta && ok; ++j) {
            const double re = base[j] + re_c2[k];
            const double mag = std::sqrt(re * re + im2);
            ok = mag <= bound[j] + slack;
        }
        out[k] = ok ? 1 : 0;
    }
}

}  // namespace ek::kernels::scalar
