#include "epstein_kit/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace ek::kernels {

namespace {

constexpr std::size_t kLeaf = 64;

using LeafSum = double (*)(const double*, std::size_t);
using LeafDot = double (*)(const double*, const double*, std::size_t);

LeafSum leaf_sum_for(Isa isa) {
#if EPSTEIN_KIT_HAVE_AVX2
    if (isa == Isa::avx2) return &avx2::leaf_sum;
#endif
    (void)isa;
    return &scalar::leaf_sum;
}

LeafDot leaf_dot_for(Isa isa) {
#if EPSTEIN_KIT_HAVE_AVX2
    if (isa == Isa::avx2) return &avx2::leaf_dot;
#endif
    (void)isa;
    return &scalar::leaf_dot;
}

double sum_rec(const double* x, std::size_t n, LeafSum leaf) {
    if (n <= kLeaf) return leaf(x, n);
    const std::size_t h = n / 2;
    return sum_rec(x, h, leaf) + sum_rec(x + h, n - h, leaf);
}

double dot_rec(const double* x, const double* w, std::size_t n, LeafDot leaf) {
    if (n <= kLeaf) return leaf(x, w, n);
    const std::size_t h = n / 2;
    return dot_rec(x, w, h, leaf) + dot_rec(x + h, w + h, n - h, leaf);
}

}  // namespace

bool isa_available(Isa isa) {
    if (isa == Isa::scalar) return true;
#if EPSTEIN_KIT_HAVE_AVX2
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

Isa active_isa() {
    static const Isa chosen = [] {
        const char* env = std::getenv("EPSTEIN_KIT_SIMD");
        if (env && std::strcmp(env, "scalar") == 0) return Isa::scalar;
        return isa_available(Isa::avx2) ? Isa::avx2 : Isa::scalar;
    }();
    return chosen;
}

const char* isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

double pairwise_sum(const double* x, std::size_t n, Isa isa) {
    return sum_rec(x, n, leaf_sum_for(isa_available(isa) ? isa : Isa::scalar));
}

double pairwise_dot(const double* x, const double* w, std::size_t n, Isa isa) {
    return dot_rec(x, w, n, leaf_dot_for(isa_available(isa) ? isa : Isa::scalar));
}

void zc_conjunction(const double* re_c2, const double* im_c2, std::size_t nc,
                    const double* base, const double* bound, std::size_t ntheta, double slack,
                    std::uint8_t* out, Isa isa) {
#if EPSTEIN_KIT_HAVE_AVX2
    if (isa == Isa::avx2 && isa_available(Isa::avx2)) {
        avx2::zc_conjunction(re_c2, im_c2, nc, base, bound, ntheta, slack, out);
        return;
    }
#endif
    (void)isa;
    scalar::zc_conjunction(re_c2, im_c2, nc, base, bound, ntheta, slack, out);
}

}  // namespace ek::kernels
