#pragma once

// Data-parallel inner loops. Each kernel has a scalar reference and an AVX2
// variant that performs the same floating-point operations lane by lane, so
// the two agree bit for bit. The variant is picked once at runtime.

#include <cstddef>
#include <cstdint>

namespace ek::kernels {

enum class Isa { scalar, avx2 };

// Best available ISA, unless EPSTEIN_KIT_SIMD=scalar forces the reference path.
Isa active_isa();
const char* isa_name(Isa isa);
bool isa_available(Isa isa);

// Pairwise summation with 4-lane leaves of at most 64 elements.
double pairwise_sum(const double* x, std::size_t n, Isa isa = active_isa());
// Pairwise sum of x[i] * w[i].
double pairwise_dot(const double* x, const double* w, std::size_t n, Isa isa = active_isa());

// For each c with c^2 = (re_c2[k], im_c2[k]): out[k] = 1 iff for every theta sample j
// |base[j] + c^2| <= bound[j] + slack.
void zc_conjunction(const double* re_c2, const double* im_c2, std::size_t nc,
                    const double* base, const double* bound, std::size_t ntheta, double slack,
                    std::uint8_t* out, Isa isa = active_isa());

namespace scalar {
double leaf_sum(const double* x, std::size_t n);
double leaf_dot(const double* x, const double* w, std::size_t n);
void zc_conjunction(const double* re_c2, const double* im_c2, std::size_t nc,
                    const double* base, const double* bound, std::size_t ntheta, double slack,
                    std::uint8_t* out);
}  // namespace scalar

namespace avx2 {
double leaf_sum(const double* x, std::size_t n);
double leaf_dot(const double* x, const double* w, std::size_t n);
void zc_conjunction(const double* re_c2, const double* im_c2, std::size_t nc,
                    const double* base, const double* bound, std::size_t ntheta, double slack,
                    std::uint8_t* out);
}  // namespace avx2

}  // namespace ek::kernels
