#pragma once

#include <array>
#include <functional>
#include <string>

#include "epstein_kit/schwarzian.hpp"
#include "epstein_kit/tensor2.hpp"

namespace ek {

// Metric g and shape operator B, with B symmetric with respect to g.
struct FundamentalPair {
    SymTensor2 g;
    Endo2 B;
};

struct FlowState {
    double t;
    FundamentalPair pair;
};

using PairField = std::function<FundamentalPair(cplx)>;
using EndoField = std::function<Endo2(cplx)>;
using MetricMatrixField = std::function<SymTensor2(cplx)>;

enum class Picture { hyperbolic, projective };

// Repairs g.B asymmetry below 1e-8 (relative); larger asymmetry is an InputError.
FundamentalPair symmetrized(const FundamentalPair& p);
// Eigenvalues of B, ascending.
std::array<double, 2> principal_curvatures(const FundamentalPair& p);

// (ghat, Bhat) -> (1/4 (Id + Bhat)^* ghat, (Id + Bhat)^-1 (Id - Bhat)).
FundamentalPair to_dual(const FundamentalPair& hat);
// (g, B) -> ((Id + B)^* g, (Id + B)^-1 (Id - B)).
FundamentalPair from_dual(const FundamentalPair& pair);

// (e^{2 phi} Id, Bhat) at z.
FundamentalPair projective_pair(const ProjectiveStructure& s, const MetricField& m, cplx z);
PairField projective_pair_field(const ProjectiveStructure& s, const MetricField& m);
PairField dual_pair_field(const ProjectiveStructure& s, const MetricField& m);

// Gaussian curvature of a general metric field by the Brioschi formula,
// derivatives by 4th-order differences with step h.
double metric_curvature(const MetricMatrixField& g, cplx z, double h);

struct GcResidual {
    double gauss;
    cplx codazzi;
};

// det B - (K(g) + 1) and d^nabla B (d/dx, d/dy) packed as (first + i second component).
GcResidual hyperbolic_residuals(const PairField& pf, cplx z, double h);
// Tr B + 2K and 2 r_zbar + s_z e^{2 phi} for m.B = r dz^2 + conj(r) dzbar^2 - s m.
GcResidual projective_residuals(const MetricField& m, const EndoField& b, cplx z);
// Projective picture: residuals of (m, bhat). Hyperbolic picture: residuals of the dual pair.
GcResidual gc_residuals(const MetricField& m, const EndoField& bhat, Picture picture, cplx z);

double flow_eigenvalue(double lambda0, double t);
// g_t = A_t^* g, B_t = A_t^-1 C_t; SingularTime when cond(A_t) > 1e12.
FlowState normal_flow(const FundamentalPair& p, double t);

// 1/2 log of the grid supremum of |K| + 4 |Q|.
double convexity_time(const ProjectiveStructure& s, const MetricField& m, const Chart& chart);

struct FormsResidual {
    double r1, r2;
};
// K(g) dA_g = eps K(ghat) dA_ghat and H dA_g = eps/4 (1 - det Bhat) dA_ghat at z.
FormsResidual dual_forms_check(const ProjectiveStructure& s, const MetricField& m, cplx z);

// CSV rows (t, lambda1, lambda2, det g_t) for t in [0, tmax]; singular rows carry nan.
std::string flow_trace_csv(const FundamentalPair& p, double tmax, int steps);

}  // namespace ek
