#pragma once

#include <string>

#include "epstein_kit/field.hpp"
#include "epstein_kit/schwarzian.hpp"

namespace ek {

// Quadrature at n and 2n nodes per side and the Richardson value.
struct WValue {
    double coarse = 0, fine = 0, extrapolated = 0;
};

// W(g0, e^{2u} g0) = -1/4 int u (K0 dA0 + K1 dA1) on the unit torus chart.
double w_pair(const MetricField& g0, const ScalarFieldPtr& u, const Chart& chart);
WValue w_pair(const MetricField& g0, const ScalarFieldPtr& u, int n = 128);

// |W(g0, g1) - W(e^{2t} g0, e^{2s} g1)|; the chi term vanishes on the torus.
double w_scaling_check(const MetricField& g0, const ScalarFieldPtr& u, double t, double s, int n = 128);
// |W(g0, g1) + W(g1, g2) - W(g0, g2)| with g1 = e^{2 u01} g0, g2 = e^{2 u12} g1.
double w_cocycle_check(const MetricField& g0, const ScalarFieldPtr& u01, const ScalarFieldPtr& u12, int n = 128);

struct DwCheck {
    double central = 0;  // (W(g0, h v) - W(g0, -h v)) / 2h
    double exact = 0;    // 1/4 int (-2 v K - Lap v) dA
    double defect = 0;
};
DwCheck dw_conformal_check(const MetricField& g0, const ScalarFieldPtr& v, double h, int n = 128);

// u = v - 1/2 log(int e^{2v} dA0 / int dA0), so that e^{2u} g0 has the area of g0.
ScalarFieldPtr area_normalized(const MetricField& g0, const ScalarFieldPtr& v, int n = 256);

double dirichlet_energy(const MetricField& g0, const ScalarFieldPtr& u, const Chart& chart);

struct WmaxCheck {
    WValue w;
    WValue bound;  // -1/4 ||grad u||^2
    double gap = 0;  // extrapolated w - extrapolated bound
};
WmaxCheck wmax_check(const MetricField& g0, const ScalarFieldPtr& u, int n = 128);

struct MeanCurvatureCheck {
    double lhs = 0;  // int H dA_g
    double rhs = 0;  // area(m) / 2 - area(g)
    double defect = 0;
};
MeanCurvatureCheck mean_curvature_integral_check(const ProjectiveStructure& s, const MetricField& m, int n = 128);

// ||Phi||_2 and ||Phi||_inf of q_sigma against a hyperbolic metric m_h, with
// ||Phi||_2^2 = int (|q| e^{-2 phi_h})^2 dA_h.
struct SchwarzianNorms {
    double l2 = 0, sup = 0;
};
SchwarzianNorms schwarzian_norms(const ProjectiveStructure& s, const MetricField& hyperbolic, const Chart& chart);

struct GraftingData {
    int chi = -2;
    double L = 0, phi2 = 0, phiinf = 0;
};
void validate(const GraftingData& d);

struct GraftAreas {
    double dual_h = 0, proj = 0, dual_proj = 0, conf_gap = 0;
    bool dual_h_valid = false;  // t > 1/2 log(1 + 2 phiinf)
};
GraftAreas graft_areas(const GraftingData& d, double t);

struct GraftBounds {
    double lower = 0, upper = 0, T = 0;
};
GraftBounds graft_bounds(const GraftingData& d);

// (1 + phiinf) sqrt(L)
double newbound_max(double L, double phiinf);

std::string graft_table_csv(const GraftingData& d, double tmax, int steps);

}  // namespace ek
