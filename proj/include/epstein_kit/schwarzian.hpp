#pragma once

#include <functional>
#include <memory>
#include <string>

#include "epstein_kit/field.hpp"
#include "epstein_kit/tensor2.hpp"

namespace ek {

// Value and first three derivatives of a holomorphic map at a point.
struct HoloJet {
    cplx f, f1, f2, f3;
};

class HolomorphicMap {
public:
    virtual ~HolomorphicMap() = default;
    virtual HoloJet jet(cplx z) const = 0;
    virtual bool inside(cplx) const { return true; }
    virtual std::string name() const = 0;
};

using HolomorphicMapPtr = std::shared_ptr<const HolomorphicMap>;

// Projective structure given by a locally univalent developing map on a chart.
struct ProjectiveStructure {
    HolomorphicMapPtr f;
    bool identity = false;

    std::string name() const { return f->name(); }
    // Throws DomainError outside the map's domain, CriticalPoint where f' = 0.
    HoloJet jet(cplx z) const;
};

namespace structures {
HolomorphicMapPtr identity_map();
// Principal branch of z^c on the upper half plane.
HolomorphicMapPtr power_map(cplx c);
HolomorphicMapPtr moebius_map(cplx a, cplx b, cplx c, cplx d);
HolomorphicMapPtr exp_map();
// The Moebius map i(1 + w)/(1 - w) from the unit disk to the upper half plane.
HolomorphicMapPtr cayley_map();
HolomorphicMapPtr compose(HolomorphicMapPtr outer, HolomorphicMapPtr inner);

ProjectiveStructure identity();
ProjectiveStructure power(cplx c);
ProjectiveStructure moebius(cplx a, cplx b, cplx c, cplx d);
ProjectiveStructure from_map(HolomorphicMapPtr f);
// "identity", "power:c", "moebius:a,b,c,d", "exp"; complex numbers as re or re+imi.
ProjectiveStructure by_name(const std::string& spec);
}  // namespace structures

cplx parse_complex(const std::string& s);

cplx schwarzian_derivative(const HoloJet& j);
cplx schwarzian_derivative(const HolomorphicMap& f, cplx z);
// 2-jet of (1/2) log|f'|^2 = Re log f'.
Jet2 half_log_abs_derivative_sq(const HoloJet& j);

// Q(f; g_phi) = f_zz - 2 phi_z f_z - f_z^2 for the metric change e^{2f} g_phi.
cplx os_q(const Jet2& base_phi, const Jet2& f);
cplx os_q(const MetricField& base, const ScalarField& f, cplx z);

// Q(Sigma, m) = Q(g_euc, m) - Sf / 2.
cplx q_sigma(const ProjectiveStructure& s, const MetricField& m, cplx z);
cplx q_sigma(const ProjectiveStructure& s, const Jet2& phi, cplx z);

// Bhat = -K Id + 4 e^{-2 phi} [[Re Q, -Im Q], [-Im Q, -Re Q]], so that m.Bhat = 2 OS - K m.
Endo2 shape_operator_hat(const Jet2& phi, cplx q);
Endo2 shape_operator_hat(const ProjectiveStructure& s, const MetricField& m, cplx z);
double norm_q(const ProjectiveStructure& s, const MetricField& m, cplx z);

// 2 r_zbar + s_z e^{2 phi}, derivatives by 4th-order differences.
cplx codazzi_residual(const std::function<cplx(cplx)>& r, const std::function<double(cplx)>& s,
                      const MetricField& m, cplx z);
// d/dzbar of q_sigma by 4th-order differences.
cplx q_sigma_zbar(const ProjectiveStructure& s, const MetricField& m, cplx z);

// Finite-difference step used for derivatives of derived fields at z.
double fd_step(const MetricField& m, cplx z);

// Rows (x, y, Re q, Im q, |q| e^{-2 phi}) of q_sigma over the chart.
struct QuadDiffSample {
    cplx z;
    cplx q;
    double norm;
};
std::vector<QuadDiffSample> sample_quad_diff(const ProjectiveStructure& s, const MetricField& m,
                                             const Chart& chart);
std::string quad_diff_csv(const std::vector<QuadDiffSample>& rows);

}  // namespace ek
