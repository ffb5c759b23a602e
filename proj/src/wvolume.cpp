#include "epstein_kit/wvolume.hpp"

#include <cmath>

#include "epstein_kit/duality.hpp"
#include "epstein_kit/io.hpp"
#include "epstein_kit/parallel.hpp"

namespace ek {

namespace {

void require_torus(const MetricField& m) {
    if (m.domain() != Domain::torus) throw InputError("W-volume checks run on torus metrics");
}

WValue two_level(const std::function<double(const Chart&)>& f, int n) {
    WValue w;
    w.coarse = f(Chart::torus(n, n));
    w.fine = f(Chart::torus(2 * n, 2 * n));
    w.extrapolated = richardson(w.coarse, w.fine, 2);
    return w;
}

double area(const MetricField& m, const Chart& chart) {
    return quadrature(m, chart, [](cplx) { return 1.0; });
}

}  // namespace

double w_pair(const MetricField& g0, const ScalarFieldPtr& u, const Chart& chart) {
    require_torus(g0);
    const MetricField g1 = conformal_change(g0, u);
    const double i0 = quadrature(g0, chart, [&](cplx z) { return u->jet(z).v * curvature(g0, z); });
    const double i1 = quadrature(g1, chart, [&](cplx z) { return u->jet(z).v * curvature(g1, z); });
    return -0.25 * (i0 + i1);
}

WValue w_pair(const MetricField& g0, const ScalarFieldPtr& u, int n) {
    return two_level([&](const Chart& c) { return w_pair(g0, u, c); }, n);
}

double w_scaling_check(const MetricField& g0, const ScalarFieldPtr& u, double t, double s, int n) {
    const MetricField scaled0 = conformal_change(g0, constant_field(t));
    const double a = w_pair(g0, u, n).extrapolated;
    const double b = w_pair(scaled0, sum(u, constant_field(s - t)), n).extrapolated;
    return std::abs(a - b);
}

double w_cocycle_check(const MetricField& g0, const ScalarFieldPtr& u01, const ScalarFieldPtr& u12, int n) {
    const MetricField g1 = conformal_change(g0, u01);
    const double a = w_pair(g0, u01, n).extrapolated;
    const double b = w_pair(g1, u12, n).extrapolated;
    const double c = w_pair(g0, sum(u01, u12), n).extrapolated;
    return std::abs(a + b - c);
}

DwCheck dw_conformal_check(const MetricField& g0, const ScalarFieldPtr& v, double h, int n) {
    DwCheck d;
    const double wp = w_pair(g0, scaled(v, h), n).extrapolated;
    const double wm = w_pair(g0, scaled(v, -h), n).extrapolated;
    d.central = (wp - wm) / (2 * h);
    d.exact = two_level(
                  [&](const Chart& c) {
                      return 0.25 * quadrature(g0, c, [&](cplx z) {
                                 return -2 * v->jet(z).v * curvature(g0, z) - laplacian(g0, *v, z);
                             });
                  },
                  n)
                  .extrapolated;
    d.defect = std::abs(d.central - d.exact);
    return d;
}

ScalarFieldPtr area_normalized(const MetricField& g0, const ScalarFieldPtr& v, int n) {
    const Chart c = Chart::torus(n, n);
    const double a1 = area(conformal_change(g0, v), c), a0 = area(g0, c);
    return sum(v, constant_field(-0.5 * std::log(a1 / a0)));
}

double dirichlet_energy(const MetricField& g0, const ScalarFieldPtr& u, const Chart& chart) {
    return quadrature(g0, chart, [&](cplx z) { return gradient_norm_sq(g0, *u, z); });
}

WmaxCheck wmax_check(const MetricField& g0, const ScalarFieldPtr& u, int n) {
    WmaxCheck w;
    w.w = w_pair(g0, u, n);
    w.bound = two_level([&](const Chart& c) { return -0.25 * dirichlet_energy(g0, u, c); }, n);
    w.gap = w.w.extrapolated - w.bound.extrapolated;
    return w;
}

MeanCurvatureCheck mean_curvature_integral_check(const ProjectiveStructure& s, const MetricField& m, int n) {
    require_torus(m);
    auto level = [&](const Chart& c) {
        const auto nodes = c.nodes();
        std::vector<double> h(nodes.size()), dual_area(nodes.size()), hat_area(nodes.size());
        parallel_for(nodes.size(), [&](std::size_t k) {
            const FundamentalPair p = to_dual(projective_pair(s, m, nodes[k].z));
            const double da = std::sqrt(p.g.m.determinant());
            h[k] = 0.5 * p.B.trace() * da;
            dual_area[k] = da;
            hat_area[k] = m.density(nodes[k].z);
        });
        return std::array<double, 3>{quadrature_samples(nodes, h), quadrature_samples(nodes, dual_area),
                                     quadrature_samples(nodes, hat_area)};
    };
    const auto a = level(Chart::torus(n, n)), b = level(Chart::torus(2 * n, 2 * n));
    MeanCurvatureCheck r;
    r.lhs = richardson(a[0], b[0], 2);
    r.rhs = 0.5 * richardson(a[2], b[2], 2) - richardson(a[1], b[1], 2);
    r.defect = std::abs(r.lhs - r.rhs);
    return r;
}

SchwarzianNorms schwarzian_norms(const ProjectiveStructure& s, const MetricField& hyperbolic, const Chart& chart) {
    SchwarzianNorms r;
    const double l2sq = quadrature(hyperbolic, chart, [&](cplx z) {
        const double q = norm_q(s, hyperbolic, z);
        return q * q;
    });
    r.l2 = std::sqrt(l2sq);
    for (const auto& node : chart.nodes(chart.kind == Chart::Kind::disk && hyperbolic.complete()))
        r.sup = std::max(r.sup, norm_q(s, hyperbolic, node.z));
    return r;
}

void validate(const GraftingData& d) {
    if (d.chi >= 0) throw InputError("grafting data needs chi < 0");
    if (!(d.L >= 0) || !(d.phi2 >= 0) || !(d.phiinf >= 0))
        throw InputError("grafting data needs L, phi2, phiinf >= 0");
}

GraftAreas graft_areas(const GraftingData& d, double t) {
    validate(d);
    const double ch = std::cosh(t), sh = std::sinh(t);
    const double chi_term = -2 * pi * d.chi;
    GraftAreas a;
    a.dual_h = chi_term * ch * ch - std::exp(-2 * t) * d.phi2 * d.phi2;
    a.proj = chi_term + d.L;
    a.dual_proj = chi_term * ch * ch + d.L * sh * ch;
    a.conf_gap = std::exp(2 * t) * d.L;
    a.dual_h_valid = t > 0.5 * std::log1p(2 * d.phiinf);
    return a;
}

GraftBounds graft_bounds(const GraftingData& d) {
    validate(d);
    GraftBounds b;
    const double e2t = 1 + 2 * d.phiinf;
    b.T = 0.5 * std::log(e2t);
    const double cosh2t = 0.5 * (e2t + 1 / e2t);
    b.lower = d.phi2 * d.phi2 / e2t / 2 - d.L * cosh2t / 4;
    b.upper = d.L / 4;
    return b;
}

double newbound_max(double L, double phiinf) {
    if (!(L >= 0) || !(phiinf >= 0)) throw InputError("newbound_max needs L, phiinf >= 0");
    return (1 + phiinf) * std::sqrt(L);
}

std::string graft_table_csv(const GraftingData& d, double tmax, int steps) {
    if (steps < 1) throw InputError("graft table needs at least one step");
    const GraftBounds b = graft_bounds(d);
    std::string out = "t,a_dual_h,a_proj,a_dual_proj,a_conf_gap,dual_h_valid,lower,upper,T\n";
    for (int k = 0; k <= steps; ++k) {
        const double t = tmax * k / steps;
        const GraftAreas a = graft_areas(d, t);
        out += csv_row({t, a.dual_h, a.proj, a.dual_proj, a.conf_gap, a.dual_h_valid ? 1.0 : 0.0, b.lower, b.upper,
                        b.T});
    }
    return out;
}

}  // namespace ek
