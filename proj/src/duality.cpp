#include "epstein_kit/duality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "epstein_kit/fd.hpp"
#include "epstein_kit/io.hpp"

namespace ek {

namespace {

constexpr double kSymTol = 1e-8;
constexpr double kDualTol = 1e-8;
constexpr double kCondMax = 1e12;

Mat2 deriv_x(const MetricMatrixField& g, cplx z, double h) {
    return fd::dx([&](cplx w) -> Mat2 { return g(w).m; }, z, h);
}
Mat2 deriv_y(const MetricMatrixField& g, cplx z, double h) {
    return fd::dy([&](cplx w) -> Mat2 { return g(w).m; }, z, h);
}

}  // namespace

FundamentalPair symmetrized(const FundamentalPair& p) {
    const Mat2 t = p.B.m.transpose() * p.g.m;
    const double scale = std::max(t.cwiseAbs().maxCoeff(), p.g.m.cwiseAbs().maxCoeff());
    const double asym = std::abs(t(0, 1) - t(1, 0));
    if (asym > kSymTol * scale) throw InputError("B is not symmetric with respect to g");
    const Mat2 ts = 0.5 * (t + t.transpose());
    return {p.g, {p.g.m.inverse() * ts}};
}

std::array<double, 2> principal_curvatures(const FundamentalPair& p) {
    const double tr = p.B.trace(), det = p.B.det();
    const double disc = std::sqrt(std::max(0.0, 0.25 * tr * tr - det));
    return {0.5 * tr - disc, 0.5 * tr + disc};
}

FundamentalPair to_dual(const FundamentalPair& hat_in) {
    const FundamentalPair hat = symmetrized(hat_in);
    for (double ev : principal_curvatures(hat))
        if (std::abs(ev + 1) < kDualTol) throw DegenerateDual("Bhat has eigenvalue -1", ev);
    const Mat2 a = Mat2::Identity() + hat.B.m;
    const Mat2 g = 0.25 * a.transpose() * hat.g.m * a;
    const Mat2 b = a.inverse() * (Mat2::Identity() - hat.B.m);
    return {{0.5 * (g + g.transpose())}, {b}};
}

FundamentalPair from_dual(const FundamentalPair& pair_in) {
    const FundamentalPair pair = symmetrized(pair_in);
    for (double ev : principal_curvatures(pair))
        if (std::abs(ev + 1) < kDualTol) throw DegenerateDual("B has eigenvalue -1", ev);
    const Mat2 a = Mat2::Identity() + pair.B.m;
    const Mat2 g = a.transpose() * pair.g.m * a;
    const Mat2 b = a.inverse() * (Mat2::Identity() - pair.B.m);
    return {{0.5 * (g + g.transpose())}, {b}};
}

FundamentalPair projective_pair(const ProjectiveStructure& s, const MetricField& m, cplx z) {
    const Jet2 phi = m.jet(z);
    return {SymTensor2::conformal(std::exp(2 * phi.v)), shape_operator_hat(phi, q_sigma(s, phi, z))};
}

PairField projective_pair_field(const ProjectiveStructure& s, const MetricField& m) {
    return [s, m](cplx z) { return projective_pair(s, m, z); };
}

PairField dual_pair_field(const ProjectiveStructure& s, const MetricField& m) {
    return [s, m](cplx z) { return to_dual(projective_pair(s, m, z)); };
}

double metric_curvature(const MetricMatrixField& g, cplx z, double h) {
    const Mat2 g0 = g(z).m;
    const Mat2 gx = deriv_x(g, z, h), gy = deriv_y(g, z, h);
    const double e = g0(0, 0), f = g0(0, 1), gg = g0(1, 1);
    const double eu = gx(0, 0), ev = gy(0, 0), fu = gx(0, 1), fv = gy(0, 1), gu = gx(1, 1), gv = gy(1, 1);
    auto entry = [&](int a, int b) {
        return [&g, a, b](cplx w) { return g(w).m(a, b); };
    };
    const double evv = fd::dyy(entry(0, 0), z, h);
    const double guu = fd::dxx(entry(1, 1), z, h);
    const double fuv = fd::dxy(entry(0, 1), z, h);
    Eigen::Matrix3d m1, m2;
    m1 << -0.5 * evv + fuv - 0.5 * guu, 0.5 * eu, fu - 0.5 * ev,  //
        fv - 0.5 * gu, e, f,                                      //
        0.5 * gv, f, gg;
    m2 << 0, 0.5 * ev, 0.5 * gu,  //
        0.5 * ev, e, f,           //
        0.5 * gu, f, gg;
    const double det = e * gg - f * f;
    return (m1.determinant() - m2.determinant()) / (det * det);
}

GcResidual hyperbolic_residuals(const PairField& pf, cplx z, double h) {
    const FundamentalPair p = pf(z);
    const MetricMatrixField gfield = [&pf](cplx w) { return pf(w).g; };
    const double k = metric_curvature(gfield, z, h);
    const Mat2 gx = deriv_x(gfield, z, h), gy = deriv_y(gfield, z, h);
    const Mat2 ginv = p.g.m.inverse();
    // dg[l](i, j) = d_l g_ij
    const Mat2 dg[2] = {gx, gy};
    double gamma[2][2][2];  // gamma[k][i][j]
    for (int kk = 0; kk < 2; ++kk)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                double s = 0;
                for (int l = 0; l < 2; ++l) s += ginv(kk, l) * (dg[i](l, j) + dg[j](l, i) - dg[l](i, j));
                gamma[kk][i][j] = 0.5 * s;
            }
    const Mat2 bx = fd::dx([&pf](cplx w) -> Mat2 { return pf(w).B.m; }, z, h);
    const Mat2 by = fd::dy([&pf](cplx w) -> Mat2 { return pf(w).B.m; }, z, h);
    double r[2];
    for (int kk = 0; kk < 2; ++kk) {
        double s = bx(kk, 1) - by(kk, 0);
        for (int j = 0; j < 2; ++j) s += gamma[kk][0][j] * p.B.m(j, 1) - gamma[kk][1][j] * p.B.m(j, 0);
        r[kk] = s;
    }
    return {p.B.det() - (k + 1), {r[0], r[1]}};
}

GcResidual projective_residuals(const MetricField& m, const EndoField& b, cplx z) {
    auto parts = [&](cplx w) {
        const double e2 = m.density(w);
        const SymTensor2 t{e2 * b(w).m.transpose()};
        const Complexified c = complexify({0.5 * (t.m + t.m.transpose())});
        return std::pair{c.q, -c.sigma / e2};
    };
    const double k = curvature(m, z);
    const double gauss = b(z).trace() + 2 * k;
    const cplx cod = codazzi_residual([&](cplx w) { return parts(w).first; },
                                      [&](cplx w) { return parts(w).second; }, m, z);
    return {gauss, cod};
}

GcResidual gc_residuals(const MetricField& m, const EndoField& bhat, Picture picture, cplx z) {
    if (picture == Picture::projective) return projective_residuals(m, bhat, z);
    const PairField dual = [&m, &bhat](cplx w) {
        return to_dual({SymTensor2::conformal(m.density(w)), bhat(w)});
    };
    return hyperbolic_residuals(dual, z, fd_step(m, z));
}

double flow_eigenvalue(double lambda0, double t) {
    const double th = std::tanh(t);
    return (th + lambda0) / (1 + th * lambda0);
}

FlowState normal_flow(const FundamentalPair& p_in, double t) {
    const FundamentalPair p = symmetrized(p_in);
    const Mat2 id = Mat2::Identity();
    const Mat2 a = std::cosh(t) * id + std::sinh(t) * p.B.m;
    const Mat2 c = std::sinh(t) * id + std::cosh(t) * p.B.m;
    Eigen::JacobiSVD<Mat2> svd(a);
    const auto sv = svd.singularValues();
    // Relative to the size of the terms, so that A_t = 0 (umbilic B) is caught too.
    const double scale = std::cosh(t) + std::abs(std::sinh(t)) * p.B.m.norm();
    if (!(sv(1) > 0) || sv(0) / sv(1) > kCondMax || sv(1) < scale / kCondMax) {
        std::ostringstream os;
        os.precision(17);
        os << "A_t is singular at t = " << t;
        throw SingularTime(os.str(), t);
    }
    const Mat2 g = a.transpose() * p.g.m * a;
    return {t, {{0.5 * (g + g.transpose())}, {a.inverse() * c}}};
}

double convexity_time(const ProjectiveStructure& s, const MetricField& m, const Chart& chart) {
    const auto nodes = chart.nodes(chart.kind == Chart::Kind::disk && m.complete());
    if (nodes.empty()) throw InputError("empty grid");
    double sup = 0;
    for (const auto& n : nodes) {
        const Jet2 phi = m.jet(n.z);
        const double k = curvature(phi);
        const double nq = std::abs(q_sigma(s, phi, n.z)) * std::exp(-2 * phi.v);
        sup = std::max(sup, std::abs(k) + 4 * nq);
    }
    if (!(sup > 0)) throw InputError("|K| + 4|Q| vanishes on the grid; no finite convexity time");
    return 0.5 * std::log(sup);
}

FormsResidual dual_forms_check(const ProjectiveStructure& s, const MetricField& m, cplx z) {
    const FundamentalPair hat = projective_pair(s, m, z);
    const FundamentalPair dual = to_dual(hat);
    const double eps = (Mat2::Identity() + hat.B.m).determinant() > 0 ? 1.0 : -1.0;
    const PairField pf = dual_pair_field(s, m);
    const double kg = metric_curvature([&pf](cplx w) { return pf(w).g; }, z, fd_step(m, z));
    const double da = std::sqrt(dual.g.m.determinant());
    const double dahat = m.density(z);
    const double khat = curvature(m, z);
    const double h = 0.5 * dual.B.trace();
    return {std::abs(kg * da - eps * khat * dahat), std::abs(h * da - 0.25 * eps * (1 - hat.B.det()) * dahat)};
}

std::string flow_trace_csv(const FundamentalPair& p, double tmax, int steps) {
    if (steps < 1) throw InputError("flow trace needs at least one step");
    std::string out = "t,lambda1,lambda2,det_g\n";
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (int k = 0; k <= steps; ++k) {
        const double t = tmax * k / steps;
        try {
            const FlowState st = normal_flow(p, t);
            const auto ev = principal_curvatures(st.pair);
            out += csv_row({t, ev[0], ev[1], st.pair.g.m.determinant()});
        } catch (const SingularTime&) {
            out += csv_row({t, nan, nan, nan});
        }
    }
    return out;
}

}  // namespace ek
