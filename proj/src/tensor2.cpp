#include "epstein_kit/tensor2.hpp"

#include <cmath>

namespace ek {

namespace {

constexpr double kConformalTol = 1e-12;

void require_positive_definite(const SymTensor2& g) {
    if (!(g.m(0, 0) > 0) || !(g.m.determinant() > 0))
        throw InputError("metric is not positive definite");
}

}  // namespace

Endo2 Endo2::inverse() const {
    const double d = m.determinant();
    if (d == 0 || !std::isfinite(d)) throw DegeneratePair("endomorphism is singular");
    return {m.inverse()};
}

Eigen::Matrix2cd basis_change() {
    Eigen::Matrix2cd a;
    a << cplx(0.5, 0), cplx(0.5, 0), cplx(0, -0.5), cplx(0, 0.5);
    return a;
}

Eigen::Matrix2cd complex_matrix(const Endo2& e) {
    const Eigen::Matrix2cd a = basis_change();
    return a.inverse() * e.m.cast<cplx>() * a;
}

Eigen::Matrix2cd complex_matrix(const SymTensor2& t) {
    const Eigen::Matrix2cd a = basis_change();
    return a.transpose() * t.m.cast<cplx>() * a;
}

Complexified complexify(const SymTensor2& t) {
    const double sigma = 0.5 * (t.m(0, 0) + t.m(1, 1));
    const cplx q = 0.5 * cplx(t.m(0, 0) - sigma, -t.m(0, 1));
    return {q, sigma};
}

SymTensor2 reconstruct(const Complexified& c) {
    // q dz^2 + conj(q) dzbar^2 = 2 Re(q dz^2)
    const double a = 2.0 * c.q.real();
    const double b = -2.0 * c.q.imag();
    Mat2 m;
    m << a + c.sigma, b, b, -a + c.sigma;
    return {m};
}

Mat2 dot(const SymTensor2& t, const Endo2& e) { return e.m.transpose() * t.m; }

SymTensor2 pullback(const Endo2& a, const SymTensor2& g) { return {a.m.transpose() * g.m * a.m}; }

bool is_conformal(const SymTensor2& g) {
    const double scale = g.m.cwiseAbs().maxCoeff();
    const double tol = kConformalTol * (scale > 0 ? scale : 1.0);
    return std::abs(g.m(0, 1)) <= tol && std::abs(g.m(1, 0)) <= tol &&
           std::abs(g.m(0, 0) - g.m(1, 1)) <= tol;
}

double metric_pairing(const Mat2& t, const Endo2& e, const SymTensor2& g) {
    require_positive_definite(g);
    const Mat2 te = e.m.transpose() * t;
    const double tr = (g.m.inverse() * te).trace();
    return 0.5 * tr * std::sqrt(g.m.determinant());
}

double pairing(const SymTensor2& t, const Endo2& e, const SymTensor2& g) {
    if (!is_conformal(g)) throw InputError("pairing needs a conformal metric");
    require_positive_definite(g);
    // Tr_g and dA_g scale inversely, so only the Euclidean trace survives.
    return 0.5 * dot(t, e).trace();
}

double area_form(const SymTensor2& g) {
    if (!is_conformal(g)) throw InputError("area_form needs a conformal metric");
    require_positive_definite(g);
    return g.m(0, 0);
}

cplx beltrami_coefficient(const Endo2& e) {
    const Endo2 e0 = e.traceless();
    return complex_matrix(e0)(0, 1);
}

Strain strain(const SymTensor2& g, const SymTensor2& dg) {
    if (!is_conformal(g)) throw InputError("strain needs a conformal metric");
    if (g.m.determinant() == 0) throw InputError("singular metric");
    // dg = 2 eta^T g
    const Mat2 eta_t = 0.5 * dg.m * g.m.inverse();
    Endo2 eta{eta_t.transpose()};
    return {eta, {beltrami_coefficient(eta)}};
}

namespace {

SymTensor2 hat_metric(const SymTensor2& g, const Endo2& p) { return pullback(p, g); }

}  // namespace

InvertVariation invert_variation(const SymTensor2& g, const Endo2& p, const SymTensor2& dg,
                                 const Endo2& dp) {
    if (std::abs(p.det()) == 0) throw DegeneratePair("det P = 0");
    const Mat2 pinv = p.m.inverse();
    InvertVariation v;
    v.ghat = hat_metric(g, p);
    v.phat = {pinv};
    v.dghat = {dp.m.transpose() * g.m * p.m + p.m.transpose() * dg.m * p.m +
               p.m.transpose() * g.m * dp.m};
    v.dphat = {-pinv * dp.m * pinv};
    return v;
}

InvertVariation invert_variation_fd(const SymTensor2& g, const Endo2& p, const SymTensor2& dg,
                                    const Endo2& dp, double h) {
    if (std::abs(p.det()) == 0) throw DegeneratePair("det P = 0");
    auto at = [&](double s) {
        const SymTensor2 gs{g.m + s * dg.m};
        const Endo2 ps{p.m + s * dp.m};
        return std::pair{hat_metric(gs, ps), Endo2{ps.m.inverse()}};
    };
    const auto [gp, pp] = at(h);
    const auto [gm, pm] = at(-h);
    InvertVariation v;
    v.ghat = hat_metric(g, p);
    v.phat = {p.m.inverse()};
    v.dghat = {(gp.m - gm.m) / (2 * h)};
    v.dphat = {(pp.m - pm.m) / (2 * h)};
    return v;
}

double variation_duality_residual(const SymTensor2& g, const Endo2& p, const SymTensor2& dg,
                                  const Endo2& dp, const InvertVariation& iv) {
    const double lhs = metric_pairing(iv.ghat.m, iv.dphat, iv.ghat) +
                       metric_pairing(iv.dghat.m, iv.phat.traceless(), iv.ghat);
    const double sgn = p.det() > 0 ? 1.0 : -1.0;
    const double rhs = -sgn * (metric_pairing(g.m, dp, g) + metric_pairing(dg.m, p.traceless(), g));
    return std::abs(lhs - rhs);
}

double variation_duality_residual(const SymTensor2& g, const Endo2& p, const SymTensor2& dg,
                                  const Endo2& dp) {
    return variation_duality_residual(g, p, dg, dp, invert_variation(g, p, dg, dp));
}

}  // namespace ek
