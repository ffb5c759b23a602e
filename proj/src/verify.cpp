#include "epstein_kit/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "epstein_kit/duality.hpp"
#include "epstein_kit/epstein.hpp"
#include "epstein_kit/fd.hpp"
#include "epstein_kit/io.hpp"
#include "epstein_kit/univalence.hpp"
#include "epstein_kit/wvolume.hpp"

namespace ek {

namespace {

struct Check {
    std::string lemma, what;
    double tolerance;
    std::function<double()> run;
    bool at_least = false;
};

using Rng = std::mt19937_64;

double uniform(Rng& rng, double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }

// Points well inside the natural domain of m.
std::vector<cplx> sample_points(const MetricField& m, int n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<cplx> out;
    while (int(out.size()) < n) {
        cplx z;
        switch (m.domain()) {
            case Domain::disk: z = std::polar(std::sqrt(uniform(rng, 0, 0.8)), uniform(rng, 0, 2 * pi)); break;
            case Domain::uhp: z = {uniform(rng, -1, 1), uniform(rng, 0.2, 2)}; break;
            case Domain::torus: z = {uniform(rng, 0, 1), uniform(rng, 0, 1)}; break;
            default: z = {uniform(rng, -1, 1), uniform(rng, -1, 1)}; break;
        }
        if (m.inside(z)) out.push_back(z);
    }
    return out;
}

std::vector<MetricField> catalog_metrics(bool with_spherical) {
    std::vector<MetricField> out;
    for (const auto& n : catalog::names())
        if (with_spherical || n != "spherical") out.push_back(catalog::by_name(n));
    return out;
}

double max_over(const std::vector<cplx>& zs, const std::function<double(cplx)>& f) {
    double worst = 0;
    for (cplx z : zs) worst = std::max(worst, f(z));
    return worst;
}

Mat2 random_spd(Rng& rng) {
    Mat2 a;
    a << uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1);
    return a * a.transpose() + 0.5 * Mat2::Identity();
}

Mat2 random_matrix(Rng& rng) {
    Mat2 a;
    a << uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1);
    return a;
}

Mat2 random_sym(Rng& rng) {
    const Mat2 a = random_matrix(rng);
    return 0.5 * (a + a.transpose());
}

struct Variation {
    SymTensor2 g;
    Endo2 p;
    SymTensor2 dg;
    Endo2 dp;
};

// P = g^-1 S with S symmetric stays g-symmetric along g + t dg, S + t dS.
Variation random_symmetric_variation(Rng& rng) {
    Variation v;
    v.g = {random_spd(rng)};
    Mat2 s;
    do s = random_sym(rng) * 2.0;
    while (std::abs(s.determinant()) < 0.1);
    const Mat2 gi = v.g.m.inverse();
    v.p = {gi * s};
    v.dg = {random_sym(rng)};
    v.dp = {gi * random_sym(rng) - gi * v.dg.m * gi * s};
    return v;
}

ScalarFieldPtr test_u() {
    return std::make_shared<TrigField>(0.1, std::vector<TrigTerm>{{0.3, 1, 0, 0.2}, {0.2, 1, -1, 0.5}, {0.15, 0, 2, 1.0}});
}

ScalarFieldPtr test_v() {
    return std::make_shared<TrigField>(0.0, std::vector<TrigTerm>{{0.2, 2, 1, 0.1}, {0.25, 0, 1, 0.7}});
}

std::vector<Check> tensor2_checks() {
    std::vector<Check> c;
    c.push_back({"2tensor", "complexify then reconstruct is the identity", 1e-12, [] {
                     Rng rng(11);
                     double worst = 0;
                     for (int k = 0; k < 500; ++k) {
                         const SymTensor2 t{random_sym(rng)};
                         worst = std::max(worst, (reconstruct(complexify(t)).m - t.m).norm());
                     }
                     const Complexified d = complexify(SymTensor2{Eigen::Vector2d(1, -1).asDiagonal()});
                     return std::max(worst, std::abs(d.q - 0.5) + std::abs(d.sigma));
                 }});
    c.push_back({"traceformula", "Tr T = 2 sigma", 1e-12, [] {
                     Rng rng(12);
                     double worst = 0;
                     for (int k = 0; k < 500; ++k) {
                         const SymTensor2 t{random_sym(rng)};
                         worst = std::max(worst, std::abs(t.m.trace() - 2 * complexify(t).sigma));
                     }
                     return worst;
                 }});
    c.push_back({"areaformula", "dA = 2 g(d/dz, d/dzbar) for conformal g", 1e-12, [] {
                     double worst = 0;
                     for (double phi : {-1.0, 0.0, 0.3, 2.0}) {
                         const SymTensor2 g = SymTensor2::conformal(std::exp(2 * phi));
                         const double via_complex = 2 * complex_matrix(g)(0, 1).real();
                         worst = std::max({worst, std::abs(area_form(g) - std::exp(2 * phi)) / std::exp(2 * phi),
                                           std::abs(via_complex - area_form(g)) / std::exp(2 * phi)});
                     }
                     return worst;
                 }});
    c.push_back({"pairing", "traceless T pairs only with the traceless part of E", 1e-12, [] {
                     Rng rng(13);
                     double worst = 0;
                     for (int k = 0; k < 500; ++k) {
                         Mat2 t = random_sym(rng);
                         t -= 0.5 * t.trace() * Mat2::Identity();
                         const Endo2 e{random_matrix(rng)};
                         const SymTensor2 g = SymTensor2::conformal(uniform(rng, 0.2, 3));
                         worst = std::max(worst, std::abs(pairing({t}, e, g) - pairing({t}, e.traceless(), g)));
                     }
                     return worst;
                 }});
    c.push_back({"invert", "variational duality, exact induced variations", 1e-9, [] {
                     Rng rng(14);
                     double worst = 0;
                     for (int k = 0; k < 1000; ++k) {
                         const auto v = random_symmetric_variation(rng);
                         worst = std::max(worst, variation_duality_residual(v.g, v.p, v.dg, v.dp));
                     }
                     return worst;
                 }});
    c.push_back({"invert", "variational duality, difference quotients", 1e-5, [] {
                     Rng rng(15);
                     double worst = 0;
                     for (int k = 0; k < 1000; ++k) {
                         const auto v = random_symmetric_variation(rng);
                         worst = std::max(worst, variation_duality_residual(v.g, v.p, v.dg, v.dp,
                                                                            invert_variation_fd(v.g, v.p, v.dg, v.dp)));
                     }
                     return worst;
                 }});
    return c;
}

std::vector<Check> field_checks() {
    std::vector<Check> c;
    c.push_back({"scaling", "K(e^{2s} m) = e^{-2s} K(m)", 1e-12, [] {
                     double worst = 0;
                     for (const auto& m : catalog_metrics(true)) {
                         const MetricField ms = conformal_change(m, constant_field(0.37));
                         worst = std::max(worst, max_over(sample_points(m, 50, 21), [&](cplx z) {
                                              return std::abs(curvature(ms, z) - std::exp(-0.74) * curvature(m, z)) /
                                                     std::max(1.0, std::abs(curvature(m, z)));
                                          }));
                     }
                     return worst;
                 }});
    c.push_back({"green", "int u Lap u dA + ||grad u||^2 = 0 on the torus", 1e-10, [] {
                     const MetricField m = catalog::torus_bump();
                     const auto u = test_u();
                     const Chart ch = Chart::torus(128, 128);
                     return std::abs(quadrature(m, ch, [&](cplx z) { return u->jet(z).v * laplacian(m, *u, z); }) +
                                     dirichlet_energy(m, u, ch));
                 }});
    c.push_back({"gauss-bonnet", "int K dA = 0 on the torus", 1e-10, [] {
                     const MetricField m = catalog::torus_bump();
                     return std::abs(quadrature(m, Chart::torus(128, 128), [&](cplx z) { return curvature(m, z); }));
                 }});
    return c;
}

std::vector<cplx> disk_points(int n, std::uint64_t seed) { return sample_points(catalog::hyperbolic_disk(), n, seed); }

std::vector<Check> schwarzian_checks() {
    std::vector<Check> c;
    c.push_back({"OS_properties", "Q(euclidean, hyperbolic disk) = 0", 1e-10, [] {
                     const MetricField e = catalog::euclidean();
                     const auto phi = catalog::hyperbolic_disk().phi();
                     return max_over(disk_points(1000, 31), [&](cplx z) { return std::abs(os_q(e, *phi, z)); });
                 }});
    c.push_back({"OS_properties", "os_q(euclidean, log|f'|) = Sf / 2", 1e-9, [] {
                     const std::vector<HolomorphicMapPtr> maps{structures::moebius_map(2, cplx(0.3, 1), cplx(0.2, -0.1), 1),
                                                               structures::power_map(cplx(1.3, 0.4)),
                                                               structures::exp_map()};
                     double worst = 0;
                     const auto zs = sample_points(catalog::hyperbolic_uhp(), 1000, 32);
                     for (const auto& f : maps)
                         worst = std::max(worst, max_over(zs, [&](cplx z) {
                                              const HoloJet j = f->jet(z);
                                              const cplx lhs = os_q(Jet2::constant(0), half_log_abs_derivative_sq(j));
                                              return std::abs(lhs - 0.5 * schwarzian_derivative(j));
                                          }));
                     return worst;
                 }});
    c.push_back({"OS_properties", "cocycle over catalog triples", 1e-9, [] {
                     auto triple = [](MetricField a, MetricField b, MetricField m2, std::uint64_t seed) {
                         const auto ab = difference(b.phi(), a.phi()), bc = difference(m2.phi(), b.phi()),
                                    ac = difference(m2.phi(), a.phi());
                         return max_over(sample_points(a.domain() == Domain::plane ? b : a, 300, seed), [&](cplx z) {
                             return std::abs(os_q(a, *ab, z) + os_q(b, *bc, z) - os_q(a, *ac, z));
                         });
                     };
                     return std::max({triple(catalog::euclidean(), catalog::hyperbolic_disk(), catalog::spherical(), 33),
                                      triple(catalog::hyperbolic_uhp(), catalog::by_name("powercone:double-log-sin"),
                                             catalog::euclidean(), 34),
                                      triple(catalog::hyperbolic_disk(), catalog::disk_bump(), catalog::spherical(), 35)});
                 }});
    c.push_back({"Bevals", "eigenvalues of Bhat are -K +- 4||Q||", 1e-10, [] {
                     double worst = 0;
                     for (const auto& m : catalog_metrics(true)) {
                         std::vector<ProjectiveStructure> ss{structures::identity()};
                         if (m.domain() == Domain::uhp) ss.push_back(structures::power(cplx(1.2, 0.3)));
                         for (const auto& s : ss)
                             worst = std::max(worst, max_over(sample_points(m, 200, 36), [&](cplx z) {
                                                  const Endo2 b = shape_operator_hat(s, m, z);
                                                  Eigen::SelfAdjointEigenSolver<Mat2> es(b.m);
                                                  const double k = curvature(m, z), q = norm_q(s, m, z);
                                                  const double scale = std::max(1.0, std::abs(k) + 4 * q);
                                                  return std::max(std::abs(es.eigenvalues()(0) - (-k - 4 * q)),
                                                                  std::abs(es.eigenvalues()(1) - (-k + 4 * q))) /
                                                         scale;
                                              }));
                     }
                     return worst;
                 }});
    c.push_back({"hyp_hol", "dQ/dzbar = 0 for constant curvature metrics", 1e-6, [] {
                     double worst = 0;
                     for (const char* n : {"euclidean", "hyperbolic-disk", "hyperbolic-uhp", "spherical"}) {
                         const MetricField m = catalog::by_name(n);
                         worst = std::max(worst, max_over(sample_points(m, 100, 37), [&](cplx z) {
                                              return std::abs(q_sigma_zbar(structures::identity(), m, z));
                                          }));
                     }
                     return worst;
                 }});
    c.push_back({"hyp_hol", "dQ/dzbar is visible for the torus bump", 1e-2,
                 [] {
                     const MetricField m = catalog::torus_bump();
                     return max_over(sample_points(m, 100, 38),
                                     [&](cplx z) { return std::abs(q_sigma_zbar(structures::identity(), m, z)); });
                 },
                 true});
    c.push_back({"dnabla_calc", "2 Q_zbar = -1/2 K_z e^{2 phi}", 1e-5, [] {
                     double worst = 0;
                     for (const auto& m : catalog_metrics(true)) {
                         const auto s = structures::identity();
                         // Projective Codazzi for (r, s) = (2Q, K).
                         auto r = [&](cplx w) { return 2.0 * q_sigma(s, m, w); };
                         auto k = [&](cplx w) { return curvature(m, w); };
                         worst = std::max(worst, max_over(sample_points(m, 50, 39), [&](cplx z) {
                                              return std::abs(codazzi_residual(r, k, m, z));
                                          }));
                     }
                     return worst;
                 }});
    return c;
}

std::vector<std::pair<MetricField, ProjectiveStructure>> duality_cases() {
    std::vector<std::pair<MetricField, ProjectiveStructure>> out;
    for (const auto& m : catalog_metrics(false)) {
        out.push_back({m, structures::identity()});
        if (m.domain() == Domain::uhp) out.push_back({m, structures::power(cplx(1.2, 0.3))});
    }
    return out;
}

std::vector<Check> duality_checks() {
    std::vector<Check> c;
    c.push_back({"duality", "hyperbolic Gauss-Codazzi residuals of the dual pair", 1e-7, [] {
                     double worst = 0;
                     for (const auto& [m, s] : duality_cases()) {
                         const EndoField b = [&](cplx z) { return shape_operator_hat(s, m, z); };
                         worst = std::max(worst, max_over(sample_points(m, 30, 41), [&](cplx z) {
                                              const GcResidual r = gc_residuals(m, b, Picture::hyperbolic, z);
                                              return std::max(std::abs(r.gauss), std::abs(r.codazzi));
                                          }));
                     }
                     return worst;
                 }});
    c.push_back({"proj_GC", "projective Gauss-Codazzi residuals", 1e-7, [] {
                     double worst = 0;
                     for (const auto& [m, s] : duality_cases()) {
                         const EndoField b = [&](cplx z) { return shape_operator_hat(s, m, z); };
                         worst = std::max(worst, max_over(sample_points(m, 30, 42), [&](cplx z) {
                                              const GcResidual r = gc_residuals(m, b, Picture::projective, z);
                                              return std::max(std::abs(r.gauss), std::abs(r.codazzi));
                                          }));
                     }
                     return worst;
                 }});
    c.push_back({"Bt-evals", "eigenvalues of B_t follow the tanh law", 1e-10, [] {
                     Rng rng(43);
                     double worst = 0;
                     int done = 0;
                     while (done < 1000) {
                         const SymTensor2 g{random_spd(rng)};
                         // B symmetric for g: B = g^-1 S.
                         const Endo2 b{g.m.inverse() * random_sym(rng) * 2.0};
                         const double t = uniform(rng, -2, 2);
                         const auto l0 = principal_curvatures({g, b});
                         bool near = false;
                         for (double l : l0)
                             if (std::abs(std::cosh(t) + std::sinh(t) * l) < 1e-2 * std::cosh(t)) near = true;
                         if (near) continue;
                         const auto lt = principal_curvatures(normal_flow({g, b}, t).pair);
                         std::array<double, 2> ex{flow_eigenvalue(l0[0], t), flow_eigenvalue(l0[1], t)};
                         std::sort(ex.begin(), ex.end());
                         worst = std::max({worst, std::abs(lt[0] - ex[0]) / std::max(1.0, std::abs(ex[0])),
                                           std::abs(lt[1] - ex[1]) / std::max(1.0, std::abs(ex[1]))});
                         ++done;
                     }
                     return worst;
                 }});
    c.push_back({"dual flow", "dual of (e^{2t} ghat, e^{-2t} Bhat) is the normal flow of the dual", 1e-10, [] {
                     double worst = 0;
                     for (const auto& [m, s] : duality_cases())
                         for (double t : {0.25, 0.8})
                             worst = std::max(worst, max_over(sample_points(m, 10, 44), [&](cplx z) {
                                                  const FundamentalPair hat = projective_pair(s, m, z);
                                                  const FundamentalPair scaled{{std::exp(2 * t) * hat.g.m},
                                                                               {std::exp(-2 * t) * hat.B.m}};
                                                  const FundamentalPair a = to_dual(scaled);
                                                  const FundamentalPair b = normal_flow(to_dual(hat), t).pair;
                                                  return ((a.g.m - b.g.m).norm() + (a.B.m - b.B.m).norm()) /
                                                         std::max(1.0, a.g.m.norm() + a.B.m.norm());
                                              }));
                     return worst;
                 }});
    c.push_back({"forms", "K dA and H dA of the dual pair", 1e-6, [] {
                     double worst = 0;
                     for (const auto& [m, s] : duality_cases())
                         worst = std::max(worst, max_over(sample_points(m, 20, 45), [&](cplx z) {
                                              const FormsResidual r = dual_forms_check(s, m, z);
                                              return std::max(r.r1, r.r2);
                                          }));
                     return worst;
                 }});
    return c;
}

std::vector<Check> epstein_checks() {
    std::vector<Check> c;
    c.push_back({"epstein_equal", "Bonnet transport agrees with the envelope", 1e-6, [] {
                     double worst = 0;
                     for (const auto& m : {catalog::hyperbolic_disk(), catalog::disk_bump()}) {
                         const auto s = structures::identity();
                         const Chart ch = Chart::rectangle(-0.4, 0.4, -0.4, 0.4, 9, 9);
                         const auto pts = bonnet_grid(m, s, ch, 4, 4, 0.0);
                         const Eigen::Matrix4d l = epstein_frame(m, s, 0);
                         const auto nodes = ch.nodes();
                         for (std::size_t k = 0; k < nodes.size(); ++k)
                             worst = std::max(worst, (l * pts[k] - epstein_point(m, nodes[k].z).p).norm());
                     }
                     return worst;
                 }});
    c.push_back({"curv_tensor", "transport is path independent", 1e-7, [] {
                     const MetricField m = catalog::disk_bump();
                     const auto s = structures::identity();
                     const MinkVec a = bonnet_integrate(m, s, {0, cplx(0.4, 0), cplx(0.4, 0.3)}, 0.2);
                     const MinkVec b = bonnet_integrate(m, s, {0, cplx(0, 0.3), cplx(0.4, 0.3)}, 0.2);
                     return (a - b).norm();
                 }});
    c.push_back({"epstein_equal", "first fundamental form of the envelope is the dual metric", 1e-5, [] {
                     double worst = 0;
                     for (const auto& m : catalog_metrics(false))
                         worst = std::max(worst, max_over(sample_points(m, 10, 51), [&](cplx z) {
                                              const EpsteinJet j = epstein_point(m, z);
                                              const double h = fd_step(m, z);
                                              auto p = [&](cplx w) -> MinkVec { return epstein_point(m, w).p; };
                                              const MinkVec px = fd::dx(p, z, h), py = fd::dy(p, z, h);
                                              Mat2 g;
                                              g << mink(px, px), mink(px, py), mink(px, py), mink(py, py);
                                              return (g - j.pair.g.m).norm() / j.pair.g.m.norm();
                                          }));
                     return worst;
                 }});
    c.push_back({"epstein_equal", "dn = dp B", 1e-4, [] {
                     double worst = 0;
                     for (const auto& m : catalog_metrics(false))
                         worst = std::max(worst, max_over(sample_points(m, 10, 52), [&](cplx z) {
                                              const EpsteinJet j = epstein_point(m, z);
                                              const double h = fd_step(m, z);
                                              auto p = [&](cplx w) -> MinkVec { return epstein_point(m, w).p; };
                                              auto n = [&](cplx w) -> MinkVec { return epstein_point(m, w).n; };
                                              const MinkVec px = fd::dx(p, z, h), py = fd::dy(p, z, h);
                                              const Mat2& b = j.pair.B.m;
                                              const MinkVec ex = fd::dx(n, z, h) - (b(0, 0) * px + b(1, 0) * py);
                                              const MinkVec ey = fd::dy(n, z, h) - (b(0, 1) * px + b(1, 1) * py);
                                              return std::max(ex.norm(), ey.norm()) / (px.norm() + py.norm());
                                          }));
                     return worst;
                 }});
    c.push_back({"proj_immersion", "visual metric pulled back from p is ghat", 1e-4, [] {
                     double worst = 0;
                     for (const auto& m : catalog_metrics(false))
                         worst = std::max(worst, max_over(sample_points(m, 10, 53), [&](cplx z) {
                                              const EpsteinJet j = epstein_point(m, z);
                                              const SymTensor2 v =
                                                  visual_metric_pullback(j.p, structures::identity(), z, fd_step(m, z));
                                              return (v.m - j.hat.g.m).norm() / j.hat.g.m.norm();
                                          }));
                     return worst;
                 }});
    c.push_back({"equivalent_proj", "first Gauss map is the identity", 1e-8, [] {
                     double worst = 0;
                     for (const auto& m : catalog_metrics(false))
                         worst = std::max(worst, max_over(sample_points(m, 100, 54), [&](cplx z) {
                                              return std::abs(gauss_maps(epstein_point(m, z)).plus.z - z);
                                          }));
                     return worst;
                 }});
    c.push_back({"normalflow", "envelope of e^{2t} m is the geodesic flow of the envelope", 1e-8, [] {
                     double worst = 0;
                     for (const auto& m : catalog_metrics(false))
                         for (double t : {0.5, 1.0})
                             worst = std::max(worst, max_over(sample_points(m, 20, 55), [&](cplx z) {
                                                  const EpsteinJet j = epstein_point(m, z);
                                                  const MinkVec a = geodesic_flow(j.p, j.n, t);
                                                  const MinkVec b = epstein_point(conformal_change(m, constant_field(t)), z).p;
                                                  return (a - b).norm() / a.norm();
                                              }));
                     return worst;
                 }});
    c.push_back({"plane", "hyperbolic upper half plane maps to the vertical plane", 1e-8, [] {
                     const MetricField m = catalog::hyperbolic_uhp();
                     return max_over(sample_points(m, 100, 56), [&](cplx z) {
                         const Eigen::Vector3d x = to_uhs(epstein_point(m, z).p);
                         return (x - Eigen::Vector3d(z.real(), 0, z.imag())).norm() / x.norm();
                     });
                 }});
    return c;
}

std::vector<Check> univalence_checks() {
    std::vector<Check> c;
    c.push_back({"nehari", "power(c) on the hyperbolic half plane flips at |c^2 - 1| = 1", 0, [] {
                     const MetricField m = catalog::hyperbolic_uhp();
                     const Chart ch = Chart::uhp(-1, 1, 0.3, 2, 7, 7);
                     double wrong = 0;
                     for (double r : {0.5, 0.99, 1.01, 1.5})
                         for (double a : {0.3, 1.0, 2.5}) {
                             const cplx c2 = 1.0 + std::polar(r, a);
                             const CriterionReport rep = classify(structures::power(std::sqrt(c2)), m, ch);
                             const bool conclusive = rep.classification != Classification::no_conclusion;
                             if (conclusive != (r <= 1)) wrong += 1;
                         }
                     return wrong;
                 }});
    c.push_back({"zc_region", "scanned regions match |c^2 - a| <= a for a = 1, 2", 0, [] {
                     double wrong = 0;
                     CGrid g;
                     g.nre = g.nim = 121;
                     for (double a : {1.0, 2.0}) {
                         const RegionMask r = region_scan(*log_sin_profile(a), g);
                         for (int j = 0; j < g.nim; ++j)
                             for (int i = 0; i < g.nre; ++i) {
                                 const cplx cc = g.at(i, j);
                                 const double f = std::abs(cc * cc - a) - a;
                                 // Nodes within one cell of the boundary may go either way.
                                 const double cell = 2 * std::abs(cc) * std::hypot(g.dre(), g.dim());
                                 if (std::abs(f) > cell && r.at(i, j) != (f <= 0)) wrong += 1;
                             }
                     }
                     return wrong;
                 }});
    c.push_back({"nehari2", "Beltrami coefficient of the extension is 4||Q|| / (-K)", 1e-3, [] {
                     const double cc = std::sqrt(1.5);
                     const auto s = structures::from_map(structures::compose(structures::power_map(cc), structures::cayley_map()));
                     const MetricField m = catalog::hyperbolic_disk();
                     double worst = 0;
                     for (int a = 0; a < 12; ++a)
                         for (int b = 0; b < 12; ++b) {
                             const cplx z = std::polar(1.1 + 1.9 * a / 11.0, 2 * pi * (b + 0.5) / 12);
                             auto f = [&](cplx w) { return qc_extension(s, m, w); };
                             const cplx mu = beltrami_fd(f, z, 1e-3 * (std::abs(z) - 1));
                             worst = std::max(worst, std::abs(mu) - criterion_ratio(s, m, 1.0 / std::conj(z)));
                         }
                     return worst;
                 }});
    c.push_back({"qc_reflection", "identity structure reflects in the unit circle", 1e-8, [] {
                     const QcReflection h(structures::identity(), catalog::hyperbolic_disk(), 3.0, 48, 96);
                     double worst = 0;
                     for (cplx w : {cplx(0.3, 0.2), cplx(2, 1), cplx(-0.5, -1.2), std::polar(1.0, 0.7)}) {
                         const cplx hw = h(w);
                         worst = std::max({worst, std::abs(hw - 1.0 / std::conj(w)), std::abs(h(hw) - w)});
                     }
                     return worst;
                 }});
    return c;
}

std::vector<Check> wvolume_checks() {
    std::vector<Check> c;
    c.push_back({"Wdiff", "constant u gives zero", 1e-10,
                 [] { return std::abs(w_pair(catalog::torus_bump(), constant_field(0.4)).extrapolated); }});
    c.push_back({"Wdiff", "antisymmetry W(g0, u) = -W(g1, -u)", 1e-8, [] {
                     const MetricField g0 = catalog::torus_bump();
                     const auto u = test_u();
                     return std::abs(w_pair(g0, u).extrapolated +
                                     w_pair(conformal_change(g0, u), scaled(u, -1)).extrapolated);
                 }});
    c.push_back({"proj_omnibus", "invariance under independent scalings", 1e-8,
                 [] { return w_scaling_check(catalog::torus_bump(), test_u(), 0.3, -0.2); }});
    c.push_back({"Wvol_omnibus", "cocycle", 1e-7,
                 [] { return w_cocycle_check(catalog::torus_bump(), test_u(), test_v()); }});
    c.push_back({"Wvar", "dW along conformal directions", 1e-5,
                 [] { return dw_conformal_check(catalog::torus_bump(), test_v(), 1e-3).defect; }});
    c.push_back({"wmax", "flat g0, equal areas: W = -1/4 ||grad u||^2", 1e-6, [] {
                     const MetricField flat = catalog::torus_bump(0.0, {});
                     return std::abs(wmax_check(flat, area_normalized(flat, test_u())).gap);
                 }});
    c.push_back({"mean_integral", "int H dA_g = area(ghat) / 2 - area(g)", 1e-6,
                 [] { return mean_curvature_integral_check(structures::identity(), catalog::torus_bump()).defect; }});
    c.push_back({"lower/upper", "(chi, L, phi2, phiinf) = (-2, 1, 0.5, 0.5) gives (-0.25, 0.25)", 0, [] {
                     const GraftBounds b = graft_bounds({-2, 1, 0.5, 0.5});
                     return std::abs(b.lower + 0.25) + std::abs(b.upper - 0.25);
                 }});
    c.push_back({"newbound", "newbound_max(1, 3/2) = 5/2", 0, [] { return std::abs(newbound_max(1, 1.5) - 2.5); }});
    c.push_back({"newbound", "lower <= upper below the bound", 0, [] {
                     double bad = 0;
                     for (int i = 0; i < 50; ++i)
                         for (int j = 0; j < 50; ++j)
                             for (int k = 0; k < 50; ++k) {
                                 const double L = 4.0 * i / 49, pinf = 3.0 * j / 49;
                                 const double p2 = newbound_max(L, pinf) * k / 49;
                                 const GraftBounds b = graft_bounds({-2, L, p2, pinf});
                                 if (b.lower > b.upper + 1e-12 * std::max(1.0, b.upper)) bad += 1;
                             }
                     return bad;
                 }});
    return c;
}

const std::vector<std::pair<std::string, std::function<std::vector<Check>()>>>& registry() {
    static const std::vector<std::pair<std::string, std::function<std::vector<Check>()>>> r{
        {"tensor2", tensor2_checks},     {"field", field_checks},           {"schwarzian", schwarzian_checks},
        {"duality", duality_checks},     {"epstein", epstein_checks},       {"univalence", univalence_checks},
        {"wvolume", wvolume_checks}};
    return r;
}

}  // namespace

std::vector<std::string> suite_names() {
    std::vector<std::string> out;
    for (const auto& [name, fn] : registry()) out.push_back(name);
    return out;
}

std::vector<CheckResult> run_suite(const std::string& name) {
    std::vector<CheckResult> out;
    bool found = false;
    for (const auto& [suite, make] : registry()) {
        if (name != "all" && name != suite) continue;
        found = true;
        for (const auto& chk : make()) {
            CheckResult r{suite, chk.lemma, chk.what, 0, chk.tolerance, chk.at_least};
            try {
                r.value = chk.run();
                r.pass = chk.at_least ? r.value >= chk.tolerance : r.value <= chk.tolerance;
            } catch (const std::exception& e) {
                r.value = std::nan("");
                r.note = e.what();
            }
            out.push_back(std::move(r));
        }
    }
    if (!found) throw ConfigError("unknown suite '" + name + "'");
    return out;
}

std::string verify_table(const std::vector<CheckResult>& results) {
    std::size_t w_suite = 5, w_lemma = 5;
    for (const auto& r : results) {
        w_suite = std::max(w_suite, r.suite.size());
        w_lemma = std::max(w_lemma, r.lemma.size());
    }
    auto pad = [](std::string s, std::size_t w) { return s.append(w - std::min(w, s.size()), ' '); };
    std::ostringstream o;
    o << pad("suite", w_suite) << "  " << pad("lemma", w_lemma) << "  result  value        bound        check\n";
    for (const auto& r : results) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%-11.3e  %s%-10.1e", r.value, r.at_least ? ">=" : "<=", r.tolerance);
        o << pad(r.suite, w_suite) << "  " << pad(r.lemma, w_lemma) << "  " << (r.pass ? "PASS  " : "FAIL  ") << "  "
          << buf << "  " << r.what;
        if (!r.note.empty()) o << " (" << r.note << ")";
        o << "\n";
    }
    return o.str();
}

}  // namespace ek
