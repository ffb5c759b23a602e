#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "epstein_kit/tensor2.hpp"
#include "epstein_kit/wvolume.hpp"

using namespace ek;

namespace {

MetricField flat() { return catalog::torus_bump(0.0, {}); }

std::shared_ptr<TrigField> trig(double offset, std::vector<TrigTerm> terms) {
    return std::make_shared<TrigField>(offset, std::move(terms));
}

const std::vector<TrigTerm> u_terms = {{0.3, 1, 0, 0.2}, {0.2, 1, -1, 0.5}, {0.15, 0, 2, 1.0}};

// Integral of |grad u|^2 dx dy for distinct frequencies: sum a^2 (2 pi)^2 (m^2 + n^2) / 2.
double dirichlet_oracle(const std::vector<TrigTerm>& terms) {
    double s = 0;
    for (const auto& t : terms) s += t.amp * t.amp * 4 * pi * pi * (t.m * t.m + t.n * t.n) / 2;
    return s;
}

}  // namespace

TEST_CASE("W of trivial changes") {
    const auto g0 = catalog::torus_bump();
    CHECK(std::abs(w_pair(g0, constant_field(0), 32).extrapolated) <= 1e-15);
    CHECK(std::abs(w_pair(g0, constant_field(0.7), 64).extrapolated) <= 1e-12);
}

TEST_CASE("W is antisymmetric") {
    const auto g0 = catalog::torus_bump();
    const auto u = trig(0.1, u_terms);
    const auto g1 = conformal_change(g0, u);
    const double a = w_pair(g0, u, 128).extrapolated;
    const double b = w_pair(g1, scaled(u, -1), 128).extrapolated;
    CHECK(std::abs(a + b) <= 1e-8);
}

TEST_CASE("flat torus: W equals minus a quarter of the Dirichlet energy") {
    const auto g0 = flat();
    const auto u = area_normalized(g0, trig(0, u_terms));
    const double oracle = dirichlet_oracle(u_terms);
    CHECK(dirichlet_energy(g0, u, Chart::torus(128, 128)) == doctest::Approx(oracle).epsilon(1e-12));
    const double w = w_pair(g0, u, 128).extrapolated;
    CHECK(std::abs(w + 0.25 * oracle) <= 1e-6);
    const auto c = wmax_check(g0, u, 128);
    CHECK(std::abs(c.gap) <= 1e-6);
    CHECK(c.w.extrapolated <= c.bound.extrapolated + 1e-6);
}

TEST_CASE("area normalization") {
    const auto g0 = catalog::torus_bump();
    const auto u = area_normalized(g0, trig(0.4, u_terms));
    const double a0 = quadrature(g0, Chart::torus(128, 128), [](cplx) { return 1.0; });
    const double a1 = quadrature(g0, Chart::torus(128, 128), [&](cplx z) { return std::exp(2 * u->jet(z).v); });
    CHECK(a1 == doctest::Approx(a0).epsilon(1e-12));
}

TEST_CASE("scaling invariance and cocycle") {
    const auto g0 = catalog::torus_bump();
    const auto u = trig(0.1, u_terms);
    CHECK(w_scaling_check(g0, u, 0, 0, 64) <= 1e-15);
    CHECK(w_scaling_check(g0, u, 0.3, -0.2, 128) <= 1e-8);
    CHECK(w_scaling_check(g0, u, 0.4, 0.4, 128) <= 1e-8);

    const auto small = trig(0, {{0.05, 1, 1, 0.3}, {0.03, 0, 1, 1.2}});
    CHECK(w_cocycle_check(g0, small, constant_field(0), 64) <= 1e-12);
    CHECK(w_cocycle_check(g0, small, small, 128) <= 1e-7);
    const auto big = trig(0, {{0.6, 1, 0, 0}, {0.4, 0, 1, 0.5}});  // sup norm 1
    CHECK(w_cocycle_check(g0, big, scaled(big, -0.5), 256) <= 1e-6);
}

TEST_CASE("first variation along conformal directions") {
    const auto g0 = catalog::torus_bump();
    const auto zero = dw_conformal_check(g0, constant_field(0.3), 1e-3, 64);
    CHECK(std::abs(zero.central) <= 1e-10);
    CHECK(std::abs(zero.exact) <= 1e-10);
    const auto v = trig(0, u_terms);
    const auto a = dw_conformal_check(g0, v, 1e-3, 128);
    const auto b = dw_conformal_check(g0, v, 5e-4, 128);
    CHECK(a.defect <= 1e-5);
    CHECK(b.defect <= a.defect / 4 + 1e-11);
    CHECK(a.exact != 0.0);
}

TEST_CASE("monotonicity for pointwise larger metrics") {
    // On the torus both curvatures can only be non-positive when they vanish,
    // so the admissible pairs are flat metrics differing by a constant.
    CHECK(w_pair(flat(), constant_field(0.5), 64).extrapolated >= -1e-15);
}

TEST_CASE("mean curvature integral") {
    const auto s = structures::identity();
    const auto m = catalog::torus_bump();
    const auto c = mean_curvature_integral_check(s, m, 128);
    CHECK(c.defect <= 1e-6);
    CHECK(std::abs(c.lhs) > 1e-3);
    const auto scaled_m = conformal_change(m, constant_field(-0.2));
    CHECK(mean_curvature_integral_check(s, scaled_m, 128).defect <= 1e-6);
}

TEST_CASE("mean curvature integral near a degenerate dual") {
    const auto s = structures::identity();
    const auto m = catalog::torus_bump();
    double lmin = 0;
    for (const auto& nd : Chart::torus(256, 256).nodes()) {
        Eigen::SelfAdjointEigenSolver<Mat2> es(shape_operator_hat(s, m, nd.z).m);
        lmin = std::min(lmin, es.eigenvalues()(0));
    }
    REQUIRE(lmin < 0);
    // Bhat scales by e^{-2t}; push the smallest eigenvalue to about -0.999.
    const double t = 0.5 * std::log(lmin / -0.999);
    const auto near = conformal_change(m, constant_field(t));
    const auto c = mean_curvature_integral_check(s, near, 256);
    CHECK(c.defect <= 1e-4 * std::max(1.0, std::abs(c.rhs)));
}

TEST_CASE("grafting areas") {
    const GraftingData fuchsian{-2, 0, 0, 0};
    const auto a0 = graft_areas(fuchsian, 0);
    CHECK(a0.dual_h == doctest::Approx(4 * pi));
    CHECK(a0.proj == doctest::Approx(4 * pi));
    CHECK(a0.dual_proj == doctest::Approx(4 * pi));
    const GraftingData d{-2, 1, 0.7, 0.4};
    for (double t : {0.1, 0.5, 1.3}) {
        const auto a = graft_areas(d, t);
        CHECK(a.dual_proj - a.dual_h ==
              doctest::Approx(std::sinh(t) * std::cosh(t) + std::exp(-2 * t) * 0.49).epsilon(1e-12));
        CHECK(a.conf_gap == doctest::Approx(std::exp(2 * t)));
        CHECK(a.dual_h_valid == (t > 0.5 * std::log(1.8)));
    }
    const auto tiny = graft_areas(d, 1e-12);
    CHECK(tiny.dual_proj == doctest::Approx(tiny.proj - d.L).epsilon(1e-10));
    CHECK_THROWS_AS(graft_areas({0, 1, 0, 0}, 1), InputError);
    CHECK_THROWS_AS(graft_areas({-2, -1, 0, 0}, 1), InputError);
}

TEST_CASE("grafting bounds") {
    const auto z = graft_bounds({-2, 0, 0, 0.3});
    CHECK(z.lower == 0.0);
    CHECK(z.upper == 0.0);
    const auto b = graft_bounds({-2, 1, 0.5, 0.5});
    CHECK(b.T == doctest::Approx(0.5 * std::log(2.0)));
    CHECK(b.lower == doctest::Approx(-0.25).epsilon(1e-14));
    CHECK(b.upper == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(newbound_max(0, 3) == 0.0);
    CHECK(newbound_max(1, 1.5) == doctest::Approx(2.5));
    CHECK(newbound_max(4, 0) == doctest::Approx(2));
}

TEST_CASE("lower <= upper exactly when phi2^2 <= L (e^{2T} + 1)^2 / 4") {
    int checked = 0;
    for (int i = 0; i < 50; ++i)
        for (int j = 0; j < 50; ++j)
            for (int k = 0; k < 50; ++k) {
                const double L = 0.1 * i, phi2 = 0.13 * j, phiinf = 0.07 * k;
                const auto b = graft_bounds({-2, L, phi2, phiinf});
                const double e2t = 1 + 2 * phiinf;
                const double margin = 0.25 * L * (e2t + 1) * (e2t + 1) - phi2 * phi2;
                if (std::abs(margin) < 1e-9) continue;
                CHECK((b.lower <= b.upper) == (margin > 0));
                ++checked;
            }
    CHECK(checked > 120000);
    // Equality at the maximal phi2.
    const double L = 2.3, phiinf = 0.8;
    const auto b = graft_bounds({-2, L, newbound_max(L, phiinf), phiinf});
    CHECK(b.lower == doctest::Approx(b.upper).epsilon(1e-12));
}

TEST_CASE("graft table") {
    const auto csv = graft_table_csv({-2, 1, 0.5, 0.5}, 3, 10);
    CHECK(csv.rfind("t,a_dual_h,a_proj,a_dual_proj,a_conf_gap,dual_h_valid,lower,upper,T\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 12);
}

TEST_CASE("Schwarzian norms of power structures") {
    // ||Q|| = |c^2 - 1| sin^2(theta) / 4 on the hyperbolic half plane.
    const auto n = schwarzian_norms(structures::power(2.0), catalog::hyperbolic_uhp(), Chart::uhp(-1, 1, 0.5, 2, 41, 41));
    CHECK(n.sup == doctest::Approx(0.75).epsilon(1e-10));
    CHECK(n.l2 > 0);
}
