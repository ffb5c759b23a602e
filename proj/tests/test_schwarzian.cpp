#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "epstein_kit/schwarzian.hpp"

using namespace ek;

namespace {

std::mt19937_64 rng(11);
double uni(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }

}  // namespace

TEST_CASE("Schwarzian derivatives of standard maps") {
    const auto mob = structures::moebius_map(cplx(1, 2), cplx(0.5, -1), cplx(0.3, 0.1), cplx(2, 0));
    for (int k = 0; k < 20; ++k) {
        const cplx z(uni(-1, 1), uni(-1, 1));
        CHECK(std::abs(schwarzian_derivative(*mob, z)) <= 1e-12);
        CHECK(std::abs(schwarzian_derivative(*structures::exp_map(), z) - cplx(-0.5, 0)) <= 1e-13);
        const cplx c(uni(0, 2), uni(-1, 1));
        const cplx w(uni(-2, 2), uni(0.1, 2));
        const cplx expect = (1.0 - c * c) / (2.0 * w * w);
        CHECK(std::abs(schwarzian_derivative(*structures::power_map(c), w) - expect) <= 1e-11 * (1 + std::abs(expect)));
    }
}

TEST_CASE("Schwarzian chain rule S(f o g) = (Sf o g) g'^2 + Sg") {
    const auto f = structures::exp_map();
    const auto g = structures::power_map(cplx(1.5, 0.2));
    const auto fg = structures::compose(f, g);
    for (int k = 0; k < 10; ++k) {
        const cplx z(uni(-1, 1), uni(0.2, 1));
        const HoloJet gj = g->jet(z);
        const cplx expect = schwarzian_derivative(*f, gj.f) * gj.f1 * gj.f1 + schwarzian_derivative(gj);
        CHECK(std::abs(schwarzian_derivative(*fg, z) - expect) <= 1e-10 * (1 + std::abs(expect)));
    }
}

TEST_CASE("log |f'| jet against direct differences") {
    const auto f = structures::power_map(cplx(0.7, 0.3));
    const cplx z(0.3, 0.8);
    const Jet2 j = half_log_abs_derivative_sq(f->jet(z));
    const double h = 1e-4;
    auto v = [&](cplx w) { return std::log(std::abs(f->jet(w).f1)); };
    CHECK(j.v == doctest::Approx(v(z)));
    CHECK(j.x == doctest::Approx((v(z + h) - v(z - h)) / (2 * h)).epsilon(1e-7));
    CHECK(j.yy == doctest::Approx((v(z + cplx(0, h)) - 2 * v(z) + v(z - cplx(0, h))) / (h * h)).epsilon(1e-5));
}

TEST_CASE("hyperbolic metrics are Moebius flat") {
    const auto euc = catalog::euclidean();
    for (int k = 0; k < 20; ++k) {
        const cplx z = std::polar(uni(0, 0.9), uni(0, 2 * pi));
        CHECK(std::abs(os_q(euc, *catalog::hyperbolic_disk().phi(), z)) <= 1e-12);
        CHECK(std::abs(q_sigma(structures::identity(), catalog::hyperbolic_disk(), z)) <= 1e-12);
        const cplx w(uni(-3, 3), uni(0.1, 3));
        CHECK(std::abs(q_sigma(structures::identity(), catalog::hyperbolic_uhp(), w)) <= 1e-11 / (w.imag() * w.imag()));
    }
}

TEST_CASE("os_q transforms additively under composition of conformal changes") {
    // Q(g, e^{2(u+v)} g) = Q(g, e^{2u} g) + Q(e^{2u} g, e^{2(u+v)} g)
    const auto g = catalog::torus_bump();
    auto u = std::make_shared<TrigField>(0.0, std::vector<TrigTerm>{{0.3, 1, 0, 0.2}});
    auto v = std::make_shared<TrigField>(0.0, std::vector<TrigTerm>{{0.2, 0, 1, 0.7}});
    const auto gu = conformal_change(g, u);
    const auto uv = sum(u, v);
    for (int k = 0; k < 10; ++k) {
        const cplx z(uni(0, 1), uni(0, 1));
        const cplx lhs = os_q(g, *uv, z);
        const cplx rhs = os_q(g, *u, z) + os_q(gu, *v, z);
        CHECK(std::abs(lhs - rhs) <= 1e-12 * (1 + std::abs(lhs)));
    }
}

TEST_CASE("power structures on the hyperbolic half plane") {
    for (cplx c : {cplx(2, 0), cplx(0.5, 0.3), cplx(1, 1)}) {
        const auto s = structures::power(c);
        const auto m = catalog::hyperbolic_uhp();
        for (int k = 0; k < 10; ++k) {
            const cplx z(uni(-2, 2), uni(0.2, 2));
            const cplx expect = (c * c - 1.0) / (4.0 * z * z);
            CHECK(std::abs(q_sigma(s, m, z) - expect) <= 1e-11 * (1 + std::abs(expect)));
        }
        CHECK(norm_q(s, m, cplx(0, 1)) == doctest::Approx(std::abs(c * c - 1.0) / 4).epsilon(1e-12));
    }
}

TEST_CASE("Bhat of the model structures") {
    const auto bd = shape_operator_hat(structures::identity(), catalog::hyperbolic_disk(), cplx(0.3, 0.2));
    CHECK((bd.m - Mat2::Identity()).norm() <= 1e-12);
    const auto bs = shape_operator_hat(structures::identity(), catalog::spherical(), cplx(1.3, -0.2));
    CHECK((bs.m + Mat2::Identity()).norm() <= 1e-12);
    const auto be = shape_operator_hat(structures::identity(), catalog::euclidean(), cplx(1.3, -0.2));
    CHECK(be.m.norm() <= 1e-15);
}

TEST_CASE("Bhat trace, symmetry and scaling") {
    const auto m = catalog::torus_bump();
    auto u = std::make_shared<TrigField>(0.0, std::vector<TrigTerm>{{0.3, 1, 0, 0.2}, {0.1, 1, 1, 0}});
    const auto m1 = conformal_change(m, u);
    const auto s = structures::identity();
    for (int k = 0; k < 10; ++k) {
        const cplx z(uni(0, 1), uni(0, 1));
        const Endo2 b = shape_operator_hat(s, m1, z);
        CHECK(b.trace() == doctest::Approx(-2 * curvature(m1, z)).epsilon(1e-12));
        CHECK(std::abs(b.m(0, 1) - b.m(1, 0)) <= 1e-14);
        // |Bhat - tr/2| = 4 ||Q||
        const double aniso = std::sqrt(-b.traceless().det());
        CHECK(aniso == doctest::Approx(4 * norm_q(s, m1, z)).epsilon(1e-12));
        const double t = 0.8;
        const auto scaled_m = conformal_change(m1, constant_field(t));
        CHECK((shape_operator_hat(s, scaled_m, z).m - std::exp(-2 * t) * b.m).norm() <= 1e-12);
    }
}

TEST_CASE("Codazzi: Q_zbar = -1/4 K_z e^{2 phi} for the identity structure") {
    const auto m = catalog::disk_bump();
    const auto s = structures::identity();
    const double h = 1e-4;
    for (int k = 0; k < 8; ++k) {
        const cplx z = std::polar(uni(0, 0.6), uni(0, 2 * pi));
        const double kx = (curvature(m, z + h) - curvature(m, z - h)) / (2 * h);
        const double ky = (curvature(m, z + cplx(0, h)) - curvature(m, z - cplx(0, h))) / (2 * h);
        const cplx kz = 0.5 * cplx(kx, -ky);
        const cplx expect = -0.25 * kz * m.density(z);
        CHECK(std::abs(q_sigma_zbar(s, m, z) - expect) <= 1e-6);
    }
}

TEST_CASE("structure parsing and errors") {
    CHECK(parse_complex("1.5") == cplx(1.5, 0));
    CHECK(parse_complex("1-2i") == cplx(1, -2));
    CHECK(structures::by_name("power:2").name() == structures::power(2.0).name());
    CHECK(structures::by_name("identity").identity);
    CHECK_THROWS_AS(structures::by_name("bogus"), ConfigError);
    CHECK_THROWS_AS(structures::moebius(1, 2, 2, 4), InputError);
    CHECK_THROWS_AS(q_sigma(structures::power(2.0), catalog::hyperbolic_uhp(), cplx(0, -1)), DomainError);
}

TEST_CASE("quadratic differential CSV") {
    const auto rows = sample_quad_diff(structures::power(2.0), catalog::hyperbolic_uhp(),
                                       Chart::uhp(-1, 1, 0.5, 1.5, 3, 3));
    CHECK(rows.size() == 9);
    const auto csv = quad_diff_csv(rows);
    CHECK(csv.rfind("x,y,re_q,im_q,norm_q\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 10);
}
