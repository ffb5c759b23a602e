#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "epstein_kit/univalence.hpp"

using namespace ek;

namespace {

std::mt19937_64 rng(19);
double uni(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }

const Chart uhp_chart = Chart::uhp(-1, 1, 0.2, 2, 41, 37);  // contains x = 0

// Power structure z^c moved to the disk by the Cayley map.
ProjectiveStructure disk_power(double c) {
    return structures::from_map(structures::compose(structures::power_map(c), structures::cayley_map()));
}

}  // namespace

TEST_CASE("criterion ratio of power structures is |c^2 - 1| sin^2 theta") {
    const auto m = catalog::hyperbolic_uhp();
    for (double c : {0.3, 1.2, 1.8}) {
        for (int k = 0; k < 10; ++k) {
            const double th = uni(0.1, pi - 0.1);
            const cplx z = std::polar(uni(0.2, 3), th);
            const double expect = std::abs(c * c - 1) * std::pow(std::sin(th), 2);
            CHECK(criterion_ratio(structures::power(c), m, z) == doctest::Approx(expect).epsilon(1e-10));
        }
    }
}

TEST_CASE("classification thresholds") {
    const auto m = catalog::hyperbolic_uhp();
    auto r = classify(structures::power(1.2), m, uhp_chart);
    CHECK(r.classification == Classification::qc_extension);
    CHECK(r.k == doctest::Approx(0.44).epsilon(1e-10));
    CHECK(r.negatively_curved);

    r = classify(structures::power(1.2), m, uhp_chart, {false});
    CHECK(r.classification == Classification::homeomorphic_extension);

    r = classify(structures::power(std::sqrt(2.0)), m, uhp_chart);
    CHECK(r.classification == Classification::univalent_continuous);
    CHECK(r.sup_ratio == doctest::Approx(1).epsilon(1e-12));

    r = classify(structures::power(1.5), m, uhp_chart);
    CHECK(r.classification == Classification::no_conclusion);
    CHECK(r.sup_ratio == doctest::Approx(1.25).epsilon(1e-10));
    CHECK(std::abs(r.witness.real()) <= 1e-12);

    r = classify(structures::identity(), catalog::hyperbolic_disk(), Chart::disk(0, 1, 32, 32));
    CHECK(r.classification == Classification::qc_extension);
    CHECK(r.k <= 1e-12);
    CHECK(std::string(classification_name(Classification::qc_extension)).size() > 0);
}

TEST_CASE("the ratio is invariant under constant rescaling") {
    const auto m = catalog::hyperbolic_uhp();
    const auto m2 = MetricField("scaled", sum(m.phi(), constant_field(0.9)), Domain::uhp, true);
    const auto s = structures::power(cplx(1.3, 0.4));
    for (int k = 0; k < 10; ++k) {
        const cplx z(uni(-1, 1), uni(0.2, 2));
        CHECK(criterion_ratio(s, m2, z) == doctest::Approx(criterion_ratio(s, m, z)).epsilon(1e-12));
    }
    CHECK(classify(s, m2, uhp_chart).sup_ratio == doctest::Approx(classify(s, m, uhp_chart).sup_ratio).epsilon(1e-12));
}

TEST_CASE("classification preconditions") {
    CHECK_THROWS_AS(classify(structures::identity(), catalog::torus_bump(), Chart::torus(8, 8)), PreconditionFailed);
    CHECK_THROWS_AS(classify(structures::identity(), catalog::euclidean(), uhp_chart), PreconditionFailed);
    // A large bump makes K positive where the bump has a maximum.
    auto bump = std::make_shared<TrigField>(0.0, std::vector<TrigTerm>{{0.5, 1, 0, 0}});
    const MetricField m("bumped", sum(catalog::hyperbolic_uhp().phi(), bump), Domain::uhp, true);
    CHECK(curvature(m, cplx(0, 1)) > 0);
    CHECK_THROWS_AS(classify(structures::identity(), m, Chart::uhp(-1, 1, 0.5, 2, 21, 21)), CriterionUnavailable);
    CHECK_NOTHROW(classify(structures::identity(), m, Chart::uhp(-1, 1, 0.5, 2, 21, 21), {false}));
}

TEST_CASE("pointwise z^c condition for the hyperbolic profile") {
    const auto h = log_sin_profile(1);
    CHECK(zc_pointwise(1.4, *h, pi / 2));
    CHECK_FALSE(zc_pointwise(1.5, *h, pi / 2));
    CHECK(zc_pointwise(1.5, *h, 0.5));  // the bound 1 / sin^2 is larger off the axis
}

TEST_CASE("region scans against closed forms") {
    CGrid grid;
    grid.nre = grid.nim = 120;
    struct Case {
        double a;
        double w0, rad;  // satisfied iff |c^2 - w0| <= rad
    };
    for (const Case cs : {Case{1, 1, 1}, Case{2, 2, 2}}) {
        const auto r = region_scan(*log_sin_profile(cs.a), grid, 256);
        std::size_t mismatches = 0, expected = 0;
        for (int j = 0; j < grid.nim; ++j)
            for (int i = 0; i < grid.nre; ++i) {
                const cplx c = grid.at(i, j);
                const double d = std::abs(c * c - cs.w0) - cs.rad;
                const bool expect = d <= 0;
                expected += expect;
                if (r.at(i, j) != expect && std::abs(d) > 1e-8) ++mismatches;
                // Every satisfied node lies in |c - 1| <= 1 or |c + 1| <= 1.
                if (r.at(i, j)) CHECK((std::abs(c - 1.0) <= 1 + 1e-9 || std::abs(c + 1.0) <= 1 + 1e-9));
            }
        CHECK(mismatches == 0);
        CHECK(expected > 100);
        CHECK(r.count() <= expected + 4);
    }
}

TEST_CASE("region outputs") {
    CGrid grid;
    grid.nre = 30;
    grid.nim = 20;
    const auto r = region_scan(*log_sin_profile(2), grid, 64);
    const auto csv = region_csv(r);
    CHECK(csv.rfind("re_c,im_c,satisfied\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 30 * 20);
    const auto outline = region_outline(r);
    CHECK_FALSE(outline.empty());
    for (const auto& line : outline) CHECK(line.size() >= 2);
    const auto svg = region_svg(r);
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("<polyline") != std::string::npos);
}

TEST_CASE("quasiconformal extension") {
    const auto m = catalog::hyperbolic_disk();
    for (int k = 0; k < 10; ++k) {
        const cplx z = std::polar(uni(1.1, 3), uni(0, 2 * pi));
        CHECK(std::abs(qc_extension(structures::identity(), m, z) - z) <= 1e-9 * std::abs(z));
    }
    // Moebius structures extend by the same Moebius map.
    const auto mob = structures::moebius(cplx(1, 0.2), cplx(0.1, 0), cplx(0.2, -0.1), cplx(1, 0));
    const cplx z(1.5, 0.7);
    const cplx expect = (cplx(1, 0.2) * z + 0.1) / (cplx(0.2, -0.1) * z + 1.0);
    CHECK(std::abs(qc_extension(mob, m, z) - expect) <= 1e-9);

    // |mu| of the extension equals the criterion ratio at the reflected point.
    const auto s = disk_power(1.2);
    for (int k = 0; k < 6; ++k) {
        const cplx w = std::polar(uni(1.2, 2.5), uni(0, 2 * pi));
        const auto f = [&](cplx x) { return qc_extension(s, m, x); };
        const double mu = std::abs(beltrami_fd(f, w, 1e-5));
        CHECK(mu == doctest::Approx(criterion_ratio(s, m, 1.0 / std::conj(w))).epsilon(1e-5));
        CHECK(mu <= 0.44 + 1e-6);
    }
}

TEST_CASE("Beltrami coefficient by differences") {
    // f = z + k zbar has mu = k.
    const auto f = [](cplx z) { return z + cplx(0.3, 0.1) * std::conj(z); };
    CHECK(std::abs(beltrami_fd(f, cplx(0.2, 0.4), 1e-4) - cplx(0.3, 0.1)) <= 1e-10);
    CHECK(std::abs(beltrami_fd([](cplx z) { return z * z; }, cplx(1, 1), 1e-4)) <= 1e-10);
}

TEST_CASE("quasiconformal reflection") {
    const auto m = catalog::hyperbolic_disk();
    const cplx w(0.3, 0.2);
    CHECK(std::abs(qc_reflection(structures::identity(), m, w) - 1.0 / std::conj(w)) <= 1e-7);
    const QcReflection refl(disk_power(1.2), m);
    for (int k = 0; k < 5; ++k) {
        // 1 / |z| stays inside the inversion table (radius 3).
        const cplx z = std::polar(uni(0.4, 0.8), uni(0, 2 * pi));
        const cplx a = refl.extended(z);
        CHECK(std::abs(refl.preimage(a) - z) <= 1e-7);
        // Involution.
        CHECK(std::abs(refl(refl(a)) - a) <= 1e-6 * (1 + std::abs(a)));
        // The image of the unit circle is fixed.
        const cplx e = refl.extended(std::polar(1.0, uni(0, 2 * pi)));
        CHECK(std::abs(refl(e) - e) <= 1e-6 * (1 + std::abs(e)));
    }
}
