// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "epstein_kit/duality.hpp"
#include "epstein_kit/epstein.hpp"
#include "epstein_kit/parallel.hpp"
#include "epstein_kit/tensor2.hpp"
#include "epstein_kit/univalence.hpp"
#include "epstein_kit/wvolume.hpp"

using namespace ek;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass;
    std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, const std::function<Outcome()>& body) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    if (!o.pass) ++failures;
    std::printf("%s %2d %s: %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str(), secs);
    std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::mt19937_64 rng(20240601);
double uni(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }

std::vector<cplx> random_disk_points(int n, double rmax) {
    std::vector<cplx> out;
    for (int k = 0; k < n; ++k) out.push_back(std::polar(rmax * std::sqrt(uni(0, 1)), uni(0, 2 * pi)));
    return out;
}

std::vector<MetricField> catalog_metrics(bool with_spherical) {
    std::vector<MetricField> out;
    for (const auto& n : catalog::names())
        if (with_spherical || n != "spherical") out.push_back(catalog::by_name(n));
    return out;
}

// The CLI's default box per domain, as a full grid of nodes.
Chart default_chart(const MetricField& m, int n) {
    switch (m.domain()) {
        case Domain::disk: return Chart::rectangle(-0.7, 0.7, -0.7, 0.7, n, n);
        case Domain::uhp: return Chart::uhp(-1, 1, 0.2, 2, n, n);
        case Domain::torus: return Chart::rectangle(0, 1, 0, 1, n, n);
        default: return Chart::rectangle(-1, 1, -1, 1, n, n);
    }
}

std::vector<ProjectiveStructure> structures_for(const MetricField& m) {
    std::vector<ProjectiveStructure> ss{structures::identity()};
    if (m.domain() == Domain::uhp) ss.push_back(structures::power(cplx(1.2, 0.3)));
    return ss;
}

double max_parallel(std::size_t n, const std::function<double(std::size_t)>& f) {
    std::vector<double> v(n);
    parallel_for(n, [&](std::size_t k) { v[k] = f(k); });
    double worst = 0;
    for (double x : v) worst = std::isnan(x) ? x : std::max(worst, x);
    return worst;
}

// Power structure z^c moved to the disk by the Cayley map.
ProjectiveStructure disk_power(double c) {
    return structures::from_map(structures::compose(structures::power_map(c), structures::cayley_map()));
}

}  // namespace

int main() {
    criterion(1, "Osgood-Stowe vanishing", [] {
        const auto t0 = Clock::now();
        const auto e = catalog::euclidean();
        const auto phi = catalog::hyperbolic_disk().phi();
        double worst = 0;
        for (cplx z : random_disk_points(1000, 0.99)) worst = std::max(worst, std::abs(os_q(e, *phi, z)));
        const double secs = seconds_since(t0);
        return Outcome{worst < 1e-10 && secs < 1, fmt("max |Q(euclidean, hyperbolic disk)| = %.3g over 1000 points (< 1e-10, < 1 s)", worst)};
    });

    criterion(2, "Schwarzian bridge", [] {
        const std::vector<HolomorphicMapPtr> maps{
            structures::moebius_map(cplx(1, 0.5), cplx(-0.3, 1), cplx(0.2, 0.1), cplx(1.5, 0)),
            structures::power_map(cplx(1.7, 0.4)), structures::exp_map()};
        double worst = 0;
        for (const auto& f : maps) {
            for (int k = 0; k < 1000; ++k) {
                const cplx z(uni(-1, 1), uni(0.1, 1.5));
                const HoloJet j = f->jet(z);
                const cplx lhs = os_q(Jet2{}, half_log_abs_derivative_sq(j));
                const cplx rhs = 0.5 * schwarzian_derivative(j);
                worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
            }
        }
        return Outcome{worst < 1e-9, fmt("max |os_q(euclidean, log|f'|) - Sf/2| = %.3g for Moebius, z^c, exp (< 1e-9)", worst)};
    });

    criterion(3, "Bhat eigenvalues", [] {
        double worst = 0;
        std::size_t points = 0;
        for (const auto& m : catalog_metrics(true)) {
            const auto nodes = default_chart(m, 64).nodes();
            for (const auto& s : structures_for(m)) {
                points += nodes.size();
                worst = std::max(worst, max_parallel(nodes.size(), [&](std::size_t k) {
                                     const cplx z = nodes[k].z;
                                     Eigen::SelfAdjointEigenSolver<Mat2> es(shape_operator_hat(s, m, z).m);
                                     const double K = curvature(m, z), q = 4 * norm_q(s, m, z);
                                     const double scale = std::max(1.0, std::abs(K) + q);
                                     return std::max(std::abs(es.eigenvalues()(0) - (-K - q)),
                                                     std::abs(es.eigenvalues()(1) - (-K + q))) / scale;
                                 }));
            }
        }
        return Outcome{worst < 1e-10, fmt("max eigenvalue defect %.3g over %.0f grid points, all catalog metrics (< 1e-10)", worst, double(points))};
    });

    criterion(4, "Gauss-Codazzi duality", [] {
        double hyp = 0, proj = 0;
        for (const auto& m : catalog_metrics(false)) {
            // The residuals are absolute, so their difference error grows like e^{2 phi}
            // toward the unit circle; disk metrics use the disk of radius 0.9.
            const Chart chart = m.domain() == Domain::disk ? Chart::disk(0, 0.9, 16, 32) : default_chart(m, 16);
            const auto nodes = chart.nodes();
            for (const auto& s : structures_for(m)) {
                const EndoField b = [&](cplx z) { return shape_operator_hat(s, m, z); };
                hyp = std::max(hyp, max_parallel(nodes.size(), [&](std::size_t k) {
                                   const auto r = gc_residuals(m, b, Picture::hyperbolic, nodes[k].z);
                                   return std::max(std::abs(r.gauss), std::abs(r.codazzi));
                               }));
                proj = std::max(proj, max_parallel(nodes.size(), [&](std::size_t k) {
                                    const auto r = gc_residuals(m, b, Picture::projective, nodes[k].z);
                                    return std::max(std::abs(r.gauss), std::abs(r.codazzi));
                                }));
            }
        }
        return Outcome{hyp < 1e-7 && proj < 1e-7,
                       fmt("hyperbolic residual %.3g, projective residual %.3g (< 1e-7; disk metrics on |z| <= 0.9; spherical has no dual pair)", hyp, proj)};
    });

    criterion(5, "Normal flow eigenvalue law", [] {
        double worst = 0;
        int n = 0;
        while (n < 1000) {
            Mat2 a;
            a << uni(-1, 1), uni(-1, 1), uni(-1, 1), uni(-1, 1);
            const Mat2 g = a * a.transpose() + 0.3 * Mat2::Identity();
            Mat2 s;
            const double off = uni(-2, 2);
            s << uni(-2, 2), off, off, uni(-2, 2);
            const FundamentalPair p{{g}, {g.inverse() * s}};
            const auto l0 = principal_curvatures(p);
            const double t = uni(-2, 2);
            // Singular where cosh t + sinh t lambda = 0, i.e. t = -atanh(1 / lambda).
            bool near = false;
            for (double l : l0)
                if (std::abs(l) > 1 && std::abs(t + std::atanh(1 / l)) < 1e-2) near = true;
            if (near) continue;
            const auto st = normal_flow(p, t);
            const auto l = principal_curvatures(st.pair);
            auto expect = std::array{flow_eigenvalue(l0[0], t), flow_eigenvalue(l0[1], t)};
            std::sort(expect.begin(), expect.end());
            for (int i = 0; i < 2; ++i)
                worst = std::max(worst, std::abs(l[i] - expect[i]) / std::max(1.0, std::abs(expect[i])));
            ++n;
        }
        return Outcome{worst < 1e-10, fmt("max defect %.3g over 1000 random (B, t) (< 1e-10)", worst)};
    });

    criterion(6, "Epstein plane and equidistant surfaces", [] {
        const auto t0 = Clock::now();
        const auto s = structures::identity();
        const auto chart = Chart::uhp(-1, 1, 0.2, 2, 64, 64);
        double worst = 0;
        int holes = 0;
        for (double t : {0.0, 0.5, 1.0, 2.0}) {
            const auto mesh = epstein_mesh(catalog::hyperbolic_uhp(), s, chart, Model::uhs, t);
            holes += mesh.failures();
            for (const auto& v : mesh.vertices)
                if (v.valid) worst = std::max(worst, std::abs(std::asinh(std::abs(v.p(1))) - t));
        }
        const double secs = seconds_since(t0);
        return Outcome{worst < 1e-8 && holes == 0 && secs < 5,
                       fmt("max distance defect %.3g for t in {0, 0.5, 1, 2} on 64x64, %.0f holes (< 1e-8, < 5 s)", worst, holes)};
    });

    criterion(7, "Envelope equals Bonnet immersion", [] {
        const auto s = structures::identity();
        const auto chart = Chart::rectangle(-0.7, 0.7, -0.7, 0.7, 32, 32);
        const auto nodes = chart.nodes();
        double worst = 0;
        for (const auto& m : {catalog::hyperbolic_disk(), catalog::disk_bump()}) {
            const int bi = 16, bj = 16;
            // RK4 error concentrates in the corners, where e^phi is about 100.
            const auto pts = bonnet_grid(m, s, chart, bi, bj, 0, 128);
            const Eigen::Matrix4d F = epstein_frame(m, s, nodes[std::size_t(bj) * 32 + bi].z);
            worst = std::max(worst, max_parallel(nodes.size(), [&](std::size_t k) {
                                 return hyperbolic_distance(F * pts[k], epstein_point(s, m, nodes[k].z).p);
                             }));
        }
        return Outcome{worst <= 1e-6, fmt("max aligned distance %.3g on 32x32 over [-0.7, 0.7]^2, 128 RK4 steps per cell, hyperbolic-disk and disk-bump (<= 1e-6)", worst)};
    });

    criterion(8, "Gauss map identity", [] {
        double worst = 0;
        std::size_t valid = 0, total = 0;
        for (const auto& m : catalog_metrics(true)) {
            const auto nodes = default_chart(m, 32).nodes();
            std::vector<double> d(nodes.size(), -1);
            parallel_for(nodes.size(), [&](std::size_t k) {
                try {
                    const auto g = gauss_maps(epstein_point(m, nodes[k].z));
                    d[k] = g.plus.infinity ? INFINITY : std::abs(g.plus.z - nodes[k].z);
                } catch (const EnvelopeDegenerate&) {
                }
            });
            total += nodes.size();
            for (double x : d)
                if (x >= 0) {
                    ++valid;
                    worst = std::max(worst, x);
                }
        }
        return Outcome{worst < 1e-8 && valid > 0,
                       fmt("max |z_plus - z| = %.3g over %.0f valid of %.0f grid points (< 1e-8)", worst, double(valid), double(total))};
    });

    criterion(9, "z^c univalence regions", [] {
        const CGrid grid;  // 400 x 400 over [-0.2, 2.2] x [-1.2, 1.2]
        struct Case {
            double a, w0, rad;
        };
        std::size_t off = 0, outside = 0, satisfied = 0;
        for (const Case cs : {Case{1, 1, 1}, Case{2, 2, 2}}) {
            const auto r = region_scan(*log_sin_profile(cs.a), grid, 512);
            satisfied += r.count();
            const double cell = std::hypot(grid.dre(), grid.dim());
            for (int j = 0; j < grid.nim; ++j)
                for (int i = 0; i < grid.nre; ++i) {
                    const cplx c = grid.at(i, j);
                    const bool expect = std::abs(c * c - cs.w0) <= cs.rad;
                    if (r.at(i, j) != expect) {
                        // Distance to the boundary |c^2 - w0| = rad is at most |d(c^2)| / |2c|.
                        const double d = std::abs(std::abs(c * c - cs.w0) - cs.rad) / std::max(2 * std::abs(c), 1e-12);
                        if (d > cell) ++off;
                    }
                    // z^c and z^{-c} give the same projective structure, so c and -c are identified.
                    const cplx rep = c.real() < 0 ? -c : c;
                    if (r.at(i, j) && std::abs(rep - 1.0) > 1 + 1e-9) ++outside;
                }
        }
        return Outcome{off == 0 && outside == 0,
                       fmt("%.0f satisfied nodes; %.0f off the boundary by more than a cell; %.0f outside |c - 1| <= 1 (c ~ -c)",
                           double(satisfied), double(off), double(outside))};
    });

    criterion(10, "Beltrami bound of the extension", [] {
        const double c = std::sqrt(1.5);  // |c^2 - 1| = 0.5
        const auto s = disk_power(c);
        const auto m = catalog::hyperbolic_disk();
        const int n = 128;
        std::vector<cplx> pts;
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) pts.push_back(std::polar(1.05 + 1.95 * i / (n - 1), 2 * pi * j / n));
        const auto f = [&](cplx z) { return qc_extension(s, m, z); };
        double worst = -INFINITY, sup_mu = 0;
        std::vector<double> excess(pts.size()), mu(pts.size());
        parallel_for(pts.size(), [&](std::size_t k) {
            const cplx z = pts[k];
            mu[k] = std::abs(beltrami_fd(f, z, 1e-5 * std::abs(z)));
            excess[k] = mu[k] - criterion_ratio(s, m, 1.0 / std::conj(z));
        });
        for (std::size_t k = 0; k < pts.size(); ++k) {
            worst = std::max(worst, excess[k]);
            sup_mu = std::max(sup_mu, mu[k]);
        }
        return Outcome{worst <= 1e-3, fmt("max |mu| - 4||Q||/(-K) = %.3g on a 128^2 annulus, sup |mu| = %.4f (<= 1e-3)", worst, sup_mu)};
    });

    criterion(11, "W-volume identities on the torus", [] {
        const auto g0 = catalog::torus_bump();
        const auto u = std::make_shared<TrigField>(0.1, std::vector<TrigTerm>{{0.3, 1, 0, 0.2}, {0.2, 1, -1, 0.5}, {0.15, 0, 2, 1.0}});
        const auto v = std::make_shared<TrigField>(0.0, std::vector<TrigTerm>{{0.05, 1, 1, 0.3}, {0.03, 0, 1, 1.2}});
        double slowest = 0;
        auto timed = [&](const std::function<double()>& f) {
            const auto t0 = Clock::now();
            const double r = f();
            slowest = std::max(slowest, seconds_since(t0));
            return r;
        };
        const double cocycle = timed([&] { return w_cocycle_check(g0, v, v, 256); });
        const double scaling = timed([&] { return w_scaling_check(g0, u, 0.3, -0.2, 256); });
        DwCheck a, b;
        timed([&] {
            a = dw_conformal_check(g0, u, 1e-3, 256);
            b = dw_conformal_check(g0, u, 5e-4, 256);
            return 0.0;
        });
        const bool halving = b.defect <= a.defect / 4 + 1e-11;
        const MetricField flat = catalog::torus_bump(0.0, {});
        const double gap = timed([&] { return wmax_check(flat, area_normalized(flat, u), 256).gap; });
        const bool ok = cocycle <= 1e-7 && scaling <= 1e-8 && halving && std::abs(gap) <= 1e-6 && slowest < 10;
        return Outcome{ok, fmt("cocycle %.3g, scaling %.3g, dW defects %.3g -> %.3g", cocycle, scaling, a.defect, b.defect) +
                               fmt(", wmax gap %.3g, slowest check %.2f s", gap, slowest)};
    });

    criterion(12, "Variation under inversion", [] {
        double exact = 0, fd = 0;
        for (int k = 0; k < 1000; ++k) {
            Mat2 a;
            a << uni(-1, 1), uni(-1, 1), uni(-1, 1), uni(-1, 1);
            const SymTensor2 g{a * a.transpose() + 0.5 * Mat2::Identity()};
            const Mat2 gi = g.m.inverse();
            auto sym = [] {
                Mat2 m;
                const double o = uni(-1, 1);
                m << uni(-1, 1), o, o, uni(-1, 1);
                return m;
            };
            const Mat2 S = sym() + 2 * Mat2::Identity(), dS = sym();
            const SymTensor2 dg{sym()};
            const Endo2 p{gi * S}, dp{gi * dS - gi * dg.m * gi * S};
            const double scale = std::pow(1 + p.m.norm() * p.m.inverse().norm(), 2);
            exact = std::max(exact, variation_duality_residual(g, p, dg, dp) / scale);
            fd = std::max(fd, variation_duality_residual(g, p, dg, dp, invert_variation_fd(g, p, dg, dp)) / scale);
        }
        return Outcome{exact < 1e-9 && fd < 1e-5, fmt("max residual %.3g exact, %.3g by differences, 1000 instances", exact, fd)};
    });

    criterion(13, "Grafting bounds", [] {
        const auto b = graft_bounds({-2, 1, 0.5, 0.5});
        const bool instance = b.lower == -0.25 && b.upper == 0.25;
        const bool corollary = newbound_max(1, 1.5) == 2.5;
        std::size_t violations = 0, cases = 0;
        for (int i = 0; i <= 50; ++i)
            for (int j = 0; j <= 50; ++j)
                for (int k = 0; k <= 50; ++k) {
                    const double L = 0.1 * i, phiinf = 0.06 * k;
                    const double phi2 = newbound_max(L, phiinf) * j / 50.0;
                    const auto g = graft_bounds({-2, L, phi2, phiinf});
                    ++cases;
                    if (g.lower > g.upper + 1e-12 * (1 + std::abs(g.upper))) ++violations;
                }
        return Outcome{instance && corollary && violations == 0,
                       fmt("(lower, upper) = (%.17g, %.17g); newbound_max(1, 3/2) = %.17g; %.0f lattice violations",
                           b.lower, b.upper, newbound_max(1, 1.5), double(violations)) +
                           fmt(" of %.0f", double(cases))};
    });

    std::printf("summary: %d of 13 criteria passed\n", 13 - failures);
    return failures ? 1 : 0;
}
