#include "epstein_kit/epstein.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "epstein_kit/fd.hpp"
#include "epstein_kit/io.hpp"
#include "epstein_kit/parallel.hpp"

namespace ek {

namespace {

const Eigen::Vector4d kEta(1, 1, 1, -1);

MinkVec lower(const MinkVec& v) { return kEta.cwiseProduct(v); }

void require_hyperboloid(const MinkVec& p) {
    const double q = mink(p, p);
    if (!(p(3) > 0) || !(std::abs(q + 1) <= 1e-8 * std::max(1.0, p(3) * p(3))))
        throw InputError("not a point of the hyperboloid");
}

// Columns g-orthonormal: e1 along d/dx, e2 by Gram-Schmidt.
Mat2 orthonormal_frame(const Mat2& g) {
    Mat2 e;
    const double n1 = std::sqrt(g(0, 0));
    e.col(0) = Eigen::Vector2d(1 / n1, 0);
    Eigen::Vector2d v(0, 1);
    v -= (e.col(0).dot(g * v)) * e.col(0);
    e.col(1) = v / std::sqrt(v.dot(g * v));
    return e;
}

MinkVec mink_normalize(MinkVec v) { return v / std::sqrt(std::abs(mink(v, v))); }

}  // namespace

double mink(const MinkVec& a, const MinkVec& b) { return a(0) * b(0) + a(1) * b(1) + a(2) * b(2) - a(3) * b(3); }

double hyperbolic_distance(const MinkVec& a, const MinkVec& b) {
    const MinkVec d = a - b;
    return 2 * std::asinh(0.5 * std::sqrt(std::max(0.0, mink(d, d))));
}

MinkVec sphere_lift(cplx w) {
    const double u = w.real(), v = w.imag(), r2 = u * u + v * v, d = 1 + r2;
    return {2 * u / d, 2 * v / d, (r2 - 1) / d, 1.0};
}

NullLift null_lift(const ProjectiveStructure& s, const MetricField& m, cplx z) {
    const Jet2 phi = m.jet(z);
    const HoloJet f = s.jet(z);
    const double u = f.f.real(), v = f.f.imag();
    const double d = 1 + u * u + v * v, d2 = d * d;
    const MinkVec nu = sphere_lift(f.f);
    const MinkVec nu_u(2 / d - 4 * u * u / d2, -4 * u * v / d2, 4 * u / d2, 0);
    const MinkVec nu_v(-4 * u * v / d2, 2 / d - 4 * v * v / d2, 4 * v / d2, 0);
    const double a = f.f1.real(), b = f.f1.imag();
    const double ux = a, vx = b, uy = -b, vy = a;
    const cplx r = f.f2 / f.f1;
    const double lambda = std::exp(phi.v) * d / (2 * std::abs(f.f1));
    const double llx = phi.x + 2 * (u * ux + v * vx) / d - r.real();
    const double lly = phi.y + 2 * (u * uy + v * vy) / d + r.imag();
    NullLift out;
    out.xi = lambda * nu;
    out.xi_x = lambda * (llx * nu + ux * nu_u + vx * nu_v);
    out.xi_y = lambda * (lly * nu + uy * nu_u + vy * nu_v);
    return out;
}

NullLift null_lift(const MetricField& m, cplx z) { return null_lift(structures::identity(), m, z); }

EpsteinJet epstein_point(const ProjectiveStructure& s, const MetricField& m, cplx z) {
    EpsteinJet j;
    j.z = z;
    j.hat = projective_pair(s, m, z);
    const double det_hat = (Mat2::Identity() + j.hat.B.m).determinant();
    const double scale = std::max(1.0, j.hat.B.m.squaredNorm());
    if (std::abs(det_hat) < 1e-10 * scale)
        throw EnvelopeDegenerate("horosphere envelope degenerates: det(Id + Bhat) = 0");
    try {
        j.pair = to_dual(j.hat);
    } catch (const DegenerateDual& e) {
        throw EnvelopeDegenerate(std::string("horosphere envelope degenerates: ") + e.what());
    }
    const NullLift nl = null_lift(s, m, z);
    Eigen::Matrix<double, 3, 4> a;
    a.row(0) = lower(nl.xi).transpose();
    a.row(1) = lower(nl.xi_x).transpose();
    a.row(2) = lower(nl.xi_y).transpose();
    // Rows differ in scale by powers of e^phi near an ideal boundary; the rank test
    // is on the row-normalized system.
    const Eigen::JacobiSVD<Eigen::Matrix<double, 3, 4>> svd(a.rowwise().normalized());
    const auto sv = svd.singularValues();
    if (!(sv(2) > 1e-12 * sv(0))) throw EnvelopeDegenerate("null lift derivatives are linearly dependent");
    const Eigen::Vector3d rhs(-1, 0, 0);
    const Eigen::Matrix3d aat = a * a.transpose();
    const MinkVec p0 = a.transpose() * aat.ldlt().solve(rhs);
    // The solution set is p0 + s xi; on it <p, p> is linear in s because xi is null
    // and <p0, xi> = -1.
    const double sc = 0.5 * (mink(p0, p0) + 1);
    j.p = p0 + sc * nl.xi;
    if (!(j.p(3) > 0)) throw NoSurface("envelope point is not on the upper sheet");
    j.n = nl.xi - j.p;
    return j;
}

EpsteinJet epstein_point(const MetricField& m, cplx z) { return epstein_point(structures::identity(), m, z); }

BoundaryPoint boundary_point(const MinkVec& v) {
    if (!(std::abs(v(3)) > 0)) return {0, true};
    const double x = v(0) / v(3), y = v(1) / v(3), zc = v(2) / v(3);
    const double den = 1 - zc;
    if (std::abs(den) < 1e-14) return {0, true};
    return {cplx(x, y) / den, false};
}

GaussMaps gauss_maps(const EpsteinJet& j) { return {boundary_point(j.p + j.n), boundary_point(j.p - j.n)}; }

MinkVec geodesic_flow(const MinkVec& p, const MinkVec& n, double t) { return std::cosh(t) * p + std::sinh(t) * n; }

Eigen::Vector3d to_ball(const MinkVec& p) {
    require_hyperboloid(p);
    return p.head<3>() / (1 + p(3));
}

MinkVec from_ball(const Eigen::Vector3d& b) {
    const double r2 = b.squaredNorm();
    if (!(r2 < 1)) throw InputError("point outside the unit ball");
    MinkVec p;
    p.head<3>() = 2 * b / (1 - r2);
    p(3) = (1 + r2) / (1 - r2);
    return p;
}

namespace {

Eigen::Vector3d invert_north(const Eigen::Vector3d& b) {
    const Eigen::Vector3d north(0, 0, 1);
    const Eigen::Vector3d d = b - north;
    return north + 2 * d / d.squaredNorm();
}

}  // namespace

Eigen::Vector3d to_uhs(const MinkVec& p) {
    const Eigen::Vector3d w = invert_north(to_ball(p));
    return {w(0), w(1), -w(2)};
}

MinkVec from_uhs(const Eigen::Vector3d& x) {
    if (!(x(2) > 0)) throw InputError("point outside upper half space");
    return from_ball(invert_north({x(0), x(1), -x(2)}));
}

Eigen::Matrix4d boost_to_origin(const MinkVec& p) {
    require_hyperboloid(p);
    const Eigen::Vector3d u = p.head<3>();
    const double g = p(3), u2 = u.squaredNorm();
    Eigen::Matrix4d l = Eigen::Matrix4d::Identity();
    if (u2 == 0) return l;
    const double c = (g - 1) / u2;
    l.topLeftCorner<3, 3>() += c * u * u.transpose();
    l.topRightCorner<3, 1>() = -u;
    l.bottomLeftCorner<1, 3>() = -u.transpose();
    l(3, 3) = g;
    return l;
}

SymTensor2 visual_metric_pullback(const MinkVec& p, const ProjectiveStructure& s, cplx z, double h) {
    const Eigen::Matrix4d l = boost_to_origin(p);
    auto on_sphere = [&](cplx w) -> Eigen::Vector3d {
        const MinkVec v = l * sphere_lift(s.jet(w).f);
        return v.head<3>() / v(3);
    };
    const Eigen::Vector3d dx = fd::dx(on_sphere, z, h), dy = fd::dy(on_sphere, z, h);
    Mat2 g;
    g << dx.dot(dx), dx.dot(dy), dx.dot(dy), dy.dot(dy);
    return {g};
}

namespace {

struct Christoffel {
    double g[2][2][2];  // g[k][i][j]
};

Christoffel christoffel(const PairField& pf, cplx z, double h) {
    const Mat2 ginv = pf(z).g.m.inverse();
    const Mat2 dg[2] = {fd::dx([&](cplx w) -> Mat2 { return pf(w).g.m; }, z, h),
                        fd::dy([&](cplx w) -> Mat2 { return pf(w).g.m; }, z, h)};
    Christoffel c;
    for (int k = 0; k < 2; ++k)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                double s = 0;
                for (int l = 0; l < 2; ++l) s += ginv(k, l) * (dg[i](l, j) + dg[j](l, i) - dg[l](i, j));
                c.g[k][i][j] = 0.5 * s;
            }
    return c;
}

// Connection matrix along the velocity v at z: ds/dtau = omega s for parallel s.
Eigen::Matrix4d connection_matrix(const PairField& pf, const MetricField& m, cplx z, const Eigen::Vector2d& v) {
    const FundamentalPair p = pf(z);
    const Christoffel c = christoffel(pf, z, fd_step(m, z));
    const Eigen::Vector2d bv = p.B.m * v;
    const Eigen::Vector2d gbv = p.g.m * bv, gv = p.g.m * v;
    Eigen::Matrix4d om = Eigen::Matrix4d::Zero();
    for (int k = 0; k < 2; ++k) {
        for (int j = 0; j < 2; ++j) om(k, j) = -(c.g[k][0][j] * v(0) + c.g[k][1][j] * v(1));
        om(k, 2) = -bv(k);
        om(k, 3) = -v(k);
        om(2, k) = gbv(k);
        om(3, k) = -gv(k);
    }
    return om;
}

MinkVec frame_coordinates(const FundamentalPair& base, const Eigen::Vector4d& s) {
    const Mat2 e = orthonormal_frame(base.g.m);
    const Eigen::Vector2d zv = s.head<2>();
    const Eigen::Vector2d gz = base.g.m * zv;
    return {gz.dot(e.col(0)), gz.dot(e.col(1)), s(2), s(3)};
}

}  // namespace

Eigen::Matrix4d bonnet_transport(const PairField& pf, const MetricField& m, cplx z0, cplx z1, int steps) {
    const Eigen::Vector2d v((z1 - z0).real(), (z1 - z0).imag());
    const double dt = 1.0 / steps;
    Eigen::Matrix4d f = Eigen::Matrix4d::Identity();
    for (int k = 0; k < steps; ++k) {
        const double t0 = k * dt;
        const cplx za = z0 + t0 * (z1 - z0), zm = z0 + (t0 + 0.5 * dt) * (z1 - z0), zb = z0 + (t0 + dt) * (z1 - z0);
        const Eigen::Matrix4d oa = connection_matrix(pf, m, za, v);
        const Eigen::Matrix4d om = connection_matrix(pf, m, zm, v);
        const Eigen::Matrix4d ob = connection_matrix(pf, m, zb, v);
        const Eigen::Matrix4d k1 = oa * f;
        const Eigen::Matrix4d k2 = om * (f + 0.5 * dt * k1);
        const Eigen::Matrix4d k3 = om * (f + 0.5 * dt * k2);
        const Eigen::Matrix4d k4 = ob * (f + dt * k3);
        f += (dt / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
        if (!f.allFinite()) throw StepRejected("non-finite state in parallel transport");
    }
    return f;
}

MinkVec bonnet_integrate(const MetricField& m, const ProjectiveStructure& s, const std::vector<cplx>& path,
                         double t, const BonnetOptions& opts) {
    if (path.empty()) throw InputError("empty path");
    const PairField pf = dual_pair_field(s, m);
    for (cplx z : path) {
        const GcResidual r = hyperbolic_residuals(pf, z, fd_step(m, z));
        if (!(std::abs(r.gauss) <= opts.gc_tolerance && std::abs(r.codazzi) <= opts.gc_tolerance))
            throw PreconditionFailed("Gauss-Codazzi residuals of the dual pair exceed tolerance on the path");
    }
    double total = 0;
    for (std::size_t k = 1; k < path.size(); ++k) total += std::abs(path[k] - path[k - 1]);
    const int n_total = std::max(64, 8 * opts.grid_resolution);
    Eigen::Matrix4d f = Eigen::Matrix4d::Identity();
    for (std::size_t k = 1; k < path.size(); ++k) {
        const double len = std::abs(path[k] - path[k - 1]);
        if (len == 0) continue;
        const int steps = std::max(1, int(std::ceil(n_total * len / total)));
        f = bonnet_transport(pf, m, path[k - 1], path[k], steps) * f;
    }
    const Eigen::Vector4d end(0, 0, std::sinh(t), std::cosh(t));
    const Eigen::Vector4d at_base = f.partialPivLu().solve(end);
    if (!at_base.allFinite()) throw StepRejected("non-finite transported section");
    return frame_coordinates(pf(path.front()), at_base);
}

Eigen::Matrix4d epstein_frame(const MetricField& m, const ProjectiveStructure& s, cplx z0) {
    const EpsteinJet j = epstein_point(s, m, z0);
    const double h = fd_step(m, z0);
    auto pos = [&](cplx w) -> MinkVec { return epstein_point(s, m, w).p; };
    const MinkVec px = fd::dx(pos, z0, h), py = fd::dy(pos, z0, h);
    const Mat2 e = orthonormal_frame(j.pair.g.m);
    MinkVec e1 = e(0, 0) * px + e(1, 0) * py;
    MinkVec e2 = e(0, 1) * px + e(1, 1) * py;
    auto clean = [&](MinkVec v) {
        v += mink(v, j.p) * j.p;
        v -= mink(v, j.n) * j.n;
        return v;
    };
    e1 = mink_normalize(clean(e1));
    e2 = clean(e2);
    e2 = mink_normalize(e2 - mink(e2, e1) * e1);
    Eigen::Matrix4d l;
    l.col(0) = e1;
    l.col(1) = e2;
    l.col(2) = j.n;
    l.col(3) = j.p;
    return l;
}

std::vector<MinkVec> bonnet_grid(const MetricField& m, const ProjectiveStructure& s, const Chart& chart,
                                 int base_i, int base_j, double t, int steps_per_cell) {
    if (chart.kind != Chart::Kind::rectangle && chart.kind != Chart::Kind::uhp)
        throw InputError("bonnet_grid needs a rectangular chart");
    const int nx = chart.nx, ny = chart.ny;
    const auto nodes = chart.nodes();
    auto node = [&](int i, int j) { return nodes[std::size_t(j) * nx + i].z; };
    const PairField pf = dual_pair_field(s, m);
    std::vector<Eigen::Matrix4d> row(nx);
    row[base_i] = Eigen::Matrix4d::Identity();
    for (int i = base_i + 1; i < nx; ++i)
        row[i] = bonnet_transport(pf, m, node(i - 1, base_j), node(i, base_j), steps_per_cell) * row[i - 1];
    for (int i = base_i - 1; i >= 0; --i)
        row[i] = bonnet_transport(pf, m, node(i + 1, base_j), node(i, base_j), steps_per_cell) * row[i + 1];
    std::vector<MinkVec> out(nodes.size());
    const FundamentalPair base = pf(node(base_i, base_j));
    const Eigen::Vector4d end(0, 0, std::sinh(t), std::cosh(t));
    parallel_for(std::size_t(nx), [&](std::size_t ii) {
        const int i = int(ii);
        std::vector<Eigen::Matrix4d> col(ny);
        col[base_j] = row[i];
        for (int j = base_j + 1; j < ny; ++j)
            col[j] = bonnet_transport(pf, m, node(i, j - 1), node(i, j), steps_per_cell) * col[j - 1];
        for (int j = base_j - 1; j >= 0; --j)
            col[j] = bonnet_transport(pf, m, node(i, j + 1), node(i, j), steps_per_cell) * col[j + 1];
        for (int j = 0; j < ny; ++j)
            out[std::size_t(j) * nx + i] = frame_coordinates(base, col[j].partialPivLu().solve(end));
    });
    return out;
}

int Mesh::failures() const {
    return int(std::count_if(vertices.begin(), vertices.end(), [](const MeshVertex& v) { return !v.valid; }));
}

Mesh epstein_mesh(const MetricField& m0, const ProjectiveStructure& s, const Chart& chart, Model model, double t) {
    if (chart.kind != Chart::Kind::rectangle && chart.kind != Chart::Kind::uhp)
        throw InputError("epstein_mesh needs a rectangular chart");
    const MetricField m = t == 0 ? m0 : conformal_change(m0, constant_field(t));
    Mesh mesh;
    mesh.nx = chart.nx;
    mesh.ny = chart.ny;
    mesh.model = model;
    const auto nodes = chart.nodes();
    mesh.vertices.resize(nodes.size());
    parallel_for(nodes.size(), [&](std::size_t k) {
        MeshVertex& v = mesh.vertices[k];
        v.z = nodes[k].z;
        try {
            const EpsteinJet j = epstein_point(s, m, v.z);
            v.p = j.p;
            v.x = model == Model::ball ? to_ball(j.p) : to_uhs(j.p);
            const auto ev = principal_curvatures(j.pair);
            v.lambda1 = ev[0];
            v.lambda2 = ev[1];
            v.K = j.pair.B.det() - 1;
            v.H = 0.5 * j.pair.B.trace();
            v.valid = v.x.allFinite();
            if (!v.valid) v.failure = "non-finite coordinates";
        } catch (const Error& e) {
            v.failure = e.what();
        }
    });
    const int nx = mesh.nx;
    for (int j = 0; j + 1 < mesh.ny; ++j)
        for (int i = 0; i + 1 < nx; ++i) {
            const int a = j * nx + i, b = a + 1, c = a + nx, d = c + 1;
            const auto& vs = mesh.vertices;
            if (vs[a].valid && vs[b].valid && vs[d].valid) mesh.faces.push_back({a, b, d});
            if (vs[a].valid && vs[d].valid && vs[c].valid) mesh.faces.push_back({a, d, c});
        }
    return mesh;
}

std::string mesh_obj(const Mesh& mesh, const std::string& header) {
    std::string out;
    if (!header.empty()) out += "# " + header + "\n";
    std::vector<int> index(mesh.vertices.size(), 0);
    int next = 1;
    for (std::size_t k = 0; k < mesh.vertices.size(); ++k) {
        const auto& v = mesh.vertices[k];
        if (!v.valid) continue;
        index[k] = next++;
        out += "v " + format_double(v.x(0)) + " " + format_double(v.x(1)) + " " + format_double(v.x(2)) + "\n";
    }
    for (const auto& f : mesh.faces)
        out += "f " + std::to_string(index[f[0]]) + " " + std::to_string(index[f[1]]) + " " +
               std::to_string(index[f[2]]) + "\n";
    return out;
}

std::string mesh_csv(const Mesh& mesh) {
    std::string out = "i,j,x,y,lambda1,lambda2,K,H\n";
    for (std::size_t k = 0; k < mesh.vertices.size(); ++k) {
        const auto& v = mesh.vertices[k];
        if (!v.valid) continue;
        const int i = int(k) % mesh.nx, j = int(k) / mesh.nx;
        out += std::to_string(i) + "," + std::to_string(j) + "," +
               csv_row({v.z.real(), v.z.imag(), v.lambda1, v.lambda2, v.K, v.H});
    }
    return out;
}

}  // namespace ek
