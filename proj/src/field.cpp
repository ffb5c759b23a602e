#include "epstein_kit/field.hpp"

#include <algorithm>
#include <array>
#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <cmath>
#include <limits>
#include <sstream>

#include "epstein_kit/kernels.hpp"
#include "epstein_kit/parallel.hpp"

namespace ek {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

class LogSinProfile : public AngularProfile {
public:
    explicit LogSinProfile(double a) : a_(a) {}
    Jet at(double t) const override {
        const double s = std::sin(t), c = std::cos(t);
        return {-a_ * std::log(s), -a_ * c / s, a_ / (s * s)};
    }
    std::string name() const override {
        std::ostringstream os;
        os.precision(17);
        os << "log-sin(" << a_ << ")";
        return os.str();
    }

private:
    double a_;
};

class TableProfile : public AngularProfile {
public:
    TableProfile(double t0, double dt, std::vector<double> v)
        : spline_(v.begin(), v.end(), t0, dt), t0_(t0), t1_(t0 + dt * static_cast<double>(v.size() - 1)) {}
    Jet at(double t) const override {
        if (t < t0_ || t > t1_) throw DomainError("angle outside the tabulated profile");
        return {spline_(t), spline_.prime(t), spline_.double_prime(t)};
    }
    std::string name() const override { return "table"; }

private:
    boost::math::interpolators::cardinal_cubic_b_spline<double> spline_;
    double t0_, t1_;
};

class HyperbolicDiskPhi : public ScalarField {
public:
    Jet2 jet(cplx z) const override {
        const double x = z.real(), y = z.imag();
        const double s = 1 - x * x - y * y;
        const double s2 = s * s;
        return {std::log(2 / s), 2 * x / s, 2 * y / s, 2 / s + 4 * x * x / s2, 4 * x * y / s2,
                2 / s + 4 * y * y / s2};
    }
};

class HyperbolicUhpPhi : public ScalarField {
public:
    Jet2 jet(cplx z) const override {
        const double y = z.imag();
        return {-std::log(y), 0, -1 / y, 0, 0, 1 / (y * y)};
    }
};

class SphericalPhi : public ScalarField {
public:
    Jet2 jet(cplx z) const override {
        const double x = z.real(), y = z.imag();
        const double t = 1 + x * x + y * y;
        const double t2 = t * t;
        return {std::log(2 / t), -2 * x / t, -2 * y / t, -2 / t + 4 * x * x / t2, 4 * x * y / t2,
                -2 / t + 4 * y * y / t2};
    }
    double length_scale(cplx z) const override { return std::max(1.0, std::abs(z)); }
};

// phi = -log r + h(theta) on the upper half plane.
class PowerConePhi : public ScalarField {
public:
    explicit PowerConePhi(AngularProfilePtr h) : h_(std::move(h)) {}
    Jet2 jet(cplx z) const override {
        const double x = z.real(), y = z.imag();
        const double r2 = x * x + y * y, r = std::sqrt(r2);
        const double c = x / r, s = y / r;
        const double th = std::atan2(y, x);
        const auto hj = h_->at(th);
        const double pr = -1 / r, prr = 1 / r2, pt = hj.h1, ptt = hj.h2;
        const double rx = c, ry = s, tx = -s / r, ty = c / r;
        const double rxx = s * s / r, rxy = -s * c / r, ryy = c * c / r;
        const double txx = 2 * s * c / r2, txy = (s * s - c * c) / r2, tyy = -2 * s * c / r2;
        Jet2 j;
        j.v = -std::log(r) + hj.h;
        j.x = pr * rx + pt * tx;
        j.y = pr * ry + pt * ty;
        j.xx = prr * rx * rx + ptt * tx * tx + pr * rxx + pt * txx;
        j.xy = prr * rx * ry + ptt * tx * ty + pr * rxy + pt * txy;
        j.yy = prr * ry * ry + ptt * ty * ty + pr * ryy + pt * tyy;
        return j;
    }
    double length_scale(cplx z) const override { return std::abs(z); }

private:
    AngularProfilePtr h_;
};

// First and second derivative at index i of n samples f[k * stride].
std::pair<double, double> stencil(const double* f, std::ptrdiff_t stride, int n, int i, double h) {
    auto at = [&](int k) { return f[k * stride]; };
    if (i >= 2 && i <= n - 3) {
        const double d1 = (at(i - 2) - 8 * at(i - 1) + 8 * at(i + 1) - at(i + 2)) / (12 * h);
        const double d2 =
            (-at(i - 2) + 16 * at(i - 1) - 30 * at(i) + 16 * at(i + 1) - at(i + 2)) / (12 * h * h);
        return {d1, d2};
    }
    const bool forward = i < 2;
    const int o = forward ? i : n - 1 - i;
    auto g = [&](int k) { return forward ? at(k) : at(n - 1 - k); };
    double d1, d2;
    if (o == 0) {
        d1 = (-25 * g(0) + 48 * g(1) - 36 * g(2) + 16 * g(3) - 3 * g(4)) / (12 * h);
        d2 = (45 * g(0) - 154 * g(1) + 214 * g(2) - 156 * g(3) + 61 * g(4) - 10 * g(5)) / (12 * h * h);
    } else {
        d1 = (-3 * g(0) - 10 * g(1) + 18 * g(2) - 6 * g(3) + g(4)) / (12 * h);
        d2 = (10 * g(0) - 15 * g(1) - 4 * g(2) + 14 * g(3) - 6 * g(4) + g(5)) / (12 * h * h);
    }
    return {forward ? d1 : -d1, d2};
}

// Cubic Lagrange weights at t for nodes 0, 1, 2, 3.
std::array<double, 4> lagrange4(double t) {
    return {-(t - 1) * (t - 2) * (t - 3) / 6, t * (t - 2) * (t - 3) / 2, -t * (t - 1) * (t - 3) / 2,
            t * (t - 1) * (t - 2) / 6};
}

}  // namespace

double SumField::length_scale(cplx z) const { return std::min(a_->length_scale(z), b_->length_scale(z)); }

TrigField::TrigField(double offset, std::vector<TrigTerm> terms) : offset_(offset), terms_(std::move(terms)) {}

Jet2 TrigField::jet(cplx z) const {
    Jet2 j = Jet2::constant(offset_);
    for (const auto& t : terms_) {
        const double km = 2 * pi * t.m, kn = 2 * pi * t.n;
        const double arg = km * z.real() + kn * z.imag() + t.phase;
        const double c = t.amp * std::cos(arg), s = t.amp * std::sin(arg);
        j.v += c;
        j.x -= s * km;
        j.y -= s * kn;
        j.xx -= c * km * km;
        j.xy -= c * km * kn;
        j.yy -= c * kn * kn;
    }
    return j;
}

double TrigField::length_scale(cplx) const {
    double k = 0;
    for (const auto& t : terms_)
        if (t.amp != 0) k = std::max(k, std::hypot(double(t.m), double(t.n)));
    return k == 0 ? 1.0 : std::min(1.0, 1.0 / (2 * pi * k));
}

ScalarFieldPtr constant_field(double c) { return std::make_shared<ConstantField>(c); }
ScalarFieldPtr sum(ScalarFieldPtr a, ScalarFieldPtr b) { return std::make_shared<SumField>(a, b); }
ScalarFieldPtr difference(ScalarFieldPtr a, ScalarFieldPtr b) { return std::make_shared<SumField>(a, b, -1.0); }
ScalarFieldPtr scaled(ScalarFieldPtr a, double s) { return std::make_shared<ScaledField>(a, s); }

AngularProfilePtr log_sin_profile(double a) { return std::make_shared<LogSinProfile>(a); }

AngularProfilePtr table_profile(double theta0, double dtheta, std::vector<double> samples) {
    if (samples.size() < 4) throw InputError("profile table needs at least 4 samples");
    if (!(theta0 > 0) || !(theta0 + dtheta * double(samples.size() - 1) < pi))
        throw InputError("profile table must lie inside (0, pi)");
    return std::make_shared<TableProfile>(theta0, dtheta, std::move(samples));
}

MetricField::MetricField(std::string name, ScalarFieldPtr phi, Domain domain, bool complete)
    : name_(std::move(name)), phi_(std::move(phi)), domain_(domain), complete_(complete) {}

MetricField& MetricField::with_box(double x0, double x1, double y0, double y1) {
    bx0_ = x0;
    bx1_ = x1;
    by0_ = y0;
    by1_ = y1;
    return *this;
}

bool MetricField::inside(cplx z) const {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    switch (domain_) {
        case Domain::plane:
        case Domain::torus:
            return true;
        case Domain::disk:
            return std::norm(z) < 1.0;
        case Domain::uhp:
            return z.imag() > 0;
        case Domain::box:
            return z.real() >= bx0_ && z.real() <= bx1_ && z.imag() >= by0_ && z.imag() <= by1_;
    }
    return false;
}

Jet2 MetricField::jet(cplx z) const {
    if (!inside(z)) {
        std::ostringstream os;
        os.precision(17);
        os << "point " << z.real() << "+" << z.imag() << "i outside the domain of " << name_;
        throw DomainError(os.str());
    }
    return phi_->jet(z);
}

double MetricField::density(cplx z) const { return std::exp(2 * jet(z).v); }

double MetricField::length_scale(cplx z) const {
    double d = kInf;
    if (domain_ == Domain::disk) d = 1 - std::abs(z);
    if (domain_ == Domain::uhp) d = z.imag();
    return std::min({d, phi_->length_scale(z), 1.0});
}

namespace catalog {

MetricField euclidean() { return {"euclidean", constant_field(0), Domain::plane}; }
MetricField hyperbolic_disk() {
    return {"hyperbolic-disk", std::make_shared<HyperbolicDiskPhi>(), Domain::disk, true};
}
MetricField hyperbolic_uhp() {
    return {"hyperbolic-uhp", std::make_shared<HyperbolicUhpPhi>(), Domain::uhp, true};
}
MetricField spherical() { return {"spherical", std::make_shared<SphericalPhi>(), Domain::plane}; }
MetricField power_cone(AngularProfilePtr h) {
    const std::string n = "powercone:" + h->name();
    return {n, std::make_shared<PowerConePhi>(std::move(h)), Domain::uhp, true};
}
MetricField torus_bump(double offset, std::vector<TrigTerm> terms) {
    return {"torus-bump", std::make_shared<TrigField>(offset, std::move(terms)), Domain::torus};
}
MetricField torus_bump() {
    return torus_bump(1.0, {{0.02, 1, 0, 0.0}, {0.015, 0, 1, 0.3}, {0.01, 1, 1, 1.1}});
}
MetricField disk_bump() {
    auto bump = std::make_shared<TrigField>(0.0, std::vector<TrigTerm>{{0.02, 1, 0, 0.0}, {0.015, 0, 1, 0.3}, {0.01, 1, 1, 1.1}});
    return {"disk-bump", sum(hyperbolic_disk().phi(), std::move(bump)), Domain::disk, true};
}

MetricField by_name(const std::string& spec) {
    const auto colon = spec.find(':');
    const std::string name = spec.substr(0, colon);
    const std::string param = colon == std::string::npos ? "" : spec.substr(colon + 1);
    auto no_param = [&] {
        if (!param.empty()) throw ConfigError("metric " + name + " takes no parameter");
    };
    if (name == "euclidean") return no_param(), euclidean();
    if (name == "hyperbolic-disk") return no_param(), hyperbolic_disk();
    if (name == "hyperbolic-uhp") return no_param(), hyperbolic_uhp();
    if (name == "spherical") return no_param(), spherical();
    if (name == "torus-bump") return no_param(), torus_bump();
    if (name == "disk-bump") return no_param(), disk_bump();
    if (name == "powercone") {
        if (param.empty() || param == "log-sin") return power_cone(log_sin_profile(1));
        if (param == "double-log-sin") return power_cone(log_sin_profile(2));
        try {
            std::size_t used = 0;
            const double a = std::stod(param, &used);
            if (used == param.size()) return power_cone(log_sin_profile(a));
        } catch (const std::exception&) {
        }
        throw ConfigError("unknown power-cone profile '" + param + "'");
    }
    throw ConfigError("unknown catalog metric '" + name + "'");
}

std::vector<std::string> names() {
    return {"euclidean", "hyperbolic-disk", "hyperbolic-uhp", "spherical", "powercone:log-sin",
            "powercone:double-log-sin", "torus-bump", "disk-bump"};
}

}  // namespace catalog

double curvature(const Jet2& phi) { return -std::exp(-2 * phi.v) * (phi.xx + phi.yy); }

double curvature(const MetricField& m, cplx z) { return curvature(m.jet(z)); }

double laplacian(const MetricField& m, const ScalarField& u, cplx z) {
    const Jet2 p = m.jet(z), uj = u.jet(z);
    return 4 * std::exp(-2 * p.v) * uj.dzzbar();
}

double gradient_norm_sq(const MetricField& m, const ScalarField& u, cplx z) {
    const Jet2 p = m.jet(z), uj = u.jet(z);
    return 4 * std::exp(-2 * p.v) * std::norm(uj.dz());
}

MetricField conformal_change(const MetricField& m, ScalarFieldPtr u) {
    MetricField out(m.name() + "+u", sum(m.phi(), std::move(u)), m.domain(), m.complete());
    return out;
}

Chart Chart::rectangle(double x0, double x1, double y0, double y1, int nx, int ny) {
    if (nx < 2 || ny < 2 || !(x1 > x0) || !(y1 > y0)) throw InputError("bad rectangle chart");
    Chart c;
    c.kind = Kind::rectangle;
    c.x0 = x0, c.x1 = x1, c.y0 = y0, c.y1 = y1, c.nx = nx, c.ny = ny;
    return c;
}

Chart Chart::uhp(double x0, double x1, double y0, double y1, int nx, int ny) {
    if (!(y0 > 0)) throw InputError("upper half plane box must have y0 > 0");
    Chart c = rectangle(x0, x1, y0, y1, nx, ny);
    c.kind = Kind::uhp;
    return c;
}

Chart Chart::disk(cplx center, double radius, int nr, int ntheta) {
    if (nr < 4 || ntheta < 4 || !(radius > 0)) throw InputError("bad disk chart");
    Chart c;
    c.kind = Kind::disk;
    c.center = center, c.radius = radius, c.nx = nr, c.ny = ntheta;
    return c;
}

Chart Chart::torus(int nx, int ny) {
    if (nx < 2 || ny < 2) throw InputError("bad torus chart");
    Chart c;
    c.kind = Kind::torus;
    c.x0 = 0, c.x1 = 1, c.y0 = 0, c.y1 = 1, c.nx = nx, c.ny = ny;
    return c;
}

std::vector<Chart::Node> Chart::nodes(bool clamp_disk) const {
    std::vector<Node> out;
    out.reserve(static_cast<std::size_t>(nx) * ny);
    switch (kind) {
        case Kind::rectangle:
        case Kind::uhp: {
            const double dx = (x1 - x0) / (nx - 1), dy = (y1 - y0) / (ny - 1);
            for (int j = 0; j < ny; ++j)
                for (int i = 0; i < nx; ++i) {
                    const double wx = (i == 0 || i == nx - 1) ? 0.5 : 1.0;
                    const double wy = (j == 0 || j == ny - 1) ? 0.5 : 1.0;
                    out.push_back({cplx(x0 + i * dx, y0 + j * dy), wx * wy * dx * dy, i, j});
                }
            break;
        }
        case Kind::torus: {
            const double w = 1.0 / (double(nx) * ny);
            for (int j = 0; j < ny; ++j)
                for (int i = 0; i < nx; ++i) out.push_back({cplx(double(i) / nx, double(j) / ny), w, i, j});
            break;
        }
        case Kind::disk: {
            const double rmax = clamp_disk ? radius * (1.0 - 3.0 / nx) : radius;
            const double dr = rmax / nx, dt = 2 * pi / ny;
            for (int j = 0; j < ny; ++j)
                for (int i = 0; i < nx; ++i) {
                    const double r = (i + 0.5) * dr;
                    const double t = j * dt;
                    out.push_back({center + std::polar(r, t), r * dr * dt, i, j});
                }
            break;
        }
    }
    return out;
}

Chart Chart::refined(int factor) const {
    Chart c = *this;
    if (kind == Kind::rectangle || kind == Kind::uhp) {
        c.nx = (nx - 1) * factor + 1;
        c.ny = (ny - 1) * factor + 1;
    } else {
        c.nx = nx * factor;
        c.ny = ny * factor;
    }
    return c;
}

Chart Chart::transposed() const {
    Chart c = *this;
    std::swap(c.x0, c.y0);
    std::swap(c.x1, c.y1);
    std::swap(c.nx, c.ny);
    return c;
}

double quadrature_samples(const std::vector<Chart::Node>& nodes, const std::vector<double>& f) {
    if (f.size() != nodes.size()) throw InputError("sample count does not match the chart");
    std::vector<double> w(nodes.size());
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        if (!std::isfinite(f[k])) {
            std::ostringstream os;
            os << "non-finite integrand at grid node (" << nodes[k].i << ", " << nodes[k].j << ")";
            throw QuadratureError(os.str(), nodes[k].i, nodes[k].j);
        }
        w[k] = nodes[k].w;
    }
    return kernels::pairwise_dot(f.data(), w.data(), f.size());
}

double quadrature(const MetricField& m, const Chart& chart, const std::function<double(cplx)>& f) {
    const auto nodes = chart.nodes(chart.kind == Chart::Kind::disk && m.complete());
    std::vector<double> vals(nodes.size());
    parallel_for(nodes.size(), [&](std::size_t k) {
        const cplx z = nodes[k].z;
        vals[k] = f(z) * m.density(z);
    });
    return quadrature_samples(nodes, vals);
}

double richardson(double coarse, double fine, int order) {
    const double p = std::ldexp(1.0, order);
    return (p * fine - coarse) / (p - 1);
}

GridField::GridField(int nx, int ny, double x0, double x1, double y0, double y1, std::vector<double> values)
    : nx_(nx), ny_(ny), x0_(x0), x1_(x1), y0_(y0), y1_(y1), values_(std::move(values)) {
    if (nx < 6 || ny < 6) throw InputError("grid metric needs at least 6x6 samples");
    if (values_.size() != static_cast<std::size_t>(nx) * ny) throw InputError("grid size mismatch");
    if (!(x1 > x0) || !(y1 > y0)) throw InputError("grid bounds are empty");
    for (std::size_t k = 0; k < values_.size(); ++k)
        if (!std::isfinite(values_[k]))
            throw QuadratureError("non-finite phi sample", int(k % nx), int(k / nx));
    hx_ = (x1 - x0) / (nx - 1);
    hy_ = (y1 - y0) / (ny - 1);
    jets_.assign(values_.size(), {});
    std::vector<double> fy(values_.size());
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const std::size_t k = std::size_t(j) * nx + i;
            const auto [dx1, dx2] = stencil(values_.data() + std::size_t(j) * nx, 1, nx, i, hx_);
            const auto [dy1, dy2] = stencil(values_.data() + i, nx, ny, j, hy_);
            jets_[k].v = values_[k];
            jets_[k].x = dx1;
            jets_[k].xx = dx2;
            jets_[k].y = dy1;
            jets_[k].yy = dy2;
            fy[k] = dy1;
        }
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
            jets_[std::size_t(j) * nx + i].xy = stencil(fy.data() + std::size_t(j) * nx, 1, nx, i, hx_).first;
}

cplx GridField::node(int i, int j) const { return {x0_ + i * hx_, y0_ + j * hy_}; }

double GridField::length_scale(cplx) const { return 4 * std::max(hx_, hy_); }

Jet2 GridField::jet(cplx z) const {
    const double u = (z.real() - x0_) / hx_, v = (z.imag() - y0_) / hy_;
    const double eps = 1e-9;
    if (u < -eps || u > nx_ - 1 + eps || v < -eps || v > ny_ - 1 + eps)
        throw DomainError("point outside the sampled grid");
    const int iu = int(std::lround(u)), iv = int(std::lround(v));
    if (std::abs(u - iu) < eps && std::abs(v - iv) < eps) return node_jet(iu, iv);
    const int bi = std::clamp(int(std::floor(u)) - 1, 0, nx_ - 4);
    const int bj = std::clamp(int(std::floor(v)) - 1, 0, ny_ - 4);
    const auto wx = lagrange4(u - bi), wy = lagrange4(v - bj);
    Jet2 out;
    for (int b = 0; b < 4; ++b)
        for (int a = 0; a < 4; ++a) out += (wx[a] * wy[b]) * node_jet(bi + a, bj + b);
    return out;
}

MetricField sampled_metric(std::string name, std::shared_ptr<const GridField> grid) {
    const double x0 = grid->x0(), x1 = grid->x1(), y0 = grid->y0(), y1 = grid->y1();
    MetricField m(std::move(name), std::move(grid), Domain::box);
    m.with_box(x0, x1, y0, y1);
    return m;
}

std::shared_ptr<GridField> sample_phi(const MetricField& m, int nx, int ny, double x0, double x1, double y0,
                                      double y1) {
    std::vector<double> v(static_cast<std::size_t>(nx) * ny);
    const double hx = (x1 - x0) / (nx - 1), hy = (y1 - y0) / (ny - 1);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) v[std::size_t(j) * nx + i] = m.jet({x0 + i * hx, y0 + j * hy}).v;
    return std::make_shared<GridField>(nx, ny, x0, x1, y0, y1, std::move(v));
}

}  // namespace ek
