#include "epstein_kit/schwarzian.hpp"

#include <algorithm>
#include <cmath>
#include <regex>
#include <sstream>

#include "epstein_kit/fd.hpp"
#include "epstein_kit/io.hpp"
#include "epstein_kit/parallel.hpp"

namespace ek {

namespace {

std::string fmt_c(cplx c) {
    std::ostringstream os;
    os.precision(17);
    os << c.real();
    if (c.imag() != 0) os << (c.imag() < 0 ? "" : "+") << c.imag() << "i";
    return os.str();
}

class IdentityMap : public HolomorphicMap {
public:
    HoloJet jet(cplx z) const override { return {z, 1, 0, 0}; }
    std::string name() const override { return "identity"; }
};

class PowerMap : public HolomorphicMap {
public:
    explicit PowerMap(cplx c) : c_(c) {}
    HoloJet jet(cplx z) const override {
        const cplx f = std::exp(c_ * std::log(z));
        return {f, c_ * f / z, c_ * (c_ - 1.0) * f / (z * z), c_ * (c_ - 1.0) * (c_ - 2.0) * f / (z * z * z)};
    }
    bool inside(cplx z) const override { return z.imag() > 0; }
    std::string name() const override { return "power:" + fmt_c(c_); }

private:
    cplx c_;
};

class MoebiusMap : public HolomorphicMap {
public:
    MoebiusMap(cplx a, cplx b, cplx c, cplx d) : a_(a), b_(b), c_(c), d_(d), det_(a * d - b * c) {
        if (std::abs(det_) == 0) throw InputError("degenerate Moebius map");
    }
    HoloJet jet(cplx z) const override {
        const cplx den = c_ * z + d_;
        const cplx d2 = den * den;
        return {(a_ * z + b_) / den, det_ / d2, -2.0 * c_ * det_ / (d2 * den), 6.0 * c_ * c_ * det_ / (d2 * d2)};
    }
    bool inside(cplx z) const override { return std::abs(c_ * z + d_) > 0; }
    std::string name() const override {
        return "moebius:" + fmt_c(a_) + "," + fmt_c(b_) + "," + fmt_c(c_) + "," + fmt_c(d_);
    }

private:
    cplx a_, b_, c_, d_, det_;
};

class ExpMap : public HolomorphicMap {
public:
    HoloJet jet(cplx z) const override {
        const cplx e = std::exp(z);
        return {e, e, e, e};
    }
    std::string name() const override { return "exp"; }
};

class CayleyMap : public MoebiusMap {
public:
    CayleyMap() : MoebiusMap(cplx(0, 1), cplx(0, 1), -1.0, 1.0) {}
    bool inside(cplx z) const override { return std::norm(z) < 1.0; }
    std::string name() const override { return "cayley"; }
};

class ComposedMap : public HolomorphicMap {
public:
    ComposedMap(HolomorphicMapPtr outer, HolomorphicMapPtr inner) : o_(std::move(outer)), i_(std::move(inner)) {}
    HoloJet jet(cplx z) const override {
        const HoloJet g = i_->jet(z);
        const HoloJet f = o_->jet(g.f);
        return {f.f, f.f1 * g.f1, f.f2 * g.f1 * g.f1 + f.f1 * g.f2,
                f.f3 * g.f1 * g.f1 * g.f1 + 3.0 * f.f2 * g.f1 * g.f2 + f.f1 * g.f3};
    }
    bool inside(cplx z) const override { return i_->inside(z) && o_->inside(i_->jet(z).f); }
    std::string name() const override { return o_->name() + "@" + i_->name(); }

private:
    HolomorphicMapPtr o_, i_;
};

}  // namespace

HoloJet ProjectiveStructure::jet(cplx z) const {
    if (!f->inside(z)) throw DomainError("point outside the developing map's domain");
    const HoloJet j = f->jet(z);
    if (std::abs(j.f1) == 0 || !std::isfinite(std::abs(j.f1))) throw CriticalPoint("f' vanishes");
    return j;
}

namespace structures {

HolomorphicMapPtr identity_map() { return std::make_shared<IdentityMap>(); }
HolomorphicMapPtr power_map(cplx c) { return std::make_shared<PowerMap>(c); }
HolomorphicMapPtr moebius_map(cplx a, cplx b, cplx c, cplx d) { return std::make_shared<MoebiusMap>(a, b, c, d); }
HolomorphicMapPtr exp_map() { return std::make_shared<ExpMap>(); }
HolomorphicMapPtr cayley_map() { return std::make_shared<CayleyMap>(); }
HolomorphicMapPtr compose(HolomorphicMapPtr outer, HolomorphicMapPtr inner) {
    return std::make_shared<ComposedMap>(std::move(outer), std::move(inner));
}

ProjectiveStructure identity() { return {identity_map(), true}; }
ProjectiveStructure power(cplx c) { return {power_map(c), false}; }
ProjectiveStructure moebius(cplx a, cplx b, cplx c, cplx d) { return {moebius_map(a, b, c, d), false}; }
ProjectiveStructure from_map(HolomorphicMapPtr f) { return {std::move(f), false}; }

ProjectiveStructure by_name(const std::string& spec) {
    const auto colon = spec.find(':');
    const std::string name = spec.substr(0, colon);
    const std::string param = colon == std::string::npos ? "" : spec.substr(colon + 1);
    if (name == "identity" && param.empty()) return identity();
    if (name == "exp" && param.empty()) return from_map(exp_map());
    if (name == "power") {
        if (param.empty()) throw ConfigError("power structure needs an exponent, e.g. power:1.5");
        return power(parse_complex(param));
    }
    if (name == "moebius") {
        std::vector<cplx> v;
        std::stringstream ss(param);
        std::string item;
        while (std::getline(ss, item, ',')) v.push_back(parse_complex(item));
        if (v.size() != 4) throw ConfigError("moebius structure needs a,b,c,d");
        return moebius(v[0], v[1], v[2], v[3]);
    }
    throw ConfigError("unknown projective structure '" + spec + "'");
}

}  // namespace structures

cplx parse_complex(const std::string& s) {
    static const std::regex re(
        R"(^\s*([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*(?:([+-]\s*(?:\d+\.?\d*|\.\d+)?(?:[eE][+-]?\d+)?)\s*i)?\s*$)");
    std::smatch m;
    if (s.empty() || !std::regex_match(s, m, re) || (!m[1].matched && !m[2].matched))
        throw ConfigError("cannot parse complex number '" + s + "'");
    double re_part = m[1].matched ? std::stod(m[1].str()) : 0.0;
    double im_part = 0;
    if (m[2].matched) {
        std::string t = m[2].str();
        t.erase(std::remove(t.begin(), t.end(), ' '), t.end());
        if (t == "+" || t == "-") t += "1";
        im_part = std::stod(t);
    }
    return {re_part, im_part};
}

cplx schwarzian_derivative(const HoloJet& j) {
    if (std::abs(j.f1) == 0) throw CriticalPoint("f' vanishes");
    const cplx a = j.f2 / j.f1;
    return j.f3 / j.f1 - 1.5 * a * a;
}

cplx schwarzian_derivative(const HolomorphicMap& f, cplx z) { return schwarzian_derivative(f.jet(z)); }

Jet2 half_log_abs_derivative_sq(const HoloJet& j) {
    const cplx a = j.f2 / j.f1;
    return Jet2::real_part(std::log(j.f1), a, j.f3 / j.f1 - a * a);
}

cplx os_q(const Jet2& phi, const Jet2& f) {
    const cplx fz = f.dz();
    return f.dzz() - 2.0 * phi.dz() * fz - fz * fz;
}

cplx os_q(const MetricField& base, const ScalarField& f, cplx z) { return os_q(base.jet(z), f.jet(z)); }

cplx q_sigma(const ProjectiveStructure& s, const Jet2& phi, cplx z) {
    const cplx from_flat = os_q(Jet2{}, phi);
    if (s.identity) return from_flat;
    return from_flat - 0.5 * schwarzian_derivative(s.jet(z));
}

cplx q_sigma(const ProjectiveStructure& s, const MetricField& m, cplx z) { return q_sigma(s, m.jet(z), z); }

Endo2 shape_operator_hat(const Jet2& phi, cplx q) {
    const double k = curvature(phi);
    const double e = 4 * std::exp(-2 * phi.v);
    Mat2 b;
    b << -k + e * q.real(), -e * q.imag(), -e * q.imag(), -k - e * q.real();
    return {b};
}

Endo2 shape_operator_hat(const ProjectiveStructure& s, const MetricField& m, cplx z) {
    const Jet2 phi = m.jet(z);
    return shape_operator_hat(phi, q_sigma(s, phi, z));
}

double norm_q(const ProjectiveStructure& s, const MetricField& m, cplx z) {
    const Jet2 phi = m.jet(z);
    return std::abs(q_sigma(s, phi, z)) * std::exp(-2 * phi.v);
}

double fd_step(const MetricField& m, cplx z) { return 2e-3 * m.length_scale(z); }

cplx codazzi_residual(const std::function<cplx(cplx)>& r, const std::function<double(cplx)>& s,
                      const MetricField& m, cplx z) {
    const double h = fd_step(m, z);
    const cplx r_zbar = 0.5 * (fd::dx(r, z, h) + cplx(0, 1) * fd::dy(r, z, h));
    const cplx s_z = 0.5 * cplx(fd::dx(s, z, h), -fd::dy(s, z, h));
    return 2.0 * r_zbar + s_z * m.density(z);
}

cplx q_sigma_zbar(const ProjectiveStructure& s, const MetricField& m, cplx z) {
    const double h = fd_step(m, z);
    auto q = [&](cplx w) { return q_sigma(s, m, w); };
    return 0.5 * (fd::dx(q, z, h) + cplx(0, 1) * fd::dy(q, z, h));
}

std::vector<QuadDiffSample> sample_quad_diff(const ProjectiveStructure& s, const MetricField& m,
                                             const Chart& chart) {
    const auto nodes = chart.nodes(chart.kind == Chart::Kind::disk && m.complete());
    std::vector<QuadDiffSample> out(nodes.size());
    parallel_for(nodes.size(), [&](std::size_t k) {
        const cplx z = nodes[k].z;
        const Jet2 phi = m.jet(z);
        const cplx q = q_sigma(s, phi, z);
        out[k] = {z, q, std::abs(q) * std::exp(-2 * phi.v)};
    });
    return out;
}

std::string quad_diff_csv(const std::vector<QuadDiffSample>& rows) {
    std::string out = "x,y,re_q,im_q,norm_q\n";
    for (const auto& r : rows)
        out += csv_row({r.z.real(), r.z.imag(), r.q.real(), r.q.imag(), r.norm});
    return out;
}

}  // namespace ek
