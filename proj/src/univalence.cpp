#include "epstein_kit/univalence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "epstein_kit/fd.hpp"
#include "epstein_kit/io.hpp"
#include "epstein_kit/kernels.hpp"
#include "epstein_kit/parallel.hpp"

namespace ek {

const char* classification_name(Classification c) {
    switch (c) {
        case Classification::no_conclusion: return "no-conclusion";
        case Classification::univalent_continuous: return "univalent-with-continuous-extension";
        case Classification::homeomorphic_extension: return "homeomorphic-extension";
        case Classification::qc_extension: return "qc-extension";
    }
    return "?";
}

double criterion_ratio(const ProjectiveStructure& s, const MetricField& m, cplx z) {
    const double k = curvature(m, z);
    const double nq = norm_q(s, m, z);
    if (k < 0) return 4 * nq / -k;
    if (k == 0 && nq == 0) return 1.0;
    return std::numeric_limits<double>::infinity();
}

CriterionReport classify(const ProjectiveStructure& s, const MetricField& m, const Chart& chart,
                         const ClassifyOptions& opts) {
    if (!m.complete() || (m.domain() != Domain::disk && m.domain() != Domain::uhp))
        throw PreconditionFailed("classify needs a complete metric on the disk or upper half plane");
    const auto nodes = chart.nodes(chart.kind == Chart::Kind::disk);
    std::vector<double> ratio(nodes.size()), curv(nodes.size());
    parallel_for(nodes.size(), [&](std::size_t k) {
        curv[k] = curvature(m, nodes[k].z);
        ratio[k] = criterion_ratio(s, m, nodes[k].z);
    });
    CriterionReport r;
    r.points = nodes.size();
    r.sup_ratio = -1;
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        if (!(curv[k] < 0)) r.negatively_curved = false;
        if (ratio[k] > r.sup_ratio || std::isnan(ratio[k])) {
            r.sup_ratio = ratio[k];
            r.witness = nodes[k].z;
            if (std::isnan(ratio[k])) break;
        }
    }
    if (opts.want_qc && !r.negatively_curved)
        throw CriterionUnavailable("quasiconformal criterion needs K < 0 on the whole grid");
    if (!(r.sup_ratio <= 1 + opts.slack)) {
        r.classification = Classification::no_conclusion;
    } else if (r.sup_ratio >= 1 - opts.slack) {
        r.classification = Classification::univalent_continuous;
    } else if (opts.want_qc) {
        r.classification = Classification::qc_extension;
        r.k = std::max(0.0, r.sup_ratio);
    } else {
        r.classification = Classification::homeomorphic_extension;
    }
    return r;
}

bool zc_pointwise(cplx c, const AngularProfile& h, double theta, double slack) {
    const auto j = h.at(theta);
    return std::abs(j.h1 * j.h1 + c * c - j.h2) <= j.h2 + slack;
}

cplx CGrid::at(int i, int j) const { return {re0 + i * dre(), im0 + j * dim()}; }

std::size_t RegionMask::count() const { return std::size_t(std::count(mask.begin(), mask.end(), 1)); }

RegionMask region_scan(const AngularProfile& h, const CGrid& grid, int ntheta, double slack) {
    if (grid.nre < 2 || grid.nim < 2) throw InputError("c-grid needs at least 2x2 nodes");
    const int n = std::max(2, ntheta + (ntheta & 1));
    std::vector<double> base(n - 1), bound(n - 1);
    for (int k = 1; k < n; ++k) {
        const auto j = h.at(pi * k / n);
        base[k - 1] = j.h1 * j.h1 - j.h2;
        bound[k - 1] = j.h2;
    }
    RegionMask r{grid, std::vector<std::uint8_t>(std::size_t(grid.nre) * grid.nim)};
    const auto isa = kernels::active_isa();
    parallel_for(std::size_t(grid.nim), [&](std::size_t j) {
        std::vector<double> re(grid.nre), im(grid.nre);
        for (int i = 0; i < grid.nre; ++i) {
            const cplx c2 = grid.at(i, int(j)) * grid.at(i, int(j));
            re[i] = c2.real();
            im[i] = c2.imag();
        }
        kernels::zc_conjunction(re.data(), im.data(), re.size(), base.data(), bound.data(), base.size(), slack,
                                r.mask.data() + j * grid.nre, isa);
    });
    return r;
}

std::string region_csv(const RegionMask& r) {
    std::string out = "re_c,im_c,satisfied\n";
    for (int j = 0; j < r.grid.nim; ++j)
        for (int i = 0; i < r.grid.nre; ++i) {
            const cplx c = r.grid.at(i, j);
            out += format_double(c.real()) + "," + format_double(c.imag()) + "," + (r.at(i, j) ? "1" : "0") + "\n";
        }
    return out;
}

std::vector<std::vector<cplx>> region_outline(const RegionMask& r) {
    // Corner (a, b) sits at the lower left of the cell of node (a, b).
    using Corner = std::pair<int, int>;
    std::vector<std::pair<Corner, Corner>> edges;
    const int nx = r.grid.nre, ny = r.grid.nim;
    auto set = [&](int i, int j) { return i >= 0 && j >= 0 && i < nx && j < ny && r.at(i, j); };
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i <= nx; ++i)
            if (set(i - 1, j) != set(i, j)) edges.push_back({{i, j}, {i, j + 1}});
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i < nx; ++i)
            if (set(i, j - 1) != set(i, j)) edges.push_back({{i, j}, {i + 1, j}});
    std::multimap<Corner, std::size_t> at;
    for (std::size_t e = 0; e < edges.size(); ++e) {
        at.insert({edges[e].first, e});
        at.insert({edges[e].second, e});
    }
    std::vector<bool> used(edges.size(), false);
    auto pos = [&](Corner c) {
        return cplx(r.grid.re0 + (c.first - 0.5) * r.grid.dre(), r.grid.im0 + (c.second - 0.5) * r.grid.dim());
    };
    std::vector<std::vector<cplx>> lines;
    for (std::size_t e0 = 0; e0 < edges.size(); ++e0) {
        if (used[e0]) continue;
        used[e0] = true;
        std::vector<Corner> chain{edges[e0].first, edges[e0].second};
        for (;;) {
            const Corner tip = chain.back();
            std::size_t next = edges.size();
            for (auto [it, end] = at.equal_range(tip); it != end; ++it)
                if (!used[it->second]) {
                    next = it->second;
                    break;
                }
            if (next == edges.size()) break;
            used[next] = true;
            chain.push_back(edges[next].first == tip ? edges[next].second : edges[next].first);
        }
        // Keep only the corners where the outline turns.
        std::vector<cplx> line;
        for (std::size_t k = 0; k < chain.size(); ++k) {
            if (k > 0 && k + 1 < chain.size()) {
                const Corner& a = chain[k - 1];
                const Corner& b = chain[k + 1];
                if (a.first == b.first || a.second == b.second) continue;
            }
            line.push_back(pos(chain[k]));
        }
        lines.push_back(std::move(line));
    }
    return lines;
}

std::string region_svg(const RegionMask& r) {
    const auto& g = r.grid;
    const double w = g.re1 - g.re0 + g.dre(), h = g.im1 - g.im0 + g.dim();
    const double px = 600, py = 600 * h / w;
    auto sx = [&](double x) { return format_double(std::round((x - g.re0 + 0.5 * g.dre()) / w * px * 100) / 100); };
    auto sy = [&](double y) { return format_double(std::round((g.im1 + 0.5 * g.dim() - y) / h * py * 100) / 100); };
    std::ostringstream o;
    o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    o << "<!-- epstein-kit " << kVersion << " -->\n";
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << format_double(px) << "\" height=\""
      << format_double(std::round(py * 100) / 100) << "\">\n";
    o << "<line x1=\"" << sx(g.re0) << "\" y1=\"" << sy(0) << "\" x2=\"" << sx(g.re1) << "\" y2=\"" << sy(0)
      << "\" stroke=\"#bbb\"/>\n";
    o << "<line x1=\"" << sx(0) << "\" y1=\"" << sy(g.im0) << "\" x2=\"" << sx(0) << "\" y2=\"" << sy(g.im1)
      << "\" stroke=\"#bbb\"/>\n";
    for (const auto& line : region_outline(r)) {
        o << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1\" points=\"";
        for (std::size_t k = 0; k < line.size(); ++k)
            o << (k ? " " : "") << sx(line[k].real()) << "," << sy(line[k].imag());
        o << "\"/>\n";
    }
    o << "</svg>\n";
    return o.str();
}

cplx qc_extension(const ProjectiveStructure& s, const MetricField& m, cplx z) {
    if (!(std::abs(z) > 1)) throw InputError("qc_extension needs |z| > 1");
    const EpsteinJet j = epstein_point(s, m, 1.0 / std::conj(z));
    const BoundaryPoint b = gauss_maps(j).minus;
    if (b.infinity) return {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    return b.z;
}

cplx beltrami_fd(const std::function<cplx(cplx)>& f, cplx z, double h) {
    const cplx fx = fd::dx(f, z, h), fy = fd::dy(f, z, h);
    const cplx i(0, 1);
    return (fx + i * fy) / (fx - i * fy);
}

QcReflection::QcReflection(ProjectiveStructure s, MetricField m, double rmax, int nr, int ntheta)
    : s_(std::move(s)), m_(std::move(m)), rmax_(rmax) {
    nodes_.push_back(0);
    for (int k = 0; k < nr; ++k)
        for (int l = 0; l < ntheta; ++l)
            nodes_.push_back(std::polar(rmax * (k + 0.5) / nr, 2 * pi * l / ntheta));
    values_.resize(nodes_.size());
    parallel_for(nodes_.size(), [&](std::size_t k) {
        try {
            values_[k] = extended(nodes_[k]);
        } catch (const Error&) {
            values_[k] = {std::nan(""), std::nan("")};
        }
    });
}

cplx QcReflection::extended(cplx z) const {
    // Inside a thin band around the circle the envelope is ill conditioned, so the
    // two sides are joined linearly across it.
    constexpr double band = 1e-6;
    const double r = std::abs(z);
    if (r <= 1 - band) return s_.jet(z).f;
    if (r >= 1 + band) return qc_extension(s_, m_, z);
    const cplx u = z / r;
    const double a = (r - (1 - band)) / (2 * band);
    return (1 - a) * s_.jet(u * (1 - band)).f + a * qc_extension(s_, m_, u * (1 + band));
}

cplx QcReflection::preimage(cplx w) const {
    std::size_t best = nodes_.size();
    double dbest = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < nodes_.size(); ++k) {
        const double d = std::abs(values_[k] - w);
        if (d < dbest) {
            dbest = d;
            best = k;
        }
    }
    if (best == nodes_.size()) throw InversionFailure("no finite samples in the inversion table");
    cplx z = nodes_[best];
    double res = std::abs(extended(z) - w);
    const double tol = 1e-11 * std::max(1.0, std::abs(w));
    for (int it = 0; it < 60 && res > tol; ++it) {
        const double h = 1e-7 * std::max(1.0, std::abs(z));
        const cplx fx = (extended(z + h) - extended(z - h)) / (2 * h);
        const cplx fy = (extended(z + cplx(0, h)) - extended(z - cplx(0, h))) / (2 * h);
        Mat2 jac;
        jac << fx.real(), fy.real(), fx.imag(), fy.imag();
        const cplx r0 = extended(z) - w;
        const Eigen::Vector2d step = jac.partialPivLu().solve(Eigen::Vector2d(r0.real(), r0.imag()));
        if (!step.allFinite()) break;
        double lambda = 1;
        bool moved = false;
        for (int b = 0; b < 30; ++b, lambda *= 0.5) {
            const cplx cand = z - lambda * cplx(step(0), step(1));
            if (std::abs(cand) > rmax_) continue;
            try {
                const double rc = std::abs(extended(cand) - w);
                if (rc < res) {
                    z = cand;
                    res = rc;
                    moved = true;
                    break;
                }
            } catch (const Error&) {
            }
        }
        if (!moved) break;
    }
    if (!(res <= 1e-8 * std::max(1.0, std::abs(w))))
        throw InversionFailure("could not invert the extended map near " + format_double(w.real()) + "," +
                               format_double(w.imag()));
    return z;
}

cplx QcReflection::operator()(cplx w) const {
    const cplx z = preimage(w);
    if (z == cplx(0)) return {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    return extended(1.0 / std::conj(z));
}

cplx qc_reflection(const ProjectiveStructure& s, const MetricField& m, cplx z) { return QcReflection(s, m)(z); }

}  // namespace ek
