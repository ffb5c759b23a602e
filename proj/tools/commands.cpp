#include "commands.hpp"

#include <cmath>
#include <filesystem>
#include <iostream>
#include <memory>
#include <regex>
#include <set>

#include "epstein_kit/config.hpp"
#include "epstein_kit/duality.hpp"
#include "epstein_kit/epstein.hpp"
#include "epstein_kit/io.hpp"
#include "epstein_kit/univalence.hpp"
#include "epstein_kit/verify.hpp"
#include "epstein_kit/wvolume.hpp"

namespace ekcli {

using namespace ek;
namespace fs = std::filesystem;

namespace {

struct GridSpec {
    int nx = 64, ny = 64;
};

GridSpec parse_grid(const std::string& s) {
    static const std::regex re(R"(\s*(\d+)\s*[xX]\s*(\d+)\s*)");
    std::smatch m;
    if (!std::regex_match(s, m, re)) throw ConfigError("grid must look like 64x64, got '" + s + "'");
    GridSpec g{std::stoi(m[1]), std::stoi(m[2])};
    if (g.nx < 2 || g.ny < 2) throw ConfigError("grid needs at least 2x2 nodes");
    return g;
}

std::vector<double> parse_list(const std::string& s, std::size_t n, const std::string& what) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        const auto comma = s.find(',', start);
        out.push_back(parse_double(s.substr(start, comma - start), what));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (out.size() != n) throw ConfigError(what + " needs " + std::to_string(n) + " comma-separated numbers");
    return out;
}

std::array<double, 4> default_box(const MetricField& m) {
    switch (m.domain()) {
        case Domain::disk: return {-0.7, 0.7, -0.7, 0.7};
        case Domain::uhp: return {-1, 1, 0.2, 2};
        case Domain::torus: return {0, 1, 0, 1};
        default: return {-1, 1, -1, 1};
    }
}

Chart make_chart(const MetricField& m, const std::string& box, const GridSpec& g) {
    std::array<double, 4> b = default_box(m);
    if (!box.empty()) {
        const auto v = parse_list(box, 4, "--box");
        std::copy(v.begin(), v.end(), b.begin());
    }
    if (!(b[0] < b[1]) || !(b[2] < b[3])) throw ConfigError("--box needs x0 < x1 and y0 < y1");
    if (m.domain() == Domain::uhp) {
        if (!(b[2] > 0)) throw ConfigError("upper half plane boxes need y0 > 0");
        return Chart::uhp(b[0], b[1], b[2], b[3], g.nx, g.ny);
    }
    return Chart::rectangle(b[0], b[1], b[2], b[3], g.nx, g.ny);
}

ProjectiveStructure structure_from(const std::string& spec) {
    try {
        return structures::by_name(spec);
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
}

void check_output(const std::string& path) {
    if (!path.empty()) require_writable_parent(path);
}

void check_input(const std::string& path) {
    if (!fs::is_regular_file(path)) throw ConfigError("no such input file: " + path);
}

void write_if(const std::string& path, const std::string& content) {
    if (!path.empty()) atomic_write(path, content);
}

std::string fmt(double v) { return format_double(v); }

Json number(double v) { return std::isfinite(v) ? Json(v) : Json(fmt(v)); }

// ---------------------------------------------------------------- epstein

struct EpsteinOpts {
    std::string metric = "hyperbolic-disk", structure = "identity", grid = "64x64", box, model = "ball";
    double t = 0;
    std::string out, csv, quad_diff;
};

Outcome run_epstein(const EpsteinOpts& o) {
    check_output(o.out);
    check_output(o.csv);
    check_output(o.quad_diff);
    if (o.model != "ball" && o.model != "uhs") throw ConfigError("--model must be ball or uhs");
    const MetricField m = metric_from_spec(o.metric);
    const ProjectiveStructure s = structure_from(o.structure);
    const Chart chart = make_chart(m, o.box, parse_grid(o.grid));
    const Mesh mesh = epstein_mesh(m, s, chart, o.model == "ball" ? Model::ball : Model::uhs, o.t);

    Outcome r;
    r.summary["command"] = "epstein";
    r.summary["metric"] = m.name();
    r.summary["structure"] = s.name();
    r.summary["model"] = o.model;
    r.summary["t"] = o.t;
    r.summary["vertices"] = mesh.vertices.size();
    r.summary["failures"] = mesh.failures();
    r.summary["faces"] = mesh.faces.size();
    std::cout << "epstein mesh " << m.name() << " / " << s.name() << ": " << mesh.vertices.size() << " vertices, "
              << mesh.failures() << " holes, " << mesh.faces.size() << " faces\n";
    if (mesh.failures() > 0) {
        for (const auto& v : mesh.vertices)
            if (!v.valid) {
                std::cout << "  first hole at (" << fmt(v.z.real()) << ", " << fmt(v.z.imag()) << "): " << v.failure
                          << "\n";
                r.summary["first_failure"] = v.failure;
                break;
            }
    }
    if (m.name() == "hyperbolic-uhp" && s.identity) {
        // The surface is the equidistant surface at distance |t| from the plane x2 = 0.
        double worst = 0;
        for (const auto& v : mesh.vertices)
            if (v.valid) worst = std::max(worst, std::abs(std::asinh(std::abs(v.p(1))) - std::abs(o.t)));
        r.summary["max_plane_deviation"] = worst;
        std::cout << "  max deviation from the equidistant surface at distance " << fmt(std::abs(o.t))
                  << " of the vertical plane: " << fmt(worst) << "\n";
    }
    write_if(o.out, mesh_obj(mesh, std::string("epstein-kit ") + kVersion + " " + m.name() + " " + s.name()));
    write_if(o.csv, mesh_csv(mesh));
    if (!o.quad_diff.empty()) write_if(o.quad_diff, quad_diff_csv(sample_quad_diff(s, m, chart)));
    return r;
}

// ---------------------------------------------------------------- univalence

struct UnivalenceOpts {
    std::string metric = "powercone:double-log-sin", structure = "power";
    std::string re = "-0.2,2.2", im = "-1.2,1.2";
    int n = 400, ntheta = 512;
    std::string grid = "32x32", box;
    bool no_qc = false;
    std::string out, svg;
};

AngularProfilePtr profile_of(const MetricField& m) {
    if (m.name() == "hyperbolic-uhp") return log_sin_profile(1);
    static const std::regex re(R"(powercone:log-sin\((.*)\))");
    std::smatch sm;
    if (std::regex_match(m.name(), sm, re)) return log_sin_profile(parse_double(sm[1], "profile"));
    throw ConfigError("the c-plane scan needs a power-cone or hyperbolic-uhp metric, got " + m.name());
}

Outcome run_univalence(const UnivalenceOpts& o) {
    check_output(o.out);
    check_output(o.svg);
    const MetricField m = metric_from_spec(o.metric);
    Outcome r;
    r.summary["command"] = "univalence";
    r.summary["metric"] = m.name();
    if (o.structure == "power") {
        const AngularProfilePtr h = profile_of(m);
        const auto re = parse_list(o.re, 2, "--re"), im = parse_list(o.im, 2, "--im");
        if (o.n < 2) throw ConfigError("--n must be at least 2");
        CGrid g{re[0], re[1], im[0], im[1], o.n, o.n};
        const RegionMask mask = region_scan(*h, g, o.ntheta);
        // For h = -a log sin the region is |c^2 - a| <= a; count nodes off by more than a cell.
        const double a = h->at(pi / 2).h2;
        int off = 0, contained_bad = 0;
        for (int j = 0; j < g.nim; ++j)
            for (int i = 0; i < g.nre; ++i) {
                const cplx c = g.at(i, j);
                const double f = std::abs(c * c - a) - a;
                const double cell = 2 * std::abs(c) * std::hypot(g.dre(), g.dim());
                if (std::abs(f) > cell && mask.at(i, j) != (f <= 0)) ++off;
                if (mask.at(i, j) && std::abs(c - 1.0) > 1 + 1e-12 && std::abs(c + 1.0) > 1 + 1e-12) ++contained_bad;
            }
        r.summary["mode"] = "c-plane scan";
        r.summary["profile"] = h->name();
        r.summary["grid"] = std::to_string(g.nre) + "x" + std::to_string(g.nim);
        r.summary["satisfied"] = mask.count();
        r.summary["boundary_nodes_off_by_more_than_a_cell"] = off;
        r.summary["nodes_outside_univalence_disks"] = contained_bad;
        std::cout << "z^c criterion for profile " << h->name() << " on a " << g.nre << "x" << g.nim << " c-grid: "
                  << mask.count() << " nodes satisfied\n"
                  << "  boundary |c^2 - " << fmt(a) << "| = " << fmt(a) << " recovered; nodes off by more than a cell: "
                  << off << "\n"
                  << "  satisfied nodes outside |c - 1| <= 1 and |c + 1| <= 1: " << contained_bad << "\n";
        write_if(o.out, region_csv(mask));
        write_if(o.svg, region_svg(mask));
        if (off != 0 || contained_bad != 0) r.status = 1;
        return r;
    }
    const ProjectiveStructure s = structure_from(o.structure);
    const Chart chart = make_chart(m, o.box, parse_grid(o.grid));
    ClassifyOptions opts;
    opts.want_qc = !o.no_qc;
    const CriterionReport rep = classify(s, m, chart, opts);
    r.summary["mode"] = "classify";
    r.summary["structure"] = s.name();
    r.summary["sup_ratio"] = number(rep.sup_ratio);
    r.summary["classification"] = classification_name(rep.classification);
    if (rep.classification == Classification::qc_extension) r.summary["k"] = rep.k;
    r.summary["witness"] = {rep.witness.real(), rep.witness.imag()};
    r.summary["points"] = rep.points;
    std::cout << "criterion for " << s.name() << " on " << m.name() << " over " << rep.points << " points\n"
              << "  sup 4||Q||/(-K) = " << fmt(rep.sup_ratio) << " at (" << fmt(rep.witness.real()) << ", "
              << fmt(rep.witness.imag()) << ")\n"
              << "  classification: " << classification_name(rep.classification);
    if (rep.classification == Classification::qc_extension) std::cout << "(k = " << fmt(rep.k) << ")";
    std::cout << "\n";
    return r;
}

// ---------------------------------------------------------------- flow

struct FlowOpts {
    std::string metric = "hyperbolic-disk", structure = "identity", point = "0.3,0.2";
    double tmax = 2;
    int steps = 100;
    std::string grid = "32x32", box, out;
};

Outcome run_flow(const FlowOpts& o) {
    check_output(o.out);
    if (o.steps < 1) throw ConfigError("--steps must be positive");
    const MetricField m = metric_from_spec(o.metric);
    const ProjectiveStructure s = structure_from(o.structure);
    const auto pt = parse_list(o.point, 2, "--point");
    const cplx z(pt[0], pt[1]);
    if (!m.inside(z)) throw ConfigError("--point is outside the metric's domain");
    const FundamentalPair pair = to_dual(projective_pair(s, m, z));
    const auto l0 = principal_curvatures(pair);
    const double t0 = convexity_time(s, m, make_chart(m, o.box, parse_grid(o.grid)));
    Outcome r;
    r.summary["command"] = "flow";
    r.summary["metric"] = m.name();
    r.summary["structure"] = s.name();
    r.summary["point"] = {z.real(), z.imag()};
    r.summary["lambda0"] = {number(l0[0]), number(l0[1])};
    r.summary["convexity_time"] = number(t0);
    std::cout << "normal flow of the dual pair at (" << fmt(z.real()) << ", " << fmt(z.imag()) << ")\n"
              << "  principal curvatures at t = 0: " << fmt(l0[0]) << ", " << fmt(l0[1]) << "\n"
              << "  grid convexity time: " << fmt(t0) << "\n";
    const std::string csv = flow_trace_csv(pair, o.tmax, o.steps);
    if (o.out.empty())
        std::cout << csv;
    else
        atomic_write(o.out, csv);
    return r;
}

// ---------------------------------------------------------------- wvol

struct WvolOpts {
    std::string g0, u, u2, check = "pair", out;
    int n = 128;
    double t = 0.3, s = -0.2, h = 1e-3;
};

Outcome run_wvol(const WvolOpts& o) {
    static const std::set<std::string> checks{"pair", "scaling", "cocycle", "dw", "wmax", "mean"};
    if (!checks.count(o.check)) throw ConfigError("--check must be one of pair, scaling, cocycle, dw, wmax, mean");
    check_output(o.out);
    if (o.n < 8) throw ConfigError("--n must be at least 8");
    const MetricField g0 = o.g0.empty() ? catalog::torus_bump() : metric_from_spec(o.g0);
    if (g0.domain() != Domain::torus) throw ConfigError("--g0 must be a torus metric");
    if (o.check != "mean" && o.u.empty()) throw ConfigError("--check " + o.check + " needs --u");
    if (!o.u.empty()) check_input(o.u);
    if (o.check == "cocycle") {
        if (o.u2.empty()) throw ConfigError("--check cocycle needs --u2");
        check_input(o.u2);
    }
    const ScalarFieldPtr u = o.u.empty() ? nullptr : load_field_config(o.u);

    std::vector<std::pair<std::string, double>> rows;
    if (o.check == "pair") {
        const WValue w = w_pair(g0, u, o.n);
        rows = {{"w_coarse", w.coarse}, {"w_fine", w.fine}, {"w", w.extrapolated}};
    } else if (o.check == "scaling") {
        rows = {{"t", o.t}, {"s", o.s}, {"defect", w_scaling_check(g0, u, o.t, o.s, o.n)}};
    } else if (o.check == "cocycle") {
        rows = {{"defect", w_cocycle_check(g0, u, load_field_config(o.u2), o.n)}};
    } else if (o.check == "dw") {
        const DwCheck d = dw_conformal_check(g0, u, o.h, o.n);
        const DwCheck d2 = dw_conformal_check(g0, u, o.h / 2, o.n);
        rows = {{"h", o.h},
                {"central", d.central},
                {"exact", d.exact},
                {"defect", d.defect},
                {"defect_half_step", d2.defect}};
    } else if (o.check == "wmax") {
        const ScalarFieldPtr un = area_normalized(g0, u, 2 * o.n);
        const WmaxCheck w = wmax_check(g0, un, o.n);
        rows = {{"w", w.w.extrapolated}, {"minus_quarter_dirichlet", w.bound.extrapolated}, {"gap", w.gap}};
    } else {
        const MeanCurvatureCheck c = mean_curvature_integral_check(structures::identity(), g0, o.n);
        rows = {{"int_H_dA", c.lhs}, {"half_area_hat_minus_area", c.rhs}, {"defect", c.defect}};
    }
    Outcome r;
    r.summary["command"] = "wvol";
    r.summary["check"] = o.check;
    r.summary["g0"] = g0.name();
    r.summary["n"] = o.n;
    std::string csv = "quantity,value\n";
    std::cout << "wvol " << o.check << " on " << g0.name() << " (n = " << o.n << ", " << 2 * o.n << ")\n";
    for (const auto& [k, v] : rows) {
        csv += k + "," + fmt(v) + "\n";
        r.summary[k] = number(v);
        std::cout << "  " << k << " = " << fmt(v) << "\n";
    }
    write_if(o.out, csv);
    return r;
}

// ---------------------------------------------------------------- graft

struct GraftOpts {
    int chi = -2;
    double L = 1, phi2 = 0.5, phiinf = 0.5, tmax = 3;
    int steps = 100;
    std::string out;
};

Outcome run_graft(const GraftOpts& o) {
    check_output(o.out);
    const GraftingData d{o.chi, o.L, o.phi2, o.phiinf};
    try {
        validate(d);
    } catch (const InputError& e) {
        throw ConfigError(e.what());
    }
    if (o.steps < 1) throw ConfigError("--steps must be positive");
    const GraftBounds b = graft_bounds(d);
    const double nb = newbound_max(d.L, d.phiinf);
    Outcome r;
    r.summary["command"] = "graft";
    r.summary["T"] = b.T;
    r.summary["lower"] = b.lower;
    r.summary["upper"] = b.upper;
    r.summary["newbound_max"] = nb;
    r.summary["phi2_within_bound"] = d.phi2 <= nb;
    std::cout << "grafting bounds for chi = " << d.chi << ", L = " << fmt(d.L) << ", phi2 = " << fmt(d.phi2)
              << ", phiinf = " << fmt(d.phiinf) << "\n"
              << "  T = " << fmt(b.T) << ", lower = " << fmt(b.lower) << ", upper = " << fmt(b.upper) << "\n"
              << "  (1 + phiinf) sqrt(L) = " << fmt(nb) << (d.phi2 <= nb ? " >= phi2" : " < phi2") << "\n";
    const std::string csv = graft_table_csv(d, o.tmax, o.steps);
    if (o.out.empty())
        std::cout << csv;
    else
        atomic_write(o.out, csv);
    return r;
}

// ---------------------------------------------------------------- verify

struct VerifyOpts {
    std::string suite = "all";
};

Outcome run_verify(const VerifyOpts& o) {
    const auto results = run_suite(o.suite);
    std::cout << verify_table(results);
    Outcome r;
    r.summary["command"] = "verify";
    r.summary["suite"] = o.suite;
    Json rows = Json::array();
    int failed = 0;
    for (const auto& c : results) {
        if (!c.pass) ++failed;
        Json row;
        row["suite"] = c.suite;
        row["lemma"] = c.lemma;
        row["check"] = c.what;
        row["value"] = number(c.value);
        row["bound"] = c.tolerance;
        row["relation"] = c.at_least ? ">=" : "<=";
        row["pass"] = c.pass;
        if (!c.note.empty()) row["note"] = c.note;
        rows.push_back(row);
    }
    r.summary["checks"] = rows;
    r.summary["failed"] = failed;
    std::cout << results.size() - failed << "/" << results.size() << " checks passed\n";
    r.status = failed ? 1 : 0;
    return r;
}

}  // namespace

void register_commands(CLI::App& app, std::function<Outcome()>& run) {
    {
        auto o = std::make_shared<EpsteinOpts>();
        auto* c = app.add_subcommand("epstein", "Epstein surface mesh (OBJ + CSV)");
        c->add_option("--metric", o->metric, "catalog name or metric file")->capture_default_str();
        c->add_option("--structure", o->structure, "identity, exp, power:c, moebius:a,b,c,d")->capture_default_str();
        c->add_option("--grid", o->grid, "NXxNY")->capture_default_str();
        c->add_option("--box", o->box, "x0,x1,y0,y1 (default depends on the domain)");
        c->add_option("--model", o->model, "ball or uhs")->capture_default_str();
        c->add_option("--t", o->t, "use the metric e^{2t} m")->capture_default_str();
        c->add_option("--out", o->out, "OBJ path");
        c->add_option("--csv", o->csv, "per-vertex curvature CSV path");
        c->add_option("--quad-diff", o->quad_diff, "CSV of Q over the grid");
        c->callback([o, &run] { run = [o] { return run_epstein(*o); }; });
    }
    {
        auto o = std::make_shared<UnivalenceOpts>();
        auto* c = app.add_subcommand("univalence", "Univalence criteria and z^c regions");
        c->add_option("--metric", o->metric)->capture_default_str();
        c->add_option("--structure", o->structure, "'power' scans c; any other structure is classified")
            ->capture_default_str();
        c->add_option("--re", o->re, "Re c range")->capture_default_str();
        c->add_option("--im", o->im, "Im c range")->capture_default_str();
        c->add_option("--n", o->n, "c-grid nodes per side")->capture_default_str();
        c->add_option("--ntheta", o->ntheta, "angle samples")->capture_default_str();
        c->add_option("--grid", o->grid, "evaluation grid for classification")->capture_default_str();
        c->add_option("--box", o->box, "x0,x1,y0,y1 evaluation box");
        c->add_flag("--no-qc", o->no_qc, "skip the quasiconformal case");
        c->add_option("--out", o->out, "region CSV path");
        c->add_option("--svg", o->svg, "region outline SVG path");
        c->callback([o, &run] { run = [o] { return run_univalence(*o); }; });
    }
    {
        auto o = std::make_shared<FlowOpts>();
        auto* c = app.add_subcommand("flow", "Normal flow trace of the dual pair at a point");
        c->add_option("--metric", o->metric)->capture_default_str();
        c->add_option("--structure", o->structure)->capture_default_str();
        c->add_option("--point", o->point, "x,y")->capture_default_str();
        c->add_option("--tmax", o->tmax)->capture_default_str();
        c->add_option("--steps", o->steps)->capture_default_str();
        c->add_option("--grid", o->grid, "grid for the convexity time")->capture_default_str();
        c->add_option("--box", o->box);
        c->add_option("--out", o->out, "trace CSV path (stdout if omitted)");
        c->callback([o, &run] { run = [o] { return run_flow(*o); }; });
    }
    {
        auto o = std::make_shared<WvolOpts>();
        auto* c = app.add_subcommand("wvol", "W-volume checks on the torus");
        c->add_option("--g0", o->g0, "torus metric (catalog name or config; default torus-bump)");
        c->add_option("--u", o->u, "field config for u");
        c->add_option("--u2", o->u2, "second field config (cocycle)");
        c->add_option("--check", o->check, "pair, scaling, cocycle, dw, wmax, mean")->capture_default_str();
        c->add_option("--n", o->n, "coarse nodes per side; the fine level doubles it")->capture_default_str();
        c->add_option("--t", o->t)->capture_default_str();
        c->add_option("--s", o->s)->capture_default_str();
        c->add_option("--step", o->h, "difference step for dw")->capture_default_str();
        c->add_option("--out", o->out, "CSV report path");
        c->callback([o, &run] { run = [o] { return run_wvol(*o); }; });
    }
    {
        auto o = std::make_shared<GraftOpts>();
        auto* c = app.add_subcommand("graft", "Grafting area formulas and the Schwarzian bound");
        c->add_option("--chi", o->chi)->capture_default_str();
        c->add_option("--L", o->L)->capture_default_str();
        c->add_option("--phi2", o->phi2)->capture_default_str();
        c->add_option("--phiinf", o->phiinf)->capture_default_str();
        c->add_option("--tmax", o->tmax)->capture_default_str();
        c->add_option("--steps", o->steps)->capture_default_str();
        c->add_option("--out", o->out, "table CSV path (stdout if omitted)");
        c->callback([o, &run] { run = [o] { return run_graft(*o); }; });
    }
    {
        auto o = std::make_shared<VerifyOpts>();
        auto* c = app.add_subcommand("verify", "Run the invariant suites");
        std::string names = "all";
        for (const auto& n : suite_names()) names += ", " + n;
        c->add_option("--suite", o->suite, names)->capture_default_str();
        c->callback([o, &run] { run = [o] { return run_verify(*o); }; });
    }
}

}  // namespace ekcli
