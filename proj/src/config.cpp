#include "epstein_kit/config.hpp"

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <set>
#include <sstream>

#include "epstein_kit/io.hpp"

namespace ek {

namespace pt = boost::property_tree;

namespace {

pt::ptree read_ini(const std::filesystem::path& path) {
    pt::ptree tree;
    try {
        pt::read_ini(path.string(), tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(e.what());
    }
    return tree;
}

const pt::ptree& only_section(const pt::ptree& tree, const std::string& name, const std::filesystem::path& path) {
    for (const auto& [key, child] : tree)
        if (key != name) throw ConfigError(path.string() + ": unknown section [" + key + "]");
    const auto it = tree.find(name);
    if (it == tree.not_found()) throw ConfigError(path.string() + ": missing section [" + name + "]");
    return it->second;
}

void check_keys(const pt::ptree& sec, const std::set<std::string>& allowed, const std::string& where) {
    for (const auto& [key, child] : sec)
        if (!allowed.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
}

std::string required(const pt::ptree& sec, const std::string& key, const std::string& where) {
    const auto v = sec.get_optional<std::string>(key);
    if (!v) throw ConfigError(where + ": missing key '" + key + "'");
    return boost::trim_copy(*v);
}

std::shared_ptr<TrigField> trig_from(const pt::ptree& sec, const std::string& where) {
    const double offset = parse_double(sec.get<std::string>("offset", "0"), where + " offset");
    const auto terms = parse_terms(sec.get<std::string>("terms", ""));
    return std::make_shared<TrigField>(offset, terms);
}

}  // namespace

double parse_double(const std::string& text, const std::string& what) {
    const std::string t = boost::trim_copy(text);
    double v = 0;
    const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || p != t.data() + t.size() || t.empty())
        throw ConfigError("bad number for " + what + ": '" + text + "'");
    return v;
}

std::vector<TrigTerm> parse_terms(const std::string& text) {
    std::vector<TrigTerm> out;
    std::vector<std::string> groups;
    boost::split(groups, text, boost::is_any_of(","));
    for (auto g : groups) {
        boost::trim(g);
        if (g.empty()) continue;
        std::vector<std::string> parts;
        boost::split(parts, g, boost::is_space(), boost::token_compress_on);
        if (parts.size() != 4) throw ConfigError("trig term needs 'amp m n phase': '" + g + "'");
        TrigTerm t;
        t.amp = parse_double(parts[0], "term amplitude");
        const double m = parse_double(parts[1], "term m"), n = parse_double(parts[2], "term n");
        if (m != std::round(m) || n != std::round(n)) throw ConfigError("trig frequencies must be integers: '" + g + "'");
        t.m = int(m);
        t.n = int(n);
        t.phase = parse_double(parts[3], "term phase");
        out.push_back(t);
    }
    return out;
}

MetricField load_metric_config(const std::filesystem::path& path) {
    const std::string where = path.string() + " [metric]";
    const auto tree = read_ini(path);
    const auto& sec = only_section(tree, "metric", path);
    if (sec.get_optional<std::string>("catalog")) {
        check_keys(sec, {"catalog"}, where);
        return catalog::by_name(required(sec, "catalog", where));
    }
    const std::string kind = required(sec, "kind", where);
    if (kind == "trig") {
        check_keys(sec, {"kind", "offset", "terms", "name"}, where);
        return {sec.get<std::string>("name", "torus-trig"), trig_from(sec, where), Domain::torus};
    }
    if (kind == "grid") {
        check_keys(sec, {"kind", "file", "name"}, where);
        auto file = std::filesystem::path(required(sec, "file", where));
        if (file.is_relative()) file = path.parent_path() / file;
        return sampled_metric(sec.get<std::string>("name", file.stem().string()), read_phi_csv(file));
    }
    throw ConfigError(where + ": kind must be trig or grid, got '" + kind + "'");
}

ScalarFieldPtr load_field_config(const std::filesystem::path& path) {
    const std::string where = path.string() + " [field]";
    const auto tree = read_ini(path);
    const auto& sec = only_section(tree, "field", path);
    const std::string kind = required(sec, "kind", where);
    if (kind == "trig") {
        check_keys(sec, {"kind", "offset", "terms"}, where);
        return trig_from(sec, where);
    }
    if (kind == "constant") {
        check_keys(sec, {"kind", "value"}, where);
        return constant_field(parse_double(required(sec, "value", where), where + " value"));
    }
    throw ConfigError(where + ": kind must be trig or constant, got '" + kind + "'");
}

MetricField metric_from_spec(const std::string& spec) {
    const std::filesystem::path p(spec);
    const auto ext = p.extension().string();
    if (ext == ".csv") {
        if (!std::filesystem::exists(p)) throw ConfigError("no such file: " + spec);
        return sampled_metric(p.stem().string(), read_phi_csv(p));
    }
    if (ext == ".ini" || ext == ".toml" || ext == ".cfg") {
        if (!std::filesystem::exists(p)) throw ConfigError("no such file: " + spec);
        return load_metric_config(p);
    }
    try {
        return catalog::by_name(spec);
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
}

std::shared_ptr<GridField> read_phi_csv(const std::filesystem::path& path) {
    std::istringstream in(read_file(path));
    std::string line;
    auto next_fields = [&](const std::string& what) {
        do {
            if (!std::getline(in, line)) throw ConfigError(path.string() + ": missing " + what);
            boost::trim(line);
        } while (line.empty());
        std::vector<std::string> f;
        boost::split(f, line, boost::is_any_of(","));
        return f;
    };
    const auto header = next_fields("header");
    const std::vector<std::string> expect{"nx", "ny", "xmin", "xmax", "ymin", "ymax"};
    std::vector<std::string> trimmed;
    for (auto h : header) trimmed.push_back(boost::trim_copy(h));
    if (trimmed != expect) throw ConfigError(path.string() + ": header must be nx,ny,xmin,xmax,ymin,ymax");
    const auto dims = next_fields("grid description");
    if (dims.size() != 6) throw ConfigError(path.string() + ": grid description needs 6 values");
    const double nxd = parse_double(dims[0], "nx"), nyd = parse_double(dims[1], "ny");
    if (nxd != std::round(nxd) || nyd != std::round(nyd) || nxd < 6 || nyd < 6)
        throw ConfigError(path.string() + ": nx and ny must be integers >= 6");
    const int nx = int(nxd), ny = int(nyd);
    const double x0 = parse_double(dims[2], "xmin"), x1 = parse_double(dims[3], "xmax");
    const double y0 = parse_double(dims[4], "ymin"), y1 = parse_double(dims[5], "ymax");
    std::vector<double> values;
    values.reserve(std::size_t(nx) * ny);
    for (int j = 0; j < ny; ++j) {
        const auto row = next_fields("row " + std::to_string(j));
        if (int(row.size()) != nx) throw ConfigError(path.string() + ": row " + std::to_string(j) + " has wrong length");
        for (const auto& v : row) values.push_back(parse_double(v, "phi value"));
    }
    try {
        return std::make_shared<GridField>(nx, ny, x0, x1, y0, y1, std::move(values));
    } catch (const InputError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

std::string phi_csv(const GridField& g) {
    std::string out = "nx,ny,xmin,xmax,ymin,ymax\n";
    out += csv_row({double(g.nx()), double(g.ny()), g.x0(), g.x1(), g.y0(), g.y1()});
    for (int j = 0; j < g.ny(); ++j)
        out += csv_row(std::vector<double>(g.values().begin() + std::size_t(j) * g.nx(),
                                           g.values().begin() + std::size_t(j + 1) * g.nx()));
    return out;
}

}  // namespace ek
