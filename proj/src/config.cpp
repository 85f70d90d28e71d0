#include "ryscat/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ryscat {

namespace {

struct ParamField {
    const char* name;
    double SystemParams::*member;
};

// Every scalar SystemParams field; n_atoms is integral and handled apart.
constexpr ParamField param_fields[] = {
    {"gamma_e", &SystemParams::gamma_e},
    {"gamma_r", &SystemParams::gamma_r},
    {"gamma_c_f", &SystemParams::gamma_c_f},
    {"gamma_c_d", &SystemParams::gamma_c_d},
    {"cooperativity", &SystemParams::cooperativity},
    {"omega_cf", &SystemParams::omega_cf},
    {"delta_c", &SystemParams::delta_c},
    {"delta_e", &SystemParams::delta_e},
    {"delta_r", &SystemParams::delta_r},
    {"alpha", &SystemParams::alpha},
    {"c6", &SystemParams::c6},
    {"volume", &SystemParams::volume},
};

bool is_param_field(const std::string& key) {
    if (key == "n_atoms") return true;
    for (const auto& f : param_fields)
        if (key == f.name) return true;
    return false;
}

[[noreturn]] void bad(const std::string& where, const std::string& what) {
    throw std::invalid_argument("config: " + where + ": " + what);
}

void check_keys(const ordered_json& obj, const std::vector<std::string>& allowed,
                const std::string& where) {
    if (!obj.is_object()) bad(where, "expected an object");
    for (const auto& item : obj.items()) {
        bool ok = false;
        for (const auto& k : allowed)
            if (item.key() == k) {
                ok = true;
                break;
            }
        if (!ok) bad(where, "unknown key '" + item.key() + "'");
    }
}

double get_number(const ordered_json& obj, const char* key, double fallback,
                  const std::string& where) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_number()) bad(where, std::string("'") + key + "' must be a number");
    return v.get<double>();
}

long get_integer(const ordered_json& obj, const char* key, long fallback,
                 const std::string& where) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_number_integer()) bad(where, std::string("'") + key + "' must be an integer");
    return v.get<long>();
}

std::string get_string(const ordered_json& obj, const char* key, std::string fallback,
                       const std::string& where) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_string()) bad(where, std::string("'") + key + "' must be a string");
    return v.get<std::string>();
}

GridSpec parse_grid(const ordered_json& obj, const GridSpec& fallback,
                    const std::string& where) {
    check_keys(obj, {"min", "max", "points"}, where);
    GridSpec g = fallback;
    g.min = get_number(obj, "min", fallback.min, where);
    g.max = get_number(obj, "max", fallback.max, where);
    g.points = static_cast<int>(get_integer(obj, "points", fallback.points, where));
    if (g.points < 1) bad(where, "points must be >= 1");
    if (g.points > 1 && !(g.min < g.max)) bad(where, "min must be < max");
    return g;
}

}  // namespace

std::vector<Vec3> OracleConfig::resolved_positions() const {
    if (!positions.empty()) return positions;
    std::vector<Vec3> out;
    for (int i = 0; i < n_atoms; ++i)
        out.push_back({spacing * static_cast<double>(i), 0.0, 0.0});
    return out;
}

std::vector<double> OracleConfig::resolved_alphas() const {
    if (!alphas.empty()) return alphas;
    // Geometric ladder over one decade, comfortably perturbative.
    std::vector<double> out;
    const int n = 6;
    for (int i = 0; i < n; ++i)
        out.push_back(1e-3 * std::pow(10.0, static_cast<double>(i) / (n - 1)));
    return out;
}

void RunConfig::validate() const {
    params.validate();
    if (units != "gamma_e" && units != "MHz")
        bad("units", "must be 'gamma_e' or 'MHz'");
    if (workers < 1 || workers > 256) bad("workers", "must be in [1, 256]");
    if (mc_positions < 2) bad("mc_positions", "must be >= 2");
    if (seeds.empty()) bad("seeds", "must be nonempty");
    if (omega_grid.points < 1) bad("omega_grid", "points must be >= 1");
    if (omega_cf_grid.points < 1) bad("omega_cf_grid", "points must be >= 1");
    if (oracle.n_atoms < 1 || oracle.n_atoms > 4)
        bad("oracle.n_atoms", "must be in [1, 4]");
    if (oracle.n_max < 1) bad("oracle.n_max", "must be >= 1");
    if (!(oracle.spacing > 0)) bad("oracle.spacing", "must be > 0");
    if (!oracle.positions.empty() &&
        oracle.positions.size() != static_cast<std::size_t>(oracle.n_atoms))
        bad("oracle.positions", "size must equal oracle.n_atoms");
    for (double a : oracle.alphas)
        if (!(a > 0)) bad("oracle.alphas", "entries must be > 0");
    if (!(oracle.horizon > 0)) bad("oracle.horizon", "must be > 0");
}

ordered_json config_to_json(const RunConfig& cfg) {
    ordered_json p;
    for (const auto& f : param_fields) p[f.name] = cfg.params.*(f.member);
    p["n_atoms"] = cfg.params.n_atoms;

    ordered_json doc;
    doc["params"] = p;
    doc["omega_grid"] = {{"min", cfg.omega_grid.min},
                         {"max", cfg.omega_grid.max},
                         {"points", cfg.omega_grid.points}};
    doc["omega_cf_grid"] = {{"min", cfg.omega_cf_grid.min},
                            {"max", cfg.omega_cf_grid.max},
                            {"points", cfg.omega_cf_grid.points}};
    doc["seeds"] = cfg.seeds;
    doc["mc_positions"] = cfg.mc_positions;
    doc["tmatrix_method"] =
        cfg.tmatrix_method == TMatrixMethod::closed_form ? "closed_form" : "discrete_sum";
    ordered_json orc;
    orc["n_atoms"] = cfg.oracle.n_atoms;
    orc["n_max"] = cfg.oracle.n_max;
    orc["spacing"] = cfg.oracle.spacing;
    orc["positions"] = ordered_json::array();
    for (const auto& r : cfg.oracle.positions)
        orc["positions"].push_back(ordered_json::array({r[0], r[1], r[2]}));
    orc["alphas"] = cfg.oracle.alphas;
    orc["horizon"] = cfg.oracle.horizon;
    doc["oracle"] = orc;
    doc["output_prefix"] = cfg.output_prefix;
    doc["units"] = cfg.units;
    doc["workers"] = cfg.workers;
    return doc;
}

RunConfig config_from_json(const ordered_json& doc) {
    RunConfig cfg;
    check_keys(doc,
               {"params", "omega_grid", "omega_cf_grid", "seeds", "mc_positions",
                "tmatrix_method", "oracle", "output_prefix", "units", "workers"},
               "top level");

    if (doc.contains("params")) {
        const auto& p = doc.at("params");
        std::vector<std::string> allowed;
        for (const auto& f : param_fields) allowed.push_back(f.name);
        allowed.push_back("n_atoms");
        check_keys(p, allowed, "params");
        for (const auto& f : param_fields)
            cfg.params.*(f.member) = get_number(p, f.name, cfg.params.*(f.member), "params");
        cfg.params.n_atoms = get_integer(p, "n_atoms", cfg.params.n_atoms, "params");
    }
    if (doc.contains("omega_grid"))
        cfg.omega_grid = parse_grid(doc.at("omega_grid"), cfg.omega_grid, "omega_grid");
    if (doc.contains("omega_cf_grid"))
        cfg.omega_cf_grid =
            parse_grid(doc.at("omega_cf_grid"), cfg.omega_cf_grid, "omega_cf_grid");
    if (doc.contains("seeds")) {
        const auto& s = doc.at("seeds");
        if (!s.is_array()) bad("seeds", "must be an array");
        cfg.seeds.clear();
        for (const auto& v : s) {
            if (!v.is_number_integer() || v.get<long long>() < 0)
                bad("seeds", "entries must be nonnegative integers");
            cfg.seeds.push_back(v.get<std::uint64_t>());
        }
    }
    cfg.mc_positions = get_integer(doc, "mc_positions", cfg.mc_positions, "top level");
    if (doc.contains("tmatrix_method")) {
        const std::string m = get_string(doc, "tmatrix_method", "", "top level");
        if (m == "closed_form")
            cfg.tmatrix_method = TMatrixMethod::closed_form;
        else if (m == "discrete_sum")
            cfg.tmatrix_method = TMatrixMethod::discrete_sum;
        else
            bad("tmatrix_method", "must be 'closed_form' or 'discrete_sum'");
    }
    if (doc.contains("oracle")) {
        const auto& o = doc.at("oracle");
        check_keys(o, {"n_atoms", "n_max", "spacing", "positions", "alphas", "horizon"},
                   "oracle");
        cfg.oracle.n_atoms = static_cast<int>(get_integer(o, "n_atoms", cfg.oracle.n_atoms, "oracle"));
        cfg.oracle.n_max = static_cast<int>(get_integer(o, "n_max", cfg.oracle.n_max, "oracle"));
        cfg.oracle.spacing = get_number(o, "spacing", cfg.oracle.spacing, "oracle");
        cfg.oracle.horizon = get_number(o, "horizon", cfg.oracle.horizon, "oracle");
        if (o.contains("positions")) {
            const auto& arr = o.at("positions");
            if (!arr.is_array()) bad("oracle.positions", "must be an array of [x,y,z]");
            cfg.oracle.positions.clear();
            for (const auto& r : arr) {
                if (!r.is_array() || r.size() != 3) bad("oracle.positions", "each entry must be [x,y,z]");
                Vec3 v{};
                for (int k = 0; k < 3; ++k) {
                    if (!r[static_cast<std::size_t>(k)].is_number())
                        bad("oracle.positions", "coordinates must be numbers");
                    v[static_cast<std::size_t>(k)] = r[static_cast<std::size_t>(k)].get<double>();
                }
                cfg.oracle.positions.push_back(v);
            }
        }
        if (o.contains("alphas")) {
            const auto& arr = o.at("alphas");
            if (!arr.is_array()) bad("oracle.alphas", "must be an array of numbers");
            cfg.oracle.alphas.clear();
            for (const auto& v : arr) {
                if (!v.is_number()) bad("oracle.alphas", "entries must be numbers");
                cfg.oracle.alphas.push_back(v.get<double>());
            }
        }
    }
    cfg.output_prefix = get_string(doc, "output_prefix", cfg.output_prefix, "top level");
    cfg.units = get_string(doc, "units", cfg.units, "top level");
    cfg.workers = static_cast<int>(get_integer(doc, "workers", cfg.workers, "top level"));
    cfg.validate();
    return cfg;
}

void apply_override(ordered_json& doc, const std::string& spec) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0)
        throw std::invalid_argument("config: override '" + spec + "' is not key=value");
    const std::string key = spec.substr(0, eq);
    const std::string raw = spec.substr(eq + 1);
    ordered_json value = ordered_json::parse(raw, nullptr, false);
    if (value.is_discarded()) value = raw;  // not valid JSON: keep as string

    std::vector<std::string> path;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= key.size(); ++i)
        if (i == key.size() || key[i] == '.') {
            if (i == start)
                throw std::invalid_argument("config: empty path segment in '" + spec + "'");
            path.push_back(key.substr(start, i - start));
            start = i + 1;
        }
    if (path.size() == 1 && is_param_field(path[0])) path.insert(path.begin(), "params");

    ordered_json* node = &doc;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) node = &(*node)[path[i]];
    (*node)[path.back()] = value;
}

RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    ordered_json doc;
    try {
        doc = ordered_json::parse(ss.str());
    } catch (const std::exception& e) {
        throw std::invalid_argument("config: parse failure in '" + path + "': " + e.what());
    }
    for (const auto& ov : overrides) apply_override(doc, ov);
    return config_from_json(doc);
}

std::string format_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void CsvBuilder::comment(const std::string& line) {
    buf_ += "# ";
    buf_ += line;
    buf_ += '\n';
}

void CsvBuilder::resolved_params(const RunConfig& cfg) {
    // Flatten the resolved configuration so no default stays hidden.
    const ordered_json doc = config_to_json(cfg);
    auto walk = [&](auto&& self, const ordered_json& node, const std::string& prefix) -> void {
        for (const auto& item : node.items()) {
            const std::string path = prefix.empty() ? item.key() : prefix + "." + item.key();
            if (item.value().is_object())
                self(self, item.value(), path);
            else
                comment(path + " = " + item.value().dump());
        }
    };
    comment("mode = " + cfg.mode);
    walk(walk, doc, "");
}

void CsvBuilder::columns(const std::vector<std::string>& names) {
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) buf_ += ',';
        buf_ += names[i];
    }
    buf_ += '\n';
}

void CsvBuilder::row(const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) buf_ += ',';
        buf_ += format_g17(values[i]);
    }
    buf_ += '\n';
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open '" + tmp + "' for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw std::runtime_error("write failure on '" + tmp + "'");
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw std::runtime_error("cannot move '" + tmp + "' to '" + path + "'");
    }
}

}  // namespace ryscat
