// Command-line front end: one subcommand per run mode, JSON config with
// key=value overrides, CSV + JSON outputs carrying the full resolved
// parameter set.  All payloads are assembled in memory and written
// atomically, so failed runs leave no partial files.

#include <CLI11.hpp>

#include <cmath>
#include <complex>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "ryscat/config.hpp"
#include "ryscat/core.hpp"
#include "ryscat/greens.hpp"
#include "ryscat/model.hpp"
#include "ryscat/oracle.hpp"
#include "ryscat/spectrum.hpp"
#include "ryscat/tmatrix.hpp"

namespace {

using namespace ryscat;

std::string join_path(const std::string& dir, const std::string& name) {
    if (dir.empty() || dir == ".") return name;
    if (dir.back() == '/') return dir + name;
    return dir + "/" + name;
}

ordered_json complex_json(cxd z) {
    return ordered_json::array({z.real(), z.imag()});
}

ordered_json tmatrix_json(const TMatrixResult& t) {
    ordered_json j;
    j["loop_s"] = complex_json(t.S);
    j["loop_s0"] = complex_json(t.S0);
    j["t_tilde0"] = complex_json(t.t_tilde0);
    j["t0"] = complex_json(t.t0);
    j["method"] = t.method == TMatrixMethod::closed_form ? "closed_form" : "discrete_sum";
    j["branch"] = t.branch;
    j["closed_form_mismatch"] = t.closed_mismatch;
    j["mc_std_err"] = t.mc_std_err;
    j["blockade_radius"] = t.r_blockade;
    j["blockade_volume_ratio"] = t.blockade_volume_ratio;
    j["loop_quadrature_fallback"] = t.loop_fallback;
    return j;
}

ordered_json report_skeleton(const RunConfig& cfg) {
    ordered_json j;
    j["mode"] = cfg.mode;
    j["resolved_config"] = config_to_json(cfg);
    return j;
}

void write_json(const RunConfig& cfg, const std::string& dir, const std::string& suffix,
                const ordered_json& j) {
    write_file_atomic(join_path(dir, cfg.output_prefix + suffix), j.dump(2) + "\n");
}

void unit_header(CsvBuilder& csv, const RunConfig& cfg) {
    csv.comment("frequency_unit = " + cfg.units +
                (cfg.units == "MHz" ? " (nu = 3 * omega_gamma_e MHz)" : ""));
    csv.comment("densities and weights are in natural gamma_e units");
}

void run_greens(const RunConfig& cfg, const std::string& dir) {
    const double fs = cfg.frequency_scale();
    CsvBuilder csv;
    csv.resolved_params(cfg);
    unit_header(csv, cfg);
    const char* m3 = "abs";
    const char* m2[] = {"bq", "cq"};
    std::vector<std::string> cols{"omega"};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            cols.push_back(std::string("g_") + m3[i] + m3[j] + "_re");
            cols.push_back(std::string("g_") + m3[i] + m3[j] + "_im");
        }
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            cols.push_back(std::string("g_") + m2[i] + m2[j] + "_re");
            cols.push_back(std::string("g_") + m2[i] + m2[j] + "_im");
        }
    csv.columns(cols);
    for (int k = 0; k < cfg.omega_grid.points; ++k) {
        const double w = cfg.omega_grid.at(k);
        const auto g3 = greens(cfg.params, w, Sector::symmetric);
        const auto g2 = greens(cfg.params, w, Sector::q_nonzero);
        std::vector<double> row{fs * w};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                row.push_back(g3(i, j).real());
                row.push_back(g3(i, j).imag());
            }
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                row.push_back(g2(i, j).real());
                row.push_back(g2(i, j).imag());
            }
        csv.row(row);
    }
    write_file_atomic(join_path(dir, cfg.output_prefix + "_greens.csv"), csv.str());

    ordered_json j = report_skeleton(cfg);
    const auto eps = polariton_energies(cfg.params);
    j["polariton_energies"] = {fs * eps[0], fs * eps[1], fs * eps[2]};
    j["g_aa_at_zero"] = complex_json(greens(cfg.params, 0.0, Sector::symmetric)(mode_a, mode_a));
    write_json(cfg, dir, "_greens.json", j);
}

void run_tmatrix(const RunConfig& cfg, const std::string& dir) {
    const auto t = compute_tmatrix(cfg.params, cfg.tmatrix_method, cfg.mc_positions,
                                   cfg.seeds, cfg.workers);
    ordered_json j = report_skeleton(cfg);
    j["tmatrix"] = tmatrix_json(t);
    write_json(cfg, dir, "_tmatrix.json", j);
}

void run_spectrum(const RunConfig& cfg, const std::string& dir) {
    const auto res = compute_spectrum(cfg.params, cfg.omega_grid, cfg.tmatrix_method,
                                      cfg.mc_positions, cfg.seeds);
    const double fs = cfg.frequency_scale();
    CsvBuilder csv;
    csv.resolved_params(cfg);
    unit_header(csv, cfg);
    csv.columns({"omega", "s_inelastic", "log10_s_inelastic"});
    for (std::size_t i = 0; i < res.omega.size(); ++i)
        csv.row({fs * res.omega[i], res.density[i],
                 std::log10(std::max(res.density[i], 1e-300))});
    write_file_atomic(join_path(dir, cfg.output_prefix + "_spectrum.csv"), csv.str());

    ordered_json j = report_skeleton(cfg);
    j["elastic_weight_2"] = res.elastic.weight_2;
    j["elastic_weight_4"] = res.elastic.weight_4;
    j["mean_amp_order1"] = complex_json(res.amp1);
    j["mean_amp_order3"] = complex_json(res.amp3);
    j["tmatrix"] = tmatrix_json(res.tmatrix);
    // Decay diagnostic: grid-edge density against the interior maximum.
    double interior = 0.0, edge = 0.0;
    for (std::size_t i = 0; i < res.density.size(); ++i)
        interior = std::max(interior, res.density[i]);
    if (!res.density.empty())
        edge = std::max(res.density.front(), res.density.back());
    j["edge_to_peak_ratio"] = interior > 0 ? edge / interior : 0.0;
    write_json(cfg, dir, "_spectrum.json", j);
}

void run_map(const RunConfig& cfg, const std::string& dir) {
    const auto map = spectrum_map(cfg.params, cfg.omega_grid, cfg.omega_cf_grid,
                                  cfg.workers);
    const double fs = cfg.frequency_scale();

    CsvBuilder csv;
    csv.resolved_params(cfg);
    unit_header(csv, cfg);
    csv.columns({"omega_cf", "omega", "s_inelastic", "log10_s_inelastic"});
    for (std::size_t c = 0; c < map.omega_cf.size(); ++c)
        for (std::size_t w = 0; w < map.omega.size(); ++w) {
            const double d = map.at(c, w);
            csv.row({fs * map.omega_cf[c], fs * map.omega[w], d,
                     std::log10(std::max(d, map.log_floor))});
        }
    write_file_atomic(join_path(dir, cfg.output_prefix + "_map.csv"), csv.str());

    CsvBuilder overlay;
    overlay.resolved_params(cfg);
    unit_header(overlay, cfg);
    overlay.columns({"omega_cf", "eps_1", "eps_2", "eps_3", "neg_eps_1", "neg_eps_2",
                     "neg_eps_3"});
    for (std::size_t c = 0; c < map.omega_cf.size(); ++c) {
        const auto& e = map.eps[c];
        overlay.row({fs * map.omega_cf[c], fs * e[0], fs * e[1], fs * e[2], -fs * e[0],
                     -fs * e[1], -fs * e[2]});
    }
    write_file_atomic(join_path(dir, cfg.output_prefix + "_map_overlay.csv"),
                      overlay.str());

    ordered_json j = report_skeleton(cfg);
    j["columns"] = ordered_json::array();
    for (std::size_t c = 0; c < map.omega_cf.size(); ++c) {
        ordered_json col;
        col["omega_cf"] = fs * map.omega_cf[c];
        col["valid"] = static_cast<bool>(map.column_valid[c]);
        if (!map.column_valid[c]) col["error"] = map.column_error[c];
        col["t0"] = complex_json(map.t0[c]);
        j["columns"].push_back(col);
    }
    write_json(cfg, dir, "_map.json", j);
}

void run_oracle_compare(const RunConfig& cfg, const std::string& dir) {
    SystemParams p = cfg.params;
    p.n_atoms = cfg.oracle.n_atoms;
    const auto positions = cfg.oracle.resolved_positions();

    // Formula side, apples to apples: the discrete pair interaction of the
    // actual atom positions feeds the resummed scattering amplitude.
    const cxd s_loop = loop_integral(p, Sector::q_nonzero, LoopMethod::residues);
    const cxd s0_loop = loop_integral(p, Sector::symmetric, LoopMethod::residues);
    const cxd ttilde = p.c6 == 0.0 ? cxd(0.0, 0.0) : t_tilde0_discrete(positions, p, s_loop);
    const cxd t0 = p.c6 == 0.0 ? cxd(0.0, 0.0) : t0_resummed(ttilde, s0_loop, s_loop);
    const auto weights = elastic_weights(p, t0);

    std::vector<double> grid(static_cast<std::size_t>(cfg.omega_grid.points));
    for (int i = 0; i < cfg.omega_grid.points; ++i)
        grid[static_cast<std::size_t>(i)] = cfg.omega_grid.at(i);
    std::vector<double> formula(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        formula[i] = inelastic_density(p, t0, grid[i]);

    const auto model = build_model<double>(p, positions, cfg.oracle.n_max);
    const auto rho = steady_state(model);
    const auto oracle = emission_spectrum(model, rho, grid, cfg.oracle.horizon);

    const double fs = cfg.frequency_scale();
    CsvBuilder csv;
    csv.resolved_params(cfg);
    unit_header(csv, cfg);
    csv.columns({"omega", "s_inelastic_formula", "s_inelastic_oracle"});
    for (std::size_t i = 0; i < grid.size(); ++i)
        csv.row({fs * grid[i], formula[i], oracle.density[i]});
    write_file_atomic(join_path(dir, cfg.output_prefix + "_oracle.csv"), csv.str());

    // Integrated inelastic power of the formula side for the moments check.
    double integral = 0.0;
    if (grid.size() >= 3 && grid.size() % 2 == 1) {
        const double h = grid[1] - grid[0];
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double wgt = (i == 0 || i + 1 == grid.size()) ? 1.0 : (i % 2 ? 4.0 : 2.0);
            integral += wgt * formula[i];
        }
        integral *= h / 3.0 / (2.0 * pi);
    }

    ordered_json j = report_skeleton(cfg);
    j["positions"] = ordered_json::array();
    for (const auto& r : positions) j["positions"].push_back({r[0], r[1], r[2]});
    ordered_json f;
    f["elastic_weight_2"] = weights.weight_2;
    f["elastic_weight_4"] = weights.weight_4;
    f["elastic_weight_total"] = weights.weight_2 + weights.weight_4;
    f["t0"] = complex_json(t0);
    f["t_tilde0_discrete"] = complex_json(ttilde);
    f["loop_s"] = complex_json(s_loop);
    f["loop_s0"] = complex_json(s0_loop);
    f["integrated_inelastic"] = integral;
    f["n_a_order2"] = p.alpha * p.alpha *
                      std::norm(greens(p, 0.0, Sector::symmetric)(mode_a, mode_a));
    j["formula"] = f;
    ordered_json o;
    o["elastic_weight"] = oracle.elastic_weight;
    o["mean_a"] = complex_json(oracle.mean_a);
    o["n_a"] = oracle.n_a;
    o["covariance"] = oracle.covariance;
    o["integrated_inelastic"] = oracle.integrated_inelastic;
    o["total_power"] = oracle.total_power;
    o["plateau_residual"] = oracle.plateau_residual;
    o["horizon_shift"] = oracle.horizon_shift;
    j["oracle"] = o;
    j["elastic_weight_ratio"] =
        oracle.elastic_weight > 0 ? (weights.weight_2 + weights.weight_4) / oracle.elastic_weight
                                  : 0.0;
    write_json(cfg, dir, "_oracle.json", j);
}

int run(const std::string& mode, const std::string& config_path,
        const std::vector<std::string>& overrides, std::string out_dir, int workers_flag,
        const std::string& units_flag) {
    RunConfig cfg;
    try {
        if (config_path.empty()) {
            ordered_json doc = ordered_json::object();
            for (const auto& ov : overrides) apply_override(doc, ov);
            cfg = config_from_json(doc);
        } else {
            cfg = load_config(config_path, overrides);
        }
        cfg.mode = mode;
        if (workers_flag > 0) cfg.workers = workers_flag;
        if (!units_flag.empty()) cfg.units = units_flag;
        cfg.validate();
    } catch (const std::exception& e) {
        ordered_json err;
        err["error"] = {{"stage", "config"}, {"message", e.what()}};
        std::cerr << err.dump() << "\n";
        return 2;
    }
    if (out_dir.empty()) {
        const char* env = std::getenv("RYSCAT_OUT_DIR");
        out_dir = env ? env : ".";
    }
    try {
        if (mode == "greens")
            run_greens(cfg, out_dir);
        else if (mode == "tmatrix")
            run_tmatrix(cfg, out_dir);
        else if (mode == "spectrum")
            run_spectrum(cfg, out_dir);
        else if (mode == "map")
            run_map(cfg, out_dir);
        else if (mode == "oracle-compare")
            run_oracle_compare(cfg, out_dir);
        else
            throw std::invalid_argument("unknown mode " + mode);
    } catch (const std::exception& e) {
        ordered_json err;
        err["error"] = {{"stage", "runtime"}, {"message", e.what()}};
        std::cerr << err.dump() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cavity Rydberg-EIT transmission spectra: resolvents, loop integrals, "
                 "resummed scattering amplitudes, and a brute-force reference"};
    app.require_subcommand(1);

    struct SharedOpts {
        std::string config;
        std::string out;
        std::string units;
        int workers = 0;
        std::vector<std::string> overrides;
    };
    SharedOpts opts;

    const std::vector<std::pair<std::string, std::string>> modes = {
        {"greens", "resolvent matrices over a frequency grid"},
        {"tmatrix", "loop integrals and the resummed scattering amplitude"},
        {"spectrum", "elastic weights and the inelastic density on a grid"},
        {"map", "2-D inelastic map over (control Rabi, frequency)"},
        {"oracle-compare", "brute-force reference vs the fourth-order formulas"},
    };
    for (const auto& [name, desc] : modes) {
        auto* sub = app.add_subcommand(name, desc);
        sub->add_option("--config", opts.config, "JSON config file (defaults when omitted)");
        sub->add_option("--out", opts.out,
                        "output directory (default: $RYSCAT_OUT_DIR or '.')");
        sub->add_option("--workers", opts.workers, "worker threads (overrides config)");
        sub->add_option("--units", opts.units, "frequency units in outputs: gamma_e | MHz")
            ->check(CLI::IsMember({"gamma_e", "MHz"}));
        sub->add_option("--params", opts.overrides, "key=value config overrides")
            ->take_all();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
        ryscat::ordered_json err;
        err["error"] = {{"stage", "cli"}, {"message", e.what()}};
        std::cerr << err.dump() << "\n";
        return 2;
    }
    const std::string mode = app.get_subcommands().front()->get_name();
    return run(mode, opts.config, opts.overrides, opts.out, opts.workers, opts.units);
}
