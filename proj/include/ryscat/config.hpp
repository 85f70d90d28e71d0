#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "ryscat/core.hpp"
#include "ryscat/params.hpp"
#include "ryscat/tmatrix.hpp"

namespace ryscat {

using ordered_json = nlohmann::ordered_json;

// Oracle-run settings: a handful of atoms at explicit positions (or evenly
// spaced on a line), an excitation cutoff, and the feeding-rate ladder used
// by the scaling fits.
struct OracleConfig {
    int n_atoms = 2;
    int n_max = 2;
    double spacing = 1.0;          // line placement used when positions is empty
    std::vector<Vec3> positions;   // explicit override, must match n_atoms
    std::vector<double> alphas;    // scaling ladder; empty -> geometric 1e-3..1e-2
    double horizon = 12.0;         // propagation horizon in units of 1/gamma_min

    std::vector<Vec3> resolved_positions() const;
    std::vector<double> resolved_alphas() const;
};

// Full run description: physical parameters plus grids, seeds, and output
// plumbing.  Round-trips losslessly through JSON; unknown keys are rejected
// at every nesting level so a typo cannot silently fall back to a default.
struct RunConfig {
    SystemParams params;
    std::string mode;  // set by the CLI subcommand, not by the file
    GridSpec omega_grid{-6.0, 6.0, 481};
    GridSpec omega_cf_grid{0.1, 6.0, 119};
    std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5, 6, 7, 8};
    long mc_positions = 4000;
    TMatrixMethod tmatrix_method = TMatrixMethod::closed_form;
    OracleConfig oracle;
    std::string output_prefix = "run";
    std::string units = "gamma_e";  // "gamma_e" | "MHz"
    int workers = 1;

    void validate() const;  // params.validate() plus config-level invariants
    // Frequency multiplier for output: 1 in natural units, 3.0 for MHz
    // (gamma_e = 2 pi x 3 MHz, so nu = 3 omega MHz after dividing out 2 pi).
    double frequency_scale() const { return units == "MHz" ? 3.0 : 1.0; }
};

// JSON round-trip.  config_from_json throws std::invalid_argument naming the
// offending key on unknown keys, wrong types, or out-of-range values.
ordered_json config_to_json(const RunConfig& cfg);
RunConfig config_from_json(const ordered_json& doc);

// Parse a config file and apply "key=value" overrides.  Bare keys that name
// a SystemParams field target params.<key>; dotted keys address nested
// objects ("omega_grid.points=241"); other bare keys address the top level.
// Values are parsed as JSON when possible, otherwise taken as strings.
// Overrides pass through the same strict validation as the file itself.
RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides);

// Apply one override to a parsed document (exposed for tests).
void apply_override(ordered_json& doc, const std::string& spec);

// --- output helpers -------------------------------------------------------

// Format a double with 17 significant digits ('.' separator, no locale).
std::string format_g17(double x);

// Deterministic CSV assembly: '#'-prefixed header lines carrying the full
// resolved configuration, one column-name line, then %.17g data rows with
// '\n' endings.  The whole payload is built in memory and written in one
// shot so a failed run never leaves a partial file behind.
class CsvBuilder {
  public:
    void comment(const std::string& line);
    void resolved_params(const RunConfig& cfg);
    void columns(const std::vector<std::string>& names);
    void row(const std::vector<double>& values);
    const std::string& str() const { return buf_; }

  private:
    std::string buf_;
};

// Write content to path via a temp file + rename (no partial files).
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace ryscat
