#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace ryscat {

// All rates, detunings and frequencies are angular frequencies in units of
// the intermediate-state decay gamma_e unless stated otherwise.  c6 carries
// frequency * length^6 and volume carries length^3; any length unit works as
// long as the two agree.
struct SystemParams {
    double gamma_e = 1.0;     // intermediate-state amplitude decay (the unit)
    double gamma_r = 0.15;    // Rydberg-state decay
    double gamma_c_f = 0.01;  // feeding-mirror cavity decay
    double gamma_c_d = 0.3;   // detection-mirror cavity decay
    double cooperativity = 5.0;  // C = g^2 N / (2 gamma_c gamma_e)
    double omega_cf = 2.0;    // control-field Rabi frequency
    double delta_c = 0.0;     // cavity detuning
    double delta_e = 0.0;     // single-photon detuning
    double delta_r = 0.0;     // two-photon detuning
    double alpha = 1e-3;      // cavity feeding rate, alpha = sqrt(2 gamma_c_f I_in)
    double c6 = 50.0;         // van der Waals coefficient
    double volume = 20000.0;  // sample volume
    long n_atoms = 4000;      // used by the discrete pair sum and the oracle

    double gamma_c() const { return gamma_c_f + gamma_c_d; }

    // Collective coupling from the cooperativity definition.
    double g_sqrt_n() const {
        return std::sqrt(2.0 * cooperativity * gamma_c() * gamma_e);
    }

    void validate() const {
        auto fail = [](const std::string& msg) {
            throw std::invalid_argument("SystemParams: " + msg);
        };
        auto finite = [&](double v, const char* name) {
            if (!std::isfinite(v)) fail(std::string(name) + " must be finite");
        };
        finite(gamma_e, "gamma_e");
        finite(gamma_r, "gamma_r");
        finite(gamma_c_f, "gamma_c_f");
        finite(gamma_c_d, "gamma_c_d");
        finite(cooperativity, "cooperativity");
        finite(omega_cf, "omega_cf");
        finite(delta_c, "delta_c");
        finite(delta_e, "delta_e");
        finite(delta_r, "delta_r");
        finite(alpha, "alpha");
        finite(c6, "c6");
        finite(volume, "volume");
        if (gamma_e <= 0) fail("gamma_e must be > 0");
        if (gamma_r <= 0) fail("gamma_r must be > 0");
        if (gamma_c_f <= 0) fail("gamma_c_f must be > 0");
        if (gamma_c_d <= 0) fail("gamma_c_d must be > 0");
        if (gamma_c_d <= gamma_c_f)
            fail("gamma_c_d must exceed gamma_c_f (strongly transmitting detection mirror)");
        if (cooperativity < 0) fail("cooperativity must be >= 0");
        if (omega_cf < 0) fail("omega_cf must be >= 0");
        if (alpha < 0) fail("alpha must be >= 0");
        if (volume <= 0) fail("volume must be > 0");
        if (n_atoms < 1) fail("n_atoms must be >= 1");
    }
};

}  // namespace ryscat
