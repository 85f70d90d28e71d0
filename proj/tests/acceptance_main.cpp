// Acceptance harness.  Each numbered criterion is a self-contained check
// with its tolerance and runtime budget pinned in code; the binary runs one
// criterion (argv[1] in 1..11, or "all"), prints a single PASS/FAIL line per
// criterion with the decisive numbers, and exits nonzero on any failure.

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <iterator>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ryscat/greens.hpp"
#include "ryscat/model.hpp"
#include "ryscat/oracle.hpp"
#include "ryscat/spectrum.hpp"
#include "ryscat/tmatrix.hpp"

using namespace ryscat;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list args;
    va_start(args, f);
    std::vsnprintf(buf, sizeof buf, f, args);
    va_end(args);
    return buf;
}

SystemParams random_params(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> det(-5.0, 5.0);
    std::uniform_real_distribution<double> rate(0.05, 3.0);
    std::uniform_real_distribution<double> coop(0.0, 10.0);
    SystemParams p;
    p.delta_c = det(rng);
    p.delta_e = det(rng);
    p.delta_r = det(rng);
    p.omega_cf = std::abs(det(rng));
    p.gamma_e = rate(rng);
    p.gamma_r = rate(rng);
    p.gamma_c_d = rate(rng);
    p.gamma_c_f = 0.1 * p.gamma_c_d;
    p.cooperativity = coop(rng);
    return p;
}

double identity_residual(const EffectiveMatrix& m, const ResolventMatrix& g, double w) {
    double worst = 0.0;
    for (int i = 0; i < m.dim; ++i)
        for (int j = 0; j < m.dim; ++j) {
            cxd acc = i == j ? cxd(-1.0, 0.0) : cxd(0.0, 0.0);
            for (int k = 0; k < m.dim; ++k) {
                const cxd lhs = (i == k ? cxd(w, 0.0) : cxd(0.0, 0.0)) - m(i, k);
                acc += lhs * g(k, j);
            }
            worst = std::max(worst, std::abs(acc));
        }
    return worst;
}

std::vector<Vec3> pair_positions(double d) {
    return {{0.0, 0.0, 0.0}, {d, 0.0, 0.0}};
}

// 1. Resolvent correctness: defining identity on 1000 draws, and agreement
//    with an independent time-domain propagation of the same linear system.
Outcome criterion_1() {
    std::mt19937_64 rng(7001);
    std::uniform_real_distribution<double> omega(-20.0, 20.0);
    double worst_id = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const SystemParams p = random_params(rng);
        const double w = omega(rng);
        for (auto sector : {Sector::symmetric, Sector::q_nonzero}) {
            const EffectiveMatrix m = sector == Sector::symmetric
                                          ? effective_matrix_symmetric(p)
                                          : effective_matrix_q(p);
            worst_id = std::max(worst_id, identity_residual(m, greens(m, w), w));
        }
    }
    double worst_td = 0.0;
    std::uniform_real_distribution<double> omega_td(-8.0, 8.0);
    for (int k = 0; k < 25; ++k) {
        SystemParams p = random_params(rng);
        p.gamma_r = std::max(p.gamma_r, 0.1);  // keep the propagation horizon short
        const double w = omega_td(rng);
        for (auto sector : {Sector::symmetric, Sector::q_nonzero}) {
            const auto g = greens(p, w, sector);
            const auto gt = greens_time_domain_check(p, w, sector);
            for (int i = 0; i < g.dim; ++i)
                for (int j = 0; j < g.dim; ++j)
                    worst_td = std::max(worst_td, std::abs(g(i, j) - gt(i, j)));
        }
    }
    return {worst_id < 1e-12 && worst_td < 1e-6,
            fmt("identity max %.2e (tol 1e-12), time-domain max %.2e (tol 1e-6)",
                worst_id, worst_td)};
}

// 2. Loop integral: residue vs quadrature agreement and the single-pole
//    closed form at zero control field.
Outcome criterion_2() {
    std::mt19937_64 rng(7002);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
        const SystemParams p = random_params(rng);
        for (auto sector : {Sector::symmetric, Sector::q_nonzero}) {
            const cxd a = loop_integral(p, sector, LoopMethod::residues);
            const cxd b = loop_integral(p, sector, LoopMethod::quadrature);
            worst = std::max(worst, std::abs(a - b) / std::abs(a));
        }
    }
    SystemParams p;
    p.omega_cf = 0.0;  // the q sector reduces to the bare Rydberg pole
    const cxd exact = -cxd(0.0, 1.0) / (2.0 * cxd(p.delta_r, p.gamma_r));
    double worst_pole = 0.0;
    for (auto method : {LoopMethod::residues, LoopMethod::quadrature}) {
        const cxd s = loop_integral(p, Sector::q_nonzero, method);
        worst_pole = std::max(worst_pole, std::abs(s - exact) / std::abs(exact));
    }
    return {worst < 1e-8 && worst_pole < 1e-10,
            fmt("method mismatch max %.2e (tol 1e-8), single-pole error %.2e (tol 1e-10)",
                worst, worst_pole)};
}

// 3. Pair-average consistency: closed form vs continuum integral, and the
//    discrete Monte-Carlo sum vs the closed form.
Outcome criterion_3() {
    const SystemParams p;
    const std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5, 6, 7, 8};
    const auto closed = compute_tmatrix(p, TMatrixMethod::closed_form, 4000, seeds, 8);
    const auto mc = compute_tmatrix(p, TMatrixMethod::discrete_sum, 4000, seeds, 8);
    const double rel = std::abs(mc.t_tilde0 - closed.t_tilde0) / std::abs(closed.t_tilde0);
    const bool pass = closed.closed_mismatch < 1e-3 && rel < 0.05 &&
                      closed.blockade_volume_ratio < 0.01;
    return {pass,
            fmt("continuum mismatch %.2e (tol 1e-3), MC vs closed %.3f%% (tol 5%%), "
                "blockade volume ratio %.2e (tol 0.01)",
                closed.closed_mismatch, 100.0 * rel, closed.blockade_volume_ratio)};
}

struct RidgeScan {
    double worst = 0.0;       // largest distance from a ridge to its nearest target
    double worst_cf = 0.0;    // column where it happens
    double worst_omega = 0.0; // ridge location
    int n_ridges = 0;
    int bad_columns = 0;
};

template <class Targets>
RidgeScan scan_map(const MapResult& map, double tol, Targets&& targets_for) {
    RidgeScan sc;
    for (std::size_t c = 0; c < map.omega_cf.size(); ++c) {
        if (!map.column_valid[c]) {
            ++sc.bad_columns;
            continue;
        }
        std::vector<double> col(map.omega.size());
        for (std::size_t w = 0; w < map.omega.size(); ++w) col[w] = map.at(c, w);
        const auto targets = targets_for(map.omega_cf[c]);
        bool column_bad = false;
        for (const auto& r : find_ridges(map.omega, col, 0.01)) {
            ++sc.n_ridges;
            double dist = 1e300;
            for (double t : targets) dist = std::min(dist, std::abs(r.omega - t));
            if (dist > sc.worst) {
                sc.worst = dist;
                sc.worst_cf = map.omega_cf[c];
                sc.worst_omega = r.omega;
            }
            if (dist > tol) column_bad = true;
        }
        if (column_bad) ++sc.bad_columns;
    }
    return sc;
}

const GridSpec kOmegaGrid{-6.0, 6.0, 481};
const GridSpec kOmegaCfGrid{0.1, 6.0, 119};

// 4. Resonant map structure: every density ridge sits on one of the three
//    polariton lines {0, +-sqrt(g^2 N + Omega_cf^2/4)} to within a grid step.
Outcome criterion_4() {
    SystemParams p;  // resonant defaults
    const double g2n = 2.0 * p.cooperativity * p.gamma_c() * p.gamma_e;
    const auto map = spectrum_map(p, kOmegaGrid, kOmegaCfGrid, 8);
    const auto sc = scan_map(map, 0.025, [&](double cf) {
        const double e = std::sqrt(g2n + 0.25 * cf * cf);
        return std::array<double, 3>{0.0, e, -e};
    });
    return {sc.worst <= 0.025 && sc.bad_columns == 0,
            fmt("%d ridges over %d columns; worst offset %.3f at omega_cf=%.2f, "
                "omega=%.3f (tol 0.025); %d offending columns",
                sc.n_ridges, static_cast<int>(map.omega_cf.size()), sc.worst,
                sc.worst_cf, sc.worst_omega, sc.bad_columns)};
}

// 5. Detuned map structure: with the cavity pulled off resonance the ridges
//    must track the six +-eps_k polariton branches.
Outcome criterion_5() {
    SystemParams p;
    p.delta_c = -3.0;
    const auto map = spectrum_map(p, kOmegaGrid, kOmegaCfGrid, 8);
    const auto sc = scan_map(map, 0.15, [&](double cf) {
        SystemParams q = p;
        q.omega_cf = cf;
        const auto e = polariton_energies(q);
        return std::array<double, 6>{e[0], e[1], e[2], -e[0], -e[1], -e[2]};
    });
    return {sc.worst <= 0.15 && sc.bad_columns == 0,
            fmt("%d ridges over %d columns; worst offset %.3f at omega_cf=%.2f, "
                "omega=%.3f (tol 0.15); %d offending columns",
                sc.n_ridges, static_cast<int>(map.omega_cf.size()), sc.worst,
                sc.worst_cf, sc.worst_omega, sc.bad_columns)};
}

// 6. The interaction strength only sets the overall magnitude: densities for
//    c6 and 10 c6 must be pointwise proportional.
Outcome criterion_6() {
    SystemParams pa;
    SystemParams pb;
    pb.c6 = 10.0 * pa.c6;
    const auto ta = compute_tmatrix(pa, TMatrixMethod::closed_form, 2, {1}, 1);
    const auto tb = compute_tmatrix(pb, TMatrixMethod::closed_form, 2, {1}, 1);
    double ref = 0.0, peak = -1.0;
    std::vector<double> ra(static_cast<std::size_t>(kOmegaGrid.points));
    std::vector<double> rb(ra.size());
    for (int i = 0; i < kOmegaGrid.points; ++i) {
        const double w = kOmegaGrid.at(i);
        ra[static_cast<std::size_t>(i)] = inelastic_density(pa, ta.t0, w);
        rb[static_cast<std::size_t>(i)] = inelastic_density(pb, tb.t0, w);
        if (ra[static_cast<std::size_t>(i)] > peak) {
            peak = ra[static_cast<std::size_t>(i)];
            ref = rb[static_cast<std::size_t>(i)] / ra[static_cast<std::size_t>(i)];
        }
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < ra.size(); ++i)
        worst = std::max(worst, std::abs(rb[i] / ra[i] / ref - 1.0));
    return {worst < 1e-10,
            fmt("ratio variation %.2e across %d points (tol 1e-10)", worst,
                kOmegaGrid.points)};
}

// 7. Positivity everywhere and exact evenness of the resonant spectrum.
Outcome criterion_7() {
    std::mt19937_64 rng(7007);
    std::uniform_real_distribution<double> omega(-8.0, 8.0);
    std::uniform_real_distribution<double> c6dist(1.0, 200.0);
    double most_negative = 0.0;
    for (int k = 0; k < 1000; ++k) {
        SystemParams p = random_params(rng);
        p.c6 = c6dist(rng);
        const cxd s = loop_integral(p, Sector::q_nonzero, LoopMethod::residues);
        const cxd s0 = loop_integral(p, Sector::symmetric, LoopMethod::residues);
        const cxd t0 = t0_resummed(t_tilde0_closed(p, s).value, s0, s);
        for (int j = 0; j < 8; ++j)
            most_negative = std::min(most_negative, inelastic_density(p, t0, omega(rng)));
    }
    SystemParams p;  // resonant defaults
    const cxd s = loop_integral(p, Sector::q_nonzero, LoopMethod::residues);
    const cxd s0 = loop_integral(p, Sector::symmetric, LoopMethod::residues);
    const cxd t0 = t0_resummed(t_tilde0_closed(p, s).value, s0, s);
    double dmax = 0.0, asym = 0.0;
    for (int i = 0; i <= 200; ++i) {
        const double w = 6.0 * i / 200.0;
        const double dp = inelastic_density(p, t0, w);
        const double dm = inelastic_density(p, t0, -w);
        dmax = std::max(dmax, dp);
        asym = std::max(asym, std::abs(dp - dm));
    }
    return {most_negative >= 0.0 && asym <= 1e-12 * dmax,
            fmt("most negative density %.2e (tol 0), resonant asymmetry %.2e of peak "
                "(tol 1e-12)",
                most_negative, dmax > 0 ? asym / dmax : 0.0)};
}

// 8. Brute-force linear response: without interactions the steady-state
//    photon number must match the quadratic formula and the inelastic
//    density must vanish.  Known red: the density floor is not numerical
//    noise but the excitation cutoff itself -- the n_max=2 projection of a
//    coherent state is no longer an eigenstate of the lowering operator, so
//    a spurious covariance ~|beta|^6/2 survives, leaving an inelastic
//    artifact that scales as alpha^4 and sits near 1.4e-10 of the elastic
//    weight at alpha=1e-3 (measured identical in double and long double;
//    drops to 1e-12 only below alpha~3e-4, or to 4e-16 at n_max=3).
Outcome criterion_8() {
    SystemParams p;
    p.c6 = 0.0;
    p.alpha = 1e-3;
    const auto model = build_model<long double>(p, pair_positions(1.0), 2);
    const auto rho = steady_state(model);
    std::vector<double> grid(241);
    for (std::size_t i = 0; i < grid.size(); ++i)
        grid[i] = -6.0 + 12.0 * static_cast<double>(i) / 240.0;
    const auto spec = emission_spectrum(model, rho, grid);
    const double expected =
        p.alpha * p.alpha * std::norm(greens(p, 0.0, Sector::symmetric)(mode_a, mode_a));
    const double rel_na = std::abs(spec.n_a - expected) / expected;
    double dmax = 0.0;
    for (double d : spec.density) dmax = std::max(dmax, std::abs(d));
    const double floor = dmax / spec.elastic_weight;
    return {rel_na < 0.01 && floor < 1e-12,
            fmt("photon number off by %.2e (tol 1e-2), inelastic floor %.2e of the "
                "elastic weight (tol 1e-12)",
                rel_na, floor)};
}

const std::vector<double> kAlphaLadder{1e-3, 2.2e-3, 4.6e-3, 1e-2};

// 9. Perturbative orders from the brute-force model: the elastic weight,
//    third-order amplitude deviation, and inelastic power must scale with
//    the feeding rate as alpha^2, alpha^3, alpha^4.
Outcome criterion_9() {
    const SystemParams p;  // interacting pair, defaults have c6 > 0
    const auto pos = pair_positions(1.3);
    const auto e2 = alpha_scaling<double>(p, pos, 2, kAlphaLadder,
                                          ScalingObservable::elastic_weight);
    const auto e3 = alpha_scaling<double>(p, pos, 2, kAlphaLadder,
                                          ScalingObservable::third_order_deviation);
    const auto e4 = alpha_scaling<double>(p, pos, 2, kAlphaLadder,
                                          ScalingObservable::inelastic_power);
    const bool pass = std::abs(e2.exponent - 2.0) < 0.02 &&
                      std::abs(e3.exponent - 3.0) < 0.05 &&
                      std::abs(e4.exponent - 4.0) < 0.05;
    return {pass,
            fmt("exponents %.4f (2+-0.02), %.4f (3+-0.05), %.4f (4+-0.05)", e2.exponent,
                e3.exponent, e4.exponent)};
}

// 10. Factorization: <a^dag a> and |<a>|^2 coincide through alpha^2, so their
//     difference (the covariance) must scale as alpha^4.
Outcome criterion_10() {
    const SystemParams p;
    const auto fit = alpha_scaling<double>(p, pair_positions(1.3), 2, kAlphaLadder,
                                           ScalingObservable::inelastic_power);
    return {std::abs(fit.exponent - 4.0) < 0.05,
            fmt("covariance exponent %.4f (tol 4+-0.05), fit residual %.2e",
                fit.exponent, fit.max_residual)};
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// 11. Determinism: two identical CLI map runs produce byte-identical CSVs.
Outcome criterion_11() {
#ifndef RYSCAT_CLI_PATH
    return {false, "binary path not configured"};
#else
    const std::string base = "/tmp/ryscat_acceptance_11";
    if (std::system(("rm -rf " + base + " && mkdir -p " + base + "/a " + base + "/b")
                        .c_str()) != 0)
        return {false, "cannot prepare scratch directories"};
    for (const char* sub : {"/a", "/b"}) {
        const std::string cmd = std::string(RYSCAT_CLI_PATH) + " map --out " + base + sub +
                                " > /dev/null 2>&1";
        const int st = std::system(cmd.c_str());
        if (!WIFEXITED(st) || WEXITSTATUS(st) != 0)
            return {false, fmt("map run in %s failed", sub)};
    }
    for (const char* name : {"/run_map.csv", "/run_map_overlay.csv"}) {
        const std::string a = slurp(base + "/a" + name);
        if (a.empty()) return {false, fmt("missing payload %s", name)};
        if (a != slurp(base + "/b" + name))
            return {false, fmt("payload %s differs between runs", name)};
    }
    return {true, "map and overlay payloads byte-identical across runs"};
#endif
}

struct Criterion {
    int number;
    const char* label;
    Outcome (*run)();
    double budget_s;  // 0 = none stated
};

const Criterion kCriteria[] = {
    {1, "resolvent identity and time-domain agreement", criterion_1, 10.0},
    {2, "loop integral methods and single-pole closed form", criterion_2, 30.0},
    {3, "pair-average closed form, continuum, and Monte Carlo", criterion_3, 120.0},
    {4, "resonant map ridges on the three polariton lines", criterion_4, 60.0},
    {5, "detuned map ridges on the six polariton branches", criterion_5, 0.0},
    {6, "interaction strength sets only the overall scale", criterion_6, 0.0},
    {7, "density positivity and resonant evenness", criterion_7, 0.0},
    {8, "brute-force linear response at zero interaction", criterion_8, 60.0},
    {9, "perturbative scaling exponents 2, 3, 4", criterion_9, 300.0},
    {10, "factorization: covariance scales as alpha^4", criterion_10, 0.0},
    {11, "byte-identical repeated CLI map runs", criterion_11, 0.0},
};

int run_one(const Criterion& c) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = c.run();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool in_budget = c.budget_s <= 0.0 || secs < c.budget_s;
    std::printf("criterion %2d: %s  (%.2f s%s)  %s — %s\n", c.number,
                o.pass && in_budget ? "PASS" : "FAIL", secs,
                c.budget_s > 0 ? fmt(", budget %.0f s", c.budget_s).c_str() : "",
                c.label, o.detail.c_str());
    std::fflush(stdout);
    return o.pass && in_budget ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc > 1 && std::string(argv[1]) != "all") {
        const int want = std::atoi(argv[1]);
        for (const auto& c : kCriteria)
            if (c.number == want) return run_one(c);
        std::fprintf(stderr, "no criterion %s (valid: 1..11 or 'all')\n", argv[1]);
        return 2;
    }
    int failures = 0;
    for (const auto& c : kCriteria) failures += run_one(c);
    if (failures)
        std::printf("%d of %d criteria failing\n", failures,
                    static_cast<int>(std::size(kCriteria)));
    return failures ? 1 : 0;
}
