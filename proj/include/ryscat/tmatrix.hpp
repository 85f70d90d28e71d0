#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "ryscat/core.hpp"
#include "ryscat/model.hpp"
#include "ryscat/params.hpp"

namespace ryscat {

using Vec3 = std::array<double, 3>;

enum class LoopMethod { residues, quadrature };
enum class TMatrixMethod { closed_form, discrete_sum };

// Two-spinwave propagation bubble S = (1/2pi) Integral dw G_ss[-w] G_ss[w]
// for the requested sector (q_nonzero gives S, symmetric gives S0).
// residues: eigendecompose M_eff and close the contour in the upper half
// plane; falls back to quadrature (with a notice on clog) when eigenvalues
// are closer than 1e-9.  quadrature: adaptive panels on [-W, W] plus
// inverted-variable tails, with W set by the spectral radius.
cxd loop_integral(const EffectiveMatrix& m, int s_index, LoopMethod method);
cxd loop_integral(const SystemParams& p, Sector sector, LoopMethod method);

// True when the residue method would refuse this matrix (eigenvalue gap
// below 1e-9) and loop_integral would fall back to quadrature.
bool loop_degenerate(const EffectiveMatrix& m);

// Closed form of the continuum two-body pair average
// (1/V) Integral d^3r kappa(r) / (1 - i kappa(r) S), kappa = c6/r^6:
// with x = r^3 the integral is (4 pi c6 / 3V) Integral_0^inf dx/(x^2 - i c6 S)
// = (2 pi^2 / 3V) c6 / sqrt(-i c6 S).  The square-root branch (principal or
// negated) is fixed by evaluating the radial integral numerically and picking
// the closer candidate; the integral is the definition, the surd its
// shorthand.
struct TTilde0Closed {
    cxd value{};
    cxd continuum{};      // numerically evaluated radial integral / V
    int branch = +1;      // +1 principal sqrt, -1 negated
    double mismatch = 0;  // |value - continuum| / |continuum|
};
TTilde0Closed t_tilde0_closed(const SystemParams& p, cxd S);

// Discrete pair average (1/N^2) Sum_{m != n} kappa_mn / (1 - i kappa_mn S)
// with kappa_mn = c6 / |r_m - r_n|^6.  The diagonal m = n (divergent
// self-interaction) is excluded.  box_side > 0 applies the minimum-image
// distance convention of a periodic box, which removes the O(r_b/L) surface
// bias of an open uniform sample; box_side <= 0 uses plain distances.
cxd t_tilde0_discrete(const std::vector<Vec3>& positions, const SystemParams& p,
                      cxd S, double box_side = 0.0);

// Monte-Carlo estimate of the pair average over uniform positions in a cube
// of the configured volume (minimum-image distances), one estimate per seed,
// reduced in seed order so the result is reproducible for a fixed seed list
// and any worker count.
struct McEstimate {
    cxd mean{};
    double std_err = 0.0;  // scalar spread sqrt(Sum |v_k - mean|^2 / (n(n-1)))
    std::vector<cxd> per_seed;
};
McEstimate t_tilde0_monte_carlo(const SystemParams& p, cxd S, long n_positions,
                                const std::vector<std::uint64_t>& seeds, int workers = 1);

// Deterministic uniform positions in [0, side)^3 from a seeded mt19937_64
// (53-bit mantissa mapping, identical across platforms).
std::vector<Vec3> sample_positions_cube(long n, double side, std::uint64_t seed);

// Resummation of repeated symmetric-channel scattering:
// T0 = T~0 / (1 - i (S0 - S) T~0).
cxd t0_resummed(cxd t_tilde0, cxd S0, cxd S);

// Blockade-scale diagnostic: kappa(r_b) |S| = 1.
double blockade_radius(const SystemParams& p, cxd S);

struct TMatrixResult {
    cxd S{};
    cxd S0{};
    cxd t_tilde0{};
    cxd t0{};
    TMatrixMethod method = TMatrixMethod::closed_form;
    int branch = +1;               // closed form only
    double closed_mismatch = 0.0;  // closed form vs continuum integral
    double mc_std_err = 0.0;       // discrete sum only
    double r_blockade = 0.0;
    double blockade_volume_ratio = 0.0;  // (4 pi / 3) r_b^3 / V
    bool loop_fallback = false;          // residue degeneracy forced quadrature
};

TMatrixResult compute_tmatrix(const SystemParams& p,
                              TMatrixMethod method = TMatrixMethod::closed_form,
                              long mc_positions = 4000,
                              const std::vector<std::uint64_t>& seeds = {1, 2, 3, 4, 5, 6, 7, 8},
                              int workers = 1);

}  // namespace ryscat
