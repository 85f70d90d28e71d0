#pragma once

#include <array>

#include "ryscat/core.hpp"
#include "ryscat/params.hpp"

namespace ryscat {

// Excitation sectors of the linearized model.  The symmetric sector couples
// the cavity mode to the symmetric spinwaves; spinwaves with any other
// wavevector never see the cavity and form identical 2x2 blocks.
enum class Sector { symmetric, q_nonzero };

// Mode indices, fixed repo-wide.
// symmetric sector: 0 = a (cavity), 1 = b (intermediate spinwave), 2 = s (Rydberg spinwave)
// q_nonzero sector: 0 = b_q, 1 = c_q
inline constexpr int mode_a = 0;
inline constexpr int mode_b = 1;
inline constexpr int mode_s = 2;
inline constexpr int mode_bq = 0;
inline constexpr int mode_cq = 1;

// Effective single-excitation matrix M_eff = M - i diag(Gamma): the coherent
// part M is real symmetric, the decay vector Gamma is entrywise >= 0, so the
// anti-Hermitian part is negative semidefinite.
struct EffectiveMatrix {
    int dim = 0;                  // 2 or 3
    std::array<cxd, 9> m{};      // row-major, top-left dim x dim block used

    cxd operator()(int i, int j) const { return m[static_cast<std::size_t>(3 * i + j)]; }
    cxd& at(int i, int j) { return m[static_cast<std::size_t>(3 * i + j)]; }
};

// 3x3 symmetric-sector matrix in the (a, b, s) basis:
// coherent part [[-dc, gN, 0], [gN, -de, W/2], [0, W/2, -dr]],
// decay diag(gamma_c, gamma_e, gamma_r).
EffectiveMatrix effective_matrix_symmetric(const SystemParams& p);

// 2x2 q != 0 sector in the (b_q, c_q) basis:
// coherent part [[-de, W/2], [W/2, -dr]], decay diag(gamma_e, gamma_r).
EffectiveMatrix effective_matrix_q(const SystemParams& p);

EffectiveMatrix effective_matrix(const SystemParams& p, Sector sector);

// Sorted eigenvalues of the Hermitian coherent part of the 3x3 sector
// (decay excluded): the three polariton energies.
std::array<double, 3> polariton_energies(const SystemParams& p);

}  // namespace ryscat
