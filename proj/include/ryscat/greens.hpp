#pragma once

#include <array>

#include "ryscat/core.hpp"
#include "ryscat/model.hpp"
#include "ryscat/params.hpp"

namespace ryscat {

// Frequency-domain Green's function of a sector: the resolvent
// G[w] = (w I - M_eff)^(-1).  For the stable linear system driven by vacuum
// noise the time-ordered vacuum correlator <T x(t) y^dag(0)> equals
// [e^{-i M_eff t}]_{xy} theta(t), and under the e^{+i w t} transform
// convention (core.hpp) its transform, -i Integral_0^inf e^{i w t}
// e^{-i M_eff t} dt, is exactly this resolvent.
struct ResolventMatrix {
    double omega = 0.0;
    int dim = 0;
    std::array<cxd, 9> g{};  // row-major, top-left dim x dim block used

    cxd operator()(int i, int j) const { return g[static_cast<std::size_t>(3 * i + j)]; }
    cxd& at(int i, int j) { return g[static_cast<std::size_t>(3 * i + j)]; }
};

// Direct closed-form cofactor inverse (hot path: millions of evaluations per
// parameter map).  Throws on a numerically singular pencil, which requires a
// vanishing decay rate with w at a real eigenvalue.
ResolventMatrix greens(const EffectiveMatrix& m, double omega);
ResolventMatrix greens(const SystemParams& p, double omega, Sector sector);

// Generic LU path used to validate the cofactor formulas.
ResolventMatrix greens_lu(const EffectiveMatrix& m, double omega);

// Numerical cross-check of the resolvent identification: integrates
// dV/dt = -i M_eff V from V(0) = I together with W' = -i e^{i w t} V by
// fixed-step RK4 up to a horizon T with e^{-gamma_min T} < 1e-10, so W(T)
// approximates the transform above.  Agrees with greens() to ~1e-6.
ResolventMatrix greens_time_domain_check(const EffectiveMatrix& m, double omega);
ResolventMatrix greens_time_domain_check(const SystemParams& p, double omega, Sector sector);

}  // namespace ryscat
