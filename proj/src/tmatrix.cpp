#include "ryscat/tmatrix.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <iostream>
#include <random>
#include <stdexcept>

#include "ryscat/greens.hpp"
#include "ryscat/quad.hpp"
#include "ryscat/threads.hpp"

namespace ryscat {

namespace {

Eigen::MatrixXcd to_eigen(const EffectiveMatrix& m) {
    Eigen::MatrixXcd e(m.dim, m.dim);
    for (int i = 0; i < m.dim; ++i)
        for (int j = 0; j < m.dim; ++j) e(i, j) = m(i, j);
    return e;
}

double norm_inf(const EffectiveMatrix& m) {
    double r = 0.0;
    for (int i = 0; i < m.dim; ++i) {
        double row = 0.0;
        for (int j = 0; j < m.dim; ++j) row += std::abs(m(i, j));
        r = std::max(r, row);
    }
    return r;
}

cxd loop_by_residues(const EffectiveMatrix& m, int s_index) {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(to_eigen(m), true);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("loop_integral: eigensolver failed");
    const auto& lam = es.eigenvalues();
    const Eigen::MatrixXcd v = es.eigenvectors();
    const Eigen::MatrixXcd vinv = v.inverse();
    const int n = m.dim;
    // G_ss(w) = Sum_k R_k / (w - lam_k) with R_k = V_{sk} (V^-1)_{ks}.
    // G_ss(-w) has poles at w = -lam_k in the upper half plane (Im lam < 0);
    // closing there gives S = i Sum_{kj} R_k R_j / (lam_k + lam_j).
    std::vector<cxd> res(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k)
        res[static_cast<std::size_t>(k)] = v(s_index, k) * vinv(k, s_index);
    cxd s = 0.0;
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j) {
            const cxd denom = lam(k) + lam(j);
            s += res[static_cast<std::size_t>(k)] * res[static_cast<std::size_t>(j)] / denom;
        }
    return cxd(0.0, 1.0) * s;
}

cxd loop_by_quadrature(const EffectiveMatrix& m, int s_index) {
    auto f = [&](double w) {
        return greens(m, -w)(s_index, s_index) * greens(m, w)(s_index, s_index);
    };
    // Panel window covering all resonances, then inverted-variable tails:
    // u = 1/w maps [W, inf) to (0, 1/W] with a smooth integrand
    // (f ~ -1/w^2 at large |w|).
    const double w_max = 4.0 * (norm_inf(m) + 1.0);
    const double tol = 1e-12;
    const auto core = gk15_adaptive(f, -w_max, w_max, tol);
    auto tail = [&](double u) {
        const double w = 1.0 / u;
        return (f(w) + f(-w)) * (w * w);
    };
    const auto tails = gk15_adaptive(tail, 1e-300, 1.0 / w_max, tol);
    if (!core.converged || !tails.converged)
        throw std::runtime_error("loop_integral: quadrature did not converge");
    return (core.value + tails.value) / (2.0 * pi);
}

}  // namespace

bool loop_degenerate(const EffectiveMatrix& m) {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(to_eigen(m), false);
    if (es.info() != Eigen::Success) return true;
    const auto& lam = es.eigenvalues();
    for (int i = 0; i < m.dim; ++i)
        for (int j = i + 1; j < m.dim; ++j)
            if (std::abs(lam(i) - lam(j)) < 1e-9) return true;
    return false;
}

cxd loop_integral(const EffectiveMatrix& m, int s_index, LoopMethod method) {
    if (s_index < 0 || s_index >= m.dim)
        throw std::invalid_argument("loop_integral: bad spinwave index");
    for (int i = 0; i < m.dim; ++i)
        if (-m(i, i).imag() <= 0.0)
            throw std::runtime_error("loop_integral: all decay rates must be > 0");
    if (method == LoopMethod::residues) {
        if (loop_degenerate(m)) {
            std::clog << "loop_integral: eigenvalue gap below 1e-9, "
                         "falling back to quadrature\n";
            return loop_by_quadrature(m, s_index);
        }
        return loop_by_residues(m, s_index);
    }
    return loop_by_quadrature(m, s_index);
}

cxd loop_integral(const SystemParams& p, Sector sector, LoopMethod method) {
    const EffectiveMatrix m = effective_matrix(p, sector);
    return loop_integral(m, sector == Sector::symmetric ? mode_s : mode_cq, method);
}

TTilde0Closed t_tilde0_closed(const SystemParams& p, cxd S) {
    p.validate();
    TTilde0Closed out;
    if (p.c6 == 0.0) return out;  // no interaction
    if (std::abs(S) == 0.0)
        throw std::runtime_error("t_tilde0_closed: S = 0 (no dissipation in the loop)");
    const cxd A = cxd(0.0, -1.0) * p.c6 * S;  // -i c6 S
    if (std::abs(std::arg(A)) > pi - 1e-6)
        throw std::runtime_error(
            "t_tilde0_closed: -i c6 S on the branch cut (resonant pair scattering)");
    const cxd root = std::sqrt(A);
    const cxd closed = (2.0 * pi * pi / (3.0 * p.volume)) * p.c6 / root;

    // Radial integral (4 pi c6 / 3V) Integral_0^inf dx / (x^2 - i c6 S),
    // split at the pair-resonance scale |x| ~ sqrt(|c6 S|) with an inverted
    // tail substitution x = 1/u.
    const double xs = std::sqrt(std::abs(p.c6 * S));
    const double x_split = 10.0 * std::max(xs, 1e-30);
    const cxd iA = cxd(0.0, 1.0) * p.c6 * S;
    auto f_core = [&](double x) { return 1.0 / (x * x - iA); };
    auto f_tail = [&](double u) { return 1.0 / (1.0 - iA * u * u); };
    const double tol = 1e-10 / std::max(1.0, xs);
    const auto core = gk15_adaptive(f_core, 0.0, x_split, tol);
    const auto tail = gk15_adaptive(f_tail, 1e-300, 1.0 / x_split, tol);
    if (!core.converged || !tail.converged)
        throw std::runtime_error("t_tilde0_closed: continuum integral did not converge");
    out.continuum = (4.0 * pi * p.c6 / (3.0 * p.volume)) * (core.value + tail.value);

    const double d_plus = std::abs(closed - out.continuum);
    const double d_minus = std::abs(-closed - out.continuum);
    out.branch = d_plus <= d_minus ? +1 : -1;
    out.value = out.branch > 0 ? closed : -closed;
    out.mismatch = std::abs(out.value - out.continuum) / std::abs(out.continuum);
    if (out.mismatch > 1e-3)
        throw std::runtime_error(
            "t_tilde0_closed: closed form disagrees with the continuum integral "
            "(relative mismatch " + std::to_string(out.mismatch) + ")");
    return out;
}

cxd t_tilde0_discrete(const std::vector<Vec3>& positions, const SystemParams& p,
                      cxd S, double box_side) {
    const std::size_t n = positions.size();
    if (n < 2) throw std::invalid_argument("t_tilde0_discrete: need at least 2 positions");
    if (p.c6 == 0.0) return 0.0;
    const double sr = S.real(), si = S.imag();
    double acc_re = 0.0, acc_im = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
        const Vec3& pm = positions[m];
        for (std::size_t k = m + 1; k < n; ++k) {
            double dx = pm[0] - positions[k][0];
            double dy = pm[1] - positions[k][1];
            double dz = pm[2] - positions[k][2];
            if (box_side > 0.0) {
                dx -= box_side * std::nearbyint(dx / box_side);
                dy -= box_side * std::nearbyint(dy / box_side);
                dz -= box_side * std::nearbyint(dz / box_side);
            }
            const double r2 = dx * dx + dy * dy + dz * dz;
            if (r2 < 1e-280)
                throw std::runtime_error("t_tilde0_discrete: coincident positions");
            const double kap = p.c6 / (r2 * r2 * r2);
            // kappa / (1 - i kappa S) without complex division:
            // denom = (1 + kappa Si) - i kappa Sr.
            const double dr = 1.0 + kap * si;
            const double di = -kap * sr;
            const double den = dr * dr + di * di;
            acc_re += kap * dr / den;
            acc_im -= kap * di / den;  // times conj(denom)
        }
    }
    // m != n sum counts each unordered pair twice.
    const double norm = 2.0 / (static_cast<double>(n) * static_cast<double>(n));
    return cxd(acc_re * norm, acc_im * norm);
}

std::vector<Vec3> sample_positions_cube(long n, double side, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("sample_positions_cube: n must be >= 1");
    std::mt19937_64 rng(seed);
    auto u01 = [&]() {
        // 53-bit mantissa mapping; bit-identical on every platform.
        return static_cast<double>(rng() >> 11) * 0x1.0p-53;
    };
    std::vector<Vec3> pos(static_cast<std::size_t>(n));
    for (auto& r : pos) {
        r[0] = side * u01();
        r[1] = side * u01();
        r[2] = side * u01();
    }
    return pos;
}

McEstimate t_tilde0_monte_carlo(const SystemParams& p, cxd S, long n_positions,
                                const std::vector<std::uint64_t>& seeds, int workers) {
    if (seeds.empty()) throw std::invalid_argument("t_tilde0_monte_carlo: need seeds");
    const double side = std::cbrt(p.volume);
    McEstimate est;
    est.per_seed.resize(seeds.size());
    parallel_for(static_cast<long>(seeds.size()), workers, [&](long i) {
        const auto pos = sample_positions_cube(n_positions, side,
                                               seeds[static_cast<std::size_t>(i)]);
        est.per_seed[static_cast<std::size_t>(i)] = t_tilde0_discrete(pos, p, S, side);
    });
    cxd mean = 0.0;
    for (const cxd& v : est.per_seed) mean += v;
    mean /= static_cast<double>(est.per_seed.size());
    est.mean = mean;
    if (est.per_seed.size() > 1) {
        double ss = 0.0;
        for (const cxd& v : est.per_seed) ss += std::norm(v - mean);
        const auto k = static_cast<double>(est.per_seed.size());
        est.std_err = std::sqrt(ss / (k * (k - 1.0)));
    }
    return est;
}

cxd t0_resummed(cxd t_tilde0, cxd S0, cxd S) {
    const cxd denom = 1.0 - cxd(0.0, 1.0) * (S0 - S) * t_tilde0;
    if (std::abs(denom) < 1e-12 * std::max(1.0, std::abs((S0 - S) * t_tilde0)))
        throw std::runtime_error("t0_resummed: resonant resummation (vanishing denominator)");
    return t_tilde0 / denom;
}

double blockade_radius(const SystemParams& p, cxd S) {
    return std::pow(std::abs(p.c6) * std::abs(S), 1.0 / 6.0);
}

TMatrixResult compute_tmatrix(const SystemParams& p, TMatrixMethod method,
                              long mc_positions, const std::vector<std::uint64_t>& seeds,
                              int workers) {
    p.validate();
    TMatrixResult r;
    r.method = method;
    const EffectiveMatrix mq = effective_matrix_q(p);
    const EffectiveMatrix ms = effective_matrix_symmetric(p);
    r.loop_fallback = loop_degenerate(mq) || loop_degenerate(ms);
    r.S = loop_integral(mq, mode_cq, LoopMethod::residues);
    r.S0 = loop_integral(ms, mode_s, LoopMethod::residues);
    r.r_blockade = blockade_radius(p, r.S);
    r.blockade_volume_ratio =
        (4.0 * pi / 3.0) * std::pow(r.r_blockade, 3.0) / p.volume;
    if (p.c6 == 0.0) {
        r.t_tilde0 = 0.0;
        r.t0 = 0.0;
        return r;
    }
    if (method == TMatrixMethod::closed_form) {
        const TTilde0Closed c = t_tilde0_closed(p, r.S);
        r.t_tilde0 = c.value;
        r.branch = c.branch;
        r.closed_mismatch = c.mismatch;
    } else {
        const McEstimate mc = t_tilde0_monte_carlo(p, r.S, mc_positions, seeds, workers);
        r.t_tilde0 = mc.mean;
        r.mc_std_err = mc.std_err;
    }
    r.t0 = t0_resummed(r.t_tilde0, r.S0, r.S);
    return r;
}

}  // namespace ryscat
