#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ryscat/core.hpp"
#include "ryscat/greens.hpp"
#include "ryscat/model.hpp"
#include "ryscat/params.hpp"
#include "ryscat/tmatrix.hpp"

namespace ryscat {

// Brute-force reference for small atom numbers: the bosonized driven model
// (cavity a plus per-atom modes b_n, c_n) on the truncated total-excitation
// basis, with Lindblad jumps sqrt(2 gamma_c) a, sqrt(2 gamma_e) b_n,
// sqrt(2 gamma_r) c_n and the pair interaction
// H_dd = Sum_{m<n} kappa_mn c_m^dag c_n^dag c_m c_n.
//
// Templated on the real scalar so the linear-response floor checks can run
// in extended precision where double roundoff would mask them.

struct TwoTimeSpectrum {
    std::vector<double> omega;
    std::vector<double> density;     // inelastic spectral density
    double elastic_weight = 0.0;     // delta(omega) coefficient, 2 g_cd 2 pi |<a>|^2
    double integrated_inelastic = 0.0;  // 2 g_cd (<a^dag a> - |<a>|^2), Parseval route
    double total_power = 0.0;           // 2 g_cd <a^dag a>
    cxd mean_a{};
    double n_a = 0.0;
    double covariance = 0.0;
    double plateau_residual = 0.0;  // |X(1.5 T)| / |X(0)|
    double horizon_shift = 0.0;     // max |density_{1.5T} - density_T| over the grid
};

enum class ScalingObservable {
    elastic_weight,          // |<a>|^2, expected exponent 2
    third_order_deviation,   // |<a> - alpha G_aa[0]|, expected exponent 3
    inelastic_power,         // <a^dag a> - |<a>|^2, expected exponent 4
};

struct ScalingFit {
    double exponent = 0.0;
    double max_residual = 0.0;  // max |log residual| of the linear fit
    std::vector<double> alphas;
    std::vector<double> values;
};

template <class Real>
struct FockModel {
    using C = std::complex<Real>;
    using SpMat = Eigen::SparseMatrix<C>;
    using Vec = Eigen::Matrix<C, Eigen::Dynamic, 1>;
    using Mat = Eigen::Matrix<C, Eigen::Dynamic, Eigen::Dynamic>;

    SystemParams params;
    std::vector<Vec3> positions;
    int n_atoms = 0;
    int n_max = 0;
    int n_modes = 0;  // 1 + 2 n_atoms, ordered (a, b_1, c_1, b_2, c_2, ...)
    long dim = 0;
    std::vector<std::vector<std::uint8_t>> basis;  // lexicographic occupation vectors

    SpMat a;
    std::vector<SpMat> b, c;
    SpMat H;  // dim x dim, Hermitian
    SpMat L;  // dim^2 x dim^2 superoperator on column-major vec(rho)

    long index_of(const std::vector<std::uint8_t>& occ) const {
        const auto it = std::lower_bound(basis.begin(), basis.end(), occ);
        if (it == basis.end() || *it != occ)
            throw std::out_of_range("FockModel: occupation outside the basis");
        return static_cast<long>(it - basis.begin());
    }
};

namespace oracle_detail {

template <class Real>
Eigen::SparseMatrix<std::complex<Real>> spkron(
    const Eigen::SparseMatrix<std::complex<Real>>& p,
    const Eigen::SparseMatrix<std::complex<Real>>& q) {
    using C = std::complex<Real>;
    std::vector<Eigen::Triplet<C>> t;
    t.reserve(static_cast<std::size_t>(p.nonZeros()) *
              static_cast<std::size_t>(q.nonZeros()));
    for (int kp = 0; kp < p.outerSize(); ++kp)
        for (typename Eigen::SparseMatrix<C>::InnerIterator ip(p, kp); ip; ++ip)
            for (int kq = 0; kq < q.outerSize(); ++kq)
                for (typename Eigen::SparseMatrix<C>::InnerIterator iq(q, kq); iq; ++iq)
                    t.emplace_back(ip.row() * q.rows() + iq.row(),
                                   ip.col() * q.cols() + iq.col(),
                                   ip.value() * iq.value());
    Eigen::SparseMatrix<C> out(p.rows() * q.rows(), p.cols() * q.cols());
    out.setFromTriplets(t.begin(), t.end());
    return out;
}

// tr(A X) for X = unvec(x) as a precomputed sparse functional:
// tr(A X) = Sum_{i,j} A(i,j) X(j,i) = Sum A(i,j) x[j + i dim].
template <class Real>
struct TraceFunctional {
    std::vector<long> idx;
    std::vector<std::complex<Real>> coeff;

    explicit TraceFunctional(const Eigen::SparseMatrix<std::complex<Real>>& a) {
        const long dim = a.rows();
        for (int k = 0; k < a.outerSize(); ++k)
            for (typename Eigen::SparseMatrix<std::complex<Real>>::InnerIterator it(a, k);
                 it; ++it) {
                idx.push_back(it.col() + static_cast<long>(it.row()) * dim);
                coeff.push_back(it.value());
            }
    }
    std::complex<Real> operator()(
        const Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>& x) const {
        std::complex<Real> s = 0;
        for (std::size_t k = 0; k < idx.size(); ++k)
            s += coeff[k] * x(idx[k]);
        return s;
    }
};

}  // namespace oracle_detail

template <class Real>
FockModel<Real> build_model(const SystemParams& p, const std::vector<Vec3>& positions,
                            int n_max, long basis_limit = 20000) {
    using C = std::complex<Real>;
    using SpMat = typename FockModel<Real>::SpMat;
    p.validate();
    const int n_atoms = static_cast<int>(positions.size());
    if (n_atoms < 1 || n_atoms > 4)
        throw std::invalid_argument("build_model: 1 to 4 atoms supported");
    if (n_max < 1) throw std::invalid_argument("build_model: n_max must be >= 1");

    FockModel<Real> m;
    m.params = p;
    m.positions = positions;
    m.n_atoms = n_atoms;
    m.n_max = n_max;
    m.n_modes = 1 + 2 * n_atoms;

    // Lexicographic enumeration of occupation vectors with total <= n_max.
    std::vector<std::uint8_t> occ(static_cast<std::size_t>(m.n_modes), 0);
    auto enumerate = [&](auto&& self, int mode, int budget) -> void {
        if (mode == m.n_modes) {
            m.basis.push_back(occ);
            return;
        }
        for (int k = 0; k <= budget; ++k) {
            occ[static_cast<std::size_t>(mode)] = static_cast<std::uint8_t>(k);
            self(self, mode + 1, budget - k);
        }
        occ[static_cast<std::size_t>(mode)] = 0;
    };
    enumerate(enumerate, 0, n_max);
    m.dim = static_cast<long>(m.basis.size());
    if (m.dim > basis_limit)
        throw std::runtime_error("build_model: basis size " + std::to_string(m.dim) +
                                 " exceeds limit " + std::to_string(basis_limit));

    auto lowering = [&](int mode) {
        std::vector<Eigen::Triplet<C>> t;
        for (long i = 0; i < m.dim; ++i) {
            const auto& s = m.basis[static_cast<std::size_t>(i)];
            const int n = s[static_cast<std::size_t>(mode)];
            if (n == 0) continue;
            std::vector<std::uint8_t> target = s;
            --target[static_cast<std::size_t>(mode)];
            t.emplace_back(m.index_of(target), i, std::sqrt(static_cast<Real>(n)));
        }
        SpMat op(m.dim, m.dim);
        op.setFromTriplets(t.begin(), t.end());
        return op;
    };
    m.a = lowering(0);
    for (int k = 0; k < n_atoms; ++k) {
        m.b.push_back(lowering(1 + 2 * k));
        m.c.push_back(lowering(2 + 2 * k));
    }

    // Pair couplings kappa_mn = c6 / |r_m - r_n|^6.
    std::vector<std::vector<double>> kappa(
        static_cast<std::size_t>(n_atoms), std::vector<double>(static_cast<std::size_t>(n_atoms), 0.0));
    for (int i = 0; i < n_atoms; ++i)
        for (int j = i + 1; j < n_atoms; ++j) {
            const double dx = positions[static_cast<std::size_t>(i)][0] - positions[static_cast<std::size_t>(j)][0];
            const double dy = positions[static_cast<std::size_t>(i)][1] - positions[static_cast<std::size_t>(j)][1];
            const double dz = positions[static_cast<std::size_t>(i)][2] - positions[static_cast<std::size_t>(j)][2];
            const double r2 = dx * dx + dy * dy + dz * dz;
            if (r2 < 1e-280 && p.c6 != 0.0)
                throw std::runtime_error("build_model: coincident positions");
            kappa[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                p.c6 == 0.0 ? 0.0 : p.c6 / (r2 * r2 * r2);
        }

    // Per-atom coupling reproducing the collective g sqrt(N) of the params.
    const Real g_atom = static_cast<Real>(p.g_sqrt_n() / std::sqrt(static_cast<double>(n_atoms)));
    std::vector<Eigen::Triplet<C>> ht;
    for (long i = 0; i < m.dim; ++i) {
        const auto& s = m.basis[static_cast<std::size_t>(i)];
        // Diagonal: detunings and the density-density pair interaction.
        Real diag = -static_cast<Real>(p.delta_c) * s[0];
        for (int k = 0; k < n_atoms; ++k) {
            diag -= static_cast<Real>(p.delta_e) * s[static_cast<std::size_t>(1 + 2 * k)];
            diag -= static_cast<Real>(p.delta_r) * s[static_cast<std::size_t>(2 + 2 * k)];
        }
        for (int u = 0; u < n_atoms; ++u)
            for (int v = u + 1; v < n_atoms; ++v)
                diag += static_cast<Real>(kappa[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)]) *
                        static_cast<Real>(s[static_cast<std::size_t>(2 + 2 * u)]) *
                        static_cast<Real>(s[static_cast<std::size_t>(2 + 2 * v)]);
        if (diag != Real(0)) ht.emplace_back(i, i, diag);

        // Hop helper: add <target| H |i> for dst^dag src with both mirror
        // elements, so H stays Hermitian on the truncated basis.
        auto hop = [&](int src, int dst, Real amp) {
            const int ns = s[static_cast<std::size_t>(src)];
            if (ns == 0) return;
            std::vector<std::uint8_t> t2 = s;
            --t2[static_cast<std::size_t>(src)];
            ++t2[static_cast<std::size_t>(dst)];
            const Real val = amp * std::sqrt(static_cast<Real>(ns)) *
                             std::sqrt(static_cast<Real>(t2[static_cast<std::size_t>(dst)]));
            ht.emplace_back(m.index_of(t2), i, val);
        };
        for (int k = 0; k < n_atoms; ++k) {
            hop(1 + 2 * k, 0, g_atom);                            // a^dag b_k
            hop(0, 1 + 2 * k, g_atom);                            // b_k^dag a
            hop(2 + 2 * k, 1 + 2 * k, static_cast<Real>(0.5 * p.omega_cf));  // b^dag c
            hop(1 + 2 * k, 2 + 2 * k, static_cast<Real>(0.5 * p.omega_cf));  // c^dag b
        }

        // Feeding alpha (a + a^dag); the raising part is truncated at the
        // excitation cutoff (its mirror lowering element is kept).
        int total = 0;
        for (auto x : s) total += x;
        if (s[0] > 0) {
            std::vector<std::uint8_t> t2 = s;
            --t2[0];
            ht.emplace_back(m.index_of(t2), i,
                            static_cast<Real>(p.alpha) * std::sqrt(static_cast<Real>(s[0])));
        }
        if (total < n_max) {
            std::vector<std::uint8_t> t2 = s;
            ++t2[0];
            ht.emplace_back(m.index_of(t2), i,
                            static_cast<Real>(p.alpha) * std::sqrt(static_cast<Real>(t2[0])));
        }
    }
    m.H.resize(m.dim, m.dim);
    m.H.setFromTriplets(ht.begin(), ht.end());

    // Liouvillian on vec(rho) (column-major):
    //   d rho/dt = -i[H, rho] + Sum_k (Lk rho Lk^dag - 1/2 {Lk^dag Lk, rho}).
    using oracle_detail::spkron;
    SpMat eye(m.dim, m.dim);
    eye.setIdentity();
    const C mi(0, -1);
    SpMat liou = mi * spkron(eye, m.H) - mi * spkron(SpMat(m.H.transpose()), eye);
    auto add_jump = [&](const SpMat& op, double rate2) {
        const SpMat lk = std::sqrt(static_cast<Real>(rate2)) * op;
        const SpMat lklk = SpMat(lk.adjoint()) * lk;
        liou = liou + spkron(SpMat(lk.conjugate()), lk) -
               Real(0.5) * spkron(eye, lklk) -
               Real(0.5) * spkron(SpMat(lklk.transpose()), eye);
    };
    add_jump(m.a, 2.0 * p.gamma_c());
    for (int k = 0; k < n_atoms; ++k) {
        add_jump(m.b[static_cast<std::size_t>(k)], 2.0 * p.gamma_e);
        add_jump(m.c[static_cast<std::size_t>(k)], 2.0 * p.gamma_r);
    }
    m.L = liou;
    return m;
}

// Steady state via inverse iteration on the shifted dense Liouvillian.
// Throws if the null space looks degenerate or the residual stays large.
template <class Real>
typename FockModel<Real>::Mat steady_state(const FockModel<Real>& m) {
    using C = std::complex<Real>;
    using Vec = typename FockModel<Real>::Vec;
    using Mat = typename FockModel<Real>::Mat;
    if (m.dim > 64)
        throw std::runtime_error(
            "steady_state: dense null-space solver limited to 64 basis states");
    const long d2 = m.dim * m.dim;
    Mat ldense = Mat(m.L);
    const Real shift = static_cast<Real>(1e-8);
    for (long i = 0; i < d2; ++i) ldense(i, i) -= shift;
    Eigen::PartialPivLU<Mat> lu(ldense);

    auto iterate = [&](Vec x) {
        for (int it = 0; it < 4; ++it) {
            x = lu.solve(x);
            x /= x.norm();
        }
        return x;
    };
    Vec x0 = Vec::Zero(d2);
    x0(0) = 1;  // vacuum projector (basis index 0 is the vacuum)
    const Vec x = iterate(x0);

    // Degeneracy probe: a second start must converge to the same ray.
    Vec x1 = Vec::Zero(d2);
    for (long i = 0; i < m.dim; ++i) x1(i + i * m.dim) = 1;
    x1 /= x1.norm();
    const Vec y = iterate(x1);
    const Real overlap = std::abs(x.dot(y)) / (x.norm() * y.norm());
    if (overlap < Real(1) - Real(1e-8))
        throw std::runtime_error("steady_state: degenerate Liouvillian null space");

    Mat rho(m.dim, m.dim);
    for (long j = 0; j < m.dim; ++j)
        for (long i = 0; i < m.dim; ++i) rho(i, j) = x(i + j * m.dim);
    const Real herm_dev = (rho - rho.adjoint()).cwiseAbs().maxCoeff() /
                          rho.cwiseAbs().maxCoeff();
    if (herm_dev > Real(1e-8))
        throw std::runtime_error("steady_state: iterate lost Hermiticity");
    rho = Real(0.5) * (rho + Mat(rho.adjoint()));
    const C tr = rho.trace();
    rho /= tr;

    Vec vr(d2);
    for (long j = 0; j < m.dim; ++j)
        for (long i = 0; i < m.dim; ++i) vr(i + j * m.dim) = rho(i, j);
    const Real resid = (m.L * vr).norm();
    if (resid > Real(1e-10))
        throw std::runtime_error("steady_state: residual " +
                                 std::to_string(static_cast<double>(resid)) +
                                 " above 1e-10");
    return rho;
}

// Two-time emission spectrum by quantum regression: propagate
// X(t) = e^{L t} (a rho - <a> rho), whose trace against a^dag is the
// covariance part of <a^dag(t) a(0)>; the removed plateau |<a>|^2 carries the
// elastic delta line.  Fixed-step RK4 to T = horizon/gamma_min and on to
// 1.5 T for the horizon check; Simpson transform onto the frequency grid.
template <class Real>
TwoTimeSpectrum emission_spectrum(const FockModel<Real>& m,
                                  const typename FockModel<Real>::Mat& rho,
                                  const std::vector<double>& omega_grid,
                                  double horizon = 12.0) {
    using C = std::complex<Real>;
    using Vec = typename FockModel<Real>::Vec;
    using SpMat = typename FockModel<Real>::SpMat;
    const long d2 = m.dim * m.dim;
    const SystemParams& p = m.params;

    const oracle_detail::TraceFunctional<Real> tr_adag(SpMat(m.a.adjoint()));
    const oracle_detail::TraceFunctional<Real> tr_a(m.a);
    const oracle_detail::TraceFunctional<Real> tr_na(SpMat(SpMat(m.a.adjoint()) * m.a));

    Vec vrho(d2);
    for (long j = 0; j < m.dim; ++j)
        for (long i = 0; i < m.dim; ++i) vrho(i + j * m.dim) = rho(i, j);
    const C mean_a = tr_a(vrho);
    const Real n_a = tr_na(vrho).real();
    const Real cov = n_a - std::norm(mean_a);

    // Regression initial condition with the long-time plateau removed.
    typename FockModel<Real>::Mat x0m = m.a * rho - mean_a * rho;
    Vec x(d2);
    for (long j = 0; j < m.dim; ++j)
        for (long i = 0; i < m.dim; ++i) x(i + j * m.dim) = x0m(i, j);
    const Real x0_norm = x.norm();

    // Step from the Liouvillian 1-norm (stability), capped for transform
    // fidelity; horizon from the slowest bare decay, extended by half for
    // the convergence check, sample count a multiple of 6 so both Simpson
    // windows have even panel counts.
    Real l1 = 0;
    for (int k = 0; k < m.L.outerSize(); ++k) {
        Real colsum = 0;
        for (typename SpMat::InnerIterator it(m.L, k); it; ++it)
            colsum += std::abs(it.value());
        l1 = std::max(l1, colsum);
    }
    const double gamma_min = std::min({p.gamma_c(), p.gamma_e, p.gamma_r});
    const double t_main = horizon / gamma_min;
    const double t_ext = 1.5 * t_main;
    const double h_try = std::min(1.5 / static_cast<double>(l1), 0.04);
    const long nsteps = 6 * static_cast<long>(std::ceil(t_ext / (6.0 * h_try)));
    const Real h = static_cast<Real>(t_ext / static_cast<double>(nsteps));

    std::vector<C> corr(static_cast<std::size_t>(nsteps) + 1);
    corr[0] = tr_adag(x);
    Vec k1(d2), k2(d2), k3(d2), k4(d2), tmp(d2);
    const Real h2 = h / Real(2), h6 = h / Real(6);
    for (long s = 0; s < nsteps; ++s) {
        k1.noalias() = m.L * x;
        tmp = x + h2 * k1;
        k2.noalias() = m.L * tmp;
        tmp = x + h2 * k2;
        k3.noalias() = m.L * tmp;
        tmp = x + h * k3;
        k4.noalias() = m.L * tmp;
        x += h6 * (k1 + Real(2) * (k2 + k3) + k4);
        corr[static_cast<std::size_t>(s) + 1] = tr_adag(x);
    }
    const Real plateau = x.norm() / x0_norm;
    if (static_cast<double>(plateau) > 1e-3)
        throw std::runtime_error(
            "emission_spectrum: propagation horizon insufficient (residual " +
            std::to_string(static_cast<double>(plateau)) + ")");
    // Trace preservation: X starts traceless and must stay so.
    C trx = 0;
    for (long i = 0; i < m.dim; ++i) trx += x(i + i * m.dim);
    if (std::abs(trx) > Real(1e-10) * std::max<Real>(x0_norm, Real(1e-300)))
        throw std::runtime_error("emission_spectrum: propagation lost trace conservation");

    const long n_main = (nsteps / 3) * 2;  // index of T (even by construction)
    TwoTimeSpectrum out;
    out.omega = omega_grid;
    out.density.resize(omega_grid.size());
    out.mean_a = cxd(static_cast<double>(mean_a.real()), static_cast<double>(mean_a.imag()));
    out.n_a = static_cast<double>(n_a);
    out.covariance = static_cast<double>(cov);
    out.elastic_weight = 4.0 * pi * p.gamma_c_d * static_cast<double>(std::norm(mean_a));
    out.integrated_inelastic = 2.0 * p.gamma_c_d * static_cast<double>(cov);
    out.total_power = 2.0 * p.gamma_c_d * static_cast<double>(n_a);
    out.plateau_residual = static_cast<double>(plateau);

    // density(w) = 2 g_cd Integral_-inf^inf e^{i w tau} cov-part dtau
    //            = 4 g_cd Re Integral_0^inf e^{i w tau} corr(tau) dtau.
    double max_shift = 0.0;
    for (std::size_t iw = 0; iw < omega_grid.size(); ++iw) {
        const Real w = static_cast<Real>(omega_grid[iw]);
        C acc_main = 0, acc_ext = 0;
        for (long s = 0; s <= nsteps; ++s) {
            Real simp;
            if (s == 0 || s == nsteps)
                simp = 1;
            else
                simp = (s % 2 == 1) ? 4 : 2;
            const Real t = h * static_cast<Real>(s);
            const C term = simp * std::polar(Real(1), w * t) * corr[static_cast<std::size_t>(s)];
            acc_ext += term;
            if (s <= n_main) {
                // Simpson endpoint weight for the shorter window.
                acc_main += (s == n_main) ? term / simp : term;
            }
        }
        const double d_ext = 4.0 * p.gamma_c_d *
                             static_cast<double>((acc_ext * (h / Real(3))).real());
        const double d_main = 4.0 * p.gamma_c_d *
                              static_cast<double>((acc_main * (h / Real(3))).real());
        out.density[iw] = d_ext;
        max_shift = std::max(max_shift, std::abs(d_ext - d_main));
    }
    out.horizon_shift = max_shift;
    return out;
}

inline ScalingFit fit_loglog(const std::vector<double>& alphas,
                             const std::vector<double>& values) {
    const std::size_t n = alphas.size();
    double sx = 0, sy = 0;
    std::vector<double> lx(n), ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        lx[i] = std::log(alphas[i]);
        ly[i] = std::log(values[i]);
        sx += lx[i];
        sy += ly[i];
    }
    const double mx = sx / static_cast<double>(n), my = sy / static_cast<double>(n);
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    ScalingFit fit;
    fit.exponent = sxy / sxx;
    fit.alphas = alphas;
    fit.values = values;
    const double c = my - fit.exponent * mx;
    for (std::size_t i = 0; i < n; ++i)
        fit.max_residual =
            std::max(fit.max_residual, std::abs(ly[i] - (c + fit.exponent * lx[i])));
    return fit;
}

// Order-in-alpha extraction: steady-state observable vs feeding rate on a
// log-log grid.  Requires >= 4 alphas spanning at least a decade, all in the
// perturbative regime.
template <class Real>
ScalingFit alpha_scaling(const SystemParams& base, const std::vector<Vec3>& positions,
                         int n_max, const std::vector<double>& alphas,
                         ScalingObservable obs) {
    if (alphas.size() < 4)
        throw std::invalid_argument("alpha_scaling: need at least 4 alpha values");
    double amin = alphas.front(), amax = alphas.front();
    for (double a : alphas) {
        if (a <= 0) throw std::invalid_argument("alpha_scaling: alphas must be > 0");
        amin = std::min(amin, a);
        amax = std::max(amax, a);
    }
    if (amax / amin < 10.0 * (1.0 - 1e-12))
        throw std::invalid_argument("alpha_scaling: alphas must span at least a decade");

    const cxd g_aa0 = greens(base, 0.0, Sector::symmetric)(mode_a, mode_a);
    std::vector<double> values;
    values.reserve(alphas.size());
    for (double a : alphas) {
        SystemParams p = base;
        p.alpha = a;
        const auto model = build_model<Real>(p, positions, n_max);
        const auto rho = steady_state(model);
        using C = std::complex<Real>;
        using SpM = typename FockModel<Real>::SpMat;
        C mean_a = 0, n_a = 0;
        const SpM adag = model.a.adjoint();
        const oracle_detail::TraceFunctional<Real> tr_a(model.a);
        const oracle_detail::TraceFunctional<Real> tr_na(SpM(adag * model.a));
        typename FockModel<Real>::Vec v(model.dim * model.dim);
        for (long j = 0; j < model.dim; ++j)
            for (long i = 0; i < model.dim; ++i) v(i + j * model.dim) = rho(i, j);
        mean_a = tr_a(v);
        n_a = tr_na(v);
        if (n_a.real() >= Real(1e-3))
            throw std::runtime_error(
                "alpha_scaling: non-perturbative regime (<a^dag a> >= 1e-3)");
        double value = 0;
        switch (obs) {
            case ScalingObservable::elastic_weight:
                value = static_cast<double>(std::norm(mean_a));
                break;
            case ScalingObservable::third_order_deviation: {
                const C lin(static_cast<Real>(a * g_aa0.real()),
                            static_cast<Real>(a * g_aa0.imag()));
                value = static_cast<double>(std::abs(mean_a - lin));
                break;
            }
            case ScalingObservable::inelastic_power:
                value = static_cast<double>(n_a.real() - std::norm(mean_a));
                break;
        }
        values.push_back(value);
    }
    ScalingFit fit = fit_loglog(alphas, values);
    if (fit.max_residual > 0.1)
        throw std::runtime_error(
            "alpha_scaling: non-perturbative regime detected (curvature in log-log fit, "
            "max residual " + std::to_string(fit.max_residual) + ")");
    return fit;
}

}  // namespace ryscat
