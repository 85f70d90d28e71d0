#include "ryscat/greens.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

namespace ryscat {

namespace {

double max_abs(const EffectiveMatrix& m) {
    double s = 0.0;
    for (int i = 0; i < m.dim; ++i)
        for (int j = 0; j < m.dim; ++j) s = std::max(s, std::abs(m(i, j)));
    return s;
}

[[noreturn]] void throw_singular(double omega) {
    throw std::runtime_error(
        "greens: singular pencil at omega = " + std::to_string(omega) +
        " (a decay rate is zero and omega hits a real eigenvalue)");
}

}  // namespace

ResolventMatrix greens(const EffectiveMatrix& m, double omega) {
    if (!std::isfinite(omega)) throw std::invalid_argument("greens: omega must be finite");
    ResolventMatrix r;
    r.omega = omega;
    r.dim = m.dim;
    const double scale = std::max(1.0, max_abs(m) + std::abs(omega));
    if (m.dim == 2) {
        const cxd a = omega - m(0, 0), b = -m(0, 1);
        const cxd c = -m(1, 0), d = omega - m(1, 1);
        const cxd det = a * d - b * c;
        if (std::abs(det) < 1e-300 * scale * scale) throw_singular(omega);
        const cxd inv = 1.0 / det;
        r.at(0, 0) = d * inv;
        r.at(0, 1) = -b * inv;
        r.at(1, 0) = -c * inv;
        r.at(1, 1) = a * inv;
        return r;
    }
    if (m.dim != 3) throw std::invalid_argument("greens: dimension must be 2 or 3");
    // A = w I - M_eff; G = adj(A)/det(A) via cofactors.
    const cxd a00 = omega - m(0, 0), a01 = -m(0, 1), a02 = -m(0, 2);
    const cxd a10 = -m(1, 0), a11 = omega - m(1, 1), a12 = -m(1, 2);
    const cxd a20 = -m(2, 0), a21 = -m(2, 1), a22 = omega - m(2, 2);
    const cxd c00 = a11 * a22 - a12 * a21;
    const cxd c01 = a12 * a20 - a10 * a22;
    const cxd c02 = a10 * a21 - a11 * a20;
    const cxd det = a00 * c00 + a01 * c01 + a02 * c02;
    if (std::abs(det) < 1e-300 * scale * scale * scale) throw_singular(omega);
    const cxd inv = 1.0 / det;
    r.at(0, 0) = c00 * inv;
    r.at(1, 0) = c01 * inv;
    r.at(2, 0) = c02 * inv;
    r.at(0, 1) = (a02 * a21 - a01 * a22) * inv;
    r.at(1, 1) = (a00 * a22 - a02 * a20) * inv;
    r.at(2, 1) = (a01 * a20 - a00 * a21) * inv;
    r.at(0, 2) = (a01 * a12 - a02 * a11) * inv;
    r.at(1, 2) = (a02 * a10 - a00 * a12) * inv;
    r.at(2, 2) = (a00 * a11 - a01 * a10) * inv;
    return r;
}

ResolventMatrix greens(const SystemParams& p, double omega, Sector sector) {
    return greens(effective_matrix(p, sector), omega);
}

ResolventMatrix greens_lu(const EffectiveMatrix& m, double omega) {
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(m.dim, m.dim);
    for (int i = 0; i < m.dim; ++i) {
        for (int j = 0; j < m.dim; ++j) a(i, j) = -m(i, j);
        a(i, i) += omega;
    }
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
    const Eigen::MatrixXcd g = lu.solve(Eigen::MatrixXcd::Identity(m.dim, m.dim));
    ResolventMatrix r;
    r.omega = omega;
    r.dim = m.dim;
    for (int i = 0; i < m.dim; ++i)
        for (int j = 0; j < m.dim; ++j) r.at(i, j) = g(i, j);
    return r;
}

ResolventMatrix greens_time_domain_check(const EffectiveMatrix& m, double omega) {
    const int n = m.dim;
    Eigen::MatrixXcd me(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) me(i, j) = m(i, j);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(me, false);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("greens_time_domain_check: eigensolver failed");
    double gamma_min = 1e300, rho = 0.0;
    for (int k = 0; k < n; ++k) {
        gamma_min = std::min(gamma_min, -es.eigenvalues()(k).imag());
        rho = std::max(rho, std::abs(es.eigenvalues()(k)));
    }
    if (gamma_min <= 1e-6)
        throw std::runtime_error(
            "greens_time_domain_check: needs all modes damped (slowest decay too small)");

    // Horizon: truncation weight e^{-gamma_min T} = 1e-10.  Step: resolves the
    // fastest phase rho + |omega| so the fixed-step RK4 error stays ~1e-7.
    const double t_end = std::log(1e10) / gamma_min;
    const double h0 = 0.016 / (rho + std::abs(omega) + 1.0);
    const long nsteps = static_cast<long>(std::ceil(t_end / h0));
    const double h = t_end / static_cast<double>(nsteps);

    // State: V (propagator columns) and W = -i Integral e^{i w t} V dt,
    // advanced together so the quadrature shares the RK4 order.
    std::array<cxd, 9> v{}, w{};
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(3 * i + i)] = 1.0;

    auto matmul = [&](const std::array<cxd, 9>& x, std::array<cxd, 9>& out) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                cxd s = 0.0;
                for (int k = 0; k < n; ++k)
                    s += m(i, k) * x[static_cast<std::size_t>(3 * k + j)];
                out[static_cast<std::size_t>(3 * i + j)] = s;
            }
    };

    const cxd mi(0.0, -1.0);
    std::array<cxd, 9> k1v, k2v, k3v, k4v, tmp, k1w, k2w, k3w, k4w;
    for (long step = 0; step < nsteps; ++step) {
        const double t = static_cast<double>(step) * h;
        const cxd ph0 = std::polar(1.0, omega * t);
        const cxd phh = std::polar(1.0, omega * (t + 0.5 * h));
        const cxd ph1 = std::polar(1.0, omega * (t + h));
        // k1
        matmul(v, k1v);
        for (int i = 0; i < 9; ++i) {
            k1w[i] = mi * ph0 * v[i];
            k1v[i] *= mi;
        }
        // k2
        for (int i = 0; i < 9; ++i) tmp[i] = v[i] + 0.5 * h * k1v[i];
        matmul(tmp, k2v);
        for (int i = 0; i < 9; ++i) {
            k2w[i] = mi * phh * tmp[i];
            k2v[i] *= mi;
        }
        // k3
        for (int i = 0; i < 9; ++i) tmp[i] = v[i] + 0.5 * h * k2v[i];
        matmul(tmp, k3v);
        for (int i = 0; i < 9; ++i) {
            k3w[i] = mi * phh * tmp[i];
            k3v[i] *= mi;
        }
        // k4
        for (int i = 0; i < 9; ++i) tmp[i] = v[i] + h * k3v[i];
        matmul(tmp, k4v);
        for (int i = 0; i < 9; ++i) {
            k4w[i] = mi * ph1 * tmp[i];
            k4v[i] *= mi;
        }
        const double h6 = h / 6.0;
        for (int i = 0; i < 9; ++i) {
            v[i] += h6 * (k1v[i] + 2.0 * (k2v[i] + k3v[i]) + k4v[i]);
            w[i] += h6 * (k1w[i] + 2.0 * (k2w[i] + k3w[i]) + k4w[i]);
        }
    }

    double vres = 0.0;
    for (int i = 0; i < 9; ++i) vres = std::max(vres, std::abs(v[i]));
    if (vres > 1e-8)
        throw std::runtime_error(
            "greens_time_domain_check: horizon did not converge, residual " +
            std::to_string(vres));

    ResolventMatrix r;
    r.omega = omega;
    r.dim = n;
    r.g = w;
    return r;
}

ResolventMatrix greens_time_domain_check(const SystemParams& p, double omega, Sector sector) {
    return greens_time_domain_check(effective_matrix(p, sector), omega);
}

}  // namespace ryscat
