#include "ryscat/model.hpp"

#include <Eigen/Dense>

namespace ryscat {

EffectiveMatrix effective_matrix_symmetric(const SystemParams& p) {
    p.validate();
    const double gn = p.g_sqrt_n();
    EffectiveMatrix e;
    e.dim = 3;
    e.at(0, 0) = cxd(-p.delta_c, -p.gamma_c());
    e.at(0, 1) = gn;
    e.at(0, 2) = 0.0;
    e.at(1, 0) = gn;
    e.at(1, 1) = cxd(-p.delta_e, -p.gamma_e);
    e.at(1, 2) = 0.5 * p.omega_cf;
    e.at(2, 0) = 0.0;
    e.at(2, 1) = 0.5 * p.omega_cf;
    e.at(2, 2) = cxd(-p.delta_r, -p.gamma_r);
    return e;
}

EffectiveMatrix effective_matrix_q(const SystemParams& p) {
    p.validate();
    EffectiveMatrix e;
    e.dim = 2;
    e.at(0, 0) = cxd(-p.delta_e, -p.gamma_e);
    e.at(0, 1) = 0.5 * p.omega_cf;
    e.at(1, 0) = 0.5 * p.omega_cf;
    e.at(1, 1) = cxd(-p.delta_r, -p.gamma_r);
    return e;
}

EffectiveMatrix effective_matrix(const SystemParams& p, Sector sector) {
    return sector == Sector::symmetric ? effective_matrix_symmetric(p)
                                       : effective_matrix_q(p);
}

std::array<double, 3> polariton_energies(const SystemParams& p) {
    const EffectiveMatrix e = effective_matrix_symmetric(p);
    Eigen::Matrix3d m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m(i, j) = e(i, j).real();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(m);
    const auto& ev = es.eigenvalues();  // ascending
    return {ev(0), ev(1), ev(2)};
}

}  // namespace ryscat
