#pragma once

#include <string>
#include <vector>

#include "ryscat/core.hpp"
#include "ryscat/params.hpp"
#include "ryscat/tmatrix.hpp"

namespace ryscat {

// delta(omega) line coefficients of the transmitted spectrum.  The delta
// lines are kept as scalar weights and never binned onto the frequency grid,
// so the elastic/inelastic split stays exact.
//
// order alpha:   <a(w)>^(1) = sqrt(2 pi) alpha delta(w) G_aa[0]
// order alpha^3: <a(w)>^(3) = sqrt(2 pi) alpha^3 delta(w) (G_sa[0])^2 T0 |G_as[0]|^2
cxd mean_amp_order1(const SystemParams& p);
cxd mean_amp_order3(const SystemParams& p, cxd t0);

// weight_2 = 4 pi gamma_c_d alpha^2 |G_aa[0]|^2          (>= 0)
// weight_4 = 8 pi gamma_c_d Re[conj(amp1) * amp3]        (sign free)
struct ElasticWeights {
    double weight_2 = 0.0;
    double weight_4 = 0.0;
};
ElasticWeights elastic_weights(const SystemParams& p, cxd t0);

// Fourth-order inelastic spectral density
//   s_i(w) = -4 gamma_c_d alpha^4 |G_as[w]|^2 |T0|^2 |G_sa[0]|^4 Im G_ss[-w],
// nonnegative because Im G_kk <= 0 (passivity of the damped sector).
double inelastic_density(const SystemParams& p, cxd t0, double omega);

struct SpectrumResult {
    ElasticWeights elastic;
    std::vector<double> omega;
    std::vector<double> density;
    cxd amp1{};
    cxd amp3{};
    TMatrixResult tmatrix;
};
SpectrumResult compute_spectrum(const SystemParams& p, const GridSpec& grid,
                                TMatrixMethod method = TMatrixMethod::closed_form,
                                long mc_positions = 4000,
                                const std::vector<std::uint64_t>& seeds = {1, 2, 3, 4, 5, 6, 7, 8});

// 2-D sweep over (omega_cf, omega): the T matrix is recomputed per column,
// the six polariton overlay values +-eps_k are attached per column, and a
// column whose T-matrix evaluation fails is marked invalid (densities NaN)
// instead of aborting the map.
struct MapResult {
    std::vector<double> omega_cf;           // columns
    std::vector<double> omega;              // rows within a column
    std::vector<double> density;            // [icf * n_omega + iw]
    std::vector<std::array<double, 3>> eps; // polariton energies per column
    std::vector<cxd> t0;                    // per column
    std::vector<char> column_valid;
    std::vector<std::string> column_error;
    double log_floor = 1e-300;

    double at(std::size_t icf, std::size_t iw) const {
        return density[icf * omega.size() + iw];
    }
};
MapResult spectrum_map(const SystemParams& p, const GridSpec& omega_grid,
                       const GridSpec& omega_cf_grid, int workers = 1);

// Interior local maxima of a sampled column with their topographic
// prominence: for each peak, walk outward until a higher sample appears (or
// the edge); the prominence is the peak height minus the higher of the two
// lowest points reached.  min_prominence_fraction filters against the column
// maximum.
struct Ridge {
    int index = 0;
    double omega = 0.0;
    double height = 0.0;
    double prominence = 0.0;
};
std::vector<Ridge> find_ridges(const std::vector<double>& omega,
                               const std::vector<double>& height,
                               double min_prominence_fraction);

}  // namespace ryscat
