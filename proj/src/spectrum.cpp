#include "ryscat/spectrum.hpp"

#include <cmath>
#include <stdexcept>

#include "ryscat/greens.hpp"
#include "ryscat/threads.hpp"

namespace ryscat {

cxd mean_amp_order1(const SystemParams& p) {
    return p.alpha * greens(p, 0.0, Sector::symmetric)(mode_a, mode_a);
}

cxd mean_amp_order3(const SystemParams& p, cxd t0) {
    const ResolventMatrix g0 = greens(p, 0.0, Sector::symmetric);
    const cxd g_sa = g0(mode_s, mode_a);
    const cxd g_as = g0(mode_a, mode_s);
    const double a3 = p.alpha * p.alpha * p.alpha;
    return a3 * g_sa * g_sa * t0 * std::norm(g_as);
}

ElasticWeights elastic_weights(const SystemParams& p, cxd t0) {
    ElasticWeights w;
    const cxd amp1 = mean_amp_order1(p);
    w.weight_2 = 4.0 * pi * p.gamma_c_d * std::norm(amp1);
    w.weight_4 = 8.0 * pi * p.gamma_c_d * (std::conj(amp1) * mean_amp_order3(p, t0)).real();
    return w;
}

double inelastic_density(const SystemParams& p, cxd t0, double omega) {
    const EffectiveMatrix m = effective_matrix_symmetric(p);
    const ResolventMatrix g0 = greens(m, 0.0);
    const double gsa0_sq = std::norm(g0(mode_s, mode_a));
    const double a2 = p.alpha * p.alpha;
    const double pref = 4.0 * p.gamma_c_d * a2 * a2 * std::norm(t0) * gsa0_sq * gsa0_sq;
    const double g_as_sq = std::norm(greens(m, omega)(mode_a, mode_s));
    const double im_ss = greens(m, -omega)(mode_s, mode_s).imag();
    return -pref * g_as_sq * im_ss;
}

SpectrumResult compute_spectrum(const SystemParams& p, const GridSpec& grid,
                                TMatrixMethod method, long mc_positions,
                                const std::vector<std::uint64_t>& seeds) {
    SpectrumResult r;
    r.tmatrix = compute_tmatrix(p, method, mc_positions, seeds);
    r.amp1 = mean_amp_order1(p);
    r.amp3 = mean_amp_order3(p, r.tmatrix.t0);
    r.elastic = elastic_weights(p, r.tmatrix.t0);
    r.omega = linspace(grid);
    r.density.resize(r.omega.size());
    const EffectiveMatrix m = effective_matrix_symmetric(p);
    const ResolventMatrix g0 = greens(m, 0.0);
    const double gsa0_sq = std::norm(g0(mode_s, mode_a));
    const double a2 = p.alpha * p.alpha;
    const double pref =
        4.0 * p.gamma_c_d * a2 * a2 * std::norm(r.tmatrix.t0) * gsa0_sq * gsa0_sq;
    for (std::size_t i = 0; i < r.omega.size(); ++i) {
        const double w = r.omega[i];
        r.density[i] = -pref * std::norm(greens(m, w)(mode_a, mode_s)) *
                       greens(m, -w)(mode_s, mode_s).imag();
    }
    return r;
}

MapResult spectrum_map(const SystemParams& p, const GridSpec& omega_grid,
                       const GridSpec& omega_cf_grid, int workers) {
    if (omega_grid.points < 1 || omega_cf_grid.points < 1)
        throw std::invalid_argument("spectrum_map: grids must be nonempty");
    if (omega_cf_grid.min <= 0.0)
        throw std::invalid_argument("spectrum_map: omega_cf grid must be > 0");
    p.validate();

    MapResult map;
    map.omega_cf = linspace(omega_cf_grid);
    map.omega = linspace(omega_grid);
    const std::size_t ncf = map.omega_cf.size();
    const std::size_t nw = map.omega.size();
    map.density.assign(ncf * nw, std::numeric_limits<double>::quiet_NaN());
    map.eps.resize(ncf);
    map.t0.resize(ncf);
    map.column_valid.assign(ncf, 0);
    map.column_error.resize(ncf);

    parallel_for(static_cast<long>(ncf), workers, [&](long icf) {
        const std::size_t c = static_cast<std::size_t>(icf);
        SystemParams q = p;
        q.omega_cf = map.omega_cf[c];
        const auto e = polariton_energies(q);
        map.eps[c] = e;
        try {
            const TMatrixResult tm = compute_tmatrix(q, TMatrixMethod::closed_form);
            map.t0[c] = tm.t0;
            const EffectiveMatrix m = effective_matrix_symmetric(q);
            const ResolventMatrix g0 = greens(m, 0.0);
            const double gsa0_sq = std::norm(g0(mode_s, mode_a));
            const double a2 = q.alpha * q.alpha;
            const double pref =
                4.0 * q.gamma_c_d * a2 * a2 * std::norm(tm.t0) * gsa0_sq * gsa0_sq;
            double* row = &map.density[c * nw];
            for (std::size_t iw = 0; iw < nw; ++iw) {
                const double w = map.omega[iw];
                row[iw] = -pref * std::norm(greens(m, w)(mode_a, mode_s)) *
                          greens(m, -w)(mode_s, mode_s).imag();
            }
            map.column_valid[c] = 1;
        } catch (const std::exception& ex) {
            map.column_error[c] = ex.what();
        }
    });
    return map;
}

std::vector<Ridge> find_ridges(const std::vector<double>& omega,
                               const std::vector<double>& height,
                               double min_prominence_fraction) {
    if (omega.size() != height.size())
        throw std::invalid_argument("find_ridges: size mismatch");
    std::vector<Ridge> out;
    const std::size_t n = height.size();
    if (n < 3) return out;
    double col_max = height[0];
    for (double h : height) col_max = std::max(col_max, h);
    if (!(col_max > 0.0)) return out;

    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (!(height[i] > height[i - 1] && height[i] > height[i + 1])) continue;
        const double h = height[i];
        // Lowest point on the walk towards the nearest higher sample (or the
        // edge) on each side; prominence against the higher of the two.
        double left_base = h;
        for (std::size_t j = i; j-- > 0;) {
            left_base = std::min(left_base, height[j]);
            if (height[j] > h) break;
        }
        double right_base = h;
        for (std::size_t j = i + 1; j < n; ++j) {
            right_base = std::min(right_base, height[j]);
            if (height[j] > h) break;
        }
        const double prom = h - std::max(left_base, right_base);
        if (prom >= min_prominence_fraction * col_max)
            out.push_back({static_cast<int>(i), omega[i], h, prom});
    }
    return out;
}

}  // namespace ryscat
