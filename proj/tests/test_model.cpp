#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "ryscat/model.hpp"
#include "ryscat/params.hpp"

using namespace ryscat;
using doctest::Approx;

TEST_CASE("collective coupling from the cooperativity definition") {
    SystemParams p;  // gamma_c = 0.31, C = 5.0
    CHECK(p.gamma_c() == Approx(0.31).epsilon(1e-15));
    // sqrt(2 * 5 * 0.31 * 1.0) = sqrt(3.1)
    CHECK(p.g_sqrt_n() == Approx(1.7606816861659007).epsilon(1e-15));
}

TEST_CASE("symmetric-sector matrix layout") {
    SystemParams p;
    p.delta_c = 0.7;
    p.delta_e = -0.3;
    p.delta_r = 0.2;
    p.omega_cf = 1.6;
    const auto m = effective_matrix(p, Sector::symmetric);
    REQUIRE(m.dim == 3);
    const double gn = p.g_sqrt_n();
    CHECK(m(mode_a, mode_a) == cxd(-0.7, -p.gamma_c()));
    CHECK(m(mode_b, mode_b) == cxd(0.3, -p.gamma_e));
    CHECK(m(mode_s, mode_s) == cxd(-0.2, -p.gamma_r));
    CHECK(m(mode_a, mode_b) == cxd(gn, 0.0));
    CHECK(m(mode_b, mode_s) == cxd(0.8, 0.0));
    CHECK(m(mode_a, mode_s) == cxd(0.0, 0.0));
}

TEST_CASE("q-sector matrix layout") {
    SystemParams p;
    p.delta_e = 0.4;
    p.delta_r = -0.1;
    p.omega_cf = 3.0;
    const auto m = effective_matrix(p, Sector::q_nonzero);
    REQUIRE(m.dim == 2);
    CHECK(m(mode_bq, mode_bq) == cxd(-0.4, -p.gamma_e));
    CHECK(m(mode_cq, mode_cq) == cxd(0.1, -p.gamma_r));
    CHECK(m(mode_bq, mode_cq) == cxd(1.5, 0.0));
    CHECK(m(mode_cq, mode_bq) == cxd(1.5, 0.0));
}

TEST_CASE("effective matrices are complex symmetric") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> det(-4.0, 4.0);
    for (int k = 0; k < 50; ++k) {
        SystemParams p;
        p.delta_c = det(rng);
        p.delta_e = det(rng);
        p.delta_r = det(rng);
        p.omega_cf = std::abs(det(rng));
        for (auto sector : {Sector::symmetric, Sector::q_nonzero}) {
            const auto m = effective_matrix(p, sector);
            for (int i = 0; i < m.dim; ++i)
                for (int j = 0; j < m.dim; ++j) CHECK(m(i, j) == m(j, i));
        }
    }
}

TEST_CASE("resonant polariton energies") {
    SystemParams p;  // resonant defaults, omega_cf = 2
    const auto eps = polariton_energies(p);
    const double s = std::sqrt(p.g_sqrt_n() * p.g_sqrt_n() + 1.0);
    CHECK(eps[0] == Approx(-s).epsilon(1e-14));
    CHECK(eps[1] == Approx(0.0).scale(1.0).epsilon(1e-14));
    CHECK(eps[2] == Approx(s).epsilon(1e-14));
    CHECK(s == Approx(2.0248456731316587).epsilon(1e-15));
}

TEST_CASE("polariton energies solve the characteristic polynomial") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> det(-4.0, 4.0);
    for (int k = 0; k < 100; ++k) {
        SystemParams p;
        p.delta_c = det(rng);
        p.delta_e = det(rng);
        p.delta_r = det(rng);
        p.omega_cf = std::abs(det(rng)) + 0.05;
        const auto eps = polariton_energies(p);
        CHECK(eps[0] <= eps[1]);
        CHECK(eps[1] <= eps[2]);
        // Coherent (Hermitian) part: trace and determinant identities plus
        // direct evaluation of det(H - eps I) at each root.
        const double a = -p.delta_c, b = -p.delta_e, c = -p.delta_r;
        const double g = p.g_sqrt_n(), o = 0.5 * p.omega_cf;
        CHECK(eps[0] + eps[1] + eps[2] == Approx(a + b + c).epsilon(1e-12).scale(1.0));
        for (int i = 0; i < 3; ++i) {
            const double x = eps[i];
            const double det_h = (a - x) * ((b - x) * (c - x) - o * o) - g * g * (c - x);
            CHECK(std::abs(det_h) < 1e-10 * (1.0 + std::abs(x) * std::abs(x) * std::abs(x)));
        }
    }
}

TEST_CASE("parameter validation") {
    SystemParams p;
    CHECK_NOTHROW(p.validate());
    SUBCASE("nonpositive rates") {
        p.gamma_r = 0.0;
        CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    }
    SUBCASE("detection mirror must dominate feeding mirror") {
        p.gamma_c_d = 0.005;
        CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    }
    SUBCASE("negative feeding rate") {
        p.alpha = -1.0;
        CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    }
    SUBCASE("non-finite") {
        p.delta_c = std::nan("");
        CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    }
    SUBCASE("cooperativity may vanish") {
        p.cooperativity = 0.0;
        CHECK_NOTHROW(p.validate());
        CHECK(p.g_sqrt_n() == 0.0);
    }
}
