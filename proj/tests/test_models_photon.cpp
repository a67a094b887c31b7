#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "tw/models.hpp"

using namespace tw::qmat;
using namespace tw::models;

namespace {

PhotonParams bell_params(double corr) {
    PhotonParams p;
    p.omega0 = 1.0;
    p.c11 = 1.0;
    p.corr = corr;
    p.dn = 1.0;
    p.a = p.d = 1.0 / std::sqrt(2.0);
    p.b = p.c = 0.0;
    return p;
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = lo + i * (hi - lo) / (n - 1);
    return v;
}

}  // namespace

TEST_CASE("characteristic function: normalization and K=0 factorization") {
    auto p = bell_params(0.0);
    CHECK(std::abs(photon_char_fn(0, 0, p) - cx(1.0)) < 1e-15);

    for (double t1 : {0.3, 1.1})
        for (double t2 : {0.5, 2.0}) {
            const cx joint = photon_char_fn(t1, t2, p);
            const cx split = photon_char_fn(t1, 0, p) * photon_char_fn(0, t2, p);
            CHECK(std::abs(joint - split) < 1e-15);
        }
}

TEST_CASE("characteristic function modulus never exceeds one for |K| <= 1") {
    for (double corr : {-1.0, -0.95, -0.5, 0.0, 0.5, 1.0}) {
        auto p = bell_params(corr);
        for (double t1 : {-2.0, -0.7, 0.0, 1.3, 3.0})
            for (double t2 : {-2.5, 0.0, 0.9, 2.8})
                CHECK(std::abs(photon_char_fn(t1, t2, p)) <= 1.0 + 1e-12);
    }
}

TEST_CASE("characteristic function agrees with the quadrature oracle") {
    auto p = bell_params(-0.95);
    double worst = 0;
    for (auto [t1, t2] : {std::pair{0.0, 0.0}, {0.7, 0.0}, {0.0, 1.3}, {0.9, 0.9},
                          {1.5, -1.5}, {2.0, 1.0}}) {
        const cx quad = photon_char_fn_quadrature(t1, t2, p);
        worst = std::max(worst, std::abs(photon_char_fn(t1, t2, p) - quad));
        worst = std::max(worst,
                         std::abs(std::abs(photon_char_fn(t1, t2, p)) - std::abs(quad)));
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("polarization state starts pure and stays valid") {
    PhotonParams p = bell_params(-1.0);
    auto rho0 = photon_rho_s(0.0, p);
    // all coherences intact at t=0
    CHECK(std::abs(rho0.mat()(0, 3) - cx(0.5)) < 1e-14);
    for (double t : {0.5, 1.5, 4.0})
        CHECK(validate_density(photon_rho_s(t, p), 1e-10).pass);
}

TEST_CASE("uncorrelated identical scenario is indistinguishable forever") {
    auto series = photon_scenario(0.0, bell_params(0.0), bell_params(0.0),
                                  linspace(0.0, 6.0, 101));
    for (double v : series.values) CHECK(v <= 1e-12);
}

TEST_CASE("fully anticorrelated frequencies drive the distance to one half") {
    auto series = photon_scenario(-1.0, bell_params(-1.0), bell_params(-1.0),
                                  linspace(0.0, 6.0, 301));
    CHECK(series.values.front() < 1e-14);
    CHECK(series.values.back() == doctest::Approx(0.5).epsilon(1e-9));
    // monotone approach
    for (size_t i = 1; i < series.values.size(); ++i)
        CHECK(series.values[i] >= series.values[i - 1] - 1e-12);
    // closed form D(s) = (1 - exp(-s^2))/2 for equal Bell inputs
    for (size_t i = 0; i < series.values.size(); i += 50) {
        const double s = series.times[i];
        CHECK(series.values[i] ==
              doctest::Approx(0.5 * (1.0 - std::exp(-s * s))).epsilon(1e-10));
    }
}

TEST_CASE("distinct polarization states: initial distance from the pure-state overlap") {
    PhotonParams psi1 = bell_params(-1.0);
    PhotonParams psi2 = psi1;
    psi2.a = std::sqrt(16.0 / 18.0);
    psi2.d = std::sqrt(2.0 / 18.0);
    auto series = photon_scenario(-1.0, psi1, psi2, linspace(0.0, 6.0, 201));

    const double overlap = (4.0 + std::sqrt(2.0)) / 6.0;
    const double d0 = std::sqrt(1.0 - overlap * overlap);
    CHECK(series.values.front() == doctest::Approx(d0).epsilon(1e-12));
    CHECK(d0 == doctest::Approx(0.4308).epsilon(1e-3));

    double best = 0;
    for (double v : series.values) best = std::max(best, v);
    CHECK(best > d0 + 0.1);  // clear growth above the initial value
}

TEST_CASE("environment bound: limits and symmetry") {
    CHECK(photon_env_bound(0.0) == 0.0);
    CHECK(photon_env_bound(1.0) == 1.0);
    CHECK(photon_env_bound(-1.0) == 1.0);

    const double tv95 = photon_env_bound(-0.95);
    CHECK(tv95 > 0.0);
    CHECK(tv95 < 1.0);
    CHECK(photon_env_bound(0.95) == doctest::Approx(tv95).epsilon(1e-9));

    // the bound dominates the realized growth for a partially correlated case
    auto series =
        photon_scenario(-0.95, bell_params(-0.95), bell_params(-0.95), linspace(0, 6, 301));
    double best = 0;
    for (double v : series.values) best = std::max(best, v);
    CHECK(best <= tv95 + 1e-9);
}

TEST_CASE("reduced states stay valid on a 200-point grid") {
    PhotonParams p1 = bell_params(-1.0);
    PhotonParams p2 = bell_params(0.0);
    for (int i = 0; i < 200; ++i) {
        const double t = 0.03 * i;
        CHECK(validate_density(photon_rho_s(t, p1), 1e-8).pass);
        CHECK(validate_density(photon_rho_s(t, p2), 1e-8).pass);
    }
}

TEST_CASE("parameter validation and empty grids") {
    PhotonParams bad = bell_params(-1.5);
    CHECK_THROWS_AS(photon_rho_s(0.1, bad), ContractViolation);
    PhotonParams unnorm = bell_params(0.0);
    unnorm.a = 0.9;
    unnorm.d = 0.9;
    CHECK_THROWS_AS(photon_rho_s(0.1, unnorm), ContractViolation);
    CHECK_THROWS_AS(photon_scenario(0.0, bell_params(0), bell_params(0), {}), DimensionError);
}
