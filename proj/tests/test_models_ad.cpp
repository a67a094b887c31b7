#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "tw/models.hpp"
#include "tw/runner.hpp"

using namespace tw::qmat;
using namespace tw::models;

TEST_CASE("excitation amplitudes start at (1, 0)") {
    for (auto [gamma, lambda] : {std::pair{0.1, 1.0}, {1000.0, 1.0}, {0.5, 2.0}}) {
        auto [h1, h2] = ad_h(0.0, {gamma, lambda});
        CHECK(std::abs(h1 - cx(1.0)) < 1e-14);
        CHECK(std::abs(h2) < 1e-14);
    }
}

TEST_CASE("weak coupling decays, strong coupling oscillates") {
    // asymptotic decay rate lambda (1 - a)/2 here is 0.0528 lambda, so the
    // amplitude falls below 1e-2 shortly after lambda t = 61
    const ADParams weak{0.1, 1.0};
    CHECK(std::abs(ad_h(100.0, weak).second) < 1e-2);
    CHECK(std::abs(ad_h(100.0, weak).second) < std::abs(ad_h(50.0, weak).second));

    const ADParams strong{1000.0, 1.0};
    std::vector<double> mod;
    for (int i = 0; i <= 1000; ++i) mod.push_back(std::norm(ad_h(0.01 * i, strong).second));
    CHECK(tw::runner::count_local_maxima(mod) >= 3);
}

TEST_CASE("reduced states: initial condition, trace identity, spectrum") {
    const ADParams p{0.3, 1.0};
    auto [r1_0, r2_0] = ad_reduced_states(0.0, p);
    CHECK(std::abs(r1_0.mat()(3, 3) - cx(1.0)) < 1e-14);  // |gg><gg|
    CHECK(trace_distance(r1_0, r2_0) < 1e-14);

    for (double t : {0.3, 1.7, 4.0, 9.5}) {
        auto [r1, r2] = ad_reduced_states(t, p);
        CHECK(std::abs(r2.mat().trace() - cx(1.0)) < 1e-14);

        const double x = std::norm(ad_h(t, p).second);
        auto spec = hermitian_eigensystem(r1.mat());
        CHECK(spec.eigenvalues[0] == doctest::Approx(0.0).epsilon(1e-13));
        CHECK(spec.eigenvalues[1] == doctest::Approx(0.0).epsilon(1e-13));
        CHECK(spec.eigenvalues[2] == doctest::Approx(std::min(x, 1 - x)).epsilon(1e-12));
        CHECK(spec.eigenvalues[3] == doctest::Approx(std::max(x, 1 - x)).epsilon(1e-12));
    }
}

TEST_CASE("environment-pair distance is 3/4") {
    auto [bell, prod] = ad_env_states();
    CHECK(trace_distance(bell, prod) == doctest::Approx(0.75).epsilon(1e-13));
}

TEST_CASE("trace distance follows the closed form in |h2|^2") {
    // D(t) = x^2/4 + x/2 with x = |h2|^2
    for (auto [gamma, lambda] : {std::pair{0.1, 1.0}, {1000.0, 1.0}, {0.45, 1.0}}) {
        const ADParams p{gamma, lambda};
        for (double t : {0.4, 1.9, 3.3, 7.7}) {
            auto [r1, r2] = ad_reduced_states(t, p);
            const double x = std::norm(ad_h(t, p).second);
            CHECK(trace_distance(r1, r2) ==
                  doctest::Approx(0.25 * x * x + 0.5 * x).epsilon(1e-11));
        }
    }
}

TEST_CASE("the bound is never reached by the damped dynamics") {
    for (double gamma : {1000.0, 0.1}) {
        const ADParams p{gamma, 1.0};
        double best = 0;
        for (int i = 0; i <= 1000; ++i) {
            auto [r1, r2] = ad_reduced_states(0.01 * i, p);
            best = std::max(best, trace_distance(r1, r2));
        }
        CHECK(best < 0.75 - 0.05);
    }
}

TEST_CASE("reduced states stay valid on the default grid") {
    const ADParams p{1000.0, 1.0};
    for (int i = 0; i < 200; ++i) {
        auto [r1, r2] = ad_reduced_states(0.05 * i, p);
        CHECK(validate_density(r1, 1e-8).pass);
        CHECK(validate_density(r2, 1e-8).pass);
    }
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(ad_h(1.0, ADParams{-0.5, 1.0}), ContractViolation);
    CHECK_THROWS_AS(ad_h(1.0, ADParams{0.5, 0.0}), ContractViolation);
    CHECK_THROWS_AS(ad_h(-1.0, ADParams{0.5, 1.0}), ContractViolation);
}
