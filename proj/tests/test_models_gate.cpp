#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "tw/models.hpp"
#include "tw/witness.hpp"

using namespace tw::qmat;
using namespace tw::models;

TEST_CASE("gate_unitary is unitary and fixes the all-zeros state") {
    const CMatrix u = gate_unitary();
    CHECK(u.dim() == 16);
    CHECK(unitarity_defect(u) < 1e-14);
    CHECK(std::abs(u(0, 0) - cx(1.0)) < 1e-15);  // |0000> -> |0000>
}

TEST_CASE("pure entangled case reproduces the closed-form distance at the symmetric point") {
    GateScenarioParams p;
    p.a = p.b = p.alpha = p.beta = 1.0 / std::sqrt(2.0);
    p.kind = GateKind::PureEntangled;
    auto [rho1, rho2] = gate_scenario(p);

    // system states agree before the gate
    CHECK(trace_distance(partial_trace(rho1, {0, 1}), partial_trace(rho2, {0, 1})) < 1e-12);

    const CMatrix u = gate_unitary();
    auto post1 = partial_trace(evolve(rho1, u), {0, 1});
    auto post2 = partial_trace(evolve(rho2, u), {0, 1});
    CHECK(trace_distance(post1, post2) == doctest::Approx(0.75).epsilon(1e-13));
}

TEST_CASE("pure entangled sweep: post-gate distance equals the environment correlation") {
    const CMatrix u = gate_unitary();
    for (double a : {0.3, 0.5, 0.8}) {
        for (double alpha : {0.2, 0.6, 0.9}) {
            GateScenarioParams p;
            p.a = a;
            p.b = std::sqrt(1 - a * a);
            p.alpha = alpha;
            p.beta = std::sqrt(1 - alpha * alpha);
            p.kind = GateKind::PureEntangled;
            auto [rho1, rho2] = gate_scenario(p);

            const double ab = alpha * std::sqrt(1 - alpha * alpha);
            const double expected = ab * ab + ab;
            auto post1 = partial_trace(evolve(rho1, u), {0, 1});
            auto post2 = partial_trace(evolve(rho2, u), {0, 1});
            const double d = trace_distance(post1, post2);
            CHECK(d == doctest::Approx(expected).epsilon(1e-12));

            auto env = partial_trace(rho1, {2, 3});
            const double denv = trace_distance(env, product_of_marginals(env, 0));
            CHECK(std::abs(d - denv) < 1e-12);
        }
    }
}

TEST_CASE("classical mixture sweep: post-gate distance equals 2|ab|^2") {
    const CMatrix u = gate_unitary();
    for (double alpha : {0.2, 1.0 / std::sqrt(2.0), 0.9}) {
        GateScenarioParams p;
        p.a = 0.6;
        p.b = 0.8;
        p.alpha = alpha;
        p.beta = std::sqrt(1 - alpha * alpha);
        p.kind = GateKind::ClassicalMixture;
        auto [rho1, rho2] = gate_scenario(p);

        const double ab2 = alpha * alpha * (1 - alpha * alpha);
        auto post1 = partial_trace(evolve(rho1, u), {0, 1});
        auto post2 = partial_trace(evolve(rho2, u), {0, 1});
        CHECK(trace_distance(post1, post2) == doctest::Approx(2 * ab2).epsilon(1e-12));

        auto env = partial_trace(rho1, {2, 3});
        CHECK(trace_distance(env, product_of_marginals(env, 0)) ==
              doctest::Approx(2 * ab2).epsilon(1e-12));
    }
}

TEST_CASE("degenerate amplitudes are rejected") {
    GateScenarioParams p;
    p.a = 1.0;
    p.b = 0.0;
    p.alpha = p.beta = 1.0 / std::sqrt(2.0);
    CHECK_THROWS_AS(gate_scenario(p), ContractViolation);
    p.a = p.b = 1.0 / std::sqrt(2.0);
    p.alpha = 1.0;
    p.beta = 0.0;
    CHECK_THROWS_AS(gate_scenario(p), ContractViolation);
    p.alpha = 0.9;
    p.beta = 0.9;
    CHECK_THROWS_AS(gate_scenario(p), ContractViolation);
}

TEST_CASE("the bound of the pure scenario is attained") {
    GateScenarioParams p;
    p.a = p.b = p.alpha = p.beta = 1.0 / std::sqrt(2.0);
    p.kind = GateKind::PureEntangled;
    auto [rho1, rho2] = gate_scenario(p);
    auto tri1 = rho1.with_layout(SubsystemLayout{4, 2, 2});
    auto tri2 = rho2.with_layout(SubsystemLayout{4, 2, 2});
    auto bs = tw::witness::bound_tripartite(tri1, tri2);
    CHECK(bs.b10_precondition_holds);
    CHECK(bs.b10 == doctest::Approx(0.75).epsilon(1e-13));

    const CMatrix u = gate_unitary();
    auto post1 = partial_trace(evolve(rho1, u), {0, 1});
    auto post2 = partial_trace(evolve(rho2, u), {0, 1});
    const double growth = trace_distance(post1, post2);  // initial distance is zero
    CHECK(std::abs(growth - bs.b10) < 1e-12);
}

TEST_CASE("pre- and post-gate reduced states are valid") {
    GateScenarioParams p;
    p.a = 0.6;
    p.b = 0.8;
    p.alpha = 0.3;
    p.beta = std::sqrt(1 - 0.09);
    for (auto kind : {GateKind::PureEntangled, GateKind::ClassicalMixture}) {
        p.kind = kind;
        auto [rho1, rho2] = gate_scenario(p);
        const CMatrix u = gate_unitary();
        for (const auto& rho : {rho1, rho2, evolve(rho1, u), evolve(rho2, u)}) {
            CHECK(validate_density(partial_trace(rho, {0, 1}), 1e-8).pass);
            CHECK(validate_density(partial_trace(rho, {2, 3}), 1e-8).pass);
        }
    }
}

TEST_CASE("internal and external information are conserved across the gate") {
    using tw::witness::external_info_bound;
    using tw::witness::internal_external;
    GateScenarioParams p;
    p.a = 0.6;
    p.b = 0.8;
    p.alpha = p.beta = 1.0 / std::sqrt(2.0);
    p.kind = GateKind::PureEntangled;
    auto [rho1, rho2] = gate_scenario(p);
    auto tri1 = rho1.with_layout(SubsystemLayout{4, 2, 2});
    auto tri2 = rho2.with_layout(SubsystemLayout{4, 2, 2});

    const CMatrix u = gate_unitary();
    auto post1 = evolve(rho1, u).with_layout(SubsystemLayout{4, 2, 2});
    auto post2 = evolve(rho2, u).with_layout(SubsystemLayout{4, 2, 2});

    auto pre = internal_external(tri1, tri2, 0);
    auto post = internal_external(post1, post2, 0);
    CHECK(std::abs((pre.internal + pre.external) - (post.internal + post.external)) < 1e-10);
    CHECK(post.external <= external_info_bound(post1, post2) + 1e-9);
}
