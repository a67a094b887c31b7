#include <cmath>

#include "tw/models.hpp"

namespace tw::models {

using qmat::ContractViolation;

void GateScenarioParams::validate() const {
    const double ns = std::norm(a) + std::norm(b);
    const double ne = std::norm(alpha) + std::norm(beta);
    if (std::abs(ns - 1.0) > 1e-6 || std::abs(ne - 1.0) > 1e-6)
        throw ContractViolation("gate scenario: amplitude pairs must be normalized");
    if (std::abs(a) == 0 || std::abs(b) == 0 || std::abs(alpha) == 0 || std::abs(beta) == 0)
        throw ContractViolation("gate scenario: all amplitudes must be nonzero");
}

namespace {

// SWAP(CNOT(.)) on one (system, environment) qubit pair: |s,e> -> |e xor s, s>
CMatrix pair_gate() {
    CMatrix u(4);
    for (int s = 0; s < 2; ++s)
        for (int e = 0; e < 2; ++e) u(((e ^ s) << 1) | s, (s << 1) | e) = 1.0;
    return u;
}

CMatrix ket4_projector(const cx k[4]) {
    CMatrix p(4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) p(i, j) = k[i] * std::conj(k[j]);
    return p;
}

}  // namespace

CMatrix gate_unitary() {
    const CMatrix u2 = pair_gate();
    CMatrix u(16);
    // factor order (S1,S2,E1,E2); U1 acts on (S1,E1), U2 on (S2,E2)
    for (int s1p = 0; s1p < 2; ++s1p)
        for (int s2p = 0; s2p < 2; ++s2p)
            for (int e1p = 0; e1p < 2; ++e1p)
                for (int e2p = 0; e2p < 2; ++e2p)
                    for (int s1 = 0; s1 < 2; ++s1)
                        for (int s2 = 0; s2 < 2; ++s2)
                            for (int e1 = 0; e1 < 2; ++e1)
                                for (int e2 = 0; e2 < 2; ++e2) {
                                    const int row = (((s1p << 1 | s2p) << 1 | e1p) << 1) | e2p;
                                    const int col = (((s1 << 1 | s2) << 1 | e1) << 1) | e2;
                                    u(row, col) = u2((s1p << 1) | e1p, (s1 << 1) | e1) *
                                                  u2((s2p << 1) | e2p, (s2 << 1) | e2);
                                }
    return u;
}

StatePair gate_scenario(const GateScenarioParams& p) {
    p.validate();
    const double ns = std::sqrt(std::norm(p.a) + std::norm(p.b));
    const double ne = std::sqrt(std::norm(p.alpha) + std::norm(p.beta));
    const cx a = p.a / ns, b = p.b / ns;
    const cx alpha = p.alpha / ne, beta = p.beta / ne;

    CMatrix sys(4), env(4);
    if (p.kind == GateKind::PureEntangled) {
        const cx phi[4] = {a, 0, 0, b};  // a|00> + b|11>
        sys = ket4_projector(phi);
        const cx psi[4] = {alpha, 0, 0, beta};
        env = ket4_projector(psi);
    } else {
        const cx phi[4] = {0, a, b, 0};  // a|01> + b|10>
        sys = ket4_projector(phi);
        env(0, 0) = std::norm(alpha);  // |a|^2 |00><00| + |b|^2 |11><11|
        env(3, 3) = std::norm(beta);
    }

    const SubsystemLayout layout{2, 2, 2, 2};
    DensityOperator rho1(qmat::tensor(sys, env), layout);

    // second state: same system, product of the environment marginals
    DensityOperator env_op(env, SubsystemLayout{2, 2});
    const CMatrix e1 = qmat::partial_trace(env_op, {0}).mat();
    const CMatrix e2 = qmat::partial_trace(env_op, {1}).mat();
    DensityOperator rho2(qmat::tensor(sys, qmat::tensor(e1, e2)), layout);
    return {rho1, rho2};
}

}  // namespace tw::models
