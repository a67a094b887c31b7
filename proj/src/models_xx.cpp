#include <cmath>
#include <numbers>

#include "tw/models.hpp"

namespace tw::models {

using qmat::ContractViolation;

void XXParams::validate(XXCase c) const {
    if (std::abs(std::norm(f) + std::norm(g) - 1.0) > 1e-6 ||
        std::abs(std::norm(l) + std::norm(m) - 1.0) > 1e-6)
        throw ContractViolation("xx scenario: system amplitudes must be normalized");
    auto check_weight = [](double w) {
        if (w < 0.0 || w > 1.0)
            throw ContractViolation("xx scenario: Werner weight must lie in [0,1]");
    };
    if (c == XXCase::WernerVsWerner) {
        check_weight(alpha1);
        check_weight(alpha2);
    } else {
        check_weight(alpha);
    }
}

CMatrix xx_hamiltonian(double exchange, double field) {
    // site A = bit 2 (slowest), B = bit 1, C = bit 0; sz|1> = +|1>, sz|0> = -|0>,
    // so H|000> = -3B|000>
    CMatrix h(8);
    const int site_bit[3] = {2, 1, 0};
    for (int basis = 0; basis < 8; ++basis) {
        int mz = 0;
        for (int s = 0; s < 3; ++s) mz += (basis >> site_bit[s]) & 1 ? 1 : -1;
        h(basis, basis) = field * mz;
        for (int s = 0; s < 3; ++s) {
            const int p = site_bit[s], q = site_bit[(s + 1) % 3];
            const int bp = (basis >> p) & 1, bq = (basis >> q) & 1;
            if (bp != bq) {
                const int flipped = basis ^ (1 << p) ^ (1 << q);
                h(flipped, basis) += exchange;
            }
        }
    }
    return h;
}

CMatrix xx_propagator(double exchange, double field, double t) {
    using std::numbers::pi;
    const cx w = std::exp(cx(0, 2.0 * pi / 3.0));  // e^{2 pi i / 3}
    const double r = 1.0 / std::sqrt(3.0);

    // closed-form eigenvectors over basis index b2 b1 b0 = (A,B,C)
    struct Mode {
        double energy;
        cx amp[8];
    };
    const int one_exc[3] = {1, 2, 4};   // |001>, |010>, |100>
    const int two_exc[3] = {6, 5, 3};   // |110>, |101>, |011>
    std::vector<Mode> modes;
    {
        Mode m0{-3.0 * field, {}};
        m0.amp[0] = 1.0;
        modes.push_back(m0);
        Mode m7{3.0 * field, {}};
        m7.amp[7] = 1.0;
        modes.push_back(m7);
        const cx phases[3][3] = {{w, std::conj(w), 1.0},
                                 {std::conj(w), w, 1.0},
                                 {1.0, 1.0, 1.0}};
        const double e_one[3] = {-exchange - field, -exchange - field, 2.0 * exchange - field};
        const double e_two[3] = {-exchange + field, -exchange + field, 2.0 * exchange + field};
        for (int k = 0; k < 3; ++k) {
            Mode m{e_one[k], {}};
            for (int j = 0; j < 3; ++j) m.amp[one_exc[j]] = r * phases[k][j];
            modes.push_back(m);
            Mode mm{e_two[k], {}};
            for (int j = 0; j < 3; ++j) mm.amp[two_exc[j]] = r * phases[k][j];
            modes.push_back(mm);
        }
    }

    CMatrix u(8);
    for (const auto& m : modes) {
        const cx ph = std::exp(cx(0, -m.energy * t));
        for (int i = 0; i < 8; ++i) {
            if (m.amp[i] == cx{}) continue;
            for (int j = 0; j < 8; ++j) u(i, j) += ph * m.amp[i] * std::conj(m.amp[j]);
        }
    }
    return u;
}

namespace {

CMatrix qubit_projector(cx up, cx down) {
    const double n = std::sqrt(std::norm(up) + std::norm(down));
    up /= n;
    down /= n;
    CMatrix p(2);
    p(0, 0) = std::norm(up);
    p(0, 1) = up * std::conj(down);
    p(1, 0) = down * std::conj(up);
    p(1, 1) = std::norm(down);
    return p;
}

CMatrix werner_state(double alpha) {
    CMatrix m = CMatrix(4) + cx((1.0 - alpha) / 4.0, 0) * CMatrix::identity(4);
    // |psi-> = (|01> - |10>)/sqrt(2)
    m(1, 1) += 0.5 * alpha;
    m(2, 2) += 0.5 * alpha;
    m(1, 2) -= 0.5 * alpha;
    m(2, 1) -= 0.5 * alpha;
    return m;
}

CMatrix classical_env() {
    CMatrix m(4);
    m(0, 0) = 0.5;  // |00><00|
    m(3, 3) = 0.5;  // |11><11|
    return m;
}

}  // namespace

StatePair xx_scenario(XXCase c, const XXParams& p) {
    p.validate(c);
    const CMatrix sys1 = qubit_projector(p.f, p.g);
    const CMatrix sys2 = qubit_projector(p.l, p.m);
    const SubsystemLayout layout{2, 2, 2};

    CMatrix env1(4), env2(4);
    switch (c) {
        case XXCase::WernerVsProduct:
            env1 = werner_state(p.alpha);
            env2 = cx(0.25, 0) * CMatrix::identity(4);
            break;
        case XXCase::WernerVsWerner:
            env1 = werner_state(p.alpha1);
            env2 = werner_state(p.alpha2);
            break;
        case XXCase::WernerVsClassical:
            env1 = werner_state(p.alpha);
            env2 = classical_env();
            break;
    }
    return {DensityOperator(qmat::tensor(sys1, env1), layout),
            DensityOperator(qmat::tensor(sys2, env2), layout)};
}

}  // namespace tw::models
