#include <cmath>

#include "tw/models.hpp"

namespace tw::models {

using qmat::ContractViolation;

void ADParams::validate() const {
    if (!(gamma > 0) || !(lambda > 0))
        throw ContractViolation("amplitude damping: gamma and lambda must be positive");
}

cx ADParams::a() const {
    return std::sqrt(cx(1.0 - 2.0 * gamma / lambda, 0.0));
}

std::pair<cx, cx> ad_h(double t, const ADParams& p) {
    p.validate();
    if (t < 0) throw ContractViolation("amplitude damping: t must be non-negative");
    const cx av = p.a();
    const cx arg = 0.5 * p.lambda * av * t;
    const double damp = std::exp(-0.5 * p.lambda * t);
    const cx h1 = damp * (std::cosh(arg) + std::sinh(arg) / av);
    const cx h2 = cx(0, -1) * damp * std::sqrt(1.0 / (av * av) - 1.0) * std::sinh(arg);
    return {h1, h2};
}

StatePair ad_reduced_states(double t, const ADParams& p) {
    const auto [h1, h2] = ad_h(t, p);
    const double x = std::norm(h2);  // |h2|^2
    const SubsystemLayout layout{2, 2};

    // x |psi+><psi+| + (1-x)|gg><gg|, basis (ee,eg,ge,gg)
    CMatrix r1(4);
    r1(1, 1) = r1(2, 2) = r1(1, 2) = r1(2, 1) = 0.5 * x;
    r1(3, 3) = 1.0 - x;

    CMatrix r2(4);
    r2(0, 0) = 0.25 * x * x;
    r2(1, 1) = r2(2, 2) = 0.25 * x * (2.0 - x);
    r2(3, 3) = 0.25 * (2.0 - x) * (2.0 - x);

    return {DensityOperator(std::move(r1), layout), DensityOperator(std::move(r2), layout)};
}

StatePair ad_env_states() {
    const SubsystemLayout layout{2, 2};
    // effective reservoir qubits {vacuum, single collective excitation};
    // the correlated reservoir pair starts in (|1,0> + |0,1>)/sqrt(2)
    CMatrix bell(4);
    bell(1, 1) = bell(2, 2) = bell(1, 2) = bell(2, 1) = 0.5;
    CMatrix prod = cx(0.25, 0) * CMatrix::identity(4);
    return {DensityOperator(std::move(bell), layout), DensityOperator(std::move(prod), layout)};
}

}  // namespace tw::models
