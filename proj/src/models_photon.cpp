#include <cmath>
#include <numbers>

#include "tw/models.hpp"

namespace tw::models {

using qmat::ContractViolation;

void PhotonParams::validate() const {
    if (!(c11 > 0)) throw ContractViolation("photon: frequency variance must be positive");
    if (std::abs(corr) > 1.0)
        throw ContractViolation("photon: correlation coefficient must lie in [-1,1]");
    const double n = std::norm(a) + std::norm(b) + std::norm(c) + std::norm(d);
    if (std::abs(n - 1.0) > 1e-6)
        throw ContractViolation("photon: polarization amplitudes must be normalized");
}

cx photon_char_fn(double tau1, double tau2, const PhotonParams& p) {
    const double quad = tau1 * tau1 + tau2 * tau2 + 2.0 * p.corr * tau1 * tau2;
    return std::exp(cx(-0.5 * p.c11 * quad, 0.5 * p.omega0 * (tau1 + tau2)));
}

DensityOperator photon_rho_s(double t, const PhotonParams& p) {
    p.validate();
    const double n = std::sqrt(std::norm(p.a) + std::norm(p.b) + std::norm(p.c) + std::norm(p.d));
    const cx a = p.a / n, b = p.b / n, c = p.c / n, d = p.d / n;

    const double tau = p.dn * t;
    const cx k1 = photon_char_fn(tau, 0.0, p);
    const cx k2 = photon_char_fn(0.0, tau, p);
    const cx k12 = photon_char_fn(tau, tau, p);
    const cx l12 = photon_char_fn(tau, -tau, p);

    // basis (HH,HV,VH,VV); built from the upper triangle, conjugated below
    CMatrix m(4);
    m(0, 0) = std::norm(a);
    m(1, 1) = std::norm(b);
    m(2, 2) = std::norm(c);
    m(3, 3) = std::norm(d);
    m(0, 1) = a * std::conj(b) * k2;
    m(0, 2) = a * std::conj(c) * k1;
    m(0, 3) = a * std::conj(d) * k12;
    m(1, 2) = b * std::conj(c) * l12;
    m(1, 3) = b * std::conj(d) * k1;
    m(2, 3) = c * std::conj(d) * k2;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) m(j, i) = std::conj(m(i, j));
    return DensityOperator(std::move(m), SubsystemLayout{2, 2});
}

witness::TraceSeries photon_scenario(double corr, const PhotonParams& psi1,
                                     const PhotonParams& psi2,
                                     const std::vector<double>& scaled_times) {
    if (scaled_times.empty()) throw qmat::DimensionError("photon scenario: empty grid");
    PhotonParams p1 = psi1;
    p1.corr = corr;
    PhotonParams p2 = psi2;
    p2.corr = 0.0;  // factorized environment with the same marginals
    p1.validate();
    p2.validate();
    if (p1.c11 != p2.c11 || p1.omega0 != p2.omega0 || p1.dn != p2.dn)
        throw ContractViolation("photon scenario: the two trajectories must share the "
                                "frequency-distribution parameters");

    witness::TraceSeries series;
    series.label = "photon dephasing";
    series.times = scaled_times;
    series.values.reserve(scaled_times.size());
    const double time_scale = std::sqrt(p1.c11) * p1.dn;
    for (double s : scaled_times) {
        const double t = s / time_scale;
        series.values.push_back(
            qmat::trace_distance(photon_rho_s(t, p1), photon_rho_s(t, p2)));
    }
    series.validate();
    return series;
}

double photon_env_bound(double corr) {
    const double k = corr;
    if (std::abs(k) > 1.0)
        throw ContractViolation("photon: correlation coefficient must lie in [-1,1]");
    if (std::abs(k) >= 1.0 - 1e-9) return 1.0;  // singular support
    if (k == 0.0) return 0.0;

    // total variation between the correlated Gaussian and the product of its
    // marginals, in rotated coordinates where both densities factorize:
    // variances (1+K, 1-K) versus (1, 1)
    const double v1 = 1.0 + k, v2 = 1.0 - k;
    const int n = 2001;
    const double lim = 8.0 * std::sqrt(2.0);
    const double h = 2.0 * lim / (n - 1);
    using std::numbers::pi;

    std::vector<double> pu(n), qu(n), pw(n), qw(n);
    for (int i = 0; i < n; ++i) {
        const double x = -lim + i * h;
        pu[i] = std::exp(-x * x / (2.0 * v1)) / std::sqrt(2.0 * pi * v1);
        pw[i] = std::exp(-x * x / (2.0 * v2)) / std::sqrt(2.0 * pi * v2);
        qu[i] = std::exp(-x * x / 2.0) / std::sqrt(2.0 * pi);
        qw[i] = qu[i];
    }
    auto simpson_weight = [n](int i) {
        if (i == 0 || i == n - 1) return 1.0;
        return (i % 2 == 1) ? 4.0 : 2.0;
    };
    double acc = 0;
    for (int i = 0; i < n; ++i) {
        const double wi = simpson_weight(i);
        double row = 0;
        for (int j = 0; j < n; ++j)
            row += simpson_weight(j) * std::abs(pu[i] * pw[j] - qu[i] * qw[j]);
        acc += wi * row;
    }
    acc *= h * h / 9.0;
    return std::min(1.0, 0.5 * acc);
}

cx photon_char_fn_quadrature(double tau1, double tau2, const PhotonParams& p, int points,
                             double halfwidth_sigmas) {
    using std::numbers::pi;
    const double k = p.corr;
    if (std::abs(k) >= 1.0)
        throw ContractViolation("photon quadrature: needs a nonsingular distribution");
    const double det = p.c11 * p.c11 * (1.0 - k * k);
    const double mean = 0.5 * p.omega0;
    const double lim = halfwidth_sigmas * std::sqrt(p.c11);
    const int n = points | 1;  // Simpson needs an odd count
    const double h = 2.0 * lim / (n - 1);
    const double norm = 1.0 / (2.0 * pi * std::sqrt(det));

    auto simpson_weight = [n](int i) {
        if (i == 0 || i == n - 1) return 1.0;
        return (i % 2 == 1) ? 4.0 : 2.0;
    };
    cx acc = 0;
    for (int i = 0; i < n; ++i) {
        const double x = -lim + i * h;  // omega1 - mean
        cx row = 0;
        for (int j = 0; j < n; ++j) {
            const double y = -lim + j * h;
            const double quad =
                (x * x - 2.0 * k * x * y + y * y) / (2.0 * p.c11 * (1.0 - k * k));
            const double density = norm * std::exp(-quad);
            const cx phase = std::exp(cx(0, (x + mean) * tau1 + (y + mean) * tau2));
            row += simpson_weight(j) * density * phase;
        }
        acc += simpson_weight(i) * row;
    }
    return acc * (h * h / 9.0);
}

}  // namespace tw::models
