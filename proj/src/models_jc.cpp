#include <algorithm>
#include <cmath>

#include "tw/models.hpp"

namespace tw::models {

using qmat::ContractViolation;
using qmat::DimensionError;

namespace {

// Rabi frequency of the n-th manifold
double rabi(double coupling, double detuning, int n) {
    return std::sqrt(detuning * detuning + 4.0 * coupling * coupling * n);
}

// c(n,t), d(n,t) of the interaction-picture propagator
cx c_fn(double coupling, double detuning, int n, double t) {
    const double om = rabi(coupling, detuning, n);
    const cx pre = std::exp(cx(0, detuning * t / 2.0));
    if (om == 0.0) return pre;  // only possible for n = 0 at zero detuning
    return pre * (std::cos(om * t / 2.0) - cx(0, detuning / om) * std::sin(om * t / 2.0));
}

cx d_fn(double coupling, double detuning, int n, double t) {
    const double om = rabi(coupling, detuning, n);
    if (om == 0.0) return 0.0;  // its coefficient sqrt(n) vanishes with n = 0
    return cx(0, -1) * std::exp(cx(0, detuning * t / 2.0)) *
           (2.0 * coupling / om) * std::sin(om * t / 2.0);
}

}  // namespace

double JCAmps::norm2() const {
    double s = 0;
    for (const cx& v : excited) s += std::norm(v);
    for (const cx& v : ground) s += std::norm(v);
    return s;
}

JCAmps jc_apply_propagator(const JCAmps& in, double coupling, double detuning, double t) {
    if (in.excited.size() != in.ground.size() || in.excited.empty())
        throw DimensionError("jc propagator: amplitude vectors must be non-empty and equal size");
    const int nmax = static_cast<int>(in.excited.size()) - 1;
    if (std::abs(in.norm2() - 1.0) > 1e-12)
        throw ContractViolation("jc propagator: input amplitudes are not normalized");
    // the top manifold {|e,nmax>, |g,nmax+1>} reaches outside the truncation
    if (std::norm(in.excited[nmax]) > 1e-12)
        throw TruncationError("jc propagator: amplitude leakage at the Fock-space boundary");

    JCAmps out;
    out.excited.assign(nmax + 1, 0);
    out.ground.assign(nmax + 1, 0);
    for (int n = 0; n <= nmax; ++n) {
        // |e,n> couples to |g,n+1| within its excitation manifold
        cx e = c_fn(coupling, detuning, n + 1, t) * in.excited[n];
        if (n + 1 <= nmax)
            e += d_fn(coupling, detuning, n + 1, t) * std::sqrt(n + 1.0) * in.ground[n + 1];
        out.excited[n] = e;

        cx g = std::conj(c_fn(coupling, detuning, n, t)) * in.ground[n];
        if (n >= 1)
            g -= std::sqrt(static_cast<double>(n)) *
                 std::conj(d_fn(coupling, detuning, n, t)) * in.excited[n - 1];
        out.ground[n] = g;
    }
    if (std::abs(out.norm2() - 1.0) > 1e-12)
        throw ContractViolation("jc propagator: norm not preserved");
    return out;
}

int JCParams::effective_nmax(JCEnvCase c) const {
    if (c == JCEnvCase::CoherentClassical || c == JCEnvCase::CoherentProduct) {
        const double b = std::abs(coherent_beta);
        const int needed = static_cast<int>(std::ceil(b * b + 10.0 * b));
        return nmax > 0 ? std::max(nmax, needed) : needed;
    }
    const int needed = n + 1;
    return nmax > 0 ? std::max(nmax, needed) : needed;
}

void JCParams::validate(JCEnvCase c) const {
    if (coupling <= 0) throw ContractViolation("jc: coupling must be positive");
    if (c == JCEnvCase::CoherentClassical || c == JCEnvCase::CoherentProduct) {
        if (std::abs(coherent_beta) <= 0)
            throw ContractViolation("jc: coherent amplitude must be nonzero");
        if (nmax > 0 && nmax < effective_nmax(c))
            throw TruncationError("jc: nmax too small for the coherent amplitude");
    } else {
        if (n < 1) throw ContractViolation("jc: Fock excitation number must be at least 1");
        if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > 1e-6)
            throw ContractViolation("jc: Fock amplitudes must be normalized");
        if (nmax > 0 && nmax < n + 1)
            throw TruncationError("jc: nmax must be at least n+1 for Fock environments");
    }
}

namespace {

std::vector<cx> fock_ket(int n, int nmax) {
    std::vector<cx> v(nmax + 1, 0);
    v[n] = 1.0;
    return v;
}

std::vector<cx> coherent_ket(cx beta, int nmax) {
    std::vector<cx> v(nmax + 1);
    // amplitudes beta^n / sqrt(n!) built recursively
    cx amp = 1.0;
    v[0] = amp;
    double norm2 = 1.0;
    for (int n = 1; n <= nmax; ++n) {
        amp *= beta / std::sqrt(static_cast<double>(n));
        v[n] = amp;
        norm2 += std::norm(amp);
    }
    const double weight = std::exp(-std::norm(beta));
    if (!std::isfinite(norm2) || !(weight > 0))
        throw ContractViolation("jc: coherent amplitude too large for double precision");
    const double tail = 1.0 - weight * norm2;
    if (tail > 1e-12)
        throw TruncationError("jc: truncated coherent-state tail above 1e-12");
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& a : v) a *= inv;
    return v;
}

// environment state as a mixture of pure states, each a short sum of
// products of field kets
struct EnvEnsemble {
    std::vector<std::vector<cx>> kets;
    struct Pure {
        double weight;
        std::vector<cx> kappa;
        std::vector<std::pair<int, int>> pairs;  // ket indices (field1, field2)
    };
    std::vector<Pure> mixture;
};

EnvEnsemble build_ensemble(JCEnvCase c, const JCParams& p, int nmax) {
    EnvEnsemble e;
    const double wa = std::norm(p.alpha), wb = std::norm(p.beta);
    switch (c) {
        case JCEnvCase::EntangledFock:
            e.kets = {fock_ket(0, nmax), fock_ket(p.n, nmax)};
            e.mixture = {{1.0, {p.alpha, p.beta}, {{0, 1}, {1, 0}}}};
            break;
        case JCEnvCase::ProductFock:
            e.kets = {fock_ket(0, nmax), fock_ket(p.n, nmax)};
            e.mixture = {{wa * wa, {1.0}, {{0, 1}}},
                         {wb * wb, {1.0}, {{1, 0}}},
                         {wa * wb, {1.0}, {{0, 0}}},
                         {wa * wb, {1.0}, {{1, 1}}}};
            break;
        case JCEnvCase::ClassicalFock:
            e.kets = {fock_ket(0, nmax), fock_ket(p.n, nmax)};
            e.mixture = {{wa, {1.0}, {{0, 0}}}, {wb, {1.0}, {{1, 1}}}};
            break;
        case JCEnvCase::CoherentClassical:
            e.kets = {coherent_ket(p.coherent_beta, nmax), coherent_ket(-p.coherent_beta, nmax)};
            e.mixture = {{0.5, {1.0}, {{0, 1}}}, {0.5, {1.0}, {{1, 0}}}};
            break;
        case JCEnvCase::CoherentProduct:
            e.kets = {coherent_ket(p.coherent_beta, nmax), coherent_ket(-p.coherent_beta, nmax)};
            e.mixture = {{0.25, {1.0}, {{0, 1}}},
                         {0.25, {1.0}, {{0, 0}}},
                         {0.25, {1.0}, {{1, 1}}},
                         {0.25, {1.0}, {{1, 0}}}};
            break;
    }
    return e;
}

// atom-side cross-Gram matrix M[a][a'] = sum_m x_{a,m} conj(y_{a',m})
void cross_gram(const JCAmps& x, const JCAmps& y, cx m[2][2]) {
    m[0][0] = m[0][1] = m[1][0] = m[1][1] = 0;
    for (size_t k = 0; k < x.excited.size(); ++k) {
        m[0][0] += x.excited[k] * std::conj(y.excited[k]);
        m[0][1] += x.excited[k] * std::conj(y.ground[k]);
        m[1][0] += x.ground[k] * std::conj(y.excited[k]);
        m[1][1] += x.ground[k] * std::conj(y.ground[k]);
    }
}

DensityOperator reduced_from_ensemble(const EnvEnsemble& env, const JCParams& p, double t) {
    // evolve |e> x ket once per distinct field ket
    std::vector<JCAmps> evolved;
    evolved.reserve(env.kets.size());
    for (const auto& ket : env.kets) {
        JCAmps in;
        in.excited = ket;
        in.ground.assign(ket.size(), 0);
        evolved.push_back(jc_apply_propagator(in, p.coupling, p.detuning, t));
    }

    CMatrix rho(4);
    for (const auto& pure : env.mixture) {
        const size_t terms = pure.pairs.size();
        for (size_t s = 0; s < terms; ++s)
            for (size_t sp = 0; sp < terms; ++sp) {
                const cx coeff = pure.weight * pure.kappa[s] * std::conj(pure.kappa[sp]);
                cx m1[2][2], m2[2][2];
                cross_gram(evolved[pure.pairs[s].first], evolved[pure.pairs[sp].first], m1);
                cross_gram(evolved[pure.pairs[s].second], evolved[pure.pairs[sp].second], m2);
                for (int i = 0; i < 2; ++i)
                    for (int j = 0; j < 2; ++j)
                        for (int k = 0; k < 2; ++k)
                            for (int l = 0; l < 2; ++l)
                                rho(i * 2 + k, j * 2 + l) += coeff * m1[i][j] * m2[k][l];
            }
    }
    // discard the ~1e-16 Hermiticity defect of the accumulated sum
    for (int i = 0; i < 4; ++i) {
        rho(i, i) = rho(i, i).real();
        for (int j = i + 1; j < 4; ++j) {
            const cx v = 0.5 * (rho(i, j) + std::conj(rho(j, i)));
            rho(i, j) = v;
            rho(j, i) = std::conj(v);
        }
    }
    return DensityOperator(std::move(rho), SubsystemLayout{2, 2});
}

}  // namespace

DensityOperator jc_reduced_system(JCEnvCase env_case, const JCParams& p, double t) {
    p.validate(env_case);
    const int nmax = p.effective_nmax(env_case);
    return reduced_from_ensemble(build_ensemble(env_case, p, nmax), p, t);
}

StatePair jc_coherent_scenario(cx beta, double coupling, double detuning, double t) {
    JCParams p;
    p.coupling = coupling;
    p.detuning = detuning;
    p.coherent_beta = beta;
    return {jc_reduced_system(JCEnvCase::CoherentClassical, p, t),
            jc_reduced_system(JCEnvCase::CoherentProduct, p, t)};
}

DensityOperator jc_env_state(JCEnvCase env_case, const JCParams& p) {
    p.validate(env_case);
    const SubsystemLayout layout{2, 2};

    if (env_case == JCEnvCase::CoherentClassical || env_case == JCEnvCase::CoherentProduct) {
        // orthonormalized span of {|b>, |-b>} per mode: |b> = (1,0),
        // |-b> = (s, sqrt(1-s^2)) with s = <b|-b> = exp(-2|b|^2)
        const double s = std::exp(-2.0 * std::norm(p.coherent_beta));
        const double r = std::sqrt(std::max(0.0, 1.0 - s * s));
        const cx plus[2] = {1.0, 0.0};
        const cx minus[2] = {s, r};

        auto pure4 = [](const cx u[2], const cx v[2]) {
            CMatrix m(4);
            cx ket[4] = {u[0] * v[0], u[0] * v[1], u[1] * v[0], u[1] * v[1]};
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) m(i, j) = ket[i] * std::conj(ket[j]);
            return m;
        };

        CMatrix classical = cx(0.5, 0) * pure4(plus, minus) + cx(0.5, 0) * pure4(minus, plus);
        if (env_case == JCEnvCase::CoherentClassical)
            return DensityOperator(std::move(classical), layout);
        DensityOperator corr(classical, layout);
        const CMatrix mb = qmat::partial_trace(corr, {0}).mat();
        const CMatrix mc = qmat::partial_trace(corr, {1}).mat();
        return DensityOperator(qmat::tensor(mb, mc), layout);
    }

    // Fock cases in the orthonormal {|0>, |n>} basis per mode
    CMatrix m(4);
    const double wa = std::norm(p.alpha), wb = std::norm(p.beta);
    switch (env_case) {
        case JCEnvCase::EntangledFock: {
            const cx ket[4] = {0, p.alpha, p.beta, 0};  // alpha|0,n> + beta|n,0>
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) m(i, j) = ket[i] * std::conj(ket[j]);
            break;
        }
        case JCEnvCase::ProductFock: {
            DensityOperator ent = jc_env_state(JCEnvCase::EntangledFock, p);
            const CMatrix mb = qmat::partial_trace(ent, {0}).mat();
            const CMatrix mc = qmat::partial_trace(ent, {1}).mat();
            m = qmat::tensor(mb, mc);
            break;
        }
        case JCEnvCase::ClassicalFock:
            m(0, 0) = wa;
            m(3, 3) = wb;
            break;
        default:
            break;
    }
    return DensityOperator(std::move(m), layout);
}

}  // namespace tw::models
