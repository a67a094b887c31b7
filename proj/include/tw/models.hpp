// models.hpp
// The five scenario families: gate toy model, XX spin chain, Jaynes-Cummings
// pair, amplitude-damping pair, and photon polarization dephasing. Each family
// produces initial total states and exact reduced-system trajectories.

#pragma once

#include <complex>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "tw/qmat.hpp"
#include "tw/witness.hpp"

namespace tw::models {

using qmat::CMatrix;
using qmat::cx;
using qmat::DensityOperator;
using qmat::SubsystemLayout;

using StatePair = std::pair<DensityOperator, DensityOperator>;

// Fock-space truncation cannot hold the evolving amplitudes.
class TruncationError : public qmat::ContractViolation {
public:
    using qmat::ContractViolation::ContractViolation;
};

// ---------------------------------------------------------------------------
// gate family: two control qubits (system) and two target qubits (environment),
// each pair acted on by SWAP * CNOT
// ---------------------------------------------------------------------------

enum class GateKind { PureEntangled, ClassicalMixture };

struct GateScenarioParams {
    cx a, b;          // system amplitudes
    cx alpha, beta;   // environment amplitudes
    GateKind kind = GateKind::PureEntangled;

    void validate() const;  // normalized pairs, all amplitudes nonzero
};

// U1 x U2 on factor order (S1,S2,E1,E2), Ui = SWAP * CNOT on (Si,Ei),
// control = system qubit.
CMatrix gate_unitary();

// The two total initial states of the chosen kind, layout [2,2,2,2].
StatePair gate_scenario(const GateScenarioParams& p);

// ---------------------------------------------------------------------------
// XX chain family: three qubits with periodic boundary conditions,
// qubit A is the open system, qubits B and C form the environment
// ---------------------------------------------------------------------------

enum class XXCase { WernerVsProduct, WernerVsWerner, WernerVsClassical };

struct XXParams {
    double exchange = 1.0;  // J
    double field = 1.0;     // B
    cx f, g;                // |phi>_A = f|0> + g|1>
    cx l, m;                // |chi>_A = l|0> + m|1>
    double alpha = 0;       // Werner weight (cases i and iii)
    double alpha1 = 0, alpha2 = 0;  // Werner weights (case ii)

    void validate(XXCase c) const;
};

// J sum_n (s+_n s-_{n+1} + s-_n s+_{n+1}) + B sum_n sz_n, n cyclic over 3 sites.
// The sz sign convention puts |000> at energy -3B.
CMatrix xx_hamiltonian(double exchange, double field);

// Propagator assembled from the closed-form eigenvectors of the chain.
CMatrix xx_propagator(double exchange, double field, double t);

// The exact 8x8 initial pairs, factor order (A,B,C).
StatePair xx_scenario(XXCase c, const XXParams& p);

// ---------------------------------------------------------------------------
// Jaynes-Cummings family: two atoms (system), each coupled to its own field
// mode (environments B and C)
// ---------------------------------------------------------------------------

enum class JCEnvCase {
    EntangledFock,      // (alpha|0,n> + beta|n,0>) pure state
    ProductFock,        // product of the marginals of the entangled state
    ClassicalFock,      // |alpha|^2 |0,0> + |beta|^2 |n,n>
    CoherentClassical,  // (|b,-b><..| + |-b,b><..|)/2
    CoherentProduct     // product of the coherent-mixture marginals
};

struct JCParams {
    double coupling = 1.0;  // g
    double detuning = 0.0;  // Delta = omega0 - omega
    int n = 1;              // Fock excitation number
    cx alpha, beta;         // amplitudes of the entangled/classical Fock states
    cx coherent_beta = 0;   // coherent amplitude for the coherent cases
    int nmax = 0;           // 0 = derive from the case

    int effective_nmax(JCEnvCase c) const;
    void validate(JCEnvCase c) const;
};

// Atom-field amplitudes on a truncated Fock ladder: excited[n] multiplies
// |e,n>, ground[n] multiplies |g,n>.
struct JCAmps {
    std::vector<cx> excited;
    std::vector<cx> ground;

    double norm2() const;
};

// One step of the interaction-picture propagator, block-wise over the
// invariant excitation manifolds {|e,n>, |g,n+1>}.
JCAmps jc_apply_propagator(const JCAmps& in, double coupling, double detuning, double t);

// Reduced two-atom state at time t for the given environment case; the system
// starts in |ee><ee|. Layout [2,2], basis order (ee,eg,ge,gg).
DensityOperator jc_reduced_system(JCEnvCase env_case, const JCParams& p, double t);

// Both reduced two-atom states of the coherent-mixture scenario.
StatePair jc_coherent_scenario(cx beta, double coupling, double detuning, double t);

// Environment state at t=0 in the effective 2x2-per-mode basis
// ({|0>,|n>} for Fock cases, Gram-orthonormalized span of {|b>,|-b>} for
// coherent cases). Layout [2,2].
DensityOperator jc_env_state(JCEnvCase env_case, const JCParams& p);

// ---------------------------------------------------------------------------
// amplitude damping family: two atoms, each coupled to its own zero-
// temperature reservoir with a Lorentzian spectral density
// ---------------------------------------------------------------------------

struct ADParams {
    double gamma;   // system relaxation rate
    double lambda;  // coupling spectral width

    cx a() const;   // sqrt(1 - 2 gamma/lambda), imaginary when gamma/lambda > 1/2
    void validate() const;
};

// The excitation-amplitude pair (h1, h2) at time t.
std::pair<cx, cx> ad_h(double t, const ADParams& p);

// Reduced two-atom states at time t: the correlated-reservoir trajectory and
// the product-reservoir reference. Layout [2,2], basis (ee,eg,ge,gg).
StatePair ad_reduced_states(double t, const ADParams& p);

// Environment pair at t=0 in the effective single-excitation basis. Layout [2,2].
StatePair ad_env_states();

// ---------------------------------------------------------------------------
// photon dephasing family: polarization of two photons (system) dephased by
// their frequency degrees of freedom (environments)
// ---------------------------------------------------------------------------

struct PhotonParams {
    double omega0 = 1.0;  // center frequency
    double c11 = 1.0;     // frequency variance
    double corr = 0.0;    // K = C12/C11 in [-1,1]
    double dn = 1.0;      // refraction-index difference nV - nH
    cx a, b, c, d;        // |psi> = a|HH> + b|HV> + c|VH> + d|VV>

    void validate() const;
};

// Characteristic function G(tau1, tau2) of the joint Gaussian frequency
// distribution (cross term 2 K tau1 tau2).
cx photon_char_fn(double tau1, double tau2, const PhotonParams& p);

// Polarization state at time t (both interaction times equal t). Layout [2,2],
// basis (HH,HV,VH,VV).
DensityOperator photon_rho_s(double t, const PhotonParams& p);

// Trace-distance series on a grid of scaled times sqrt(C11)*dn*t. The first
// trajectory uses the correlated distribution; the second uses the factorized
// product of its marginals (K = 0).
witness::TraceSeries photon_scenario(double corr, const PhotonParams& psi1,
                                     const PhotonParams& psi2,
                                     const std::vector<double>& scaled_times);

// Total-variation distance between the correlated joint frequency distribution
// and the product of its marginals: the environment-correlation distance of
// the equivalent dephasing model. Exactly 1 when |K| = 1 (singular support).
double photon_env_bound(double corr);

// Direct quadrature of the characteristic-function integral over the Gaussian
// distribution; oracle for photon_char_fn.
cx photon_char_fn_quadrature(double tau1, double tau2, const PhotonParams& p,
                             int points = 601, double halfwidth_sigmas = 8.0);

// ---------------------------------------------------------------------------
// uniform scenario interface consumed by the runner
// ---------------------------------------------------------------------------

enum class BoundRegime { B5, B8, B9, B10 };

class ScenarioEngine {
public:
    virtual ~ScenarioEngine() = default;

    // reduced open-system pair at time t
    virtual StatePair system_pair(double t) const = 0;

    // bound chain evaluated from the t=0 data
    virtual witness::BoundSet bounds() const = 0;

    virtual BoundRegime regime() const = 0;

    // tripartite total states at time t, when the family tracks them
    virtual std::optional<StatePair> total_pair(double /*t*/) const { return std::nullopt; }

    // trace distance of the total states at time t, when defined; constant in t
    // for unitary total dynamics
    virtual std::optional<double> total_trace_distance(double /*t*/) const {
        return std::nullopt;
    }
};

double bound_for_regime(const witness::BoundSet& bs, BoundRegime r);

}  // namespace tw::models
