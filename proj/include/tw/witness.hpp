// witness.hpp
// Information-flow functionals and the bound hierarchy for tripartite
// open-system dynamics, plus the reference-state constructor and a
// growth-based witness verdict.

#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "tw/qmat.hpp"

namespace tw::witness {

using qmat::CMatrix;
using qmat::cx;
using qmat::DensityOperator;

// Time grid plus trace-distance values for one scenario.
struct TraceSeries {
    std::vector<double> times;
    std::vector<double> values;
    std::string label;

    void validate() const;  // equal lengths, strictly increasing times, values in [0,1]
};

// Evaluated right-hand sides of the bound chain with their named sub-terms.
//
//   b5  : env-state distance + both system-environment correlation distances
//   b8  : full tripartite chain (SE terms + BC correlation terms + B,C marginals)
//   b9  : b8 with the SE terms forced to zero; a valid bound only when the
//         SE correlations actually vanish (see b9_precondition_holds)
//   b10 : total correlation in the first environment pair alone; a valid bound
//         only when rho2_BC equals rho1_B x rho1_C (see b10_precondition_holds)
struct BoundSet {
    double b5 = 0;
    double b8 = 0;
    double b9 = 0;
    double b10 = 0;
    std::map<std::string, double> terms;
    bool b9_precondition_holds = false;
    bool b10_precondition_holds = false;
};

struct InfoSplit {
    double internal = 0;  // distance of the system marginals
    double external = 0;  // total minus internal
    double total = 0;     // distance of the full states
};

struct WitnessReport {
    double max_growth = 0;    // max over t of D(t) - D(0)
    double argmax_time = 0;
    double bound = 0;
    double tightness_gap = 0;  // bound - max_growth
    bool verdict = false;      // growth above threshold
};

// I(t) = D(t) - D(0) per grid point.
std::vector<double> info_change(const TraceSeries& series);

// sigma(t) by central finite differences, one-sided at the endpoints.
// Positive values mean information flowing back into the system.
std::vector<double> info_flow_rate(const TraceSeries& series);

// D(rho1_E, rho2_E) + sum_i D(rho_i_SE, rho_i_S x rho_i_E), environment = all
// factors other than system_factor.
double bound_bipartite(const DensityOperator& rho1_se, const DensityOperator& rho2_se,
                       int system_factor);

// Full bound chain for tripartite layouts (A,B,C), A = open system.
BoundSet bound_tripartite(const DensityOperator& rho1, const DensityOperator& rho2);

// Internal/external information split at one time.
InfoSplit internal_external(const DensityOperator& rho1_se_t, const DensityOperator& rho2_se_t,
                            int system_factor);

// Upper bound on the external information at time t (six-term RHS).
double external_info_bound(const DensityOperator& rho1_t, const DensityOperator& rho2_t);

// Lambda(rho1_A) x rho1_B x rho1_C for a trace-preserving channel on A.
// The result satisfies rho2_BC = rho1_B x rho1_C by construction.
DensityOperator build_reference_state(
    const DensityOperator& rho1,
    const std::function<DensityOperator(const DensityOperator&)>& channel_on_a);

// Growth of the series against a precomputed bound.
WitnessReport witness_verdict(const TraceSeries& series, double bound,
                              double growth_epsilon = 1e-6);

}  // namespace tw::witness
