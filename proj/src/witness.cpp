#include "tw/witness.hpp"

#include <algorithm>
#include <cmath>

namespace tw::witness {

using qmat::ContractViolation;
using qmat::DimensionError;
using qmat::max_abs_diff;
using qmat::partial_trace;
using qmat::product_of_marginals;
using qmat::SubsystemLayout;
using qmat::tensor;
using qmat::trace_distance;

void TraceSeries::validate() const {
    if (times.size() != values.size())
        throw DimensionError("trace series: times/values length mismatch");
    if (times.empty()) throw DimensionError("trace series: empty");
    for (size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1]))
            throw ContractViolation("trace series: times must be strictly increasing");
    for (double v : values)
        if (!(v >= -1e-12 && v <= 1.0 + 1e-12))
            throw ContractViolation("trace series: value outside [0,1]");
}

std::vector<double> info_change(const TraceSeries& series) {
    series.validate();
    std::vector<double> out(series.values.size());
    for (size_t i = 0; i < out.size(); ++i) out[i] = series.values[i] - series.values[0];
    return out;
}

std::vector<double> info_flow_rate(const TraceSeries& series) {
    series.validate();
    const auto& t = series.times;
    const auto& d = series.values;
    const size_t n = t.size();
    if (n < 2) throw DimensionError("info_flow_rate: need at least two grid points");
    std::vector<double> out(n);
    out[0] = (d[1] - d[0]) / (t[1] - t[0]);
    out[n - 1] = (d[n - 1] - d[n - 2]) / (t[n - 1] - t[n - 2]);
    for (size_t i = 1; i + 1 < n; ++i) out[i] = (d[i + 1] - d[i - 1]) / (t[i + 1] - t[i - 1]);
    return out;
}

double bound_bipartite(const DensityOperator& rho1_se, const DensityOperator& rho2_se,
                       int system_factor) {
    if (!(rho1_se.layout() == rho2_se.layout()))
        throw DimensionError("bound_bipartite: layout mismatch");
    const int nf = static_cast<int>(rho1_se.layout().factors());
    if (system_factor < 0 || system_factor >= nf)
        throw DimensionError("bound_bipartite: system factor out of range");
    if (nf < 2) throw DimensionError("bound_bipartite: need a system and an environment part");

    std::vector<int> env;
    for (int f = 0; f < nf; ++f)
        if (f != system_factor) env.push_back(f);

    double b = trace_distance(partial_trace(rho1_se, env), partial_trace(rho2_se, env));
    b += trace_distance(rho1_se, product_of_marginals(rho1_se, system_factor));
    b += trace_distance(rho2_se, product_of_marginals(rho2_se, system_factor));
    return b;
}

namespace {

// D(rho_BC, rho_B x rho_C) for a two-factor state
double correlation_distance(const DensityOperator& rho_bc) {
    return trace_distance(rho_bc, product_of_marginals(rho_bc, 0));
}

}  // namespace

BoundSet bound_tripartite(const DensityOperator& rho1, const DensityOperator& rho2) {
    if (!(rho1.layout() == rho2.layout()))
        throw DimensionError("bound_tripartite: layout mismatch");
    if (rho1.layout().factors() != 3)
        throw DimensionError("bound_tripartite: layout must have exactly three factors");

    const auto bc1 = partial_trace(rho1, {1, 2});
    const auto bc2 = partial_trace(rho2, {1, 2});
    const auto b1 = partial_trace(rho1, {1});
    const auto b2 = partial_trace(rho2, {1});
    const auto c1 = partial_trace(rho1, {2});
    const auto c2 = partial_trace(rho2, {2});

    const double d_se_1 = trace_distance(rho1, product_of_marginals(rho1, 0));
    const double d_se_2 = trace_distance(rho2, product_of_marginals(rho2, 0));
    const double d_bc_corr_1 = correlation_distance(bc1);
    const double d_bc_corr_2 = correlation_distance(bc2);
    const double d_b = trace_distance(b1, b2);
    const double d_c = trace_distance(c1, c2);
    const double d_bc = trace_distance(bc1, bc2);

    BoundSet bs;
    bs.terms = {{"D_SE_1", d_se_1},           {"D_SE_2", d_se_2},
                {"D_BC_corr_1", d_bc_corr_1}, {"D_BC_corr_2", d_bc_corr_2},
                {"D_B", d_b},                 {"D_C", d_c},
                {"D_BC", d_bc}};
    bs.b5 = d_bc + d_se_1 + d_se_2;
    bs.b8 = d_se_1 + d_se_2 + d_bc_corr_1 + d_bc_corr_2 + d_b + d_c;
    bs.b9 = d_bc_corr_1 + d_bc_corr_2 + d_b + d_c;
    bs.b10 = d_bc_corr_1;
    bs.b9_precondition_holds = (d_se_1 <= 1e-10 && d_se_2 <= 1e-10);
    CMatrix ref = tensor(b1.mat(), c1.mat());
    bs.b10_precondition_holds =
        bs.b9_precondition_holds && max_abs_diff(bc2.mat(), ref) <= 1e-10;
    return bs;
}

InfoSplit internal_external(const DensityOperator& rho1_se_t, const DensityOperator& rho2_se_t,
                            int system_factor) {
    if (!(rho1_se_t.layout() == rho2_se_t.layout()))
        throw DimensionError("internal_external: layout mismatch");
    InfoSplit split;
    split.internal = trace_distance(partial_trace(rho1_se_t, {system_factor}),
                                    partial_trace(rho2_se_t, {system_factor}));
    split.total = trace_distance(rho1_se_t, rho2_se_t);
    split.external = split.total - split.internal;
    return split;
}

double external_info_bound(const DensityOperator& rho1_t, const DensityOperator& rho2_t) {
    if (!(rho1_t.layout() == rho2_t.layout()))
        throw DimensionError("external_info_bound: layout mismatch");
    if (rho1_t.layout().factors() != 3)
        throw DimensionError("external_info_bound: layout must have exactly three factors");

    double b = 0;
    for (const DensityOperator* rho : {&rho1_t, &rho2_t}) {
        b += trace_distance(*rho, product_of_marginals(*rho, 0));
        b += correlation_distance(partial_trace(*rho, {1, 2}));
    }
    b += trace_distance(partial_trace(rho1_t, {1}), partial_trace(rho2_t, {1}));
    b += trace_distance(partial_trace(rho1_t, {2}), partial_trace(rho2_t, {2}));
    return b;
}

DensityOperator build_reference_state(
    const DensityOperator& rho1,
    const std::function<DensityOperator(const DensityOperator&)>& channel_on_a) {
    if (rho1.layout().factors() != 3)
        throw DimensionError("build_reference_state: layout must have exactly three factors");

    const auto a1 = partial_trace(rho1, {0});
    const auto mapped = channel_on_a(a1);
    if (mapped.dim() != a1.dim())
        throw DimensionError("build_reference_state: channel changed the system dimension");
    if (std::abs(mapped.mat().trace() - cx(1.0)) > 1e-10)
        throw ContractViolation("build_reference_state: channel is not trace-preserving");

    const auto b1 = partial_trace(rho1, {1});
    const auto c1 = partial_trace(rho1, {2});
    CMatrix out = tensor(mapped.mat(), tensor(b1.mat(), c1.mat()));
    return DensityOperator(std::move(out), rho1.layout(), rho1.herm_tol());
}

WitnessReport witness_verdict(const TraceSeries& series, double bound, double growth_epsilon) {
    series.validate();
    if (bound < 0) throw ContractViolation("witness_verdict: bound must be non-negative");
    if (!(growth_epsilon > 0))
        throw ContractViolation("witness_verdict: growth threshold must be positive");

    WitnessReport rep;
    rep.bound = bound;
    const double d0 = series.values[0];
    rep.max_growth = 0;
    rep.argmax_time = series.times[0];
    for (size_t i = 0; i < series.values.size(); ++i) {
        const double g = series.values[i] - d0;
        if (g > rep.max_growth) {
            rep.max_growth = g;
            rep.argmax_time = series.times[i];
        }
    }
    rep.tightness_gap = bound - rep.max_growth;
    rep.verdict = rep.max_growth > growth_epsilon;
    return rep;
}

}  // namespace tw::witness
