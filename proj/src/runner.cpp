#include "tw/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"

namespace tw::models {

double bound_for_regime(const witness::BoundSet& bs, BoundRegime r) {
    switch (r) {
        case BoundRegime::B5: return bs.b5;
        case BoundRegime::B8: return bs.b8;
        case BoundRegime::B9: return bs.b9;
        case BoundRegime::B10: return bs.b10;
    }
    return bs.b8;
}

}  // namespace tw::models

namespace tw::runner {

using json = nlohmann::json;
using models::BoundRegime;
using models::ScenarioEngine;
using models::StatePair;
using qmat::CMatrix;
using qmat::DensityOperator;
using qmat::SubsystemLayout;
using witness::BoundSet;

std::vector<double> GridSpec::times() const {
    std::vector<double> t(points);
    const double step = (t_end - t_start) / (points - 1);
    for (int i = 0; i < points; ++i) t[i] = t_start + i * step;
    t.back() = t_end;
    return t;
}

// ---------------------------------------------------------------------------
// schema
// ---------------------------------------------------------------------------

namespace {

struct ParamRule {
    const char* name;
    bool allow_complex = false;
    bool integer = false;
    bool optional = false;
};

struct CaseRule {
    std::vector<ParamRule> params;
    bool totals_tracked = true;  // iInt/iExt available
};

const std::map<std::string, std::map<std::string, CaseRule>>& schema_catalog() {
    static const std::map<std::string, std::map<std::string, CaseRule>> cat = {
        {"gate",
         {{"pure_entangled",
           {{{"a", true}, {"b", true}, {"alpha", true}, {"beta", true}}, true}},
          {"classical_mixture",
           {{{"a", true}, {"b", true}, {"alpha", true}, {"beta", true}}, true}}}},
        {"xx",
         {{"werner_vs_product",
           {{{"alpha"}, {"J"}, {"B"}, {"f", true}, {"g", true}, {"l", true}, {"m", true}},
            true}},
          {"werner_vs_werner",
           {{{"alpha1"},
             {"alpha2"},
             {"J"},
             {"B"},
             {"f", true},
             {"g", true},
             {"l", true},
             {"m", true}},
            true}},
          {"werner_vs_classical",
           {{{"alpha"}, {"J"}, {"B"}, {"f", true}, {"g", true}, {"l", true}, {"m", true}},
            true}}}},
        {"jc",
         {{"entangled_vs_product",
           {{{"g"},
             {"Delta"},
             {"n", false, true},
             {"alpha", true},
             {"beta", true},
             {"nmax", false, true, true}},
            true}},
          {"entangled_vs_classical",
           {{{"g"},
             {"Delta"},
             {"n", false, true},
             {"alpha", true},
             {"beta", true},
             {"nmax", false, true, true}},
            true}},
          {"classical_vs_product",
           {{{"g"},
             {"Delta"},
             {"n", false, true},
             {"alpha", true},
             {"beta", true},
             {"nmax", false, true, true}},
            true}},
          {"coherent",
           {{{"g"}, {"Delta"}, {"beta", true}, {"nmax", false, true, true}}, true}}}},
        {"ad", {{"bell_vs_product", {{{"gamma"}, {"lambda"}}, false}}}},
        {"photon",
         {{"correlated_vs_uncorrelated",
           {{{"K"},
             {"C11"},
             {"omega0"},
             {"dn"},
             {"a1", true},
             {"b1", true},
             {"c1", true},
             {"d1", true},
             {"a2", true},
             {"b2", true},
             {"c2", true},
             {"d2", true}},
            false}}}}};
    return cat;
}

const std::set<std::string>& known_columns() {
    static const std::set<std::string> cols = {"D",      "sigma",  "I",      "bound5", "bound8",
                                               "bound9", "bound10", "iInt",  "iExt"};
    return cols;
}

cx parse_param_value(const std::string& name, const json& v) {
    if (v.is_number()) return cx(v.get<double>(), 0.0);
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
        return cx(v[0].get<double>(), v[1].get<double>());
    throw SchemaError("param '" + name + "': expected a number or a [re, im] pair");
}

const CaseRule& case_rule(const std::string& family, const std::string& case_name) {
    const auto& cat = schema_catalog();
    auto fit = cat.find(family);
    if (fit == cat.end()) throw SchemaError("unknown family '" + family + "'");
    auto cit = fit->second.find(case_name);
    if (cit == fit->second.end())
        throw SchemaError("unknown case '" + case_name + "' for family '" + family + "'");
    return cit->second;
}

void require_keys(const json& obj, const std::set<std::string>& required,
                  const std::set<std::string>& optional, const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!required.count(it.key()) && !optional.count(it.key()))
            throw SchemaError(where + ": unknown key '" + it.key() + "'");
    for (const auto& k : required)
        if (!obj.contains(k)) throw SchemaError(where + ": missing key '" + k + "'");
}

}  // namespace

ScenarioSpec load_scenario(const std::string& document) {
    json doc;
    try {
        doc = json::parse(document);
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("scenario config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw SchemaError("scenario config must be a single JSON object");

    require_keys(doc, {"id", "family", "case", "params", "grid", "outputs"}, {"tolerance"},
                 "scenario");

    ScenarioSpec spec;
    if (!doc["id"].is_string() || doc["id"].get<std::string>().empty())
        throw SchemaError("id: expected a non-empty string");
    spec.id = doc["id"].get<std::string>();
    if (!doc["family"].is_string()) throw SchemaError("family: expected a string");
    spec.family = doc["family"].get<std::string>();
    if (!doc["case"].is_string()) throw SchemaError("case: expected a string");
    spec.case_name = doc["case"].get<std::string>();

    const CaseRule& rule = case_rule(spec.family, spec.case_name);

    const json& params = doc["params"];
    if (!params.is_object()) throw SchemaError("params: expected an object");
    for (auto it = params.begin(); it != params.end(); ++it) {
        const auto match = std::find_if(rule.params.begin(), rule.params.end(),
                                        [&](const ParamRule& r) { return it.key() == r.name; });
        if (match == rule.params.end())
            throw SchemaError("params: unknown key '" + it.key() + "' for " + spec.family +
                              "/" + spec.case_name);
        const cx v = parse_param_value(it.key(), it.value());
        if (!match->allow_complex && v.imag() != 0.0)
            throw SchemaError("param '" + it.key() + "': expected a real number");
        if (match->integer && v.real() != std::floor(v.real()))
            throw SchemaError("param '" + it.key() + "': expected an integer");
        spec.params[it.key()] = v;
    }
    for (const auto& r : rule.params)
        if (!r.optional && !spec.params.count(r.name))
            throw SchemaError("params: missing key '" + std::string(r.name) + "' for " +
                              spec.family + "/" + spec.case_name);

    const json& grid = doc["grid"];
    if (!grid.is_object()) throw SchemaError("grid: expected an object");
    require_keys(grid, {"tStart", "tEnd", "points"}, {}, "grid");
    if (!grid["tStart"].is_number() || !grid["tEnd"].is_number())
        throw SchemaError("grid: tStart/tEnd must be numbers");
    if (!grid["points"].is_number_integer())
        throw SchemaError("grid: points must be an integer");
    spec.grid.t_start = grid["tStart"].get<double>();
    spec.grid.t_end = grid["tEnd"].get<double>();
    spec.grid.points = grid["points"].get<int>();
    if (spec.grid.points < 2) throw SchemaError("grid: needs at least 2 points");
    if (!(spec.grid.t_end > spec.grid.t_start))
        throw SchemaError("grid: tEnd must exceed tStart");

    const json& outputs = doc["outputs"];
    if (!outputs.is_array() || outputs.empty())
        throw SchemaError("outputs: expected a non-empty array of column names");
    std::set<std::string> seen;
    for (const auto& o : outputs) {
        if (!o.is_string()) throw SchemaError("outputs: entries must be strings");
        const std::string name = o.get<std::string>();
        if (!known_columns().count(name))
            throw SchemaError("outputs: unknown column '" + name + "'");
        if (!seen.insert(name).second)
            throw SchemaError("outputs: duplicate column '" + name + "'");
        if (!rule.totals_tracked && (name == "iInt" || name == "iExt"))
            throw SchemaError("outputs: column '" + name + "' is unavailable for family '" +
                              spec.family + "' (total state not tracked)");
        spec.outputs.push_back(name);
    }

    if (doc.contains("tolerance")) {
        if (!doc["tolerance"].is_number() || !(doc["tolerance"].get<double>() > 0))
            throw SchemaError("tolerance: expected a positive number");
        spec.tolerance = doc["tolerance"].get<double>();
    }
    return spec;
}

std::string scenario_to_json(const ScenarioSpec& spec) {
    json doc;
    doc["id"] = spec.id;
    doc["family"] = spec.family;
    doc["case"] = spec.case_name;
    json params = json::object();
    for (const auto& [k, v] : spec.params) {
        if (v.imag() == 0.0)
            params[k] = v.real();
        else
            params[k] = json::array({v.real(), v.imag()});
    }
    doc["params"] = params;
    doc["grid"] = {{"tStart", spec.grid.t_start},
                   {"tEnd", spec.grid.t_end},
                   {"points", spec.grid.points}};
    doc["outputs"] = spec.outputs;
    doc["tolerance"] = spec.tolerance;
    return doc.dump(2);
}

// ---------------------------------------------------------------------------
// scenario engines
// ---------------------------------------------------------------------------

namespace {

double need_real(const ScenarioSpec& s, const char* name) {
    return s.params.at(name).real();
}

cx need_cx(const ScenarioSpec& s, const char* name) { return s.params.at(name); }

int optional_int(const ScenarioSpec& s, const char* name, int fallback) {
    auto it = s.params.find(name);
    return it == s.params.end() ? fallback : static_cast<int>(it->second.real());
}

// gate and xx track the full tripartite state exactly
class TrackedEngine : public ScenarioEngine {
public:
    TrackedEngine(StatePair initial, BoundRegime regime)
        : initial_(std::move(initial)), regime_(regime) {}

    witness::BoundSet bounds() const override {
        return witness::bound_tripartite(initial_.first, initial_.second);
    }
    BoundRegime regime() const override { return regime_; }

    StatePair system_pair(double t) const override {
        auto tot = *total_pair(t);
        return {qmat::partial_trace(tot.first, {0}), qmat::partial_trace(tot.second, {0})};
    }
    std::optional<double> total_trace_distance(double t) const override {
        auto tot = *total_pair(t);
        return qmat::trace_distance(tot.first, tot.second);
    }

protected:
    StatePair initial_;
    BoundRegime regime_;
};

class GateEngine : public TrackedEngine {
public:
    GateEngine(const models::GateScenarioParams& p, BoundRegime regime)
        : TrackedEngine(tripartite(models::gate_scenario(p)), regime),
          unitary_(models::gate_unitary()) {}

    // the interaction is a single discrete gate: identity at the grid origin,
    // the full gate at any later time
    std::optional<StatePair> total_pair(double t) const override {
        if (t <= 0) return initial_;
        auto full1 = initial_.first.with_layout(SubsystemLayout{2, 2, 2, 2});
        auto full2 = initial_.second.with_layout(SubsystemLayout{2, 2, 2, 2});
        return StatePair{qmat::evolve(full1, unitary_).with_layout(SubsystemLayout{4, 2, 2}),
                         qmat::evolve(full2, unitary_).with_layout(SubsystemLayout{4, 2, 2})};
    }

private:
    static StatePair tripartite(StatePair p) {
        return {p.first.with_layout(SubsystemLayout{4, 2, 2}),
                p.second.with_layout(SubsystemLayout{4, 2, 2})};
    }
    CMatrix unitary_;
};

class XXEngine : public TrackedEngine {
public:
    XXEngine(models::XXCase c, const models::XXParams& p, BoundRegime regime)
        : TrackedEngine(models::xx_scenario(c, p), regime), exchange_(p.exchange),
          field_(p.field) {}

    std::optional<StatePair> total_pair(double t) const override {
        const CMatrix u = models::xx_propagator(exchange_, field_, t);
        return StatePair{qmat::evolve(initial_.first, u), qmat::evolve(initial_.second, u)};
    }

private:
    double exchange_, field_;
};

class JCEngine : public ScenarioEngine {
public:
    JCEngine(models::JCEnvCase env1, models::JCEnvCase env2, const models::JCParams& p,
             BoundRegime regime)
        : env1_(env1), env2_(env2), params_(p), regime_(regime) {
        const CMatrix sys = atoms_excited_projector();
        DensityOperator e1 = models::jc_env_state(env1_, params_);
        DensityOperator e2 = models::jc_env_state(env2_, params_);
        const SubsystemLayout layout{4, 2, 2};
        initial_ = std::make_unique<StatePair>(
            DensityOperator(qmat::tensor(sys, e1.mat()), layout),
            DensityOperator(qmat::tensor(sys, e2.mat()), layout));
        total_distance_ = qmat::trace_distance(initial_->first, initial_->second);
    }

    StatePair system_pair(double t) const override {
        return {models::jc_reduced_system(env1_, params_, t),
                models::jc_reduced_system(env2_, params_, t)};
    }
    witness::BoundSet bounds() const override {
        return witness::bound_tripartite(initial_->first, initial_->second);
    }
    BoundRegime regime() const override { return regime_; }

    // the total dynamics is unitary, so the full-state distance keeps its
    // initial value at all times
    std::optional<double> total_trace_distance(double) const override {
        return total_distance_;
    }

private:
    static CMatrix atoms_excited_projector() {
        CMatrix m(4);
        m(0, 0) = 1.0;  // |ee><ee| in basis (ee,eg,ge,gg)
        return m;
    }
    models::JCEnvCase env1_, env2_;
    models::JCParams params_;
    BoundRegime regime_;
    std::unique_ptr<StatePair> initial_;
    double total_distance_ = 0;
};

class ADEngine : public ScenarioEngine {
public:
    explicit ADEngine(const models::ADParams& p) : params_(p) {
        params_.validate();
        auto env = models::ad_env_states();
        CMatrix sys(4);
        sys(3, 3) = 1.0;  // both atoms start in |gg>
        const SubsystemLayout layout{4, 2, 2};
        initial_ = std::make_unique<StatePair>(
            DensityOperator(qmat::tensor(sys, env.first.mat()), layout),
            DensityOperator(qmat::tensor(sys, env.second.mat()), layout));
    }

    StatePair system_pair(double t) const override {
        return models::ad_reduced_states(t, params_);
    }
    witness::BoundSet bounds() const override {
        return witness::bound_tripartite(initial_->first, initial_->second);
    }
    BoundRegime regime() const override { return BoundRegime::B10; }

private:
    models::ADParams params_;
    std::unique_ptr<StatePair> initial_;
};

class PhotonEngine : public ScenarioEngine {
public:
    PhotonEngine(const models::PhotonParams& psi1, const models::PhotonParams& psi2)
        : p1_(psi1), p2_(psi2) {
        p2_.corr = 0.0;  // reference trajectory: factorized environment
        p1_.validate();
        p2_.validate();
        time_scale_ = std::sqrt(p1_.c11) * p1_.dn;
    }

    StatePair system_pair(double scaled_t) const override {
        const double t = scaled_t / time_scale_;
        return {models::photon_rho_s(t, p1_), models::photon_rho_s(t, p2_)};
    }

    // environments are continuous frequency distributions; the bound chain is
    // evaluated on the equivalent dephasing representation, where the joint
    // distribution plays the role of the environment state
    witness::BoundSet bounds() const override {
        witness::BoundSet bs;
        const double tv = models::photon_env_bound(p1_.corr);
        bs.b5 = bs.b8 = bs.b9 = bs.b10 = tv;
        bs.terms = {{"D_SE_1", 0.0}, {"D_SE_2", 0.0},      {"D_BC_corr_1", tv},
                    {"D_BC_corr_2", 0.0}, {"D_B", 0.0},    {"D_C", 0.0},
                    {"D_BC", tv}};
        bs.b9_precondition_holds = true;
        bs.b10_precondition_holds = true;
        return bs;
    }
    BoundRegime regime() const override { return BoundRegime::B10; }

private:
    models::PhotonParams p1_, p2_;
    double time_scale_ = 1;
};

}  // namespace

std::unique_ptr<ScenarioEngine> make_engine(const ScenarioSpec& spec) {
    case_rule(spec.family, spec.case_name);  // reject unknown combos early

    if (spec.family == "gate") {
        models::GateScenarioParams p;
        p.a = need_cx(spec, "a");
        p.b = need_cx(spec, "b");
        p.alpha = need_cx(spec, "alpha");
        p.beta = need_cx(spec, "beta");
        p.kind = spec.case_name == "pure_entangled" ? models::GateKind::PureEntangled
                                                    : models::GateKind::ClassicalMixture;
        return std::make_unique<GateEngine>(p, BoundRegime::B10);
    }
    if (spec.family == "xx") {
        models::XXParams p;
        p.exchange = need_real(spec, "J");
        p.field = need_real(spec, "B");
        p.f = need_cx(spec, "f");
        p.g = need_cx(spec, "g");
        p.l = need_cx(spec, "l");
        p.m = need_cx(spec, "m");
        models::XXCase c;
        BoundRegime regime;
        if (spec.case_name == "werner_vs_product") {
            c = models::XXCase::WernerVsProduct;
            p.alpha = need_real(spec, "alpha");
            regime = BoundRegime::B10;
        } else if (spec.case_name == "werner_vs_werner") {
            c = models::XXCase::WernerVsWerner;
            p.alpha1 = need_real(spec, "alpha1");
            p.alpha2 = need_real(spec, "alpha2");
            regime = BoundRegime::B8;
        } else {
            c = models::XXCase::WernerVsClassical;
            p.alpha = need_real(spec, "alpha");
            regime = BoundRegime::B8;
        }
        return std::make_unique<XXEngine>(c, p, regime);
    }
    if (spec.family == "jc") {
        models::JCParams p;
        p.coupling = need_real(spec, "g");
        p.detuning = need_real(spec, "Delta");
        p.nmax = optional_int(spec, "nmax", 0);
        if (spec.case_name == "coherent") {
            p.coherent_beta = need_cx(spec, "beta");
            return std::make_unique<JCEngine>(models::JCEnvCase::CoherentClassical,
                                              models::JCEnvCase::CoherentProduct, p,
                                              BoundRegime::B10);
        }
        p.n = optional_int(spec, "n", 1);
        p.alpha = need_cx(spec, "alpha");
        p.beta = need_cx(spec, "beta");
        if (spec.case_name == "entangled_vs_product")
            return std::make_unique<JCEngine>(models::JCEnvCase::EntangledFock,
                                              models::JCEnvCase::ProductFock, p,
                                              BoundRegime::B10);
        if (spec.case_name == "entangled_vs_classical")
            return std::make_unique<JCEngine>(models::JCEnvCase::EntangledFock,
                                              models::JCEnvCase::ClassicalFock, p,
                                              BoundRegime::B5);
        return std::make_unique<JCEngine>(models::JCEnvCase::ClassicalFock,
                                          models::JCEnvCase::ProductFock, p, BoundRegime::B10);
    }
    if (spec.family == "ad") {
        models::ADParams p{need_real(spec, "gamma"), need_real(spec, "lambda")};
        return std::make_unique<ADEngine>(p);
    }
    // photon
    models::PhotonParams p1, p2;
    p1.corr = need_real(spec, "K");
    p1.c11 = p2.c11 = need_real(spec, "C11");
    p1.omega0 = p2.omega0 = need_real(spec, "omega0");
    p1.dn = p2.dn = need_real(spec, "dn");
    p1.a = need_cx(spec, "a1");
    p1.b = need_cx(spec, "b1");
    p1.c = need_cx(spec, "c1");
    p1.d = need_cx(spec, "d1");
    p2.a = need_cx(spec, "a2");
    p2.b = need_cx(spec, "b2");
    p2.c = need_cx(spec, "c2");
    p2.d = need_cx(spec, "d2");
    return std::make_unique<PhotonEngine>(p1, p2);
}

// ---------------------------------------------------------------------------
// execution
// ---------------------------------------------------------------------------

namespace {

std::string fnv1a_hex(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace

RunRecord run_scenario(const ScenarioSpec& spec) {
    auto engine = make_engine(spec);

    RunRecord rec;
    rec.spec = spec;
    rec.times = spec.grid.times();
    rec.regime = engine->regime();
    rec.provenance_hash = fnv1a_hex(scenario_to_json(spec));

    witness::TraceSeries series;
    series.label = spec.id;
    series.times = rec.times;
    series.values.reserve(rec.times.size());
    std::vector<double> external;
    const bool want_external =
        std::find(spec.outputs.begin(), spec.outputs.end(), "iExt") != spec.outputs.end();
    for (double t : rec.times) {
        try {
            auto pair = engine->system_pair(t);
            series.values.push_back(qmat::trace_distance(pair.first, pair.second));
            if (want_external) {
                auto total = engine->total_trace_distance(t);
                if (!total)
                    throw SchemaError("iExt requested but the total state is not tracked");
                external.push_back(*total - series.values.back());
            }
        } catch (const SchemaError&) {
            throw;
        } catch (const std::exception& e) {
            throw std::runtime_error("scenario '" + spec.id + "' at t=" + std::to_string(t) +
                                     ": " + e.what());
        }
    }
    series.validate();
    rec.bound_set = engine->bounds();
    rec.report = witness::witness_verdict(
        series, models::bound_for_regime(rec.bound_set, rec.regime), spec.tolerance);

    for (const std::string& col : spec.outputs) {
        std::vector<double> values;
        if (col == "D" || col == "iInt") {
            values = series.values;
        } else if (col == "sigma") {
            values = witness::info_flow_rate(series);
        } else if (col == "I") {
            values = witness::info_change(series);
        } else if (col == "iExt") {
            values = external;
        } else {
            double b = 0;
            if (col == "bound5") b = rec.bound_set.b5;
            if (col == "bound8") b = rec.bound_set.b8;
            if (col == "bound9") b = rec.bound_set.b9;
            if (col == "bound10") b = rec.bound_set.b10;
            values.assign(rec.times.size(), b);
        }
        rec.columns.emplace_back(col, std::move(values));
    }
    return rec;
}

// ---------------------------------------------------------------------------
// persistence
// ---------------------------------------------------------------------------

std::string format_sci(double v) {
    if (v == 0.0) v = 0.0;  // collapse negative zero
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12e", v);
    const std::string s = buf;
    const auto epos = s.find('e');
    std::string mantissa = s.substr(0, epos);
    std::string exponent = s.substr(epos + 1);  // like "+01"
    const char sign = exponent[0];
    size_t k = 1;
    while (k + 1 < exponent.size() && exponent[k] == '0') ++k;
    return mantissa + "e" + sign + exponent.substr(k);
}

namespace {

json bound_set_to_json(const BoundSet& bs) {
    json terms = json::object();
    for (const auto& [k, v] : bs.terms) terms[k] = v;
    return {{"b5", bs.b5},
            {"b8", bs.b8},
            {"b9", bs.b9},
            {"b10", bs.b10},
            {"terms", terms},
            {"b9PreconditionHolds", bs.b9_precondition_holds},
            {"b10PreconditionHolds", bs.b10_precondition_holds}};
}

const char* regime_name(BoundRegime r) {
    switch (r) {
        case BoundRegime::B5: return "bound5";
        case BoundRegime::B8: return "bound8";
        case BoundRegime::B9: return "bound9";
        case BoundRegime::B10: return "bound10";
    }
    return "bound8";
}

}  // namespace

OutputPaths write_outputs(const RunRecord& rec, const std::string& dir) {
    namespace fs = std::filesystem;
    OutputPaths paths;
    try {
        fs::create_directories(dir);
        paths.csv = (fs::path(dir) / (rec.spec.id + ".csv")).string();
        paths.meta = (fs::path(dir) / (rec.spec.id + ".meta.json")).string();

        std::ofstream csv(paths.csv, std::ios::binary);
        if (!csv) throw std::runtime_error("cannot open for writing");
        csv << "t";
        for (const auto& [name, values] : rec.columns) csv << "," << name;
        csv << "\n";
        for (size_t i = 0; i < rec.times.size(); ++i) {
            csv << format_sci(rec.times[i]);
            for (const auto& [name, values] : rec.columns) csv << "," << format_sci(values[i]);
            csv << "\n";
        }
        if (!csv.good()) throw std::runtime_error("write failed");
        csv.close();

        json meta;
        meta["artifactVersion"] = "1.0.0";
        meta["spec"] = json::parse(scenario_to_json(rec.spec));
        meta["boundSet"] = bound_set_to_json(rec.bound_set);
        meta["witness"] = {{"maxGrowth", rec.report.max_growth},
                           {"argmaxTime", rec.report.argmax_time},
                           {"bound", rec.report.bound},
                           {"boundRegime", regime_name(rec.regime)},
                           {"tightnessGap", rec.report.tightness_gap},
                           {"verdict", rec.report.verdict}};
        meta["provenanceHash"] = rec.provenance_hash;
        std::ofstream mf(paths.meta, std::ios::binary);
        if (!mf) throw std::runtime_error("cannot open for writing");
        mf << meta.dump(2) << "\n";
        if (!mf.good()) throw std::runtime_error("write failed");
    } catch (const std::exception& e) {
        throw std::runtime_error("writing outputs under '" + dir + "': " + e.what());
    }
    return paths;
}

int count_local_maxima(const std::vector<double>& values) {
    std::vector<double> filtered;
    for (double v : values) {
        if (filtered.empty() || std::abs(v - filtered.back()) >= 1e-12) filtered.push_back(v);
    }
    int count = 0;
    for (size_t i = 1; i + 1 < filtered.size(); ++i)
        if (filtered[i] > filtered[i - 1] && filtered[i] > filtered[i + 1]) ++count;
    return count;
}

// ---------------------------------------------------------------------------
// verification battery
// ---------------------------------------------------------------------------

namespace {

cx random_amp(std::mt19937& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    return {g(rng), g(rng)};
}

CMatrix random_hermitian(int dim, std::mt19937& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    CMatrix h(dim);
    for (int i = 0; i < dim; ++i) {
        h(i, i) = g(rng);
        for (int j = i + 1; j < dim; ++j) {
            const cx v = random_amp(rng);
            h(i, j) = v;
            h(j, i) = std::conj(v);
        }
    }
    return h;
}

DensityOperator random_density(const SubsystemLayout& layout, std::mt19937& rng) {
    const int dim = layout.total_dim();
    std::uniform_real_distribution<double> u(0.1, 1.0);
    const int terms = 3;
    double weights[terms];
    double wsum = 0;
    for (double& w : weights) {
        w = u(rng);
        wsum += w;
    }
    CMatrix m(dim);
    for (int k = 0; k < terms; ++k) {
        std::vector<cx> ket(dim);
        double n2 = 0;
        for (auto& a : ket) {
            a = random_amp(rng);
            n2 += std::norm(a);
        }
        const double scale = weights[k] / (wsum * n2);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) m(i, j) += scale * ket[i] * std::conj(ket[j]);
    }
    return DensityOperator(std::move(m), layout);
}

}  // namespace

CheckResult check_xx_propagator_oracle(const XXPropagatorFn& propagator) {
    CheckResult r{"xx_propagator_vs_spectral_oracle", 0, 1e-9, false,
                  "closed-form propagator against exp(-iHt) from the eigensolver"};
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> tdist(0.0, 20.0);
    for (auto [j, b] : {std::pair{1.0, 1.0}, {0.7, 1.3}}) {
        const CMatrix h = models::xx_hamiltonian(j, b);
        for (int k = 0; k < 50; ++k) {
            const double t = tdist(rng);
            r.defect = std::max(
                r.defect, qmat::max_abs_diff(propagator(j, b, t), qmat::hermitian_propagator(h, t)));
        }
    }
    r.pass = r.defect <= r.threshold;
    return r;
}

CheckResult check_xx_single_excitation_coefficients() {
    CheckResult r{"xx_one_excitation_coefficients", 0, 1e-10, false,
                  "closed-form amplitudes in the one-excitation sector"};
    std::mt19937 rng(777);
    const double j = 1.0, b = 1.0;
    for (int trial = 0; trial < 20; ++trial) {
        cx al = random_amp(rng), be = random_amp(rng), ga = random_amp(rng);
        const double n = std::sqrt(std::norm(al) + std::norm(be) + std::norm(ga));
        al /= n;
        be /= n;
        ga /= n;
        std::uniform_real_distribution<double> tdist(0.0, 20.0);
        const double t = tdist(rng);
        const CMatrix u = models::xx_propagator(j, b, t);
        // basis indices |001>=1, |010>=2, |100>=4
        cx out[8] = {};
        for (int i = 0; i < 8; ++i)
            out[i] = u(i, 1) * al + u(i, 2) * be + u(i, 4) * ga;
        const cx k = std::exp(cx(0, -t * (2 * j - b))) * (al + be + ga);
        const cx ph = std::exp(cx(0, t * (j + b)));
        const cx want_a = (ph * (2.0 * al - be - ga) + k) / 3.0;
        const cx want_b = (ph * (2.0 * be - al - ga) + k) / 3.0;
        const cx want_c = (ph * (2.0 * ga - al - be) + k) / 3.0;
        r.defect = std::max({r.defect, std::abs(out[1] - want_a), std::abs(out[2] - want_b),
                             std::abs(out[4] - want_c)});
    }
    r.pass = r.defect <= r.threshold;
    return r;
}

CheckResult check_xx_two_excitation_coefficients() {
    CheckResult r{"xx_two_excitation_coefficients", 0, 1e-10, false,
                  "closed-form amplitudes in the two-excitation sector"};
    std::mt19937 rng(778);
    const double j = 1.0, b = 1.0;
    for (int trial = 0; trial < 20; ++trial) {
        cx al = random_amp(rng), be = random_amp(rng), ga = random_amp(rng);
        const double n = std::sqrt(std::norm(al) + std::norm(be) + std::norm(ga));
        al /= n;
        be /= n;
        ga /= n;
        std::uniform_real_distribution<double> tdist(0.0, 20.0);
        const double t = tdist(rng);
        const CMatrix u = models::xx_propagator(j, b, t);
        // basis indices |110>=6, |101>=5, |011>=3
        cx out[8] = {};
        for (int i = 0; i < 8; ++i)
            out[i] = u(i, 6) * al + u(i, 5) * be + u(i, 3) * ga;
        const cx z = std::exp(cx(0, -t * (2 * j + b))) * (al + be + ga);
        const cx ph = std::exp(cx(0, -t * (-j + b)));
        const cx want_a = (ph * (2.0 * al - be - ga) + z) / 3.0;
        const cx want_b = (ph * (2.0 * be - al - ga) + z) / 3.0;
        const cx want_c = (ph * (2.0 * ga - al - be) + z) / 3.0;
        r.defect = std::max({r.defect, std::abs(out[6] - want_a), std::abs(out[5] - want_b),
                             std::abs(out[3] - want_c)});
    }
    r.pass = r.defect <= r.threshold;
    return r;
}

CheckResult check_jc_manifold_unitarity() {
    CheckResult r{"jc_manifold_unitarity", 0, 1e-12, false,
                  "2x2 excitation-manifold blocks of the propagator"};
    for (auto [g, delta] : {std::pair{1.0, 0.0}, {1.0, 0.1}, {0.7, 1.3}}) {
        for (int n : {0, 1, 2, 7, 20, 60}) {
            for (double t : {0.3, 1.7, 5.0, 12.3}) {
                const int nmax = n + 2;
                models::JCAmps e_state;
                e_state.excited.assign(nmax + 1, 0);
                e_state.ground.assign(nmax + 1, 0);
                e_state.excited[n] = 1.0;
                models::JCAmps g_state = e_state;
                g_state.excited[n] = 0.0;
                g_state.ground[n + 1] = 1.0;
                const auto col1 = models::jc_apply_propagator(e_state, g, delta, t);
                const auto col2 = models::jc_apply_propagator(g_state, g, delta, t);
                CMatrix block(2);
                block(0, 0) = col1.excited[n];
                block(1, 0) = col1.ground[n + 1];
                block(0, 1) = col2.excited[n];
                block(1, 1) = col2.ground[n + 1];
                r.defect = std::max(r.defect, qmat::unitarity_defect(block));
            }
        }
    }
    r.pass = r.defect <= r.threshold;
    return r;
}

CheckResult check_gate_closed_forms(models::GateKind kind) {
    const bool pure = kind == models::GateKind::PureEntangled;
    CheckResult r{pure ? "gate_pure_closed_form" : "gate_classical_closed_form", 0, 1e-12,
                  false,
                  pure ? "post-gate distance and environment correlation both |ab|^2+|ab|"
                       : "post-gate distance and environment correlation both 2|ab|^2"};
    const CMatrix u = models::gate_unitary();
    for (int ia = 1; ia <= 9; ++ia) {
        for (int ie = 1; ie <= 9; ++ie) {
            models::GateScenarioParams p;
            const double a = 0.1 * ia, alpha = 0.1 * ie;
            p.a = a;
            p.b = std::sqrt(1.0 - a * a);
            p.alpha = alpha;
            p.beta = std::sqrt(1.0 - alpha * alpha);
            p.kind = kind;
            auto [rho1, rho2] = models::gate_scenario(p);
            const double ab = alpha * std::sqrt(1.0 - alpha * alpha);
            const double expected = pure ? ab * ab + ab : 2.0 * ab * ab;

            auto evolved1 = qmat::evolve(rho1, u);
            auto evolved2 = qmat::evolve(rho2, u);
            const double d = qmat::trace_distance(qmat::partial_trace(evolved1, {0, 1}),
                                                  qmat::partial_trace(evolved2, {0, 1}));
            r.defect = std::max(r.defect, std::abs(d - expected));

            auto env = qmat::partial_trace(rho1, {2, 3});
            const double denv = qmat::trace_distance(env, qmat::product_of_marginals(env, 0));
            r.defect = std::max(r.defect, std::abs(denv - expected));
        }
    }
    r.pass = r.defect <= r.threshold;
    return r;
}

CheckResult check_werner_distance() {
    CheckResult r{"werner_pair_distance", 0, 1e-12, false,
                  "D(W(a1), W(a2)) = (3/4)|a1-a2|"};
    models::XXParams p;
    p.f = p.g = 1.0 / std::sqrt(2.0);
    p.l = p.m = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < 10; ++i) {
        p.alpha1 = 0.1 * i;
        p.alpha2 = 1.0 - 0.07 * i;
        auto [rho1, rho2] = models::xx_scenario(models::XXCase::WernerVsWerner, p);
        const double d = qmat::trace_distance(qmat::partial_trace(rho1, {1, 2}),
                                              qmat::partial_trace(rho2, {1, 2}));
        r.defect = std::max(r.defect, std::abs(d - 0.75 * std::abs(p.alpha1 - p.alpha2)));
    }
    r.pass = r.defect <= r.threshold;
    return r;
}

CheckResult check_photon_char_fn_oracle() {
    CheckResult r{"photon_char_fn_vs_quadrature", 0, 1e-6, false,
                  "Gaussian characteristic function against 2-D quadrature"};
    models::PhotonParams p;
    p.c11 = 1.0;
    p.corr = -0.95;
    p.omega0 = 1.0;
    p.a = p.d = 1.0 / std::sqrt(2.0);
    for (auto [t1, t2] : {std::pair{0.0, 0.0}, {0.7, 0.0}, {0.0, 1.3}, {0.9, 0.9},
                          {1.5, -1.5}, {2.0, 1.0}}) {
        const cx direct = models::photon_char_fn(t1, t2, p);
        const cx quad = models::photon_char_fn_quadrature(t1, t2, p);
        r.defect = std::max(r.defect, std::abs(direct - quad));
    }
    r.pass = r.defect <= r.threshold;
    return r;
}

CheckResult check_photon_cross_term_discrepancy() {
    CheckResult r{"photon_cross_term_discrepancy", 0, 1e-6, false, ""};
    models::PhotonParams p;
    p.c11 = 1.0;
    p.corr = -0.95;
    p.omega0 = 1.0;
    p.a = p.d = 1.0 / std::sqrt(2.0);
    const double t1 = 1.5, t2 = 1.5;
    const cx quad = models::photon_char_fn_quadrature(t1, t2, p);
    const double gaussian_defect = std::abs(models::photon_char_fn(t1, t2, p) - quad);
    // the variant with the quartic cross term K tau1^2 tau2^2
    const double quartic =
        t1 * t1 + t2 * t2 + p.corr * t1 * t1 * t2 * t2;
    const double printed_mod = std::exp(-0.5 * p.c11 * quartic);
    const double printed_defect = std::abs(printed_mod - std::abs(quad));
    r.defect = gaussian_defect;
    r.pass = gaussian_defect <= r.threshold && printed_defect > 1e-3;
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "quartic cross-term variant misses quadrature by %.3e (and is unbounded for "
                  "K<0); quadratic form matches to %.3e",
                  printed_defect, gaussian_defect);
    r.note = buf;
    return r;
}

CheckResult check_scenario_config_round_trip() {
    CheckResult r{"scenario_config_round_trip", 0, 0.5, false,
                  "canonical JSON of every catalog spec reloads to itself"};
    double mismatches = 0;
    for (const auto& id : catalog_ids()) {
        const ScenarioSpec spec = catalog_scenario(id);
        const std::string canon = scenario_to_json(spec);
        if (scenario_to_json(load_scenario(canon)) != canon) mismatches += 1;
    }
    r.defect = mismatches;
    r.pass = mismatches == 0;
    return r;
}

CheckResult check_tripartite_bound_chain(int scenarios, unsigned seed) {
    CheckResult r{"tripartite_bound_chain_randomized", -1.0, 1e-9, false,
                  "distance growth against the bound chain on random scenarios"};
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> tdist(0.1, 4.0);
    const SubsystemLayout layout{2, 2, 2};
    double worst = -1.0;
    for (int k = 0; k < scenarios; ++k) {
        const int variant = k % 3;
        DensityOperator rho1 = random_density(layout, rng);
        DensityOperator rho2 = random_density(layout, rng);
        if (variant >= 1) {
            // vanishing system-environment correlations: A x BC products
            auto a1 = random_density(SubsystemLayout{2}, rng);
            auto bc1 = random_density(SubsystemLayout{2, 2}, rng);
            rho1 = DensityOperator(qmat::tensor(a1.mat(), bc1.mat()), layout);
            if (variant == 1) {
                auto a2 = random_density(SubsystemLayout{2}, rng);
                auto bc2 = random_density(SubsystemLayout{2, 2}, rng);
                rho2 = DensityOperator(qmat::tensor(a2.mat(), bc2.mat()), layout);
            } else {
                // reference construction: rho2_BC = rho1_B x rho1_C
                auto a2 = random_density(SubsystemLayout{2}, rng);
                rho2 = witness::build_reference_state(
                    rho1, [&](const DensityOperator&) { return a2; });
            }
        }
        const auto bs = witness::bound_tripartite(rho1, rho2);
        const CMatrix u = qmat::hermitian_propagator(random_hermitian(8, rng), tdist(rng));
        const double d0 = qmat::trace_distance(qmat::partial_trace(rho1, {0}),
                                               qmat::partial_trace(rho2, {0}));
        const double dt = qmat::trace_distance(qmat::partial_trace(qmat::evolve(rho1, u), {0}),
                                               qmat::partial_trace(qmat::evolve(rho2, u), {0}));
        const double growth = dt - d0;
        worst = std::max(worst, growth - bs.b8);
        if (variant >= 1) worst = std::max(worst, growth - bs.b9);
        if (variant == 2) worst = std::max(worst, growth - bs.b10);
    }
    r.defect = worst;
    r.pass = worst <= r.threshold;
    return r;
}

bool VerificationReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const CheckResult& c) { return c.pass; });
}

VerificationReport verify() {
    VerificationReport rep;
    rep.checks.push_back(check_xx_propagator_oracle(
        [](double j, double b, double t) { return models::xx_propagator(j, b, t); }));
    rep.checks.push_back(check_xx_single_excitation_coefficients());
    rep.checks.push_back(check_xx_two_excitation_coefficients());
    rep.checks.push_back(check_jc_manifold_unitarity());
    rep.checks.push_back(check_gate_closed_forms(models::GateKind::PureEntangled));
    rep.checks.push_back(check_gate_closed_forms(models::GateKind::ClassicalMixture));
    rep.checks.push_back(check_werner_distance());
    rep.checks.push_back(check_photon_char_fn_oracle());
    rep.checks.push_back(check_photon_cross_term_discrepancy());
    rep.checks.push_back(check_tripartite_bound_chain(200, 20240229));
    rep.checks.push_back(check_scenario_config_round_trip());
    return rep;
}

// ---------------------------------------------------------------------------
// command-line interface
// ---------------------------------------------------------------------------

namespace {

void print_usage(std::ostream& os) {
    os << "usage: tracewitness <command> [args]\n"
          "\n"
          "commands:\n"
          "  run <config-file-or-id> [--out DIR]   run a scenario, write CSV + metadata\n"
          "  list-scenarios                        print the built-in scenario catalog\n"
          "  describe <id>                         print a catalog scenario spec\n"
          "  verify [--json]                       run the oracle battery\n";
}

int cmd_run(const std::vector<std::string>& args) {
    std::string source;
    std::string outdir = "./out";
    for (size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--out") {
            if (i + 1 >= args.size()) {
                std::cerr << "run: --out needs a directory\n";
                return 1;
            }
            outdir = args[++i];
        } else if (source.empty()) {
            source = args[i];
        } else {
            std::cerr << "run: unexpected argument '" << args[i] << "'\n";
            return 1;
        }
    }
    if (source.empty()) {
        std::cerr << "run: missing scenario config file or catalog id\n";
        return 1;
    }
    try {
        ScenarioSpec spec;
        if (std::filesystem::exists(source)) {
            std::ifstream in(source, std::ios::binary);
            if (!in) throw std::runtime_error("cannot read '" + source + "'");
            std::ostringstream buf;
            buf << in.rdbuf();
            spec = load_scenario(buf.str());
        } else {
            const auto ids = catalog_ids();
            if (std::find(ids.begin(), ids.end(), source) == ids.end())
                throw SchemaError("'" + source + "' is neither a readable file nor a catalog id");
            spec = catalog_scenario(source);
        }
        const RunRecord rec = run_scenario(spec);
        const OutputPaths paths = write_outputs(rec, outdir);
        std::cout << "wrote " << paths.csv << "\n";
        std::cout << "wrote " << paths.meta << "\n";
        std::cout << "witness verdict: " << (rec.report.verdict ? "true" : "false")
                  << "  max growth " << format_sci(rec.report.max_growth) << "  bound "
                  << format_sci(rec.report.bound) << "\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

int cmd_verify(const std::vector<std::string>& args) {
    bool as_json = false;
    for (const auto& a : args) {
        if (a == "--json") {
            as_json = true;
        } else {
            std::cerr << "verify: unexpected argument '" << a << "'\n";
            return 1;
        }
    }
    const VerificationReport rep = verify();
    if (as_json) {
        json out = json::array();
        for (const auto& c : rep.checks)
            out.push_back({{"name", c.name},
                           {"defect", c.defect},
                           {"threshold", c.threshold},
                           {"pass", c.pass},
                           {"note", c.note}});
        std::cout << out.dump(2) << "\n";
    } else {
        for (const auto& c : rep.checks) {
            std::printf("%-38s %s  defect %.3e (threshold %.0e)\n", c.name.c_str(),
                        c.pass ? "PASS" : "FAIL", c.defect, c.threshold);
            if (!c.note.empty()) std::printf("%-38s   %s\n", "", c.note.c_str());
        }
        std::printf("%zu checks, %s\n", rep.checks.size(),
                    rep.all_pass() ? "all passed" : "FAILURES PRESENT");
    }
    return rep.all_pass() ? 0 : 2;
}

}  // namespace

int cli(int argc, const char* const* argv) {
    if (argc < 2) {
        print_usage(std::cerr);
        return 1;
    }
    const std::string cmd = argv[1];
    std::vector<std::string> args(argv + 2, argv + argc);

    if (cmd == "run") return cmd_run(args);
    if (cmd == "list-scenarios") {
        for (const auto& id : catalog_ids()) std::cout << id << "  " << describe_line(id) << "\n";
        return 0;
    }
    if (cmd == "describe") {
        if (args.size() != 1) {
            std::cerr << "describe: expected exactly one catalog id\n";
            return 1;
        }
        try {
            std::cout << describe(args[0]) << "\n";
            return 0;
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 1;
        }
    }
    if (cmd == "verify") return cmd_verify(args);

    std::cerr << "unknown command '" << cmd << "'\n";
    print_usage(std::cerr);
    return 1;
}

}  // namespace tw::runner
