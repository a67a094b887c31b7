// runner.hpp
// Scenario ingestion, execution, persistence, and verification: declarative
// JSON scenario configs drive the model families and the witness functionals
// over time grids; results land in CSV plus sidecar JSON metadata.

#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "tw/models.hpp"
#include "tw/witness.hpp"

namespace tw::runner {

using qmat::cx;

// Config document violates the scenario schema.
class SchemaError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct GridSpec {
    double t_start = 0;
    double t_end = 0;
    int points = 0;

    std::vector<double> times() const;
};

struct ScenarioSpec {
    std::string id;
    std::string family;     // gate | xx | jc | ad | photon
    std::string case_name;  // family-specific
    std::map<std::string, cx> params;
    GridSpec grid;
    std::vector<std::string> outputs;
    double tolerance = 1e-6;  // witness growth threshold
};

// Parses and validates a single JSON object; unknown keys are rejected,
// complex parameter values are accepted as [re, im] pairs.
ScenarioSpec load_scenario(const std::string& document);

// Canonical JSON echo of a spec (stable key order, used for hashing and metadata).
std::string scenario_to_json(const ScenarioSpec& spec);

struct RunRecord {
    ScenarioSpec spec;
    std::vector<double> times;
    // column name -> series, ordered as requested in the spec
    std::vector<std::pair<std::string, std::vector<double>>> columns;
    witness::BoundSet bound_set;
    models::BoundRegime regime = models::BoundRegime::B10;
    witness::WitnessReport report;
    std::string provenance_hash;
};

RunRecord run_scenario(const ScenarioSpec& spec);

struct OutputPaths {
    std::string csv;
    std::string meta;
};

// Writes <id>.csv and <id>.meta.json into dir; byte-deterministic.
OutputPaths write_outputs(const RunRecord& record, const std::string& dir);

// Scientific notation with 12 fractional digits and a minimal exponent field.
std::string format_sci(double v);

// built-in scenario catalog
std::vector<std::string> catalog_ids();
ScenarioSpec catalog_scenario(const std::string& id);
std::string describe(const std::string& id);       // spec JSON plus description
std::string describe_line(const std::string& id);  // one-line description

// scenario engine factory (exposed for the test suites)
std::unique_ptr<models::ScenarioEngine> make_engine(const ScenarioSpec& spec);

// ---------------------------------------------------------------------------
// verification battery
// ---------------------------------------------------------------------------

struct CheckResult {
    std::string name;
    double defect = 0;
    double threshold = 0;
    bool pass = false;
    std::string note;
};

struct VerificationReport {
    std::vector<CheckResult> checks;
    bool all_pass() const;
};

VerificationReport verify();

// individual checks, parameterized so tests can inject faults
using XXPropagatorFn = std::function<qmat::CMatrix(double, double, double)>;
CheckResult check_xx_propagator_oracle(const XXPropagatorFn& propagator);
CheckResult check_xx_single_excitation_coefficients();
CheckResult check_xx_two_excitation_coefficients();
CheckResult check_jc_manifold_unitarity();
CheckResult check_gate_closed_forms(models::GateKind kind);
CheckResult check_werner_distance();
CheckResult check_photon_char_fn_oracle();
CheckResult check_photon_cross_term_discrepancy();
CheckResult check_tripartite_bound_chain(int scenarios, unsigned seed);
CheckResult check_scenario_config_round_trip();

// strict local maxima after collapsing |delta| < 1e-12 plateaus
int count_local_maxima(const std::vector<double>& values);

int cli(int argc, const char* const* argv);

}  // namespace tw::runner
