// scenario.hpp - sweep scenarios: parameter sets, grids, requested quantities, validation
//
// A scenario is evaluated once per case (a named set of parameter overrides;
// a scenario without cases has a single implicit one). Scalar quantities are
// evaluated on every point of the sweep grid. Curve quantities depend on the
// emitter alone, so they are evaluated once per case on a delay grid, and the
// sweep axes of such a scenario are restricted to sensor parameters.

#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "shelvesim/correlations.hpp"

namespace shelvesim::sweep {

inline constexpr int kSchemaVersion = 1;

std::string_view toolkit_version();

enum class ModelFamily { lambda, rb87, cavity };

std::string_view to_string(ModelFamily m);
std::optional<ModelFamily> parse_model(std::string_view s);

// Names accepted in `fixed`, case overrides and sweep axes.
const std::vector<std::string>& parameter_names(ModelFamily m);
// Emitter parameters (the rest belong to the sensor).
bool is_emitter_parameter(ModelFamily m, std::string_view name);

enum class GridKind { log, linear };

struct GridSpec {
    GridKind kind = GridKind::log;
    double min = 0.0;
    double max = 0.0;
    int count = 1;

    std::vector<double> values() const;
};

struct SweepAxis {
    std::string parameter;
    GridSpec grid;
};

enum class QuantityKind {
    gn,           // filtered g^(N)(0), scalar
    rho_ee,       // steady excitation of the bare emitter, scalar
    quality,      // Q = g^(2)(0) * rho_ee, scalar
    g2_sigma,     // frequency-blind g2(tau), curve
    conditional,  // rho_ee^c(tau), curve
    g2_weak,      // weak-drive closed form of g2(tau), curve (Lambda emitter only)
};

struct Quantity {
    QuantityKind kind = QuantityKind::gn;
    int order = 2;  // gn only

    bool is_curve() const;
    // CSV column name of the main value: g2, g3, rho_ee, Q, g2_sigma, ...
    std::string column() const;
    friend bool operator==(const Quantity&, const Quantity&) = default;
};

struct Case {
    std::string label;
    std::map<std::string, double> params;
};

struct SolverOverrides {
    std::optional<double> g_c;  // filter semantics only
    std::optional<int> n_max;
    std::optional<int> nmax_ceiling;
};

struct Scenario {
    std::string name;
    std::string description;
    ModelFamily model = ModelFamily::lambda;
    std::map<std::string, double> fixed;
    std::vector<Case> cases;
    std::vector<SweepAxis> axes;
    std::vector<Quantity> quantities;
    // Delay grid of curve quantities; default_tau_grid of each case when unset.
    std::optional<GridSpec> tau_grid;
    // Size of the default delay grid.
    int tau_points = 400;
    SolverOverrides solver;

    bool has_curves() const;
    bool has_scalars() const;
};

// All schema violations of a scenario, reported together.
class ScenarioError : public std::invalid_argument {
public:
    explicit ScenarioError(std::vector<std::string> problems);
    const std::vector<std::string>& problems() const { return problems_; }

private:
    std::vector<std::string> problems_;
};

// Every violation found, empty when the scenario is valid.
std::vector<std::string> validation_problems(const Scenario& s);
// Throws ScenarioError listing every violation.
void validate(const Scenario& s);

Scenario scenario_from_json(std::string_view text);
std::string scenario_to_json(const Scenario& s);

// Embedded presets, one per figure panel group.
const std::vector<std::string>& preset_names();
std::optional<Scenario> find_preset(std::string_view name);

// Preset name or path of a JSON scenario file. Throws ScenarioError on schema
// violations and std::runtime_error when the file cannot be read.
Scenario load_scenario(const std::string& name_or_path);

// Same scenario with every grid clamped to at most max_count points
// (endpoints kept), for previews and smoke tests.
Scenario coarsen(const Scenario& s, int max_count);

// Parameters of one evaluation point, resolved from fixed values, the case
// overrides and the axis values.
struct PointParameters {
    correlations::EmitterParams emitter;
    models::SensorConfig sensor;
};

PointParameters resolve_parameters(const Scenario& s, const std::map<std::string, double>& values);

}  // namespace shelvesim::sweep
