// scenario.cpp - scenario schema, JSON round trip and validation

#include "shelvesim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace shelvesim::sweep {

using nlohmann::json;

namespace {

const std::vector<std::string> kLambdaParams = {"omega", "omega_r", "delta_a", "delta_e", "gamma1",
                                                "gamma2", "kappa", "delta_b"};
const std::vector<std::string> kCavityParams = {"omega",  "omega_r", "delta_a", "delta_e", "gamma1",
                                                "gamma2", "kappa",   "delta_b", "g_c"};
const std::vector<std::string> kRbParams = {"v_eg", "omega_b_field", "delta_e", "delta_s", "gamma_total",
                                            "kappa"};

// Parameters without a meaningful default.
std::vector<std::string> required_parameters(ModelFamily m) {
    switch (m) {
        case ModelFamily::lambda: return {"omega", "omega_r"};
        case ModelFamily::cavity: return {"omega", "omega_r", "g_c"};
        case ModelFamily::rb87: return {"v_eg", "omega_b_field"};
    }
    return {};
}

bool known_parameter(ModelFamily m, std::string_view name) {
    const auto& names = parameter_names(m);
    return std::find(names.begin(), names.end(), name) != names.end();
}

std::string_view grid_kind_name(GridKind k) { return k == GridKind::log ? "log" : "linear"; }

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

void check_grid(const GridSpec& g, const std::string& where, bool nonnegative,
                std::vector<std::string>& out) {
    if (g.count < 1) out.push_back(where + ": count must be >= 1 (got " + std::to_string(g.count) + ")");
    if (!std::isfinite(g.min) || !std::isfinite(g.max)) {
        out.push_back(where + ": min and max must be finite");
        return;
    }
    if (g.count > 1 && !(g.max > g.min)) {
        out.push_back(where + ": max must exceed min when count > 1 (got min " + fmt(g.min) + ", max " +
                      fmt(g.max) + ")");
    }
    if (g.count == 1 && g.max != g.min) {
        out.push_back(where + ": a single-point grid needs min == max");
    }
    if (g.kind == GridKind::log && !(g.min > 0.0)) {
        out.push_back(where + ": log grid needs min > 0 (got " + fmt(g.min) + ")");
    }
    if (nonnegative && g.min < 0.0) out.push_back(where + ": values must be >= 0");
}

int max_filtered_order(const Scenario& s) {
    int order = 0;
    for (const auto& q : s.quantities) {
        if (q.kind == QuantityKind::gn) order = std::max(order, q.order);
        if (q.kind == QuantityKind::quality) order = std::max(order, 2);
    }
    return order;
}

// --- JSON reading with problem collection ---

struct Reader {
    std::vector<std::string> problems;

    std::optional<double> number(const json& j, const std::string& where) {
        if (!j.is_number()) {
            problems.push_back(where + ": expected a number");
            return std::nullopt;
        }
        return j.get<double>();
    }

    std::optional<int> integer(const json& j, const std::string& where) {
        if (!j.is_number_integer()) {
            problems.push_back(where + ": expected an integer");
            return std::nullopt;
        }
        return j.get<int>();
    }

    std::optional<std::string> string(const json& j, const std::string& where) {
        if (!j.is_string()) {
            problems.push_back(where + ": expected a string");
            return std::nullopt;
        }
        return j.get<std::string>();
    }

    void unknown_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
        for (const auto& [key, value] : j.items()) {
            if (!allowed.contains(key)) problems.push_back(where + ": unknown field '" + key + "'");
        }
    }

    std::map<std::string, double> param_map(const json& j, const std::string& where) {
        std::map<std::string, double> out;
        if (!j.is_object()) {
            problems.push_back(where + ": expected an object of parameter values");
            return out;
        }
        for (const auto& [key, value] : j.items()) {
            if (auto v = number(value, where + "." + key)) out[key] = *v;
        }
        return out;
    }

    std::optional<GridSpec> grid(const json& j, const std::string& where, bool with_parameter) {
        if (!j.is_object()) {
            problems.push_back(where + ": expected an object");
            return std::nullopt;
        }
        std::set<std::string> allowed = {"kind", "min", "max", "count"};
        if (with_parameter) allowed.insert("parameter");
        unknown_keys(j, allowed, where);
        GridSpec g;
        bool ok = true;
        for (const char* key : {"kind", "min", "max", "count"}) {
            if (!j.contains(key)) {
                problems.push_back(where + ": missing field '" + key + "'");
                ok = false;
            }
        }
        if (!ok) return std::nullopt;
        if (auto k = string(j["kind"], where + ".kind")) {
            if (*k == "log") {
                g.kind = GridKind::log;
            } else if (*k == "linear") {
                g.kind = GridKind::linear;
            } else {
                problems.push_back(where + ".kind: expected 'log' or 'linear', got '" + *k + "'");
                ok = false;
            }
        } else {
            ok = false;
        }
        auto lo = number(j["min"], where + ".min");
        auto hi = number(j["max"], where + ".max");
        auto n = integer(j["count"], where + ".count");
        if (!lo || !hi || !n || !ok) return std::nullopt;
        g.min = *lo;
        g.max = *hi;
        g.count = *n;
        return g;
    }
};

std::optional<Quantity> parse_quantity(std::string_view s) {
    if (s == "rho_ee") return Quantity{QuantityKind::rho_ee, 2};
    if (s == "Q") return Quantity{QuantityKind::quality, 2};
    if (s == "g2_sigma") return Quantity{QuantityKind::g2_sigma, 2};
    if (s == "rho_ee_conditional") return Quantity{QuantityKind::conditional, 2};
    if (s == "g2_weak") return Quantity{QuantityKind::g2_weak, 2};
    if (s.size() >= 2 && s.front() == 'g' &&
        std::all_of(s.begin() + 1, s.end(), [](char c) { return c >= '0' && c <= '9'; }) && s.size() <= 3) {
        return Quantity{QuantityKind::gn, std::stoi(std::string(s.substr(1)))};
    }
    return std::nullopt;
}

json grid_json(const GridSpec& g) {
    return json{{"kind", std::string(grid_kind_name(g.kind))}, {"min", g.min}, {"max", g.max}, {"count", g.count}};
}

}  // namespace

std::string_view toolkit_version() { return SHELVESIM_VERSION; }

std::string_view to_string(ModelFamily m) {
    switch (m) {
        case ModelFamily::lambda: return "lambda";
        case ModelFamily::rb87: return "rb87";
        case ModelFamily::cavity: return "cavity";
    }
    return "?";
}

std::optional<ModelFamily> parse_model(std::string_view s) {
    if (s == "lambda") return ModelFamily::lambda;
    if (s == "rb87") return ModelFamily::rb87;
    if (s == "cavity") return ModelFamily::cavity;
    return std::nullopt;
}

const std::vector<std::string>& parameter_names(ModelFamily m) {
    switch (m) {
        case ModelFamily::lambda: return kLambdaParams;
        case ModelFamily::cavity: return kCavityParams;
        case ModelFamily::rb87: return kRbParams;
    }
    return kLambdaParams;
}

bool is_emitter_parameter(ModelFamily m, std::string_view name) {
    (void)m;
    return name != "kappa" && name != "delta_b" && name != "g_c";
}

std::vector<double> GridSpec::values() const {
    std::vector<double> out;
    if (count < 1) return out;
    out.reserve(static_cast<std::size_t>(count));
    if (count == 1) {
        out.push_back(min);
        return out;
    }
    const double last = count - 1;
    if (kind == GridKind::log) {
        const double a = std::log10(min), b = std::log10(max);
        for (int i = 0; i < count; ++i) out.push_back(std::pow(10.0, a + (b - a) * i / last));
    } else {
        for (int i = 0; i < count; ++i) out.push_back(min + (max - min) * i / last);
    }
    // Endpoints exactly as specified.
    out.front() = min;
    out.back() = max;
    return out;
}

bool Quantity::is_curve() const {
    return kind == QuantityKind::g2_sigma || kind == QuantityKind::conditional || kind == QuantityKind::g2_weak;
}

std::string Quantity::column() const {
    switch (kind) {
        case QuantityKind::gn: return "g" + std::to_string(order);
        case QuantityKind::rho_ee: return "rho_ee";
        case QuantityKind::quality: return "Q";
        case QuantityKind::g2_sigma: return "g2_sigma";
        case QuantityKind::conditional: return "rho_ee_conditional";
        case QuantityKind::g2_weak: return "g2_weak";
    }
    return "?";
}

bool Scenario::has_curves() const {
    return std::any_of(quantities.begin(), quantities.end(), [](const Quantity& q) { return q.is_curve(); });
}

bool Scenario::has_scalars() const {
    return std::any_of(quantities.begin(), quantities.end(), [](const Quantity& q) { return !q.is_curve(); });
}

namespace {

std::string join_problems(const std::vector<std::string>& problems) {
    std::string out = "invalid scenario (" + std::to_string(problems.size()) + " problem" +
                      (problems.size() == 1 ? "" : "s") + "):";
    for (const auto& p : problems) out += "\n  - " + p;
    return out;
}

}  // namespace

ScenarioError::ScenarioError(std::vector<std::string> problems)
    : std::invalid_argument(join_problems(problems)), problems_(std::move(problems)) {}

std::vector<std::string> validation_problems(const Scenario& s) {
    std::vector<std::string> out;
    const std::string model(to_string(s.model));

    if (s.name.empty()) out.push_back("name: must not be empty");

    for (const auto& [key, value] : s.fixed) {
        if (!known_parameter(s.model, key)) {
            out.push_back("fixed." + key + ": unknown parameter for model '" + model + "'");
        }
        if (!std::isfinite(value)) out.push_back("fixed." + key + ": value must be finite");
    }

    std::set<std::string> labels;
    std::set<std::string> case_params;
    for (std::size_t i = 0; i < s.cases.size(); ++i) {
        const auto& c = s.cases[i];
        const std::string where = "cases[" + std::to_string(i) + "]";
        if (c.label.empty()) out.push_back(where + ".label: must not be empty");
        if (!labels.insert(c.label).second) out.push_back(where + ".label: duplicate label '" + c.label + "'");
        for (const auto& [key, value] : c.params) {
            case_params.insert(key);
            if (!known_parameter(s.model, key)) {
                out.push_back(where + ".params." + key + ": unknown parameter for model '" + model + "'");
            }
            if (s.fixed.contains(key)) {
                out.push_back(where + ".params." + key + ": also set in fixed");
            }
            if (!std::isfinite(value)) out.push_back(where + ".params." + key + ": value must be finite");
        }
    }

    if (s.axes.size() > 2) {
        out.push_back("axes: at most 2 sweep axes are supported (got " + std::to_string(s.axes.size()) + ")");
    }
    std::set<std::string> axis_names;
    for (std::size_t i = 0; i < s.axes.size(); ++i) {
        const auto& a = s.axes[i];
        const std::string where = "axes[" + std::to_string(i) + "]";
        if (!known_parameter(s.model, a.parameter)) {
            out.push_back(where + ".parameter: '" + a.parameter + "' is not a parameter of model '" + model + "'");
        }
        if (s.fixed.contains(a.parameter)) {
            out.push_back(where + ".parameter: '" + a.parameter + "' is both swept and fixed");
        }
        if (case_params.contains(a.parameter)) {
            out.push_back(where + ".parameter: '" + a.parameter + "' is both swept and set by a case");
        }
        if (!axis_names.insert(a.parameter).second) {
            out.push_back(where + ".parameter: '" + a.parameter + "' is swept twice");
        }
        check_grid(a.grid, where, false, out);
    }

    for (const auto& name : required_parameters(s.model)) {
        const bool everywhere = !s.cases.empty() && std::all_of(s.cases.begin(), s.cases.end(), [&](const Case& c) {
            return c.params.contains(name);
        });
        if (!s.fixed.contains(name) && !axis_names.contains(name) && !everywhere) {
            out.push_back("parameter '" + name + "' is required by model '" + model +
                          "' but set neither in fixed, in every case, nor on an axis");
        }
    }

    if (s.quantities.empty()) out.push_back("quantities: at least one quantity is required");
    for (std::size_t i = 0; i < s.quantities.size(); ++i) {
        const auto& q = s.quantities[i];
        const std::string where = "quantities[" + std::to_string(i) + "]";
        if (q.kind == QuantityKind::gn && (q.order < 2 || q.order > 8)) {
            out.push_back(where + ": correlation order must lie in [2, 8] (got " + std::to_string(q.order) + ")");
        }
        if (q.kind == QuantityKind::g2_weak && s.model == ModelFamily::rb87) {
            out.push_back(where + ": g2_weak applies to the Lambda emitter only");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (s.quantities[j] == q) out.push_back(where + ": duplicate quantity '" + q.column() + "'");
        }
    }

    if (s.has_curves()) {
        for (const auto& a : s.axes) {
            if (is_emitter_parameter(s.model, a.parameter)) {
                out.push_back("axes: '" + a.parameter +
                              "' is an emitter parameter; curve quantities allow only sensor axes "
                              "(vary emitter parameters through cases)");
            }
        }
        if (s.tau_grid) {
            check_grid(*s.tau_grid, "tau_grid", true, out);
        } else if (s.tau_points < 2) {
            out.push_back("tau_points: must be >= 2");
        }
    } else if (s.tau_grid) {
        out.push_back("tau_grid: set but no curve quantity is requested");
    }

    if (s.solver.g_c) {
        if (s.model == ModelFamily::cavity) {
            out.push_back("solver.g_c: the cavity model takes g_c as a physical parameter, not a solver setting");
        } else if (!(std::isfinite(*s.solver.g_c) && *s.solver.g_c > 0.0)) {
            out.push_back("solver.g_c: must be > 0");
        }
    }
    const int order = max_filtered_order(s);
    if (s.solver.n_max && order > 0 && *s.solver.n_max < order + 1) {
        out.push_back("solver.n_max: must be >= " + std::to_string(order + 1) + " for order " +
                      std::to_string(order));
    }
    if (s.solver.n_max && *s.solver.n_max < 1) out.push_back("solver.n_max: must be >= 1");
    if (s.solver.nmax_ceiling) {
        const int floor = std::max(s.solver.n_max.value_or(order + 3), order + 1);
        if (*s.solver.nmax_ceiling < floor) {
            out.push_back("solver.nmax_ceiling: must be >= " + std::to_string(floor));
        }
    }
    return out;
}

void validate(const Scenario& s) {
    auto problems = validation_problems(s);
    if (!problems.empty()) throw ScenarioError(std::move(problems));
}

Scenario scenario_from_json(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ScenarioError({std::string("not valid JSON: ") + e.what()});
    }
    if (!j.is_object()) throw ScenarioError({"top level: expected a JSON object"});

    Reader r;
    r.unknown_keys(j,
                   {"name", "description", "model", "fixed", "cases", "axes", "quantities", "tau_grid",
                    "tau_points", "solver", "schema_version"},
                   "scenario");
    Scenario s;
    if (j.contains("schema_version")) {
        if (auto v = r.integer(j["schema_version"], "schema_version"); v && *v != kSchemaVersion) {
            r.problems.push_back("schema_version: unsupported version " + std::to_string(*v) + " (expected " +
                                 std::to_string(kSchemaVersion) + ")");
        }
    }
    if (j.contains("name")) {
        if (auto v = r.string(j["name"], "name")) s.name = *v;
    } else {
        r.problems.push_back("name: missing");
    }
    if (j.contains("description")) {
        if (auto v = r.string(j["description"], "description")) s.description = *v;
    }
    bool model_ok = false;
    if (j.contains("model")) {
        if (auto v = r.string(j["model"], "model")) {
            if (auto m = parse_model(*v)) {
                s.model = *m;
                model_ok = true;
            } else {
                r.problems.push_back("model: unknown model '" + *v + "' (expected lambda, rb87 or cavity)");
            }
        }
    } else {
        r.problems.push_back("model: missing");
    }
    if (j.contains("fixed")) s.fixed = r.param_map(j["fixed"], "fixed");
    if (j.contains("cases")) {
        if (!j["cases"].is_array()) {
            r.problems.push_back("cases: expected an array");
        } else {
            for (std::size_t i = 0; i < j["cases"].size(); ++i) {
                const auto& c = j["cases"][i];
                const std::string where = "cases[" + std::to_string(i) + "]";
                if (!c.is_object()) {
                    r.problems.push_back(where + ": expected an object");
                    continue;
                }
                r.unknown_keys(c, {"label", "params"}, where);
                Case out;
                if (c.contains("label")) {
                    if (auto v = r.string(c["label"], where + ".label")) out.label = *v;
                } else {
                    r.problems.push_back(where + ".label: missing");
                }
                if (c.contains("params")) out.params = r.param_map(c["params"], where + ".params");
                s.cases.push_back(std::move(out));
            }
        }
    }
    if (j.contains("axes")) {
        if (!j["axes"].is_array()) {
            r.problems.push_back("axes: expected an array");
        } else {
            for (std::size_t i = 0; i < j["axes"].size(); ++i) {
                const auto& a = j["axes"][i];
                const std::string where = "axes[" + std::to_string(i) + "]";
                auto g = r.grid(a, where, true);
                std::optional<std::string> name;
                if (a.is_object()) {
                    if (a.contains("parameter")) {
                        name = r.string(a["parameter"], where + ".parameter");
                    } else {
                        r.problems.push_back(where + ": missing field 'parameter'");
                    }
                }
                if (g && name) s.axes.push_back({*name, *g});
            }
        }
    }
    if (j.contains("quantities")) {
        if (!j["quantities"].is_array()) {
            r.problems.push_back("quantities: expected an array of names");
        } else {
            for (std::size_t i = 0; i < j["quantities"].size(); ++i) {
                const std::string where = "quantities[" + std::to_string(i) + "]";
                if (auto v = r.string(j["quantities"][i], where)) {
                    if (auto q = parse_quantity(*v)) {
                        s.quantities.push_back(*q);
                    } else {
                        r.problems.push_back(where + ": unknown quantity '" + *v +
                                             "' (expected gN, rho_ee, Q, g2_sigma, rho_ee_conditional, g2_weak)");
                    }
                }
            }
        }
    } else {
        r.problems.push_back("quantities: missing");
    }
    if (j.contains("tau_grid")) s.tau_grid = r.grid(j["tau_grid"], "tau_grid", false);
    if (j.contains("tau_points")) {
        if (auto v = r.integer(j["tau_points"], "tau_points")) s.tau_points = *v;
    }
    if (j.contains("solver")) {
        const auto& sv = j["solver"];
        if (!sv.is_object()) {
            r.problems.push_back("solver: expected an object");
        } else {
            r.unknown_keys(sv, {"g_c", "n_max", "nmax_ceiling"}, "solver");
            if (sv.contains("g_c")) s.solver.g_c = r.number(sv["g_c"], "solver.g_c");
            if (sv.contains("n_max")) s.solver.n_max = r.integer(sv["n_max"], "solver.n_max");
            if (sv.contains("nmax_ceiling")) s.solver.nmax_ceiling = r.integer(sv["nmax_ceiling"], "solver.nmax_ceiling");
        }
    }

    // Semantic checks only make sense once the model is known.
    if (model_ok) {
        for (auto& p : validation_problems(s)) {
            if (std::find(r.problems.begin(), r.problems.end(), p) == r.problems.end()) r.problems.push_back(p);
        }
    }
    if (!r.problems.empty()) throw ScenarioError(std::move(r.problems));
    return s;
}

std::string scenario_to_json(const Scenario& s) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["name"] = s.name;
    j["description"] = s.description;
    j["model"] = std::string(to_string(s.model));
    j["fixed"] = json::object();
    for (const auto& [k, v] : s.fixed) j["fixed"][k] = v;
    if (!s.cases.empty()) {
        j["cases"] = json::array();
        for (const auto& c : s.cases) {
            json params = json::object();
            for (const auto& [k, v] : c.params) params[k] = v;
            j["cases"].push_back({{"label", c.label}, {"params", params}});
        }
    }
    j["axes"] = json::array();
    for (const auto& a : s.axes) {
        json g = grid_json(a.grid);
        g["parameter"] = a.parameter;
        j["axes"].push_back(g);
    }
    j["quantities"] = json::array();
    for (const auto& q : s.quantities) j["quantities"].push_back(q.column());
    if (s.tau_grid) j["tau_grid"] = grid_json(*s.tau_grid);
    if (s.has_curves() && !s.tau_grid) j["tau_points"] = s.tau_points;
    json solver = json::object();
    if (s.solver.g_c) solver["g_c"] = *s.solver.g_c;
    if (s.solver.n_max) solver["n_max"] = *s.solver.n_max;
    if (s.solver.nmax_ceiling) solver["nmax_ceiling"] = *s.solver.nmax_ceiling;
    if (!solver.empty()) j["solver"] = solver;
    return j.dump(2) + "\n";
}

Scenario load_scenario(const std::string& name_or_path) {
    if (auto p = find_preset(name_or_path)) return *p;
    std::ifstream in(name_or_path, std::ios::binary);
    if (!in) {
        std::string names;
        for (const auto& n : preset_names()) names += (names.empty() ? "" : ", ") + n;
        throw std::runtime_error("'" + name_or_path + "' is neither a preset (" + names +
                                 ") nor a readable scenario file");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return scenario_from_json(buf.str());
    } catch (const ScenarioError& e) {
        std::vector<std::string> problems;
        for (const auto& p : e.problems()) problems.push_back(name_or_path + ": " + p);
        throw ScenarioError(std::move(problems));
    }
}

Scenario coarsen(const Scenario& s, int max_count) {
    if (max_count < 2) throw std::invalid_argument("coarsen: max_count must be >= 2");
    Scenario out = s;
    for (auto& a : out.axes) a.grid.count = std::min(a.grid.count, max_count);
    if (out.tau_grid) out.tau_grid->count = std::min(out.tau_grid->count, max_count);
    out.tau_points = std::min(out.tau_points, max_count);
    return out;
}

PointParameters resolve_parameters(const Scenario& s, const std::map<std::string, double>& values) {
    auto get = [&](const char* name, double fallback) {
        const auto it = values.find(name);
        return it == values.end() ? fallback : it->second;
    };
    PointParameters out;
    out.sensor.kappa = get("kappa", 1.0);
    out.sensor.delta_b = get("delta_b", 0.0);
    if (s.model == ModelFamily::cavity) {
        out.sensor.g_c = get("g_c", out.sensor.g_c);
    } else if (s.solver.g_c) {
        out.sensor.g_c = *s.solver.g_c;
    }
    out.sensor.n_max = s.solver.n_max;

    if (s.model == ModelFamily::rb87) {
        models::RbParams p;
        p.v_eg = get("v_eg", 0.0);
        p.omega_b_field = get("omega_b_field", 0.0);
        p.delta_e = get("delta_e", 0.0);
        p.delta_s = get("delta_s", 0.0);
        p.gamma_total = get("gamma_total", 1.0);
        out.emitter = p;
    } else {
        models::LambdaParams p;
        p.omega = get("omega", 0.0);
        p.omega_r = get("omega_r", 0.0);
        p.delta_a = get("delta_a", 0.0);
        p.delta_e = get("delta_e", 0.0);
        p.gamma1 = get("gamma1", 1.0);
        p.gamma2 = get("gamma2", 1.0);
        out.emitter = p;
    }
    return out;
}

}  // namespace shelvesim::sweep
