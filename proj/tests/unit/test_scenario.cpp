// test_scenario.cpp - scenario schema, validation, presets and parameter resolution

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "shelvesim/scenario.hpp"

using namespace shelvesim;
using namespace shelvesim::sweep;

namespace {

bool mentions(const std::vector<std::string>& problems, const std::string& needle) {
    return std::any_of(problems.begin(), problems.end(),
                       [&](const std::string& p) { return p.find(needle) != std::string::npos; });
}

std::vector<std::string> json_problems(const std::string& text) {
    try {
        (void)scenario_from_json(text);
    } catch (const ScenarioError& e) {
        return e.problems();
    }
    return {};
}

Scenario minimal() {
    Scenario s;
    s.name = "t";
    s.fixed = {{"omega", 10.0}, {"omega_r", 0.1}};
    s.axes = {{"kappa", {GridKind::log, 1e-1, 1e1, 3}}};
    s.quantities = {{QuantityKind::gn, 2}};
    return s;
}

}  // namespace

TEST_SUITE("scenario") {

TEST_CASE("grid values") {
    const auto log = GridSpec{GridKind::log, 1e-3, 1e3, 61}.values();
    REQUIRE(log.size() == 61);
    CHECK(log.front() == 1e-3);
    CHECK(log.back() == 1e3);
    CHECK(log[30] == doctest::Approx(1.0));
    for (std::size_t i = 1; i < log.size(); ++i) CHECK(log[i] / log[i - 1] == doctest::Approx(std::pow(10.0, 0.1)));
    const auto lin = GridSpec{GridKind::linear, -3.0, 3.0, 7}.values();
    CHECK(lin == std::vector<double>{-3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0});
    CHECK(GridSpec{GridKind::linear, 2.0, 2.0, 1}.values() == std::vector<double>{2.0});
}

TEST_CASE("quantity columns") {
    CHECK(Quantity{QuantityKind::gn, 3}.column() == "g3");
    CHECK(Quantity{QuantityKind::quality, 2}.column() == "Q");
    CHECK(Quantity{QuantityKind::conditional, 2}.column() == "rho_ee_conditional");
    CHECK(Quantity{QuantityKind::g2_sigma, 2}.is_curve());
    CHECK_FALSE(Quantity{QuantityKind::rho_ee, 2}.is_curve());
}

TEST_CASE("a valid scenario has no problems") {
    CHECK(validation_problems(minimal()).empty());
    CHECK_NOTHROW(validate(minimal()));
}

TEST_CASE("validation reports every problem and names the field") {
    Scenario s = minimal();
    s.name.clear();
    s.fixed["omgea"] = 1.0;
    s.fixed["kappa"] = 1.0;  // also swept
    s.axes.push_back({"bogus", {GridKind::log, -1.0, 1.0, 0}});
    s.axes.push_back({"delta_b", {GridKind::linear, -1.0, 1.0, 3}});
    s.quantities.push_back({QuantityKind::gn, 9});
    s.quantities.push_back({QuantityKind::gn, 2});
    s.solver.n_max = 1;
    const auto p = validation_problems(s);
    CHECK(mentions(p, "name"));
    CHECK(mentions(p, "fixed.omgea"));
    CHECK(mentions(p, "'kappa' is both swept and fixed"));
    CHECK(mentions(p, "'bogus' is not a parameter"));
    CHECK(mentions(p, "at most 2 sweep axes"));
    CHECK(mentions(p, "axes[1]: count must be >= 1"));
    CHECK(mentions(p, "axes[1]: log grid needs min > 0"));
    CHECK(mentions(p, "order must lie in [2, 8]"));
    CHECK(mentions(p, "duplicate quantity 'g2'"));
    CHECK(mentions(p, "solver.n_max"));
    CHECK(p.size() >= 10);
    try {
        validate(s);
        FAIL("expected ScenarioError");
    } catch (const ScenarioError& e) {
        CHECK(e.problems() == p);
        CHECK(std::string(e.what()).find("fixed.omgea") != std::string::npos);
    }
}

TEST_CASE("model-specific rules") {
    Scenario s = minimal();
    s.fixed.erase("omega_r");
    CHECK(mentions(validation_problems(s), "parameter 'omega_r' is required"));

    Scenario rb;
    rb.name = "rb";
    rb.model = ModelFamily::rb87;
    rb.fixed = {{"v_eg", 10.0}, {"omega", 1.0}};
    rb.quantities = {{QuantityKind::g2_weak, 2}};
    const auto p = validation_problems(rb);
    CHECK(mentions(p, "fixed.omega: unknown parameter for model 'rb87'"));
    CHECK(mentions(p, "'omega_b_field' is required"));
    CHECK(mentions(p, "g2_weak applies to the Lambda emitter only"));

    Scenario cav = minimal();
    cav.model = ModelFamily::cavity;
    cav.fixed["g_c"] = 1.0;
    CHECK(validation_problems(cav).empty());
    cav.solver.g_c = 1e-3;
    CHECK(mentions(validation_problems(cav), "solver.g_c"));
    Scenario no_gc = minimal();
    no_gc.model = ModelFamily::cavity;
    CHECK(mentions(validation_problems(no_gc), "'g_c' is required"));
    Scenario lambda_gc = minimal();
    lambda_gc.fixed["g_c"] = 1.0;
    CHECK(mentions(validation_problems(lambda_gc), "fixed.g_c"));
}

TEST_CASE("curve quantities restrict axes to sensor parameters") {
    Scenario s = minimal();
    s.quantities.push_back({QuantityKind::g2_sigma, 2});
    CHECK(validation_problems(s).empty());
    s.axes = {{"omega_r", {GridKind::log, 1e-3, 1.0, 3}}};
    s.fixed.erase("omega_r");
    CHECK(mentions(validation_problems(s), "'omega_r' is an emitter parameter"));

    Scenario t = minimal();
    t.tau_grid = GridSpec{GridKind::log, 1e-3, 10.0, 5};
    CHECK(mentions(validation_problems(t), "tau_grid: set but no curve quantity"));
}

TEST_CASE("cases") {
    Scenario s = minimal();
    s.fixed.erase("omega_r");
    s.cases = {{"a", {{"omega_r", 1e-2}}}, {"b", {{"omega_r", 1e-4}}}};
    CHECK(validation_problems(s).empty());
    s.cases.push_back({"a", {{"omega", 3.0}}});
    const auto p = validation_problems(s);
    CHECK(mentions(p, "cases[2].label: duplicate label 'a'"));
    CHECK(mentions(p, "cases[2].params.omega: also set in fixed"));
    CHECK(mentions(p, "'omega_r' is required"));
}

TEST_CASE("JSON round trip") {
    Scenario s = minimal();
    s.description = "round trip";
    s.fixed.erase("omega_r");
    s.cases = {{"x", {{"omega_r", 1e-2}}}, {"y", {{"omega_r", 0.1}}}};
    s.axes.push_back({"delta_b", {GridKind::linear, -2.0, 2.0, 5}});
    s.quantities = {{QuantityKind::gn, 3}, {QuantityKind::g2_sigma, 2}, {QuantityKind::conditional, 2}};
    s.tau_grid = GridSpec{GridKind::log, 1e-3, 1e2, 11};
    s.solver.g_c = 5e-4;
    s.solver.n_max = 6;
    s.solver.nmax_ceiling = 12;
    REQUIRE(validation_problems(s).empty());
    const std::string text = scenario_to_json(s);
    const Scenario back = scenario_from_json(text);
    CHECK(scenario_to_json(back) == text);
    CHECK(back.name == s.name);
    CHECK(back.cases.size() == 2);
    CHECK(back.cases[1].params.at("omega_r") == 0.1);
    CHECK(back.axes[1].grid.kind == GridKind::linear);
    CHECK(back.quantities == s.quantities);
    CHECK(*back.solver.g_c == 5e-4);
    CHECK(*back.solver.nmax_ceiling == 12);
    CHECK(back.tau_grid->count == 11);
}

TEST_CASE("JSON schema errors are listed together") {
    const auto p = json_problems(R"({
        "name": "x", "model": "lambda", "colour": "red",
        "fixed": {"omega": "ten", "omega_r": 0.1, "nope": 1},
        "axes": [{"parameter": "kappa", "kind": "cubic", "min": 1, "max": 2, "count": 3}],
        "quantities": ["g2", "g99x"],
        "schema_version": 7
    })");
    CHECK(mentions(p, "colour"));
    CHECK(mentions(p, "fixed.omega: expected a number"));
    CHECK(mentions(p, "fixed.nope"));
    CHECK(mentions(p, "axes[0].kind"));
    CHECK(mentions(p, "unknown quantity 'g99x'"));
    CHECK(mentions(p, "schema_version"));
    CHECK(p.size() >= 6);

    CHECK(mentions(json_problems("{not json"), "JSON"));
    CHECK(mentions(json_problems(R"({"model": "spin"})"), "model: unknown model 'spin'"));
    CHECK(mentions(json_problems(R"({"model": "lambda"})"), "name: missing"));
}

TEST_CASE("every preset validates and survives a JSON round trip") {
    const std::vector<std::string> expected{"fig2a", "fig2b", "fig2cd", "fig3", "fig4", "fig5b", "fig5c",
                                            "fig5e", "fig5f", "fig6a", "fig6b", "fig6c", "fig7"};
    CHECK(preset_names() == expected);
    for (const auto& name : preset_names()) {
        CAPTURE(name);
        const auto s = find_preset(name);
        REQUIRE(s.has_value());
        CHECK(s->name == name);
        CHECK(validation_problems(*s).empty());
        CHECK(scenario_to_json(scenario_from_json(scenario_to_json(*s))) == scenario_to_json(*s));
        const auto c = coarsen(*s, 3);
        for (const auto& a : c.axes) {
            CHECK(a.grid.count <= 3);
            CHECK(a.grid.values().front() == s->axes[&a - c.axes.data()].grid.min);
        }
    }
    CHECK_FALSE(find_preset("fig9").has_value());
}

TEST_CASE("fig4 and fig7 presets") {
    const auto f4 = load_scenario("fig4");
    CHECK(f4.model == ModelFamily::lambda);
    CHECK(f4.fixed.at("omega") == 100.0);
    CHECK(f4.fixed.at("omega_r") == 0.1);
    REQUIRE(f4.axes.size() == 1);
    CHECK(f4.axes[0].parameter == "kappa");
    CHECK(f4.axes[0].grid.kind == GridKind::log);
    CHECK(f4.axes[0].grid.min == 1e-3);
    CHECK(f4.axes[0].grid.max == 1e3);
    CHECK(f4.axes[0].grid.count == 61);
    CHECK(f4.quantities == std::vector<Quantity>{{QuantityKind::gn, 2}, {QuantityKind::gn, 3}, {QuantityKind::gn, 4}});

    const auto f7 = load_scenario("fig7");
    CHECK(f7.fixed.at("omega") == 1e4);
    CHECK(f7.fixed.at("omega_r") == 10.0);
    CHECK(f7.fixed.at("kappa") == 1.0);
    REQUIRE(f7.axes.size() == 1);
    CHECK(f7.axes[0].parameter == "delta_b");
    CHECK(f7.axes[0].grid.kind == GridKind::linear);
    CHECK(f7.axes[0].grid.count == 241);
    const double bar = std::sqrt(1e8 + 100.0);
    CHECK(f7.axes[0].grid.max == doctest::Approx(3.0 * bar));
    CHECK(f7.axes[0].grid.min == doctest::Approx(-3.0 * bar));
}

TEST_CASE("load_scenario from files") {
    const auto dir = std::filesystem::temp_directory_path() / "shelvesim_scenario_test";
    std::filesystem::create_directories(dir);
    const auto good = dir / "good.json";
    std::ofstream(good) << scenario_to_json(minimal());
    CHECK(load_scenario(good.string()).name == "t");

    const auto bad = dir / "bad.json";
    std::ofstream(bad) << R"({"name": "b", "model": "lambda", "fixed": {"omgea": 1}, "quantities": ["g2"]})";
    try {
        (void)load_scenario(bad.string());
        FAIL("expected ScenarioError");
    } catch (const ScenarioError& e) {
        CHECK(mentions(e.problems(), "omgea"));
        CHECK(mentions(e.problems(), "bad.json"));
    }
    CHECK_THROWS_AS(load_scenario((dir / "missing.json").string()), std::runtime_error);
    std::filesystem::remove_all(dir);
}

TEST_CASE("parameter resolution") {
    Scenario s = minimal();
    s.fixed["delta_e"] = 0.5;
    const auto pt = resolve_parameters(s, {{"omega", 10.0}, {"omega_r", 0.1}, {"delta_e", 0.5}, {"kappa", 3.0}});
    const auto& lp = std::get<models::LambdaParams>(pt.emitter);
    CHECK(lp.omega == 10.0);
    CHECK(lp.delta_e == 0.5);
    CHECK(lp.gamma1 == 1.0);
    CHECK(pt.sensor.kappa == 3.0);
    CHECK(pt.sensor.delta_b == 0.0);
    CHECK(pt.sensor.g_c == 1e-3);

    s.solver.g_c = 2e-4;
    CHECK(resolve_parameters(s, {{"omega", 1.0}, {"omega_r", 1.0}}).sensor.g_c == 2e-4);

    Scenario rb;
    rb.name = "rb";
    rb.model = ModelFamily::rb87;
    const auto r = resolve_parameters(rb, {{"v_eg", 100.0}, {"omega_b_field", 0.1}, {"delta_s", 0.2}});
    const auto& rp = std::get<models::RbParams>(r.emitter);
    CHECK(rp.v_eg == 100.0);
    CHECK(rp.delta_s == 0.2);
    CHECK(rp.gamma_total == 1.0);
    CHECK(r.sensor.kappa == 1.0);

    Scenario cav = minimal();
    cav.model = ModelFamily::cavity;
    CHECK(resolve_parameters(cav, {{"omega", 1.0}, {"omega_r", 1.0}, {"g_c", 5.0}}).sensor.g_c == 5.0);
}

}  // TEST_SUITE
