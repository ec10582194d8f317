// presets.cpp - embedded scenarios for the figure data sets
//
// Fixed parameters follow the figure captions. Grid ranges are chosen here
// (the figures give their axes only pictorially):
//   kappa         [1e-3, 1e3]   log, 61 points
//   omega_r       [1e-3, 10]    log, 49 points
//   omega         [1e-2, 1e2]   log, 49 points
//   delta_b       [-3W, 3W]     linear, 241 points, W = sqrt(omega^2 + omega_r^2)
//   omega_b_field [1e-3, 10]    log, 49 points
//   g_c           [1e-3, 1e2]   log, 41 points

#include <algorithm>
#include <cmath>

#include "shelvesim/scenario.hpp"

namespace shelvesim::sweep {

namespace {

SweepAxis kappa_axis() { return {"kappa", {GridKind::log, 1e-3, 1e3, 61}}; }
SweepAxis omega_r_axis() { return {"omega_r", {GridKind::log, 1e-3, 10.0, 49}}; }
SweepAxis omega_axis() { return {"omega", {GridKind::log, 1e-2, 1e2, 49}}; }
SweepAxis omega_b_axis() { return {"omega_b_field", {GridKind::log, 1e-3, 10.0, 49}}; }
SweepAxis g_c_axis() { return {"g_c", {GridKind::log, 1e-3, 1e2, 41}}; }

Quantity g(int order) { return {QuantityKind::gn, order}; }
Quantity q(QuantityKind k) { return {k, 2}; }

std::vector<Scenario> build_presets() {
    std::vector<Scenario> out;

    {
        Scenario s;
        s.name = "fig2a";
        s.description = "Filtered g2(0) over kappa and omega_r at omega = 10";
        s.fixed = {{"omega", 10.0}};
        s.axes = {omega_r_axis(), kappa_axis()};
        s.quantities = {g(2)};
        out.push_back(s);
    }
    {
        Scenario s;
        s.name = "fig2b";
        s.description = "Filtered g2(0) over omega and omega_r at kappa = 1";
        s.fixed = {{"kappa", 1.0}};
        s.axes = {omega_axis(), omega_r_axis()};
        s.quantities = {g(2)};
        out.push_back(s);
    }
    {
        // The panels share the drive of the filtered-correlation examples;
        // omega = 10, omega_r = 0.1 is chosen here.
        Scenario s;
        s.name = "fig2cd";
        s.description = "Frequency-blind g2(tau) and conditional excitation at omega = 10, omega_r = 0.1";
        s.fixed = {{"omega", 10.0}, {"omega_r", 0.1}};
        s.quantities = {q(QuantityKind::g2_sigma), q(QuantityKind::conditional)};
        out.push_back(s);
    }
    {
        Scenario s;
        s.name = "fig3";
        s.description =
            "g2(tau) with the weak-drive closed form, and filtered g2(0) over kappa, "
            "for case a (omega = 10, omega_r = 1e-2) and case c (omega = 0.1, omega_r = 1e-4)";
        s.cases = {{"a", {{"omega", 10.0}, {"omega_r", 1e-2}}}, {"c", {{"omega", 0.1}, {"omega_r", 1e-4}}}};
        s.axes = {kappa_axis()};
        s.quantities = {g(2), q(QuantityKind::g2_sigma), q(QuantityKind::g2_weak)};
        out.push_back(s);
    }
    {
        Scenario s;
        s.name = "fig4";
        s.description = "Filtered g^(N)(0), N = 2, 3, 4, over kappa at omega = 100, omega_r = 0.1";
        s.fixed = {{"omega", 100.0}, {"omega_r", 0.1}};
        s.axes = {kappa_axis()};
        s.quantities = {g(2), g(3), g(4)};
        out.push_back(s);
    }
    {
        Scenario s;
        s.name = "fig5b";
        s.model = ModelFamily::rb87;
        s.description = "Rb87: filtered g2(0) over kappa and omega_b_field at v_eg = 10";
        s.fixed = {{"v_eg", 10.0}, {"delta_e", 0.0}, {"delta_s", 0.0}};
        s.axes = {omega_b_axis(), kappa_axis()};
        s.quantities = {g(2)};
        out.push_back(s);
    }
    {
        Scenario s;
        s.name = "fig5c";
        s.model = ModelFamily::rb87;
        s.description = "Rb87: filtered g^(N)(0), N = 2, 3, 4, over kappa at v_eg = 100, omega_b_field = 0.1";
        s.fixed = {{"v_eg", 100.0}, {"omega_b_field", 0.1}, {"delta_e", 0.0}, {"delta_s", 0.0}};
        s.axes = {kappa_axis()};
        s.quantities = {g(2), g(3), g(4)};
        out.push_back(s);
    }
    {
        Scenario s;
        s.name = "fig5e";
        s.model = ModelFamily::cavity;
        s.description = "Cavity QED: g2(0) of the cavity field over kappa and g_c at omega = 100, omega_r = 1e-2";
        s.fixed = {{"omega", 100.0}, {"omega_r", 1e-2}};
        s.axes = {g_c_axis(), kappa_axis()};
        s.quantities = {g(2)};
        out.push_back(s);
    }
    {
        Scenario s;
        s.name = "fig5f";
        s.model = ModelFamily::cavity;
        s.description = "Cavity QED: g^(N)(0), N = 2, 3, 4, over kappa at g_c = 1e-2, omega = 100, omega_r = 0.1";
        s.fixed = {{"omega", 100.0}, {"omega_r", 0.1}, {"g_c", 1e-2}};
        s.axes = {kappa_axis()};
        s.quantities = {g(2), g(3), g(4)};
        out.push_back(s);
    }
    {
        Scenario s;
        s.name = "fig6a";
        s.description = "Quality Q over kappa and omega_r at omega = 10";
        s.fixed = {{"omega", 10.0}};
        s.axes = {omega_r_axis(), kappa_axis()};
        s.quantities = {q(QuantityKind::quality)};
        out.push_back(s);
    }
    {
        Scenario s;
        s.name = "fig6b";
        s.description = "Quality Q over omega and omega_r at kappa = 1";
        s.fixed = {{"kappa", 1.0}};
        s.axes = {omega_axis(), omega_r_axis()};
        s.quantities = {q(QuantityKind::quality)};
        out.push_back(s);
    }
    {
        Scenario s;
        s.name = "fig6c";
        s.description = "Quality Q over kappa and omega at omega_r = 1e-4";
        s.fixed = {{"omega_r", 1e-4}};
        s.axes = {omega_axis(), kappa_axis()};
        s.quantities = {q(QuantityKind::quality)};
        out.push_back(s);
    }
    {
        // kappa is not given for this figure; kappa = 1 is chosen here.
        const double omega = 1e4, omega_r = 10.0;
        const double split = std::sqrt(omega * omega + omega_r * omega_r);
        Scenario s;
        s.name = "fig7";
        s.description = "Filtered g2(0) over the filter detuning at omega = 1e4, omega_r = 10, kappa = 1";
        s.fixed = {{"omega", omega}, {"omega_r", omega_r}, {"kappa", 1.0}};
        s.axes = {{"delta_b", {GridKind::linear, -3.0 * split, 3.0 * split, 241}}};
        s.quantities = {g(2)};
        out.push_back(s);
    }
    return out;
}

const std::vector<Scenario>& presets() {
    static const std::vector<Scenario> all = build_presets();
    return all;
}

}  // namespace

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& s : presets()) out.push_back(s.name);
        return out;
    }();
    return names;
}

std::optional<Scenario> find_preset(std::string_view name) {
    const auto& all = presets();
    const auto it = std::find_if(all.begin(), all.end(), [&](const Scenario& s) { return s.name == name; });
    if (it == all.end()) return std::nullopt;
    return *it;
}

}  // namespace shelvesim::sweep
