// models.hpp - builders for the Lambda emitter, the emitter-sensor cascade,
// the 87Rb F=1 -> F'=0 emitter and the cavity-QED variant
//
// Units: every rate and frequency is in units of the emitter decay rate
// (gamma for the Lambda system, Gamma for rubidium).

#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "shelvesim/quantum.hpp"

namespace shelvesim::models {

struct LambdaParams {
    double omega = 0.0;    // Rabi frequency on |g> <-> |e>
    double omega_r = 0.0;  // Rabi frequency on |g> <-> |a>
    double delta_a = 0.0;
    double delta_e = 0.0;
    double gamma1 = 1.0;  // |e> -> |g>
    double gamma2 = 1.0;  // |e> -> |a>

    void validate() const;
};

struct SensorConfig {
    double delta_b = 0.0;
    double kappa = 1.0;
    double g_c = 1e-3;
    // Unset: chosen by the caller (order + 3 for correlation work).
    std::optional<int> n_max;

    void validate() const;
};

struct RbParams {
    double v_eg = 0.0;  // V_{e g_{-1}}, coupling of the sigma+ drive on |1,-1> <-> |0,0>
    double omega_b_field = 0.0;
    double delta_e = 0.0;
    double delta_s = 0.0;
    double gamma_total = 1.0;

    void validate() const;
};

enum class ModelKind { lambda_emitter, cascaded_sensor, cavity_qed, rb87_emitter, rb87_sensor };

struct ModelSystem {
    ModelKind kind;
    // Dimensions of the tensor factors, emitter first.
    std::vector<int> factor_dims;
    quantum::OperatorMatrix hamiltonian;
    std::vector<quantum::Collapse> collapses;
    std::map<std::string, quantum::OperatorMatrix, std::less<>> observables;
    std::vector<std::string> basis_labels;
    // Index of the emitter level that is repopulated by the target emission
    // (|g> or |1,-1>) and of the excited level.
    int lower_level = 0;
    int excited_level = 0;

    int dim() const { return hamiltonian.dim(); }
    int emitter_dim() const { return factor_dims.front(); }
    // Fock levels of the sensor factor, or 1 when there is none.
    int sensor_levels() const { return factor_dims.size() > 1 ? factor_dims[1] : 1; }
    bool has_sensor() const { return factor_dims.size() > 1; }

    const quantum::OperatorMatrix& observable(std::string_view name) const;
    int basis_index(std::string_view label) const;
    quantum::SuperOperator liouvillian() const;
};

// Largest g_c accepted in filter semantics without an explicit override.
double max_filter_coupling(double kappa);

// Basis (|g>, |a>, |e>).
ModelSystem build_lambda_emitter(const LambdaParams& p);

// Basis (|g>, |a>, |e>) (x) Fock(n_max). Requires g_c <= 1e-2 * max(kappa, 1)
// unless allow_strong_coupling is set.
ModelSystem build_cascaded_sensor(const LambdaParams& p, const SensorConfig& s,
                                  bool allow_strong_coupling = false);

// Same construction as build_cascaded_sensor with any g_c > 0.
ModelSystem build_cavity_qed(const LambdaParams& p, const SensorConfig& s);

// Bare rubidium emitter, basis (|1,-1>, |1,0>, |1,1>, |0,0>).
ModelSystem build_rb87_emitter(const RbParams& p);

// Rubidium emitter (x) Fock(n_max), sensor on |1,-1> <-> |0,0>.
ModelSystem build_rb87_system(const RbParams& p, const SensorConfig& s,
                              bool allow_strong_coupling = false);

// V_{e g_i} for m_g = -1, 0, +1 from the 3j symbols, normalised so that the
// m_g = -1 entry equals v_eg.
std::vector<double> rb87_drive_couplings(double v_eg);

// sqrt(2) * Omega_B * (F . e_x) on the F = 1 ground manifold, assembled from 3j symbols.
quantum::OperatorMatrix rb87_zeeman_block(double omega_b_field);

}  // namespace shelvesim::models
