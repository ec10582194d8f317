// models.cpp - Hamiltonians and collapse operators of the physical models

#include "shelvesim/models.hpp"

#include <cmath>
#include <stdexcept>

#include "shelvesim/spin.hpp"

namespace shelvesim::models {

using quantum::Collapse;
using quantum::kron;
using quantum::OperatorMatrix;

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) throw std::invalid_argument(msg);
}

bool finite(double x) { return std::isfinite(x); }

// Emitter levels of the Lambda system.
constexpr int kG = 0;
constexpr int kA = 1;
constexpr int kE = 2;

// Rubidium levels: |1,-1>, |1,0>, |1,1>, |0,0>.
constexpr int kRbExcited = 3;

OperatorMatrix sigma(int dim, int row, int col) { return OperatorMatrix::transition(dim, row, col); }

OperatorMatrix lowering(int levels) {
    quantum::Matrix b = quantum::Matrix::Zero(levels, levels);
    for (int n = 1; n < levels; ++n) b(n - 1, n) = std::sqrt(static_cast<double>(n));
    return OperatorMatrix(std::move(b));
}

OperatorMatrix lambda_hamiltonian(const LambdaParams& p) {
    constexpr int d = 3;
    OperatorMatrix drive = p.omega * sigma(d, kE, kG) + p.omega_r * sigma(d, kG, kA);
    return p.delta_a * sigma(d, kA, kA) + p.delta_e * sigma(d, kE, kE) + drive + drive.adjoint();
}

std::vector<std::string> product_labels(const std::vector<std::string>& emitter, int levels) {
    std::vector<std::string> out;
    out.reserve(emitter.size() * static_cast<std::size_t>(levels));
    for (const auto& e : emitter) {
        for (int n = 0; n < levels; ++n) out.push_back(e + "|n=" + std::to_string(n));
    }
    return out;
}

void check_sensor(const SensorConfig& s, bool allow_strong_coupling) {
    s.validate();
    require(s.n_max.has_value(), "sensor: n_max must be set before building a model");
    if (!allow_strong_coupling) {
        require(s.g_c <= max_filter_coupling(s.kappa),
                "sensor: g_c = " + std::to_string(s.g_c) +
                    " exceeds the filter-semantics bound 1e-2 * max(kappa, 1) = " +
                    std::to_string(max_filter_coupling(s.kappa)) +
                    "; use the cavity-QED builder for finite coupling");
    }
}

// Attach a Fock factor to an emitter model; `emission` is the emitter
// lowering operator that feeds the sensor.
ModelSystem attach_sensor(const ModelSystem& emitter, const OperatorMatrix& emission,
                          double sensor_detuning, const SensorConfig& s, ModelKind kind) {
    const int levels = *s.n_max + 1;
    const int de = emitter.emitter_dim();
    const OperatorMatrix ie = OperatorMatrix::identity(de);
    const OperatorMatrix is = OperatorMatrix::identity(levels);
    const OperatorMatrix b = lowering(levels);
    const OperatorMatrix bb = kron(ie, b);

    // g_c sigma^dagger b + h.c.
    const OperatorMatrix coupling = s.g_c * kron(emission.adjoint(), b);
    OperatorMatrix h = kron(emitter.hamiltonian, is) + sensor_detuning * (bb.adjoint() * bb) +
                       coupling + coupling.adjoint();

    std::vector<Collapse> collapses;
    for (const auto& c : emitter.collapses) collapses.push_back({kron(c.op, is), c.rate, c.label});
    collapses.push_back({bb, s.kappa, "sensor"});

    ModelSystem out{kind,
                    {de, levels},
                    std::move(h),
                    std::move(collapses),
                    {},
                    product_labels(emitter.basis_labels, levels),
                    emitter.lower_level,
                    emitter.excited_level};
    for (const auto& [name, op] : emitter.observables) out.observables.emplace(name, kron(op, is));
    out.observables.emplace("b", bb);
    out.observables.emplace("b_dag_b", bb.adjoint() * bb);
    return out;
}

}  // namespace

void LambdaParams::validate() const {
    require(finite(omega) && omega >= 0.0, "LambdaParams: omega must be >= 0");
    require(finite(omega_r) && omega_r >= 0.0, "LambdaParams: omega_r must be >= 0");
    require(finite(delta_a) && finite(delta_e), "LambdaParams: detunings must be finite");
    require(finite(gamma1) && gamma1 > 0.0, "LambdaParams: gamma1 must be > 0");
    require(finite(gamma2) && gamma2 > 0.0, "LambdaParams: gamma2 must be > 0");
}

void SensorConfig::validate() const {
    require(finite(delta_b), "SensorConfig: delta_b must be finite");
    require(finite(kappa) && kappa > 0.0, "SensorConfig: kappa must be > 0");
    // g_c = 0 decouples the sensor and leaves the steady state undetermined.
    require(finite(g_c) && g_c > 0.0, "SensorConfig: g_c must be > 0");
    require(!n_max || *n_max >= 1, "SensorConfig: n_max must be >= 1");
}

void RbParams::validate() const {
    require(finite(v_eg) && v_eg >= 0.0, "RbParams: v_eg must be >= 0");
    require(finite(omega_b_field) && omega_b_field >= 0.0, "RbParams: omega_b_field must be >= 0");
    require(finite(delta_e) && finite(delta_s), "RbParams: detunings must be finite");
    require(finite(gamma_total) && gamma_total > 0.0, "RbParams: gamma_total must be > 0");
}

double max_filter_coupling(double kappa) { return 1e-2 * std::max(kappa, 1.0); }

const OperatorMatrix& ModelSystem::observable(std::string_view name) const {
    const auto it = observables.find(name);
    if (it == observables.end()) {
        throw std::out_of_range("ModelSystem: unknown observable '" + std::string(name) + "'");
    }
    return it->second;
}

int ModelSystem::basis_index(std::string_view label) const {
    for (std::size_t i = 0; i < basis_labels.size(); ++i) {
        if (basis_labels[i] == label) return static_cast<int>(i);
    }
    throw std::out_of_range("ModelSystem: unknown basis label '" + std::string(label) + "'");
}

quantum::SuperOperator ModelSystem::liouvillian() const {
    return quantum::build_liouvillian(hamiltonian, collapses);
}

ModelSystem build_lambda_emitter(const LambdaParams& p) {
    p.validate();
    constexpr int d = 3;
    ModelSystem m{ModelKind::lambda_emitter,
                  {d},
                  lambda_hamiltonian(p),
                  {{sigma(d, kG, kE), p.gamma1, "e->g"}, {sigma(d, kA, kE), p.gamma2, "e->a"}},
                  {},
                  {"g", "a", "e"},
                  kG,
                  kE};
    m.observables.emplace("sigma_gg", sigma(d, kG, kG));
    m.observables.emplace("sigma_aa", sigma(d, kA, kA));
    m.observables.emplace("sigma_ee", sigma(d, kE, kE));
    m.observables.emplace("sigma_ge", sigma(d, kG, kE));
    m.observables.emplace("sigma_ae", sigma(d, kA, kE));
    m.observables.emplace("sigma_ga", sigma(d, kG, kA));
    m.observables.emplace("target_transition", sigma(d, kG, kE));
    return m;
}

ModelSystem build_cascaded_sensor(const LambdaParams& p, const SensorConfig& s,
                                  bool allow_strong_coupling) {
    check_sensor(s, allow_strong_coupling);
    const ModelSystem emitter = build_lambda_emitter(p);
    return attach_sensor(emitter, sigma(3, kG, kE), s.delta_b, s,
                         allow_strong_coupling ? ModelKind::cavity_qed : ModelKind::cascaded_sensor);
}

ModelSystem build_cavity_qed(const LambdaParams& p, const SensorConfig& s) {
    return build_cascaded_sensor(p, s, true);
}

std::vector<double> rb87_drive_couplings(double v_eg) {
    using spin::HalfInt;
    const HalfInt fe = HalfInt::from_twice(0), me = HalfInt::from_twice(0);
    const HalfInt fg = HalfInt::from_twice(2), one = HalfInt::from_twice(2);
    const HalfInt q = HalfInt::from_twice(2);  // sigma+ polarisation
    // (-1)^(F_e - m_e + 1) (F_e 1 F_g; -m_e q m_g) Omega_L
    const int phase_exp = (fe - me).twice() / 2 + 1;
    const double phase = phase_exp % 2 == 0 ? 1.0 : -1.0;
    std::vector<double> raw;
    for (int mg2 = -2; mg2 <= 2; mg2 += 2) {
        raw.push_back(phase * spin::wigner3j({fe, one, fg, -me, q, HalfInt::from_twice(mg2)}));
    }
    // Omega_L chosen so that the m_g = -1 coupling equals v_eg.
    const double omega_l = v_eg / raw.front();
    for (auto& v : raw) v *= omega_l;
    return raw;
}

OperatorMatrix rb87_zeeman_block(double omega_b_field) {
    return (std::sqrt(2.0) * omega_b_field) * spin::fx_wigner_eckart(spin::HalfInt::from_twice(2));
}

ModelSystem build_rb87_emitter(const RbParams& p) {
    p.validate();
    constexpr int d = 4;
    const std::vector<double> v = rb87_drive_couplings(p.v_eg);

    OperatorMatrix drive = OperatorMatrix::zero(d);
    for (int i = 0; i < 3; ++i) drive += v[static_cast<std::size_t>(i)] * sigma(d, kRbExcited, i);

    quantum::Matrix zeeman = quantum::Matrix::Zero(d, d);
    zeeman.topLeftCorner(3, 3) = rb87_zeeman_block(p.omega_b_field).entries();

    OperatorMatrix h = p.delta_e * sigma(d, kRbExcited, kRbExcited) + drive + drive.adjoint() +
                       OperatorMatrix(std::move(zeeman));

    const double branch = p.gamma_total / 3.0;
    ModelSystem m{ModelKind::rb87_emitter,
                  {d},
                  std::move(h),
                  {{sigma(d, 0, kRbExcited), branch, "0,0->1,-1"},
                   {sigma(d, 1, kRbExcited), branch, "0,0->1,0"},
                   {sigma(d, 2, kRbExcited), branch, "0,0->1,1"}},
                  {},
                  {"1,-1", "1,0", "1,1", "0,0"},
                  0,
                  kRbExcited};
    m.observables.emplace("pop_1m1", sigma(d, 0, 0));
    m.observables.emplace("pop_10", sigma(d, 1, 1));
    m.observables.emplace("pop_11", sigma(d, 2, 2));
    m.observables.emplace("pop_00", sigma(d, kRbExcited, kRbExcited));
    m.observables.emplace("sigma_ee", sigma(d, kRbExcited, kRbExcited));
    m.observables.emplace("target_transition", sigma(d, 0, kRbExcited));
    return m;
}

ModelSystem build_rb87_system(const RbParams& p, const SensorConfig& s, bool allow_strong_coupling) {
    check_sensor(s, allow_strong_coupling);
    const ModelSystem emitter = build_rb87_emitter(p);
    ModelSystem m = attach_sensor(emitter, sigma(4, 0, kRbExcited), p.delta_s, s,
                                  ModelKind::rb87_sensor);
    m.observables.emplace("s", m.observable("b"));
    return m;
}

}  // namespace shelvesim::models
