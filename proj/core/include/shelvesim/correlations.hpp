// correlations.hpp - steady-state excitation, conditional excitation, frequency-blind
// and frequency-filtered photon correlations, and the superbunching quality factor

#pragma once

#include <complex>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

#include "shelvesim/models.hpp"
#include "shelvesim/quantum.hpp"

namespace shelvesim::correlations {

using models::LambdaParams;
using models::RbParams;
using models::SensorConfig;

// Closed-form steady state of the resonant Lambda emitter with gamma1 == gamma2.
struct SteadyStateAnalytic {
    double rho_gg = 0.0;
    double rho_aa = 0.0;
    double rho_ee = 0.0;
    std::complex<double> rho_ge;
    std::complex<double> rho_ae;
    std::complex<double> rho_ga;
    double m_denominator = 0.0;
};

// Throws std::domain_error unless delta_a == delta_e == 0 and gamma1 == gamma2.
SteadyStateAnalytic steady_state_analytic(const LambdaParams& p);

struct CurveMeta {
    quantum::PropagationMethod method = quantum::PropagationMethod::eigenbasis;
    double steady_excitation = 0.0;
    double eigenbasis_condition = 0.0;
};

struct CorrelationCurve {
    std::vector<double> grid;
    std::vector<double> values;
    CurveMeta meta;
};

// rho_ee(tau) starting from the lower level of the emission, i.e. the state
// right after a photon of the target transition was emitted.
CorrelationCurve conditional_excitation(const models::ModelSystem& emitter, std::span<const double> grid);

// Frequency-blind g2(tau) = rho_ee^c(tau) / rho_ee(steady), both from numerics.
CorrelationCurve g2_sigma_tau(const models::ModelSystem& emitter, std::span<const double> grid);

// 400 log-spaced delays from 1e-3 to 10 x the slowest relaxation time of the emitter.
std::vector<double> default_tau_grid(const models::ModelSystem& emitter, int points = 400);

struct WeakDriveG2 {
    double value = 0.0;
    // omega < 0.1 * gamma; outside of it the expression is only qualitative.
    bool within_validity = true;
};

// Weak-drive closed form of g2(tau) with the steady excitation from the
// analytic steady state. Throws std::domain_error within |gamma^2 - 2 omega^2| <
// 1e-6 gamma^2, where the expression has a pole.
WeakDriveG2 g2_weak_analytic(double omega, double omega_r, double gamma, double tau);

using EmitterParams = std::variant<LambdaParams, RbParams>;

enum class Coupling {
    filter,  // g_c -> 0 limit: g_c-halving check active, smallness guard enforced
    cavity,  // g_c is physical: only the Fock-truncation check runs
};

struct ProtocolOptions {
    Coupling coupling = Coupling::filter;
    double gc_tolerance = 1e-3;
    double nmax_tolerance = 1e-6;
    double gc_floor = 1e-4;
    // Defaults to 2 * order + 4.
    std::optional<int> nmax_ceiling;
};

struct FilteredCorrelation {
    int order = 2;
    double value = 0.0;
    double g_c_used = 0.0;
    int n_max_used = 0;
    bool converged = false;
    // Last measured relative changes of the two convergence checks.
    double gc_change = 0.0;
    double nmax_change = 0.0;
};

// <b^dag^N b^N> / <b^dag b>^N underflows for the requested order.
class MomentUnderflow : public std::runtime_error {
public:
    MomentUnderflow(const std::string& what, double threshold, double suggested_g_c)
        : std::runtime_error(what), threshold_(threshold), suggested_g_c_(suggested_g_c) {}
    // Smallest representable <b^dag b>^N.
    double threshold() const { return threshold_; }
    // Coupling that lifts <b^dag b>^N above the threshold (infinite when the
    // first moment vanishes).
    double suggested_g_c() const { return suggested_g_c_; }

private:
    double threshold_;
    double suggested_g_c_;
};

// Sensor moments of one steady-state solve.
struct SensorMoments {
    // normalized[k] = <b^dag^k b^k> / level_scale^(2k) for k = 0..n_max.
    std::vector<double> normalized;
    double level_scale = 1.0;

    // <b^dag^N b^N> / <b^dag b>^N
    double normalized_correlation(int order) const;
    // log10 <b^dag^k b^k>
    double log10_moment(int k) const;
};

models::ModelSystem build_sensor_model(const EmitterParams& p, const SensorConfig& s, Coupling coupling);

// Per-level scale used for the sensor Fock ladder in the steady-state solve.
double sensor_level_scale(double g_c, double kappa);

// Solves the steady state in a basis where sensor level n is scaled by
// level_scale^n and returns the moments.
SensorMoments sensor_moments(const models::ModelSystem& model, double level_scale);

// g_b^(N)(0) at the given g_c and n_max, without the convergence protocol.
double filtered_gn_fixed(const EmitterParams& p, const SensorConfig& s, int order,
                         Coupling coupling = Coupling::filter);

// g_b^(N)(0) with the g_c-halving / n_max-escalation protocol.
FilteredCorrelation filtered_gn(const EmitterParams& p, const SensorConfig& s, int order,
                                const ProtocolOptions& options = {});

// Steady excitation of the bare emitter; the closed form when it applies,
// otherwise the numeric steady state.
double steady_excitation(const EmitterParams& p);

struct QualityFactor {
    double value = 0.0;
    double rho_ee = 0.0;
    FilteredCorrelation g2;
};

// Q = g_b^(2)(0) * rho_ee
QualityFactor quality_q(const EmitterParams& p, const SensorConfig& s,
                        const ProtocolOptions& options = {});

}  // namespace shelvesim::correlations
