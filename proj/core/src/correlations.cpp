// correlations.cpp - photon statistics of the emitter and of the sensor mode

#include "shelvesim/correlations.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <string>

namespace shelvesim::correlations {

using models::ModelSystem;
using quantum::DensityMatrix;

namespace {

void check_grid(std::span<const double> grid) {
    if (grid.empty()) throw std::invalid_argument("tau grid is empty");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!std::isfinite(grid[i]) || grid[i] < 0.0) {
            throw std::invalid_argument("tau grid entries must be finite and nonnegative");
        }
        if (i > 0 && !(grid[i] > grid[i - 1])) {
            throw std::invalid_argument("tau grid must be strictly increasing");
        }
    }
}

void require_bare_emitter(const ModelSystem& m, const char* what) {
    if (m.has_sensor()) {
        throw std::invalid_argument(std::string(what) + ": expects a bare emitter model without a sensor");
    }
}

double relative_change(double reference, double other) {
    const double scale = std::abs(reference);
    return scale > 0.0 ? std::abs(other - reference) / scale : std::abs(other);
}

double falling_factorial(int n, int k) {
    double out = 1.0;
    for (int i = 0; i < k; ++i) out *= static_cast<double>(n - i);
    return out;
}

}  // namespace

SteadyStateAnalytic steady_state_analytic(const LambdaParams& p) {
    p.validate();
    if (p.delta_a != 0.0 || p.delta_e != 0.0 || p.gamma1 != p.gamma2) {
        throw std::domain_error(
            "steady_state_analytic: closed form requires delta_a = delta_e = 0 and gamma1 = gamma2");
    }
    const double g = p.gamma1, w = p.omega, wr = p.omega_r;
    const double w2 = w * w, wr2 = wr * wr;
    const double m = w2 * w2 + 2.0 * wr2 * (2.0 * g * g + w2 + 2.0 * wr2);
    if (!(m > 0.0)) {
        throw std::domain_error("steady_state_analytic: omega = omega_r = 0 has no unique steady state");
    }
    using c = std::complex<double>;
    SteadyStateAnalytic s;
    s.m_denominator = m;
    s.rho_gg = wr2 * (2.0 * g * g + w2 + 2.0 * wr2) / m;
    s.rho_aa = (w2 * w2 + wr2 * (2.0 * g * g - w2 + 2.0 * wr2)) / m;
    s.rho_ee = 2.0 * w2 * wr2 / m;
    s.rho_ge = c(0.0, 2.0 * g * w * wr2 / m);
    s.rho_ae = c((-w2 * w * wr + 2.0 * w * wr2 * wr) / m, 0.0);
    s.rho_ga = c(0.0, -g * w2 * wr / m);
    return s;
}

CorrelationCurve conditional_excitation(const ModelSystem& emitter, std::span<const double> grid) {
    require_bare_emitter(emitter, "conditional_excitation");
    check_grid(grid);
    const auto l = emitter.liouvillian();
    const auto method = quantum::preferred_propagation(l);
    const auto rho0 = DensityMatrix::basis_state(emitter.dim(), emitter.lower_level);

    CorrelationCurve out;
    out.grid.assign(grid.begin(), grid.end());
    out.values.reserve(grid.size());
    for (double tau : grid) {
        out.values.push_back(quantum::propagate(l, rho0, tau, method).population(emitter.excited_level));
    }
    out.meta.method = method;
    out.meta.eigenbasis_condition = l.spectral().condition;
    return out;
}

CorrelationCurve g2_sigma_tau(const ModelSystem& emitter, std::span<const double> grid) {
    require_bare_emitter(emitter, "g2_sigma_tau");
    const double rho_ee = quantum::steady_state(emitter.liouvillian()).population(emitter.excited_level);
    if (!(rho_ee >= 1e-300)) {
        throw std::domain_error("g2_sigma_tau: steady excitation " + std::to_string(rho_ee) +
                                " is below 1e-300; g2 cannot be normalized");
    }
    CorrelationCurve out = conditional_excitation(emitter, grid);
    for (auto& v : out.values) v /= rho_ee;
    out.meta.steady_excitation = rho_ee;
    return out;
}

std::vector<double> default_tau_grid(const ModelSystem& emitter, int points) {
    if (points < 2) throw std::invalid_argument("default_tau_grid: need at least two points");
    const double slow = quantum::slowest_relaxation_time(emitter.liouvillian());
    const double t_min = 1e-3;
    double t_max = std::isfinite(slow) ? 10.0 * slow : 1e3;
    t_max = std::max(t_max, 10.0);
    std::vector<double> grid(static_cast<std::size_t>(points));
    const double a = std::log10(t_min), b = std::log10(t_max);
    for (int i = 0; i < points; ++i) {
        grid[static_cast<std::size_t>(i)] = std::pow(10.0, a + (b - a) * i / (points - 1));
    }
    return grid;
}

WeakDriveG2 g2_weak_analytic(double omega, double omega_r, double gamma, double tau) {
    if (!(gamma > 0.0)) throw std::invalid_argument("g2_weak_analytic: gamma must be > 0");
    if (!(tau >= 0.0)) throw std::invalid_argument("g2_weak_analytic: tau must be >= 0");
    const double gap = gamma * gamma - 2.0 * omega * omega;
    if (std::abs(gap) < 1e-6 * gamma * gamma) {
        // At gamma^2 = 2 omega^2 the bracket tends to exp(-2 gamma t) - exp(-gamma t),
        // which does not vanish, so the prefactor pole is not removable.
        throw std::domain_error("g2_weak_analytic: gamma^2 = 2 omega^2 is a pole of the weak-drive expression");
    }
    LambdaParams p;
    p.omega = omega;
    p.omega_r = omega_r;
    p.gamma1 = p.gamma2 = gamma;
    const double rho_ee = steady_state_analytic(p).rho_ee;
    const double bracket = -2.0 * std::exp(-gamma * tau) + std::exp(-2.0 * gamma * tau) +
                           std::exp(-2.0 * omega * omega / gamma * tau);
    return {omega * omega / (rho_ee * gap) * bracket, omega < 0.1 * gamma};
}

double SensorMoments::normalized_correlation(int order) const {
    if (order < 1 || order >= static_cast<int>(normalized.size())) {
        throw std::out_of_range("SensorMoments: order outside the Fock truncation");
    }
    return normalized[static_cast<std::size_t>(order)] / std::pow(normalized[1], order);
}

double SensorMoments::log10_moment(int k) const {
    return 2.0 * k * std::log10(level_scale) + std::log10(normalized.at(static_cast<std::size_t>(k)));
}

ModelSystem build_sensor_model(const EmitterParams& p, const SensorConfig& s, Coupling coupling) {
    const bool strong = coupling == Coupling::cavity;
    if (const auto* lp = std::get_if<LambdaParams>(&p)) {
        return strong ? models::build_cavity_qed(*lp, s) : models::build_cascaded_sensor(*lp, s);
    }
    return models::build_rb87_system(std::get<RbParams>(p), s, strong);
}

// <b^dag b> is of order level_scale^2 * rho_ee for both narrow and broad filters.
double sensor_level_scale(double g_c, double kappa) {
    return std::min(1.0, g_c / std::sqrt(kappa * std::max(kappa, 1.0)));
}

SensorMoments sensor_moments(const ModelSystem& model, double level_scale) {
    if (!model.has_sensor()) throw std::invalid_argument("sensor_moments: model has no sensor");
    if (!(level_scale > 0.0)) throw std::invalid_argument("sensor_moments: level_scale must be > 0");
    const int levels = model.sensor_levels();
    const int de = model.emitter_dim();

    Eigen::VectorXd scale(model.dim());
    for (int e = 0; e < de; ++e) {
        for (int n = 0; n < levels; ++n) scale(e * levels + n) = std::pow(level_scale, n);
    }
    const auto ss = quantum::steady_state_scaled(model.liouvillian(), scale);

    // Fock-level populations in the scaled basis, traced over the emitter.
    std::vector<double> pop(static_cast<std::size_t>(levels), 0.0);
    for (int e = 0; e < de; ++e) {
        for (int n = 0; n < levels; ++n) {
            const int i = e * levels + n;
            pop[static_cast<std::size_t>(n)] += ss.scaled(i, i).real();
        }
    }

    const double s2 = level_scale * level_scale;
    SensorMoments out;
    out.level_scale = level_scale;
    out.normalized.assign(static_cast<std::size_t>(levels), 0.0);
    for (int k = 0; k < levels; ++k) {
        double acc = 0.0;
        double weight = 1.0;  // s2^(n - k)
        for (int n = k; n < levels; ++n) {
            acc += falling_factorial(n, k) * weight * pop[static_cast<std::size_t>(n)];
            weight *= s2;
        }
        out.normalized[static_cast<std::size_t>(k)] = acc;
    }
    return out;
}

double filtered_gn_fixed(const EmitterParams& p, const SensorConfig& s, int order, Coupling coupling) {
    if (order < 2) throw std::invalid_argument("filtered_gn: order must be >= 2");
    if (!s.n_max) throw std::invalid_argument("filtered_gn_fixed: n_max must be set");
    if (*s.n_max < order + 1) {
        throw std::invalid_argument("filtered_gn: n_max = " + std::to_string(*s.n_max) +
                                    " is too small for order " + std::to_string(order) +
                                    " (need n_max >= order + 1)");
    }
    const ModelSystem model = build_sensor_model(p, s, coupling);
    const SensorMoments m = sensor_moments(model, sensor_level_scale(s.g_c, s.kappa));

    const double first = m.normalized[1];
    const double log10_floor = std::log10(DBL_MIN);
    if (!(first > 0.0) || order * m.log10_moment(1) < log10_floor) {
        const double suggested =
            first > 0.0 ? s.g_c * std::pow(10.0, 0.5 * (log10_floor / order - m.log10_moment(1)))
                        : std::numeric_limits<double>::infinity();
        throw MomentUnderflow("filtered_gn: <b^dag b>^" + std::to_string(order) +
                                  " underflows double precision; raise g_c to at least " +
                                  std::to_string(suggested),
                              DBL_MIN, suggested);
    }
    const double g = m.normalized_correlation(order);
    if (!std::isfinite(g)) {
        throw quantum::NumericalFailure("filtered_gn: non-finite correlation");
    }
    return g;
}

FilteredCorrelation filtered_gn(const EmitterParams& p, const SensorConfig& s, int order,
                                const ProtocolOptions& options) {
    if (order < 2) throw std::invalid_argument("filtered_gn: order must be >= 2");
    int n_max = s.n_max.value_or(order + 3);
    if (n_max < order + 1) {
        throw std::invalid_argument("filtered_gn: n_max must be >= order + 1");
    }
    const int ceiling = std::max(options.nmax_ceiling.value_or(2 * order + 4), n_max);
    const bool filter = options.coupling == Coupling::filter;
    double g_c = s.g_c;

    auto eval = [&](double g, int n) {
        SensorConfig c = s;
        c.g_c = g;
        c.n_max = n;
        return filtered_gn_fixed(p, c, order, options.coupling);
    };

    FilteredCorrelation out;
    out.order = order;
    double value = eval(g_c, n_max);
    for (;;) {
        const double by_nmax = eval(g_c, n_max + 2);
        const double nmax_change = relative_change(value, by_nmax);
        double by_gc = value;
        double gc_change = 0.0;
        if (filter) {
            by_gc = eval(0.5 * g_c, n_max);
            gc_change = relative_change(value, by_gc);
        }
        const bool nmax_ok = nmax_change <= options.nmax_tolerance;
        const bool gc_ok = gc_change <= options.gc_tolerance;

        out.value = value;
        out.g_c_used = g_c;
        out.n_max_used = n_max;
        out.nmax_change = nmax_change;
        out.gc_change = gc_change;
        out.converged = nmax_ok && gc_ok;
        if (out.converged) return out;

        const bool grow_n = !nmax_ok && n_max + 2 <= ceiling;
        const bool shrink_g = filter && !gc_ok && 0.5 * g_c >= options.gc_floor;
        if (!grow_n && !shrink_g) return out;
        if (grow_n && shrink_g) {
            n_max += 2;
            g_c *= 0.5;
            value = eval(g_c, n_max);
        } else if (grow_n) {
            n_max += 2;
            value = by_nmax;
        } else {
            g_c *= 0.5;
            value = by_gc;
        }
    }
}

double steady_excitation(const EmitterParams& p) {
    if (const auto* lp = std::get_if<LambdaParams>(&p)) {
        if (lp->delta_a == 0.0 && lp->delta_e == 0.0 && lp->gamma1 == lp->gamma2 &&
            (lp->omega > 0.0 || lp->omega_r > 0.0)) {
            return steady_state_analytic(*lp).rho_ee;
        }
        const ModelSystem m = models::build_lambda_emitter(*lp);
        return quantum::steady_state(m.liouvillian()).population(m.excited_level);
    }
    const ModelSystem m = models::build_rb87_emitter(std::get<RbParams>(p));
    return quantum::steady_state(m.liouvillian()).population(m.excited_level);
}

QualityFactor quality_q(const EmitterParams& p, const SensorConfig& s, const ProtocolOptions& options) {
    QualityFactor q;
    q.g2 = filtered_gn(p, s, 2, options);
    q.rho_ee = steady_excitation(p);
    q.value = q.g2.value * q.rho_ee;
    return q;
}

}  // namespace shelvesim::correlations
