// test_correlations.cpp - analytic steady state, delay curves, filtered correlations, Q

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "doctest.h"
#include "shelvesim/correlations.hpp"
#include "test_util.hpp"

using namespace shelvesim;
using namespace shelvesim::correlations;
using quantum::cplx;
using quantum::Matrix;

namespace {

LambdaParams lambda(double omega, double omega_r) {
    LambdaParams p;
    p.omega = omega;
    p.omega_r = omega_r;
    return p;
}

SensorConfig sensor(double kappa, double g_c, int n_max, double delta_b = 0.0) {
    SensorConfig s;
    s.kappa = kappa;
    s.g_c = g_c;
    s.n_max = n_max;
    s.delta_b = delta_b;
    return s;
}

// Closed-form steady state of the resonant Lambda emitter, gamma1 = gamma2 = gamma.
struct A1 {
    double gg, aa, ee;
    cplx ge, ae, ga;
};

A1 closed_form(double w, double wr, double g) {
    const double m = std::pow(w, 4) + 2 * wr * wr * (2 * g * g + w * w + 2 * wr * wr);
    return {wr * wr * (2 * g * g + w * w + 2 * wr * wr) / m,
            (std::pow(w, 4) + wr * wr * (2 * g * g - w * w + 2 * wr * wr)) / m,
            2 * w * w * wr * wr / m,
            cplx(0, 2 * g * w * wr * wr / m),
            (-std::pow(w, 3) * wr + 2 * w * std::pow(wr, 3)) / m,
            cplx(0, -g * w * w * wr / m)};
}

// Normalised sensor correlation from a bordered steady-state solve in extended
// precision, with the generator assembled from the master equation itself.
double oracle_gn(const models::ModelSystem& m, int order) {
    using lcplx = std::complex<long double>;
    using LMatrix = Eigen::Matrix<lcplx, Eigen::Dynamic, Eigen::Dynamic>;
    using LVector = Eigen::Matrix<lcplx, Eigen::Dynamic, 1>;
    const int d = m.dim();
    const int n = d * d;
    LMatrix l(n, n);
    for (int j = 0; j < d; ++j) {
        for (int i = 0; i < d; ++i) {
            const Matrix e = quantum::OperatorMatrix::transition(d, i, j).entries();
            const Matrix col = test_util::lindblad_rhs(m.hamiltonian.entries(), m.collapses, e);
            for (int q = 0; q < d; ++q)
                for (int p = 0; p < d; ++p) l(p + q * d, i + j * d) = lcplx(col(p, q).real(), col(p, q).imag());
        }
    }
    for (int k = 0; k < n; ++k) l(0, k) = 0;
    for (int i = 0; i < d; ++i) l(0, i + i * d) = 1;
    LVector rhs = LVector::Zero(n);
    rhs(0) = 1;
    const LVector x = l.partialPivLu().solve(rhs);

    const int levels = m.sensor_levels();
    std::vector<long double> pop(static_cast<std::size_t>(levels), 0.0L);
    for (int e = 0; e < m.emitter_dim(); ++e)
        for (int k = 0; k < levels; ++k) {
            const int i = e * levels + k;
            pop[static_cast<std::size_t>(k)] += x(i + i * d).real();
        }
    auto moment = [&](int k) {
        long double acc = 0.0L;
        for (int q = k; q < levels; ++q) {
            long double ff = 1.0L;
            for (int r = 0; r < k; ++r) ff *= q - r;
            acc += ff * pop[static_cast<std::size_t>(q)];
        }
        return acc;
    };
    return static_cast<double>(moment(order) / std::pow(moment(1), static_cast<long double>(order)));
}

}  // namespace

TEST_SUITE("correlations") {

TEST_CASE("closed-form steady state values") {
    const auto s = steady_state_analytic(lambda(10.0, 0.1));
    CHECK(s.m_denominator == doctest::Approx(10002.0404).epsilon(1e-12));
    CHECK(s.rho_ee == doctest::Approx(1.99959e-4).epsilon(1e-5));
    CHECK(s.rho_gg == doctest::Approx(1.0200e-4).epsilon(1e-4));
    CHECK(s.rho_aa == doctest::Approx(0.99970).epsilon(1e-5));
    CHECK(s.rho_gg + s.rho_aa + s.rho_ee == doctest::Approx(1.0).epsilon(1e-12));

    const auto eleven = steady_state_analytic(lambda(1.0, 1.0));
    CHECK(eleven.m_denominator == doctest::Approx(11.0));
    CHECK(eleven.rho_gg == doctest::Approx(5.0 / 11.0));
    CHECK(eleven.rho_aa == doctest::Approx(4.0 / 11.0));
    CHECK(eleven.rho_ee == doctest::Approx(2.0 / 11.0));

    const auto shelved = steady_state_analytic(lambda(3.0, 0.0));
    CHECK(shelved.rho_aa == 1.0);
    CHECK(shelved.rho_gg == 0.0);
    CHECK(shelved.rho_ee == 0.0);

    auto detuned = lambda(1.0, 1.0);
    detuned.delta_e = 0.5;
    CHECK_THROWS_AS(steady_state_analytic(detuned), std::domain_error);
    auto unequal = lambda(1.0, 1.0);
    unequal.gamma2 = 2.0;
    CHECK_THROWS_AS(steady_state_analytic(unequal), std::domain_error);
}

TEST_CASE("numeric steady state equals the closed form on a 5x5 grid") {
    const std::vector<double> grid{1e-2, 1e-1, 1.0, 10.0, 1e2};
    for (double w : grid) {
        for (double wr : grid) {
            const auto m = models::build_lambda_emitter(lambda(w, wr));
            const Matrix rho = quantum::steady_state(m.liouvillian()).entries();
            const A1 a = closed_form(w, wr, 1.0);
            const auto lib = steady_state_analytic(lambda(w, wr));
            CAPTURE(w);
            CAPTURE(wr);
            CHECK(std::abs(rho(0, 0) - a.gg) <= 1e-10);
            CHECK(std::abs(rho(1, 1) - a.aa) <= 1e-10);
            CHECK(std::abs(rho(2, 2) - a.ee) <= 1e-10);
            CHECK(std::abs(rho(0, 2) - a.ge) <= 1e-10);
            CHECK(std::abs(rho(1, 2) - a.ae) <= 1e-10);
            CHECK(std::abs(rho(0, 1) - a.ga) <= 1e-10);
            CHECK(std::abs(lib.rho_ee - a.ee) <= 1e-15);
            CHECK(std::abs(lib.rho_ge - a.ge) <= 1e-15);
        }
    }
}

TEST_CASE("conditional excitation") {
    const auto m = models::build_lambda_emitter(lambda(10.0, 0.1));
    std::vector<double> grid{0.0};
    for (int i = 1; i <= 400; ++i) grid.push_back(i * 0.0025);
    const auto c = conditional_excitation(m, grid);
    CHECK(c.values.front() == 0.0);
    double best = 0.0, at = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (c.values[i] > best) {
            best = c.values[i];
            at = grid[i];
        }
    }
    CHECK(at == doctest::Approx(M_PI / 20.0).epsilon(0.1));

    // Oracle: RK4 integration of the master equation from |g><g|, written out
    // independently of the model builder (g, a, e = 0, 1, 2).
    Matrix h = Matrix::Zero(3, 3);
    h(2, 0) = h(0, 2) = 10.0;
    h(0, 1) = h(1, 0) = 0.1;
    struct Decay {
        quantum::OperatorMatrix op;
        double rate;
    };
    const std::vector<Decay> decays{{quantum::OperatorMatrix::transition(3, 0, 2), 1.0},
                                    {quantum::OperatorMatrix::transition(3, 1, 2), 1.0}};
    auto rhs = [&](const Matrix& r) { return test_util::lindblad_rhs(h, decays, r); };
    Matrix rho = Matrix::Zero(3, 3);
    rho(0, 0) = 1.0;
    const int sub = 10;
    const double dt = 0.0025 / sub;
    double oracle_best = 0.0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        for (int k = 0; k < sub; ++k) {
            const Matrix k1 = rhs(rho);
            const Matrix k2 = rhs(rho + 0.5 * dt * k1);
            const Matrix k3 = rhs(rho + 0.5 * dt * k2);
            const Matrix k4 = rhs(rho + dt * k3);
            rho += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        CHECK(std::abs(c.values[i] - rho(2, 2).real()) <= 1e-9);
        oracle_best = std::max(oracle_best, rho(2, 2).real());
    }
    CHECK(std::abs(best - oracle_best) <= 1e-9);
    // For this drive the first maximum stays below 0.9.
    CHECK(best == doctest::Approx(0.8740).epsilon(1e-3));

    const std::vector<double> late{1e7, 1e8};
    const double rho_ee = steady_state_analytic(lambda(10.0, 0.1)).rho_ee;
    CHECK(conditional_excitation(m, late).values.back() == doctest::Approx(rho_ee).epsilon(1e-6));

    CHECK_THROWS_AS(conditional_excitation(m, std::vector<double>{}), std::invalid_argument);
    CHECK_THROWS_AS(conditional_excitation(m, std::vector<double>{1.0, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(conditional_excitation(m, std::vector<double>{-1.0}), std::invalid_argument);
    const auto with_sensor = models::build_cascaded_sensor(lambda(1, 1), sensor(1.0, 1e-3, 2));
    CHECK_THROWS_AS(conditional_excitation(with_sensor, grid), std::invalid_argument);
}

TEST_CASE("frequency-blind g2 and the regression identity") {
    const auto m = models::build_lambda_emitter(lambda(10.0, 0.1));
    const auto grid = default_tau_grid(m, 200);
    REQUIRE(grid.size() == 200);
    CHECK(grid.front() == doctest::Approx(1e-3));
    const auto g2 = g2_sigma_tau(m, grid);
    const auto cond = conditional_excitation(m, grid);
    const double rho_ee = g2.meta.steady_excitation;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(std::abs(g2.values[i] * rho_ee - cond.values[i]) <= 1e-10);
    }
    double best = 0.0;
    std::vector<double> fine;
    for (int i = 1; i <= 400; ++i) fine.push_back(i * 0.0025);
    for (double v : g2_sigma_tau(m, fine).values) best = std::max(best, v);
    // First maximum of the conditional excitation (0.874) over rho_ee.
    CHECK(best == doctest::Approx(0.8740 / rho_ee).epsilon(1e-3));
    CHECK(best == doctest::Approx(4.37e3).epsilon(1e-3));
    CHECK(g2_sigma_tau(m, std::vector<double>{0.0}).values.front() == 0.0);
    CHECK(g2_sigma_tau(m, std::vector<double>{1e8}).values.front() == doctest::Approx(1.0).epsilon(1e-6));

    // Omega_r = 0: |a> is dark and the emitter never gets excited.
    const auto dark = models::build_lambda_emitter(lambda(1.0, 0.0));
    CHECK_THROWS_AS(g2_sigma_tau(dark, grid), std::domain_error);
}

TEST_CASE("weak-drive closed form") {
    CHECK(g2_weak_analytic(0.1, 1e-4, 1.0, 0.0).value == 0.0);
    const double w = 0.1, wr = 1e-4, tau = 10.0;
    const double rho_ee = closed_form(w, wr, 1.0).ee;
    const double pre = w * w / (rho_ee * (1.0 - 2.0 * w * w));
    CHECK(pre == doctest::Approx(5.10e3).epsilon(0.01));
    const double expect = pre * (-2.0 * std::exp(-tau) + std::exp(-2.0 * tau) + std::exp(-2.0 * w * w * tau));
    const auto v = g2_weak_analytic(w, wr, 1.0, tau);
    CHECK(v.value == doctest::Approx(expect).epsilon(1e-12));
    CHECK(v.value == doctest::Approx(4.17e3).epsilon(0.01));
    CHECK_FALSE(v.within_validity);
    CHECK(g2_weak_analytic(0.05, wr, 1.0, tau).within_validity);
    CHECK(g2_weak_analytic(w, wr, 1.0, 1e4).value < 1e-3);
    CHECK_THROWS_AS(g2_weak_analytic(1.0 / std::sqrt(2.0), wr, 1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(g2_weak_analytic(w, wr, 1.0, -1.0), std::invalid_argument);
}

TEST_CASE("filtered correlation agrees with the extended-precision oracle") {
    struct Point {
        EmitterParams p;
        SensorConfig s;
        int order;
        Coupling coupling = Coupling::filter;
    };
    RbParams rb;
    rb.v_eg = 10.0;
    rb.omega_b_field = 0.3;
    auto detuned = lambda(2.0, 0.5);
    detuned.delta_e = 0.4;
    const std::vector<Point> points{
        {lambda(10.0, 0.1), sensor(1.0, 1e-2, 3), 2},
        {lambda(10.0, 0.1), sensor(10.0, 1e-2, 3, 2.0), 2},
        {lambda(1.0, 0.5), sensor(0.3, 0.2, 4), 3, Coupling::cavity},
        {detuned, sensor(2.0, 1e-2, 4, -1.0), 2},
        {rb, sensor(1.0, 1e-2, 3), 2},
    };
    for (const auto& pt : points) {
        const auto model = build_sensor_model(pt.p, pt.s, pt.coupling);
        const double expect = oracle_gn(model, pt.order);
        const double got = filtered_gn_fixed(pt.p, pt.s, pt.order, pt.coupling);
        CAPTURE(expect);
        CHECK(test_util::rel_diff(got, expect) < 1e-6);
    }
}

TEST_CASE("filtered correlation limits of the coupling") {
    const auto p = lambda(10.0, 0.1);
    std::vector<double> values;
    for (double g : {1e-3, 5e-4, 2.5e-4}) values.push_back(filtered_gn_fixed(p, sensor(1.0, g, 5), 2));
    for (double v : values) CHECK(test_util::rel_diff(v, values.front()) < 1e-3);
}

TEST_CASE("convergence protocol") {
    const auto p = lambda(10.0, 0.1);
    SensorConfig s;
    const auto f = filtered_gn(p, s, 2);
    CHECK(f.converged);
    CHECK(f.order == 2);
    CHECK(f.gc_change <= 1e-3);
    CHECK(f.nmax_change <= 1e-6);
    CHECK(f.n_max_used >= 3);
    CHECK(f.n_max_used <= 8);
    CHECK(f.g_c_used <= 1e-3);
    CHECK(f.value == doctest::Approx(5.0e3).epsilon(0.8));

    ProtocolOptions cavity;
    cavity.coupling = Coupling::cavity;
    SensorConfig strong;
    strong.g_c = 1.0;
    const auto c = filtered_gn(lambda(100.0, 1e-2), strong, 2, cavity);
    CHECK(c.g_c_used == 1.0);
    CHECK(c.gc_change == 0.0);

    CHECK_THROWS_AS(filtered_gn(p, s, 1), std::invalid_argument);
    SensorConfig small = s;
    small.n_max = 2;
    CHECK_THROWS_AS(filtered_gn(p, small, 2), std::invalid_argument);
    CHECK_THROWS_AS(filtered_gn_fixed(p, small, 2), std::invalid_argument);
}

TEST_CASE("moment underflow carries the threshold and a coupling suggestion") {
    const auto p = lambda(1.0, 1.0);
    try {
        (void)filtered_gn_fixed(p, sensor(1.0, 1e-25, 9), 8);
        FAIL("expected MomentUnderflow");
    } catch (const MomentUnderflow& e) {
        CHECK(e.threshold() > 0.0);
        CHECK(e.suggested_g_c() > 1e-25);
        CHECK(std::string(e.what()).find("raise g_c") != std::string::npos);
        // The suggestion indeed avoids the underflow.
        CHECK_NOTHROW((void)filtered_gn_fixed(p, sensor(1.0, 2.0 * e.suggested_g_c(), 9), 8));
    }
}

TEST_CASE("steady excitation and quality factor") {
    const auto p = lambda(10.0, 0.1);
    CHECK(steady_excitation(p) == steady_state_analytic(p).rho_ee);
    auto detuned = p;
    detuned.delta_e = 1.0;
    const auto m = models::build_lambda_emitter(detuned);
    CHECK(steady_excitation(detuned) == quantum::steady_state(m.liouvillian()).population(2));

    SensorConfig s;
    const auto q = quality_q(p, s);
    CHECK(q.value == q.g2.value * q.rho_ee);
    CHECK(q.rho_ee == steady_state_analytic(p).rho_ee);
    CHECK(q.g2.converged);
}

TEST_CASE("sensor level scale") {
    CHECK(sensor_level_scale(1e-3, 1.0) == doctest::Approx(1e-3));
    CHECK(sensor_level_scale(1e-3, 100.0) == doctest::Approx(1e-5));
    CHECK(sensor_level_scale(1e-3, 1e-2) == doctest::Approx(1e-2));
    CHECK(sensor_level_scale(10.0, 1.0) == 1.0);
}

}  // TEST_SUITE
