// bench_core.cpp - timings of the Liouvillian build, steady-state solve, correlations and 3j symbols

#include <benchmark/benchmark.h>

#include "shelvesim/correlations.hpp"
#include "shelvesim/spin.hpp"

namespace {

using namespace shelvesim;

models::LambdaParams lambda(double omega, double omega_r) {
    models::LambdaParams p;
    p.omega = omega;
    p.omega_r = omega_r;
    return p;
}

models::SensorConfig sensor(int n_max) {
    models::SensorConfig s;
    s.n_max = n_max;
    return s;
}

void BM_build_liouvillian(benchmark::State& state) {
    const auto m = models::build_cascaded_sensor(lambda(10, 0.1), sensor(static_cast<int>(state.range(0))));
    for (auto _ : state) benchmark::DoNotOptimize(m.liouvillian());
    state.SetLabel("dim " + std::to_string(m.dim()));
}
BENCHMARK(BM_build_liouvillian)->Arg(3)->Arg(5)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_sensor_moments(benchmark::State& state) {
    const auto m = models::build_cascaded_sensor(lambda(10, 0.1), sensor(static_cast<int>(state.range(0))));
    const double scale = correlations::sensor_level_scale(1e-3, 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(correlations::sensor_moments(m, scale));
    state.SetLabel("dim " + std::to_string(m.dim()));
}
BENCHMARK(BM_sensor_moments)->Arg(3)->Arg(5)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_filtered_gn(benchmark::State& state) {
    const int order = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(correlations::filtered_gn(lambda(100, 0.1), models::SensorConfig{}, order));
    }
}
BENCHMARK(BM_filtered_gn)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_filtered_g2_rb87(benchmark::State& state) {
    models::RbParams p;
    p.v_eg = 100.0;
    p.omega_b_field = 0.1;
    for (auto _ : state) benchmark::DoNotOptimize(correlations::filtered_gn(p, models::SensorConfig{}, 2));
}
BENCHMARK(BM_filtered_g2_rb87)->Unit(benchmark::kMillisecond);

void BM_conditional_curve(benchmark::State& state) {
    const auto m = models::build_lambda_emitter(lambda(10, 0.1));
    const auto grid = correlations::default_tau_grid(m, 400);
    for (auto _ : state) benchmark::DoNotOptimize(correlations::g2_sigma_tau(m, grid));
}
BENCHMARK(BM_conditional_curve)->Unit(benchmark::kMillisecond);

void BM_wigner3j(benchmark::State& state) {
    const auto args = spin::ThreeJArgs::from_doubles(3, 2.5, 1.5, -1, 0.5, 0.5);
    for (auto _ : state) benchmark::DoNotOptimize(spin::wigner3j(args));
}
BENCHMARK(BM_wigner3j);

}  // namespace

BENCHMARK_MAIN();
