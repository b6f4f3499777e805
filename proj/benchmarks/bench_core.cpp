#include <benchmark/benchmark.h>

#include "gyrostat/gyrostat.hpp"

using namespace gyrostat;

namespace {

InertiaParams params() {
    InertiaParams p;
    p.i_bar = {3, 2, 1};
    p.j3 = 1;
    return p;
}

GravityParams heavy() {
    GravityParams g;
    g.mgh = 2;
    return g;
}

const Se3RotorState kSe3{{1, 2, 3}, {0.6, 0, 0.8}, 0, 0.5};

void BM_ReducedRhsSe3(benchmark::State& state) {
    const auto p = params();
    const auto g = heavy();
    for (auto _ : state) benchmark::DoNotOptimize(reduced_rhs_se3(kSe3, p, g));
}
BENCHMARK(BM_ReducedRhsSe3);

void BM_StepRk4Se3(benchmark::State& state) {
    const Rhs rhs = make_rhs(params(), heavy(), ControlLawSe3::zero());
    Eigen::VectorXd x = kSe3.to_vector();
    for (auto _ : state) {
        x = step_rk4(rhs, x, 1e-3);
        benchmark::DoNotOptimize(x.data());
    }
}
BENCHMARK(BM_StepRk4Se3);

void BM_StepMidpointSe3(benchmark::State& state) {
    const Rhs rhs = make_rhs(params(), heavy(), ControlLawSe3::zero());
    Eigen::VectorXd x = kSe3.to_vector();
    for (auto _ : state) {
        x = step_midpoint(rhs, x, 1e-3);
        benchmark::DoNotOptimize(x.data());
    }
}
BENCHMARK(BM_StepMidpointSe3);

void BM_BracketOracleSe3(benchmark::State& state) {
    const ScalarField h = hamiltonian_field(params(), heavy());
    const Eigen::VectorXd x = kSe3.to_vector();
    for (auto _ : state) {
        benchmark::DoNotOptimize(hamiltonian_vector_field_via_bracket(BracketKind::ProductSe3, h, x));
    }
}
BENCHMARK(BM_BracketOracleSe3);

void BM_HjResidualSe3(benchmark::State& state) {
    const auto p = params();
    const auto g = heavy();
    const auto gb = GammaBarSe3::from_state(kSe3);
    for (auto _ : state) {
        const auto u = solve_lift(gb, p, g);
        benchmark::DoNotOptimize(hj_residual_se3(gb, p, g, u));
    }
}
BENCHMARK(BM_HjResidualSe3);

void BM_IntegrateSo3(benchmark::State& state) {
    const auto p = params();
    IntegratorOptions o;
    o.dt = 1e-3;
    o.t_end = 1.0;
    o.sample_every = 100;
    for (auto _ : state) {
        benchmark::DoNotOptimize(integrate(p, So3RotorState{{1, 2, 3}, 0, 0.5}, ControlLawSo3::zero(), o));
    }
}
BENCHMARK(BM_IntegrateSo3)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
