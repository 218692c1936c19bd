#include <cmath>

#include <benchmark/benchmark.h>

#include "mbe/grid.hpp"
#include "mbe/harness.hpp"
#include "mbe/kernels.hpp"
#include "mbe/stepper.hpp"

namespace {

const double kTwoPi = 8.0 * std::atan(1.0);

void BM_SpectralSolve(benchmark::State& state) {
    const mbe::GridSpec grid(kTwoPi, static_cast<int>(state.range(0)));
    const mbe::Field rhs = mbe::Field::sample(grid, [](double x, double y) -> double {
        return std::sin(3.0 * x) * std::cos(2.0 * y);
    });
    for (auto _ : state) {
        mbe::Field w = mbe::solve_helmholtz_biharmonic(1000.0, 0.1, rhs);
        benchmark::DoNotOptimize(w.data());
    }
}
BENCHMARK(BM_SpectralSolve)->Arg(64)->Arg(128)->Arg(256);

void BM_Bdf2Step(benchmark::State& state) {
    const mbe::GridSpec grid(kTwoPi, static_cast<int>(state.range(0)));
    const mbe::MbeParams params{0.1};
    const mbe::SolverConfig solver;
    const double tau = 1e-3;
    const mbe::Field phi0 = mbe::benchmark_initial_data(grid);
    const mbe::Field phi1 = mbe::bdf1_step(phi0, tau, tau, params, solver);
    for (auto _ : state) {
        mbe::Field phi2 = mbe::bdf2_step(phi1, phi0, tau, 1.0, 2.0 * tau, params, solver);
        benchmark::DoNotOptimize(phi2.data());
    }
}
BENCHMARK(BM_Bdf2Step)->Arg(64)->Arg(128);

void BM_DocTable(benchmark::State& state) {
    const auto mesh = mbe::TimeMesh::random(1.0, static_cast<int>(state.range(0)), 7);
    for (auto _ : state) {
        auto table = mbe::DocKernelTable::closed_form(mesh);
        benchmark::DoNotOptimize(table.entry(mesh.num_steps(), 1));
    }
}
BENCHMARK(BM_DocTable)->Arg(100)->Arg(1000);

void BM_ComputeMr(benchmark::State& state) {
    const auto mesh = mbe::TimeMesh::random(1.0, static_cast<int>(state.range(0)), 7);
    for (auto _ : state) {
        auto mr = mbe::compute_m_r(mesh);
        benchmark::DoNotOptimize(mr.value);
    }
}
BENCHMARK(BM_ComputeMr)->Arg(50)->Arg(200);

}  // namespace

BENCHMARK_MAIN();
