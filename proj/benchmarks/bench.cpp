#include "egs/isotonic.hpp"
#include "egs/radial.hpp"
#include "egs/solver2d.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

using namespace egs;

namespace {

const ProblemSpec kSpec = ProblemSpec::exterior_ball(3, 2, 4.0, 2.0);

Field bump(const GridPtr& g) {
    Field f(g);
    for (int i = 1; i < g->M(); ++i) {
        const double x = g->radial().node(i) - g->radial().inner();
        for (int j = 0; j < g->J(); ++j) f.at(i, j) = x * std::exp(-x) * (1.0 + std::cos(g->theta(j)));
    }
    return f;
}

void BM_linear_solve(benchmark::State& state) {
    const auto g = Grid2D::make(kSpec, static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
    Discretization disc(kSpec, g);
    const Field rhs = bump(g);
    for (auto _ : state) benchmark::DoNotOptimize(disc.linear_solve(rhs));
    state.SetComplexityN(static_cast<long>(g->interior_size()));
}
BENCHMARK(BM_linear_solve)->Args({128, 16})->Args({256, 32})->Args({512, 64})->Unit(benchmark::kMillisecond);

void BM_project_cone(benchmark::State& state) {
    const auto g = Grid2D::make(kSpec, static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
    std::mt19937_64 rng(1);
    std::normal_distribution<double> n;
    Field f(g);
    for (int i = 1; i < g->M(); ++i) {
        for (int j = 0; j < g->J(); ++j) f.at(i, j) = n(rng);
    }
    for (auto _ : state) benchmark::DoNotOptimize(project_cone(f));
}
BENCHMARK(BM_project_cone)->Args({256, 32})->Args({512, 64})->Unit(benchmark::kMicrosecond);

void BM_energy(benchmark::State& state) {
    const auto g = Grid2D::make(kSpec, static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
    Discretization disc(kSpec, g);
    const Field f = bump(g);
    for (auto _ : state) benchmark::DoNotOptimize(disc.energy(f));
}
BENCHMARK(BM_energy)->Args({256, 32})->Args({512, 64})->Unit(benchmark::kMicrosecond);

void BM_radial_solve(benchmark::State& state) {
    const auto grid = RadialGrid::uniform(3, kSpec.R, kSpec.r_max, static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(solve_radial(kSpec, grid));
}
BENCHMARK(BM_radial_solve)->Arg(1024)->Arg(4096)->Arg(16384)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
