#include <benchmark/benchmark.h>

#include "mmsde/harness.hpp"

using namespace mmsde;

namespace {

Point pt2(double a, double b) {
    Point p(2);
    p << a, b;
    return p;
}

void BM_PolyhedronProjection(benchmark::State& state) {
    const auto wedge = indicator_polyhedron({{pt2(1, -1), 0.0}, {pt2(-1, -1), 0.0}, {pt2(0, 1), 4.0}});
    Sampler s(wedge, 1);
    std::vector<Point> points;
    for (int i = 0; i < 256; ++i) {
        points.push_back(3.0 * s.point());
    }
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(wedge.project_domain(points[i++ & 255]));
    }
}
BENCHMARK(BM_PolyhedronProjection);

void BM_SolveStep(benchmark::State& state) {
    const auto op = linear_monotone((Matrix(2, 2) << 1, 0.5, -0.5, 1).finished());
    Sampler s(op, 2);
    const auto y = s.step_path(static_cast<std::size_t>(state.range(0)), 1.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_step(op, classical_projection(), y));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SolveStep)->Arg(16)->Arg(128)->Arg(1024)->Complexity();

DriverSpec jump_diffusion() {
    DriverSpec spec = DriverSpec::zero(1);
    spec.z.vol = Matrix::Ones(1, 1);
    spec.z.jump_rate = 2.0;
    spec.h0 = Point::Ones(1);
    return spec;
}

void BM_Simulate(benchmark::State& state) {
    const auto spec = jump_diffusion();
    const auto grid = uniform_partition(1.0, static_cast<std::size_t>(state.range(0)));
    std::uint64_t traj = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(simulate(spec, grid, 0, traj++));
    }
}
BENCHMARK(BM_Simulate)->Arg(128)->Arg(2048);

void BM_EulerScheme(benchmark::State& state) {
    const auto driver = simulate(jump_diffusion(), uniform_partition(1.0, static_cast<std::size_t>(state.range(0))), 0, 0);
    const auto f = constant_coefficient(Matrix::Ones(1, 1));
    const auto op = indicator_halfline();
    for (auto _ : state) {
        benchmark::DoNotOptimize(euler_scheme(op, classical_projection(), f, driver));
    }
}
BENCHMARK(BM_EulerScheme)->Arg(128)->Arg(2048);

void BM_YosidaScheme(benchmark::State& state) {
    const auto driver = simulate(jump_diffusion(), uniform_partition(1.0, 2048), 0, 0);
    const auto f = constant_coefficient(Matrix::Ones(1, 1));
    const auto op = indicator_halfline();
    for (auto _ : state) {
        benchmark::DoNotOptimize(yosida_scheme(op, 64.0, f, driver));
    }
}
BENCHMARK(BM_YosidaScheme);

}  // namespace
BENCHMARK_MAIN();
