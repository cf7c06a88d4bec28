#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mmsde/errors.hpp"
#include "mmsde/harness.hpp"
#include "mmsde/skorokhod.hpp"
#include "test_util.hpp"

using namespace mmsde;
using mmsde::testing::path1;
using mmsde::testing::pt;

TEST(SolveStep, HalflineDownJump) {
    const auto y = path1({0.0, 1.0, 2.0}, {1.0, -1.0, -1.0});
    const auto sol = solve_step(indicator_halfline(), classical_projection(), y);
    EXPECT_EQ(sol.x.values(), (Matrix(1, 3) << 1.0, 0.0, 0.0).finished());
    EXPECT_EQ(sol.k.values(), (Matrix(1, 3) << 0.0, -1.0, -1.0).finished());
    EXPECT_EQ(sol.k_jumps[1](0), -1.0);
}

TEST(SolveStep, InteriorConstantInputIsStationary) {
    const auto box = indicator_box(pt({0, 0}), pt({1, 1}));
    const auto y = StepPath::constant(uniform_partition(1.0, 10), pt({0.4, 0.6}));
    const auto sol = solve_step(box, classical_projection(), y);
    for (std::size_t k = 0; k < y.size(); ++k) {
        EXPECT_EQ(sol.x.value(k), pt({0.4, 0.6}));
        EXPECT_EQ(sol.k.value(k).norm(), 0.0);
    }
}

TEST(SolveStep, LinearOperatorExponentialDecay) {
    const auto op = linear_monotone(Matrix::Identity(1, 1));
    const auto y = StepPath::constant(Partition({0.0, 1.0}), pt({1.0}));
    for (const int m : {10, 100, 1000}) {
        SkorokhodOptions options;
        options.flow_substeps = m;
        const auto sol = solve_step(op, classical_projection(), y, options);
        EXPECT_LE(std::abs(sol.x.value(1)(0) - std::exp(-1.0)), 2.0 / m);
        EXPECT_LE(std::abs(sol.k.value(1)(0) - (1.0 - std::exp(-1.0))), 2.0 / m);
        EXPECT_EQ(sol.k_jump.value(1)(0), 0.0);
    }
}

TEST(SolveStep, StartOutsideDomainThrows) {
    EXPECT_THROW(solve_step(indicator_halfline(), classical_projection(), path1({0.0, 1.0}, {-1.0, 0.0})),
                 DomainViolation);
}

TEST(SolveStep, ElasticReboundAtJump) {
    const auto y = path1({0.0, 1.0, 2.0}, {1.0, -1.0, -1.0});
    const auto sol = solve_step(indicator_halfline(), elastic_projection(0.5), y);
    EXPECT_DOUBLE_EQ(sol.x.value(1)(0), 0.5);
    EXPECT_DOUBLE_EQ(sol.k.value(1)(0), -1.5);
}

TEST(Oracle, Examples) {
    const auto a = reflect_halfline_oracle(StepPath::constant(uniform_partition(1.0, 3), pt({3.0})));
    EXPECT_EQ(a.x.values().minCoeff(), 3.0);
    EXPECT_EQ(a.k.values().norm(), 0.0);

    const auto b = reflect_halfline_oracle(path1({0.0, 1.0, 2.0}, {1.0, -1.0, -1.0}));
    EXPECT_EQ(b.x.values(), (Matrix(1, 3) << 1.0, 0.0, 0.0).finished());
    EXPECT_EQ(b.k.values(), (Matrix(1, 3) << 0.0, -1.0, -1.0).finished());

    const auto c = reflect_halfline_oracle(path1({0.0, 1.0, 2.0, 3.0}, {0.0, -2.0, 1.0, 1.0}));
    EXPECT_EQ(c.x.values(), (Matrix(1, 4) << 0.0, 0.0, 3.0, 3.0).finished());
    EXPECT_EQ(c.k.values(), (Matrix(1, 4) << 0.0, -2.0, -2.0, -2.0).finished());

    EXPECT_THROW(reflect_halfline_oracle(path1({0.0, 1.0}, {-0.5, 0.0})), std::invalid_argument);
}

TEST(Oracle, MatchesSolverOnRandomPaths) {
    const auto op = indicator_halfline();
    Sampler s(op, 99);
    for (int i = 0; i < 100; ++i) {
        const auto y = s.step_path(static_cast<std::size_t>(s.uniform(1, 51)), 1.0);
        const auto a = solve_step(op, classical_projection(), y);
        const auto b = reflect_halfline_oracle(y);
        EXPECT_LE(grid_distance(a.x, b.x, y.partition(), 1.0), 1e-10);
    }
}

TEST(Verify, AcceptsSolverOutput) {
    const auto op = linear_monotone((Matrix(2, 2) << 1, 0.3, -0.3, 0.5).finished());
    Sampler s(op, 5);
    const auto y = s.step_path(20, 1.0);
    const auto sol = solve_step(op, classical_projection(), y);
    std::vector<std::pair<Point, Point>> pairs{s.graph_pair(), s.graph_pair(), s.graph_pair()};
    const auto r = verify_solution(op, classical_projection(), sol, pairs);
    EXPECT_TRUE(r.pass) << (r.failures.empty() ? "" : r.failures.front());
    EXPECT_LE(r.additivity_residual, 1e-12);
    EXPECT_GE(r.min_monotonicity, -1e-9);
}

TEST(Verify, DetectsTamperedSolution) {
    const auto op = indicator_halfline();
    const auto y = path1({0.0, 1.0, 2.0}, {1.0, -1.0, 0.5});
    auto sol = solve_step(op, classical_projection(), y);
    Matrix x = sol.x.values();
    x(0, 2) += 0.1;
    sol.x = StepPath(sol.x.partition(), x);
    const auto r = verify_solution(op, classical_projection(), sol, {});
    EXPECT_FALSE(r.pass);
    EXPECT_NEAR(r.additivity_residual, 0.1, 1e-12);
}

TEST(Verify, InteriorPairOnIndicatorGivesZeroIntegral) {
    const auto op = indicator_halfline();
    const auto y = path1({0.0, 0.5, 1.0}, {2.0, -1.0, 3.0});
    const auto sol = solve_step(op, classical_projection(), y);
    const auto r = verify_solution(op, classical_projection(), sol, {{pt({1.0}), pt({0.0})}});
    EXPECT_TRUE(r.pass);
    EXPECT_EQ(r.min_monotonicity, 0.0);
    EXPECT_EQ(sol.k_continuous.values().norm(), 0.0);
}

TEST(Verify, JumpBoundAndDecomposition) {
    const auto op = indicator_ball(pt({0, 0}), 1.0);
    Sampler s(op, 17);
    for (int i = 0; i < 50; ++i) {
        const auto y = s.step_path(30, 2.0);
        for (const auto& pi : {classical_projection(), elastic_projection(0.6),
                               iterated_elastic_projection(1.0)}) {
            const auto sol = solve_step(op, pi, y);
            for (std::size_t k = 0; k < y.size(); ++k) {
                EXPECT_LE(sol.k.jump(k).norm(), 2.0 * y.jump(k).norm());
                EXPECT_LE((sol.k_continuous.value(k) + sol.k_jump.value(k) - sol.k.value(k)).norm(),
                          1e-12);
            }
            EXPECT_GE(variation(sol.k, 0.0, 2.0) + 1e-12,
                      (sol.k.value(y.size() - 1) - sol.k.value(0)).norm());
        }
    }
}

TEST(Comparison, InequalitiesOnRandomPairs) {
    const auto op = linear_monotone((Matrix(2, 2) << 2, 0, 0, 0.5).finished());
    Sampler s(op, 23);
    for (int i = 0; i < 50; ++i) {
        const auto grid = s.step_path(20, 1.0).partition();
        const auto a = solve_step(op, classical_projection(), s.step_path(grid));
        const auto b = solve_step(op, classical_projection(), s.step_path(grid));
        EXPECT_GE(min_window_sum(comparison_increments(a, b)), -1e-9);
        for (const double v : comparison_slack(a, b)) {
            EXPECT_GE(v, -1e-8);
        }
    }
}

TEST(Comparison, MinWindowSum) {
    EXPECT_EQ(min_window_sum({}), 0.0);
    EXPECT_EQ(min_window_sum({1.0, -2.0, 0.5, -3.0, 4.0}), -4.5);
    EXPECT_EQ(min_window_sum({1.0, 2.0}), 0.0);
}

TEST(Continuity, PerturbationShrinksSolutionDistance) {
    const auto op = indicator_ball(pt({0, 0}), 1.0);
    Sampler s(op, 31);
    const auto y = s.step_path(40, 1.0);
    const auto base = solve_step(op, classical_projection(), y);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Matrix noise(2, static_cast<Eigen::Index>(y.size()));
    for (Eigen::Index k = 0; k < noise.cols(); ++k) {
        noise(0, k) = u(rng);
        noise(1, k) = u(rng);
    }
    double previous = INFINITY;
    for (const double eps : {1e-2, 1e-3, 1e-4}) {
        Matrix v = y.values() + eps * noise;
        v.col(0) = y.values().col(0);
        const auto sol = solve_step(op, classical_projection(), StepPath(y.partition(), v));
        const double d = sup_distance(sol.x, base.x, 1.0);
        EXPECT_LT(d, previous);
        previous = d;
    }
}

TEST(ProjectionIndependence, ContinuousInputs) {
    const auto op = indicator_box(pt({0, 0}), pt({1, 1}));
    const auto y = [](double t) { return pt({0.5 + std::sin(6.0 * t), 0.5 + 0.8 * std::sin(4.0 * t)}); };
    const auto grid = uniform_partition(2.0, 4000);
    const auto yd = discretize(y, grid);
    const auto a = solve_step(op, classical_projection(), yd);
    const auto b = solve_step(op, iterated_elastic_projection(0.8), yd);
    EXPECT_LE(sup_distance(a.x, b.x, 2.0), 10.0 * grid.mesh());
}
