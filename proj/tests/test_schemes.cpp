#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "mmsde/schemes.hpp"
#include "test_util.hpp"

using namespace mmsde;
using mmsde::testing::path1;
using mmsde::testing::pt;

namespace {

DriverSpec additive_spec(double rate) {
    DriverSpec spec = DriverSpec::zero(1);
    spec.z.vol = Matrix::Constant(1, 1, 1.0);
    spec.z.jump_rate = rate;
    spec.h0 = pt({1.0});
    return spec;
}

DriverRealization deterministic_driver(std::size_t n) {
    const auto grid = uniform_partition(1.0, n);
    const auto z = discretize([](double t) { return pt({t, std::sin(3.0 * t)}); }, grid);
    const auto h = discretize([](double t) { return pt({1.0 + t * t, -0.5 * t}); }, grid);
    return driver_from_paths(h, z);
}

}  // namespace

TEST(Euler, AdditiveCaseIsTheSkorokhodProblem) {
    DriverSpec spec = DriverSpec::zero(2);
    spec.h.vol = Matrix::Identity(2, 2);
    spec.h.jump_rate = 3.0;
    spec.h0 = pt({0.5, 0.5});
    const auto op = indicator_box(pt({0, 0}), pt({1, 1}));
    const auto driver = simulate(spec, uniform_partition(1.0, 64), 4, 0);
    const auto out = euler_scheme(op, classical_projection(), zero_coefficient(2), driver);
    const auto sol = solve_step(op, classical_projection(), discretize(driver.h, driver.grid));
    EXPECT_EQ(out.x.values(), sol.x.values());
    EXPECT_EQ(out.k.values(), sol.k.values());
}

TEST(Euler, AdditiveNoiseOracle) {
    const auto op = indicator_halfline();
    for (std::uint64_t traj = 0; traj < 20; ++traj) {
        const auto driver = simulate(additive_spec(2.0), uniform_partition(1.0, 50), 1, traj);
        const auto out = euler_scheme(op, classical_projection(), constant_coefficient(Matrix::Ones(1, 1)),
                                      driver);
        const auto oracle = reflect_halfline_oracle(
            StepPath(driver.grid, Matrix::Ones(1, static_cast<Eigen::Index>(driver.grid.size())) +
                                      driver.z.values()));
        EXPECT_LE(grid_distance(out.x, oracle.x, driver.grid, 1.0), 1e-10);
    }
}

TEST(Euler, FreeLinearOdeGivesCompoundInterest) {
    DriverSpec spec = DriverSpec::zero(1);
    spec.z.drift = pt({1.0});
    spec.h0 = pt({1.0});
    for (const std::size_t n : {10u, 100u, 1000u}) {
        const auto driver = simulate(spec, uniform_partition(1.0, n), 0, 0);
        const auto out = euler_scheme(zero_operator(1), classical_projection(),
                                      linear_diagonal_coefficient(1, 1.0), driver);
        const double expected = std::pow(1.0 + 1.0 / static_cast<double>(n), static_cast<double>(n));
        EXPECT_NEAR(out.x.value(n)(0), expected, 1e-12 * expected);
        EXPECT_LE(std::exp(1.0) - out.x.value(n)(0), 2.0 / static_cast<double>(n));
    }
}

TEST(Euler, Invariants) {
    DriverSpec spec = DriverSpec::zero(2);
    spec.z.vol = Matrix::Identity(2, 2);
    spec.z.jump_rate = 4.0;
    spec.h0 = pt({0.2, 0.1});
    const auto op = indicator_ball(pt({0, 0}), 1.0);
    const auto f = linear_diagonal_coefficient(2, 0.8);
    for (std::uint64_t traj = 0; traj < 10; ++traj) {
        const auto driver = simulate(spec, uniform_partition(1.0, 40), 2, traj);
        const auto out = euler_scheme(op, elastic_projection(0.5), f, driver);
        for (std::size_t k = 0; k < driver.grid.size(); ++k) {
            EXPECT_TRUE(op.contains(out.x.value(k)));
            EXPECT_LE((out.x.value(k) + out.k.value(k) - out.y.value(k)).norm(), 1e-10);
            EXPECT_LE(out.k.jump(k).norm(), 2.0 * out.y.jump(k).norm());
        }
    }
}

TEST(Yosida, DriftIntoBoundarySettlesAtMinusOneOverN) {
    DriverSpec spec = DriverSpec::zero(1);
    spec.h.drift = pt({-1.0});
    spec.h0 = pt({0.0});
    // Contraction toward -1/n is (1 + n dt)^-k, so run long enough for n = 4.
    const auto driver = simulate(spec, uniform_partition(20.0, 2000), 0, 0);
    for (const double n : {4.0, 16.0, 64.0}) {
        const auto out = yosida_scheme(indicator_halfline(), n, zero_coefficient(1), driver);
        const double end = out.x.value(driver.grid.size() - 1)(0);
        EXPECT_LE(std::abs(end), 1.0 / n + driver.grid.mesh());
        EXPECT_NEAR(end, -1.0 / n, 1e-9);
    }
}

TEST(Yosida, ZeroOperatorIsExplicitEuler) {
    const auto driver = simulate(additive_spec(1.0), uniform_partition(1.0, 32), 3, 0);
    const auto f = linear_diagonal_coefficient(1, 0.5);
    const auto out = yosida_scheme(zero_operator(1), 10.0, f, driver);
    double x = 1.0;
    for (std::size_t k = 1; k < driver.grid.size(); ++k) {
        x = x + (driver.h.jump(k)(0) + 0.5 * x * driver.z.jump(k)(0));
        EXPECT_NEAR(out.x.value(k)(0), x, 1e-14);
    }
}

TEST(Schemes, AgreeForZeroOperatorAndDeterministicDriver) {
    const auto driver = deterministic_driver(50);
    const auto op = zero_operator(2);
    const auto f = linear_diagonal_coefficient(2, 0.7);
    const auto euler = euler_scheme(op, classical_projection(), f, driver);
    const auto yosida = yosida_scheme(op, 8.0, f, driver);
    const auto modified = modified_yosida_scheme(op, classical_projection(), 8.0, f, driver);
    EXPECT_LE((euler.x.values() - yosida.x.values()).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LE((euler.x.values() - modified.x.values()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(ModifiedYosida, NoJumpsMatchesPlainYosidaBitForBit) {
    const auto driver = simulate(additive_spec(0.0), uniform_partition(1.0, 64), 8, 2);
    const auto f = constant_coefficient(Matrix::Ones(1, 1));
    const auto a = yosida_scheme(indicator_halfline(), 10.0, f, driver);
    const auto b = modified_yosida_scheme(indicator_halfline(), classical_projection(), 10.0, f, driver);
    EXPECT_EQ(a.x.values(), b.x.values());
}

TEST(ModifiedYosida, BigJumpIsProjected) {
    const auto grid = uniform_partition(1.0, 10);
    const auto h = discretize([](double t) { return pt({t < 0.5 ? 1.0 : -1.0}); }, grid);
    const auto z = StepPath::constant(grid, pt({0.0}));
    std::vector<bool> flags(grid.size(), false);
    flags[5] = true;
    const auto driver = driver_from_paths(h, z, flags);
    const auto out =
        modified_yosida_scheme(indicator_halfline(), classical_projection(), 10.0, zero_coefficient(1), driver);
    EXPECT_EQ(out.x.value(5)(0), 0.0);
    const auto plain = yosida_scheme(indicator_halfline(), 10.0, zero_coefficient(1), driver);
    EXPECT_LT(plain.x.value(5)(0), 0.0);
}

TEST(Truncation, BoundedDomainNeverEscalates) {
    DriverSpec spec = additive_spec(2.0);
    spec.h0 = pt({0.5});
    const auto op = indicator_box(pt({0}), pt({1}));
    const auto f = power_diagonal_coefficient(1, 2.0, 1.0);
    for (std::uint64_t traj = 0; traj < 20; ++traj) {
        const auto driver = simulate(spec, uniform_partition(1.0, 32), 0, traj);
        const auto run = run_truncated(f, 2.0, [&](const Coefficient& g) {
            return euler_scheme(op, classical_projection(), g, driver);
        });
        EXPECT_EQ(run.escalations, 0);
        EXPECT_EQ(run.radius, 2.0);
    }
}

TEST(Truncation, EscalatesUntilTheTrajectoryFits) {
    DriverSpec spec = DriverSpec::zero(1);
    spec.z.drift = pt({1.0});
    spec.h0 = pt({1.5});
    const auto driver = simulate(spec, uniform_partition(1.0, 20), 0, 0);
    const auto f = linear_diagonal_coefficient(1, 1.0);
    const auto run = run_truncated(f, 1.0, [&](const Coefficient& g) {
        return euler_scheme(zero_operator(1), classical_projection(), g, driver);
    });
    EXPECT_GE(run.escalations, 1);
    EXPECT_GE(run.radius, run.output.x.values().cwiseAbs().maxCoeff());
}

TEST(Output, MetadataHeader) {
    const auto driver = simulate(additive_spec(1.0), uniform_partition(1.0, 4), 5, 6);
    const auto f = constant_coefficient(Matrix::Ones(1, 1));
    const auto out = euler_scheme(indicator_halfline(), classical_projection(), f, driver);
    const auto meta = describe(out, driver, indicator_halfline(), classical_projection(), f);
    EXPECT_EQ(meta.at("scheme"), "euler");
    EXPECT_EQ(meta.at("seed"), "5");
    EXPECT_EQ(meta.at("trajectory"), "6");
    std::stringstream s;
    write_scheme_output(s, out, meta, Format::csv);
    const auto back = read_labelled(s, Format::csv);
    EXPECT_EQ(back.at("x").values(), out.x.values());
    EXPECT_EQ(back.metadata.at("operator"), "halfline");
}

TEST(SchemeNames, RoundTrip) {
    for (const auto k : {SchemeKind::euler, SchemeKind::yosida, SchemeKind::modified_yosida}) {
        EXPECT_EQ(parse_scheme(to_string(k)), k);
    }
    EXPECT_THROW(parse_scheme("milstein"), std::invalid_argument);
}
