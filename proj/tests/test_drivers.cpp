#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "mmsde/drivers.hpp"
#include "mmsde/rng.hpp"
#include "test_util.hpp"

using namespace mmsde;
using mmsde::testing::pt;

namespace {

DriverSpec brownian(double vol, double drift, double rate) {
    DriverSpec spec = DriverSpec::zero(1);
    spec.z.vol = Matrix::Constant(1, 1, vol);
    spec.z.drift = pt({drift});
    spec.z.jump_rate = rate;
    return spec;
}

}  // namespace

TEST(Rng, CounterStreamIsDeterministic) {
    CounterRng a(substream_key(1, 2, 3, {4}));
    CounterRng b(substream_key(1, 2, 3, {4}));
    for (int i = 0; i < 100; ++i) {
        EXPECT_EQ(a(), b());
    }
    EXPECT_EQ(a.counter(), 100u);
}

TEST(Rng, SubstreamKeysDiffer) {
    std::set<std::uint64_t> keys;
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        for (std::uint64_t traj = 0; traj < 4; ++traj) {
            for (std::uint64_t tag = 0; tag < 4; ++tag) {
                keys.insert(substream_key(seed, traj, tag));
                keys.insert(substream_key(seed, traj, tag, {0}));
                keys.insert(substream_key(seed, traj, tag, {1}));
            }
        }
    }
    EXPECT_EQ(keys.size(), 4u * 4u * 4u * 3u);
}

TEST(Rng, UniformBitsHaveBalancedMean) {
    CounterRng rng(42);
    std::uniform_real_distribution<double> u;
    double sum = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        sum += u(rng);
    }
    EXPECT_NEAR(sum / n, 0.5, 3.0 * std::sqrt(1.0 / 12.0 / n));
}

TEST(Simulate, PureDrift) {
    const auto r = simulate(brownian(0.0, 1.0, 0.0), uniform_partition(1.0, 10), 0, 0);
    for (std::size_t k = 0; k < r.grid.size(); ++k) {
        EXPECT_DOUBLE_EQ(r.z.value(k)(0), r.grid[k]);
    }
    EXPECT_EQ(r.z.value(0)(0), 0.0);
}

TEST(Simulate, Reproducible) {
    const auto spec = brownian(1.0, 0.3, 2.0);
    const auto a = simulate(spec, uniform_partition(1.0, 16), 7, 3);
    const auto b = simulate(spec, uniform_partition(1.0, 16), 7, 3);
    const auto c = simulate(spec, uniform_partition(1.0, 16), 7, 4);
    EXPECT_EQ(a.grid, b.grid);
    EXPECT_EQ(a.z.values(), b.z.values());
    EXPECT_NE(a.z.values(), c.z.values());
}

TEST(Simulate, BrownianIncrementMoments) {
    const std::size_t n = 100000;
    const auto r = simulate(brownian(1.0, 0.0, 0.0), uniform_partition(1.0, n), 11, 0);
    const double dt = 1.0 / static_cast<double>(n);
    double sum = 0.0;
    double sq = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
        const double dz = r.z.jump(k)(0);
        sum += dz;
        sq += dz * dz;
    }
    const double mean = sum / n;
    const double var = sq / n - mean * mean;
    EXPECT_LE(std::abs(mean), 3.0 * std::sqrt(dt / n));
    // The variance of a sample variance of normals is 2 dt^2 / n.
    EXPECT_LE(std::abs(var - dt), 3.0 * std::sqrt(2.0 / n) * dt);
}

TEST(Simulate, PoissonJumpCount) {
    const auto spec = brownian(0.0, 0.0, 2.0);
    const int trajectories = 10000;
    double sum = 0.0;
    for (int i = 0; i < trajectories; ++i) {
        const auto r = simulate(spec, uniform_partition(1.0, 1), 5, static_cast<std::uint64_t>(i));
        int count = 0;
        for (std::size_t k = 0; k < r.grid.size(); ++k) {
            if (r.jump_flags[k]) {
                ++count;
                EXPECT_LE((r.z_jumps[k] - r.z.jump(k)).norm(), 1e-12);
            } else {
                EXPECT_EQ(r.z.jump(k).norm(), 0.0);
            }
        }
        sum += count;
    }
    EXPECT_NEAR(sum / trajectories, 2.0, 3.0 * std::sqrt(2.0 / trajectories));
}

TEST(Simulate, JumpTimesAreOnTheGrid) {
    const auto spec = brownian(1.0, 0.0, 5.0);
    const auto r = simulate(spec, uniform_partition(1.0, 4), 1, 0);
    EXPECT_TRUE(r.grid.refines(r.base));
    EXPECT_FALSE(r.jump_flags.front());
}

TEST(Simulate, RefinementConsistencyAtCommonPoints) {
    auto spec = brownian(1.3, 0.2, 3.0);
    spec.h.vol = Matrix::Constant(1, 1, 0.5);
    spec.h.jump_rate = 1.0;
    spec.h0 = pt({1.0});
    for (std::uint64_t traj = 0; traj < 20; ++traj) {
        const auto coarse = simulate(spec, uniform_partition(1.0, 10), 9, traj);
        const auto fine = simulate(spec, uniform_partition(1.0, 40), 9, traj);
        for (std::size_t k = 0; k < coarse.grid.size(); ++k) {
            const double t = coarse.grid[k];
            EXPECT_TRUE(fine.grid.contains(t));
            EXPECT_EQ(fine.z(t), coarse.z.value(k));
            EXPECT_EQ(fine.h(t), coarse.h.value(k));
        }
    }
}

TEST(RefineConsistent, IdentityAndSuperset) {
    const auto spec = brownian(1.0, 0.0, 1.0);
    const auto r = simulate(spec, uniform_partition(1.0, 8), 3, 1);
    const auto same = refine_consistent(r, r.base);
    EXPECT_EQ(same.z.values(), r.z.values());
    const auto finer = refine_consistent(r, refine(r.base, 4));
    for (std::size_t k = 0; k < r.grid.size(); ++k) {
        EXPECT_EQ(finer.z(r.grid[k]), r.z.value(k));
    }
    EXPECT_THROW(refine_consistent(r, uniform_partition(1.0, 3)), std::invalid_argument);
}

TEST(RefineConsistent, DriftOnlyIsLinear) {
    const auto r = simulate(brownian(0.0, 2.0, 0.0), uniform_partition(1.0, 4), 0, 0);
    const auto finer = refine_consistent(r, refine(r.base, 5));
    for (std::size_t k = 0; k < finer.grid.size(); ++k) {
        EXPECT_NEAR(finer.z.value(k)(0), 2.0 * finer.grid[k], 1e-15);
    }
}

TEST(RefineConsistent, UserPathsAreStepHeld) {
    const auto z = mmsde::testing::path1({0.0, 0.5, 1.0}, {0.0, 1.0, 2.0});
    const auto h = StepPath::constant(z.partition(), pt({1.0}));
    const auto r = driver_from_paths(h, z);
    const auto finer = refine_consistent(r, uniform_partition(1.0, 4));
    EXPECT_EQ(finer.z(0.25)(0), 0.0);
    EXPECT_EQ(finer.z(0.75)(0), 1.0);
}

TEST(DriverFromPaths, Validation) {
    const auto z = mmsde::testing::path1({0.0, 1.0}, {0.5, 1.0});
    EXPECT_THROW(driver_from_paths(StepPath::constant(z.partition(), pt({0.0})), z),
                 std::invalid_argument);
}

TEST(Validate, RejectsBadSpecs) {
    auto spec = brownian(1.0, 0.0, -1.0);
    EXPECT_THROW(validate(spec), std::invalid_argument);
    spec = brownian(NAN, 0.0, 0.0);
    EXPECT_THROW(validate(spec), std::invalid_argument);
    spec = brownian(1.0, 0.0, 0.0);
    spec.h0 = pt({0.0, 1.0});
    EXPECT_THROW(validate(spec), std::invalid_argument);
}

TEST(Simulate, JumpLaws) {
    auto spec = brownian(0.0, 0.0, 4.0);
    spec.z.jumps.kind = JumpLaw::Kind::fixed;
    spec.z.jumps.value = pt({-0.5});
    const auto r = simulate(spec, uniform_partition(1.0, 2), 2, 0);
    for (std::size_t k = 0; k < r.grid.size(); ++k) {
        if (r.jump_flags[k]) {
            EXPECT_EQ(r.z.jump(k)(0), -0.5);
        }
    }
    spec.z.jumps.kind = JumpLaw::Kind::uniform_ball;
    spec.z.jumps.radius = 0.25;
    const auto b = simulate(spec, uniform_partition(1.0, 2), 2, 0);
    for (std::size_t k = 0; k < b.grid.size(); ++k) {
        EXPECT_LE(b.z.jump(k).norm(), 0.25);
    }
}

TEST(WriteDriver, CsvColumns) {
    const auto r = simulate(brownian(1.0, 0.0, 1.0), uniform_partition(1.0, 2), 0, 0);
    std::stringstream s;
    write_driver(s, r, Format::csv);
    std::string header;
    std::getline(s, header);
    EXPECT_EQ(header, "time,h_1,z_1,jump");
}
