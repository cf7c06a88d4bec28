#include <gtest/gtest.h>

#include <cmath>

#include "mmsde/paths.hpp"
#include "test_util.hpp"

using namespace mmsde;
using mmsde::testing::path1;
using mmsde::testing::pt;

TEST(Partition, Validation) {
    EXPECT_THROW(Partition({}), std::invalid_argument);
    EXPECT_THROW(Partition({0.1, 1.0}), std::invalid_argument);
    EXPECT_THROW(Partition({0.0, 0.5, 0.5}), std::invalid_argument);
    EXPECT_THROW(Partition({0.0, NAN}), std::invalid_argument);
    EXPECT_NO_THROW(Partition({0.0, 0.2, 1.0}));
}

TEST(Partition, UniformMesh) {
    const auto p = uniform_partition(2.0, 8);
    EXPECT_EQ(p.size(), 9u);
    EXPECT_DOUBLE_EQ(p.mesh(), 0.25);
    EXPECT_EQ(p.horizon(), 2.0);
    EXPECT_THROW(uniform_partition(0.0, 3), std::invalid_argument);
    EXPECT_THROW(uniform_partition(1.0, 0), std::invalid_argument);
}

TEST(Partition, Locate) {
    const Partition p({0.0, 0.5, 1.0});
    EXPECT_EQ(p.locate(0.0), 0u);
    EXPECT_EQ(p.locate(0.49), 0u);
    EXPECT_EQ(p.locate(0.5), 1u);
    EXPECT_EQ(p.locate(1.0), 2u);
    EXPECT_EQ(p.locate(3.0), 2u);
}

TEST(Partition, RefineContainsOriginal) {
    const Partition p({0.0, 0.3, 1.0});
    const auto r = refine(p, 4);
    EXPECT_TRUE(r.refines(p));
    EXPECT_LE(r.mesh(), p.mesh() / 4 + 1e-15);
    EXPECT_EQ(r.size(), 9u);
    EXPECT_EQ(refine(p, 1), p);
}

TEST(Partition, Merge) {
    const auto base = uniform_partition(1.0, 4);
    const std::vector<double> extra{0.1, 0.5, 0.9};
    const auto m = merge(base, extra);
    EXPECT_EQ(m.size(), 7u);
    EXPECT_TRUE(m.refines(base));
    EXPECT_TRUE(m.contains(0.1));
}

TEST(StepPath, RightContinuousWithLeftLimits) {
    const auto y = path1({0.0, 1.0, 2.0}, {1.0, -1.0, -1.0});
    EXPECT_EQ(y(0.5)(0), 1.0);
    EXPECT_EQ(y(1.0)(0), -1.0);
    EXPECT_EQ(y.left_limit(1.0)(0), 1.0);
    EXPECT_EQ(y.left_limit(0.0)(0), 1.0);
    EXPECT_EQ(y.jump(1)(0), -2.0);
    EXPECT_EQ(y.jump(0)(0), 0.0);
}

TEST(StepPath, ShapeMismatchThrows) {
    EXPECT_THROW(StepPath(uniform_partition(1.0, 2), Matrix::Zero(1, 2)), std::invalid_argument);
}

TEST(Discretize, FunctionSampledAtLeftPoints) {
    const auto p = uniform_partition(1.0, 4);
    const auto y = discretize([](double t) { return pt({t * t}); }, p);
    EXPECT_DOUBLE_EQ(y(0.3)(0), 0.0625);
    EXPECT_DOUBLE_EQ(y(1.0)(0), 1.0);
}

TEST(Discretize, StepPathOnCoarserGrid) {
    const auto fine = discretize([](double t) { return pt({t}); }, uniform_partition(1.0, 8));
    const auto coarse = discretize(fine, uniform_partition(1.0, 2));
    EXPECT_EQ(coarse(0.4)(0), 0.0);
    EXPECT_EQ(coarse(0.6)(0), 0.5);
}

TEST(Distance, SupAndGrid) {
    const auto a = path1({0.0, 0.5, 1.0}, {0.0, 1.0, 1.0});
    const auto b = path1({0.0, 0.25, 1.0}, {0.0, 0.0, 3.0});
    EXPECT_EQ(sup_distance(a, b, 1.0), 2.0);
    EXPECT_EQ(grid_distance(a, b, Partition({0.0, 0.5}), 1.0), 1.0);
    EXPECT_EQ(sup_distance(a, a, 1.0), 0.0);
}

TEST(Distance, J1ForShiftedJump) {
    // Same jump, shifted in time by 0.01: sup distance is the jump size, J1 is small.
    const auto a = path1({0.0, 0.5, 1.0}, {0.0, 1.0, 1.0});
    const auto b = path1({0.0, 0.51, 1.0}, {0.0, 1.0, 1.0});
    EXPECT_EQ(sup_distance(a, b, 1.0), 1.0);
    const double j1 = j1_distance_approx(a, b, 1.0, 100);
    EXPECT_LE(j1, 0.011);
    EXPECT_GE(j1, 0.0);
    EXPECT_EQ(j1_distance_approx(a, a, 1.0, 10), 0.0);
    EXPECT_LE(j1_distance_approx(a, path1({0.0, 1.0}, {0.5, 0.5}), 1.0, 20), 0.5 + 1e-12);
}

TEST(Variation, SumOfAbsoluteIncrements) {
    const auto y = path1({0.0, 1.0, 2.0, 3.0}, {0.0, 2.0, -1.0, -1.5});
    EXPECT_DOUBLE_EQ(variation(y, 0.0, 3.0), 5.5);
    EXPECT_DOUBLE_EQ(variation(y, 0.5, 2.0), 5.0);
    EXPECT_DOUBLE_EQ(variation(y, 1.0, 2.0), 3.0);
}

TEST(Arithmetic, SumOnMergedGrid) {
    const auto a = path1({0.0, 0.5, 1.0}, {1.0, 2.0, 3.0});
    const auto b = path1({0.0, 0.25, 1.0}, {1.0, 1.0, 1.0});
    const auto s = a + b;
    EXPECT_EQ(s.size(), 4u);
    EXPECT_EQ(s(0.3)(0), 2.0);
    EXPECT_EQ(s(0.7)(0), 3.0);
    EXPECT_EQ((a - a).values().norm(), 0.0);
}
