#include <gtest/gtest.h>

#include <sstream>

#include "mmsde/config.hpp"
#include "mmsde/errors.hpp"

using namespace mmsde;

namespace {

ExperimentConfig parse(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in);
}

std::string field_of(const std::string& text) {
    try {
        parse(text);
    } catch (const ConfigError& e) {
        return e.field();
    }
    return "";
}

}  // namespace

TEST(Config, DefaultTextParses) {
    const auto c = parse(default_config_text());
    EXPECT_EQ(c.op.kind, "halfline");
    EXPECT_EQ(c.levels, (std::vector<std::size_t>{8, 32, 128}));
    EXPECT_EQ(c.trajectories, 100u);
    EXPECT_EQ(c.checkpoints.size(), 1u);
    EXPECT_EQ(c.checkpoints[0].time, 0.5);
    EXPECT_EQ(c.coefficient.kind, "constant");
}

TEST(Config, EmptyFileUsesDefaults) {
    const auto c = parse("");
    EXPECT_EQ(c.op.dimension, 1);
    EXPECT_EQ(c.driver.h0(0), 1.0);
    EXPECT_EQ(c.horizon, 1.0);
}

TEST(Config, DimensionInferenceAndBroadcast) {
    const auto c = parse(
        "[operator]\nkind = box\nlo = 0, 0\nhi = 1, 2\n"
        "[driver]\nh0 = 0.5\nz_vol = 0.3\nz_jump_cov = 1, 0.5; 0.5, 2\n"
        "[coefficient]\nkind = linear_diagonal\nscale = 2\n");
    EXPECT_EQ(c.op.dimension, 2);
    EXPECT_EQ(c.driver.h0.size(), 2);
    EXPECT_EQ(c.driver.z.vol(1, 1), 0.3);
    EXPECT_EQ(c.driver.z.vol(0, 1), 0.0);
    EXPECT_EQ(c.driver.z.jumps.covariance(1, 0), 0.5);
    EXPECT_EQ(c.coefficient.dimension, 2);
}

TEST(Config, Polyhedron) {
    const auto c = parse(
        "[operator]\nkind = polyhedron\nhalfspaces = 1, -1, 0; -1, -1, 0\n"
        "[driver]\nh0 = 0, 1\n");
    EXPECT_EQ(c.op.dimension, 2);
    EXPECT_EQ(c.op.halfspaces.size(), 2u);
}

TEST(Config, FieldLevelErrors) {
    EXPECT_EQ(field_of("[operator]\nknd = box\n"), "operator.knd");
    EXPECT_EQ(field_of("[nonsense]\na = 1\n"), "nonsense");
    EXPECT_EQ(field_of("[experiment]\nhorizon = abc\n"), "experiment.horizon");
    EXPECT_EQ(field_of("[experiment]\nlevels = 32, 8\n"), "experiment.levels");
    EXPECT_EQ(field_of("[experiment]\ntrajectories = 0\n"), "experiment.trajectories");
    EXPECT_EQ(field_of("[experiment]\ncheckpoints = 1.5\n"), "experiment.checkpoints");
    EXPECT_EQ(field_of("[projection]\nkind = elastic\nc = 1.5\n"), "projection.c");
    EXPECT_EQ(field_of("[driver]\nh0 = -1\n"), "driver.h0");
    EXPECT_EQ(field_of("[driver]\nz_jump_rate = -2\n"), "driver");
    EXPECT_EQ(field_of("[experiment]\nscheme = rk4\n"), "experiment.scheme");
    EXPECT_EQ(field_of("[verify]\ntests = resolvent, bogus\n"), "verify.tests");
    EXPECT_EQ(field_of("[operator]\nkind = box\nlo = 0, 0\nhi = 1, 0\n"), "operator");
    EXPECT_EQ(field_of("[experiment]\ncheckpoints = 0.2, 0.4\ncheckpoint_continuity = true\n"),
              "experiment.checkpoint_continuity");
    EXPECT_EQ(field_of("[coefficient]\ntruncation = 0.5\n"), "coefficient.truncation");
}

TEST(Config, VerifyAndExperimentKeys) {
    const auto c = parse(
        "[experiment]\nlevels = 4, 16\nyosida_levels = 2, 8\ncheckpoints = 0.25, 1\n"
        "checkpoint_continuity = true, false\nseed = 18446744073709551615\nworkers = 3\n"
        "[verify]\ntests =\nsamples = 10\n");
    EXPECT_EQ(c.seed, 18446744073709551615ULL);
    EXPECT_EQ(c.workers, 3u);
    EXPECT_FALSE(c.checkpoints[1].continuity);
    EXPECT_TRUE(c.verify_tests.empty());
    EXPECT_EQ(c.verify_samples, 10u);
}

TEST(Config, MissingFile) {
    EXPECT_THROW(load_config("/nonexistent/file.ini"), ConfigError);
}
