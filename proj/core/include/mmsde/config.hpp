#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mmsde/coefficients.hpp"
#include "mmsde/drivers.hpp"
#include "mmsde/operators.hpp"
#include "mmsde/projections.hpp"

namespace mmsde {

struct Checkpoint {
    double time = 0.5;
    /// Whether t is expected to be a continuity point of H and Z.
    bool continuity = true;
};

/// Everything a CLI run needs. Parsed from an INI-style file with sections
/// [operator], [projection], [coefficient], [driver], [experiment], [verify].
struct ExperimentConfig {
    OperatorSpec op;
    GeneralizedProjection projection;
    CoefficientSpec coefficient;
    /// Initial truncation radius N for locally Lipschitz coefficients.
    std::optional<double> truncation;
    DriverSpec driver;

    double horizon = 1.0;
    std::vector<std::size_t> levels{8, 32, 128};
    std::vector<double> yosida_levels{4, 16, 64};
    std::size_t trajectories = 100;
    std::uint64_t seed = 0;
    std::string out_dir = ".";
    std::vector<Checkpoint> checkpoints{{0.5, true}};
    /// Reference grid = finest level times this factor.
    std::size_t reference_refinement = 16;
    int flow_substeps = 16;
    int yosida_substeps = 1;
    std::size_t workers = 1;

    /// `simulate` subcommand: which scheme, grid level, trajectory and n.
    std::string scheme = "euler";
    std::size_t level = 32;
    std::uint64_t trajectory = 0;
    double yosida_n = 16;

    /// `verify` subcommand: property groups and random sample count.
    std::vector<std::string> verify_tests{"resolvent", "yosida", "projection", "skorokhod",
                                          "comparison"};
    std::size_t verify_samples = 1000;
};

/// Parses and validates. Throws ConfigError naming the offending key.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);

/// Field-level validation; throws ConfigError.
void validate(const ExperimentConfig& config);

/// Default configuration text with every key, for documentation and `--help`.
std::string default_config_text();

}  // namespace mmsde
