// Command line front end: skorokhod, simulate, converge, compare, verify.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "mmsde/config.hpp"
#include "mmsde/errors.hpp"
#include "mmsde/harness.hpp"
#include "mmsde/path_io.hpp"
#include "mmsde/schemes.hpp"
#include "mmsde/skorokhod.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNonConvergence = 3;

struct CommonOptions {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::size_t> trajectories;
    std::optional<std::size_t> workers;
    std::string format = "csv";
};

void add_common(CLI::App& cmd, CommonOptions& o) {
    cmd.add_option("--config", o.config, "INI configuration file (defaults apply when omitted)")
        ->check(CLI::ExistingFile);
    cmd.add_option("--seed", o.seed, "master seed");
    cmd.add_option("--out", o.out, "output directory");
    cmd.add_option("--trajectories", o.trajectories, "Monte Carlo trajectory count");
    cmd.add_option("--workers", o.workers, "worker threads");
    cmd.add_option("--format", o.format, "trajectory file format")
        ->check(CLI::IsMember({"csv", "jsonl"}));
}

mmsde::ExperimentConfig load(const CommonOptions& o) {
    mmsde::ExperimentConfig config;
    if (!o.config.empty()) {
        config = mmsde::load_config(o.config);
    } else {
        std::istringstream defaults(mmsde::default_config_text());
        config = mmsde::parse_config(defaults);
    }
    if (o.seed) {
        config.seed = *o.seed;
    }
    if (o.out) {
        config.out_dir = *o.out;
    }
    if (o.trajectories) {
        config.trajectories = *o.trajectories;
    }
    if (o.workers) {
        config.workers = *o.workers;
    }
    mmsde::validate(config);
    return config;
}

fs::path output_file(const mmsde::ExperimentConfig& config, const std::string& name) {
    const fs::path dir(config.out_dir);
    fs::create_directories(dir);
    return dir / name;
}

std::ofstream open_output(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write '" + path.string() + "'");
    }
    return out;
}

std::string extension(mmsde::Format format) {
    return format == mmsde::Format::csv ? ".csv" : ".jsonl";
}

int run_skorokhod(const CommonOptions& o, const std::string& input) {
    const auto config = load(o);
    const auto op = mmsde::make_operator(config.op);
    std::ifstream in(input);
    if (!in) {
        throw mmsde::ConfigError("--input", "cannot open '" + input + "'");
    }
    mmsde::StepPath y = [&] {
        try {
            return mmsde::read_path(in, mmsde::format_for_file(input));
        } catch (const std::invalid_argument& e) {
            throw mmsde::ConfigError("--input", e.what());
        }
    }();
    if (y.dimension() != op.dimension()) {
        throw mmsde::ConfigError("--input", "path dimension does not match the operator");
    }
    mmsde::SkorokhodOptions options;
    options.flow_substeps = config.flow_substeps;
    const auto sol = mmsde::solve_step(op, config.projection, y, options);

    const auto format = mmsde::parse_format(o.format);
    mmsde::LabelledPaths table;
    table.metadata["operator"] = op.kind();
    table.metadata["projection"] = config.projection.name();
    table.metadata["flow_substeps"] = std::to_string(config.flow_substeps);
    table.paths = {{"y", sol.y}, {"x", sol.x}, {"k", sol.k}, {"k_continuous", sol.k_continuous},
                   {"k_jump", sol.k_jump}};
    const fs::path path = output_file(config, "skorokhod" + extension(format));
    auto out = open_output(path);
    mmsde::write_labelled(out, table, format);

    std::vector<std::pair<mmsde::Point, mmsde::Point>> pairs;
    mmsde::Sampler sampler(op, config.seed);
    for (int i = 0; i < 16; ++i) {
        pairs.push_back(sampler.graph_pair());
    }
    const auto report = mmsde::verify_solution(op, config.projection, sol, pairs);
    std::cout << "wrote " << path.string() << "\n"
              << "additivity_residual=" << mmsde::format_real(report.additivity_residual)
              << " jump_residual=" << mmsde::format_real(report.jump_residual)
              << " min_monotonicity=" << mmsde::format_real(report.min_monotonicity)
              << " verify=" << (report.pass ? "pass" : "fail") << "\n";
    return 0;
}

int run_simulate(const CommonOptions& o) {
    const auto config = load(o);
    const auto format = mmsde::parse_format(o.format);
    const auto result = mmsde::simulate_one(config);
    const std::string stem = config.scheme + "_n" + std::to_string(config.level) + "_traj" +
                             std::to_string(config.trajectory);
    const fs::path trajectory = output_file(config, stem + extension(format));
    {
        auto out = open_output(trajectory);
        mmsde::write_scheme_output(out, result.output, result.metadata, format);
    }
    const fs::path driver = output_file(config, stem + "_driver" + extension(format));
    {
        auto out = open_output(driver);
        mmsde::write_driver(out, result.driver, format);
    }
    std::cout << "wrote " << trajectory.string() << " and " << driver.string() << "\n";
    return 0;
}

int write_table(const mmsde::ExperimentConfig& config, const mmsde::ErrorTable& table,
                const std::string& name) {
    const fs::path path = output_file(config, name);
    auto out = open_output(path);
    table.write_csv(out);
    std::cout << "wrote " << path.string() << " (" << table.reference << ")\n";
    return 0;
}

int run_verify(const CommonOptions& o, std::optional<double> inject) {
    const auto config = load(o);
    mmsde::VerifyOptions options;
    options.inject_elastic_c = inject;
    const auto report = mmsde::verify_suite(config, options);
    const fs::path path = output_file(config, "verify.json");
    {
        auto out = open_output(path);
        report.write_json(out);
    }
    for (const auto& p : report.properties) {
        std::cout << (p.pass ? "PASS " : "FAIL ") << p.name << " worst=" << mmsde::format_real(p.worst)
                  << " tol=" << mmsde::format_real(p.tolerance) << " samples=" << p.samples << "\n";
    }
    std::cout << "wrote " << path.string() << "\n";
    return report.pass() ? 0 : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Skorokhod problems and SDEs with jumps driven by maximal monotone operators"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "0.1.0");

    CommonOptions common;
    std::string input;
    std::optional<double> inject;

    auto* skorokhod = app.add_subcommand("skorokhod", "solve the Skorokhod problem for a step path file");
    add_common(*skorokhod, common);
    skorokhod->add_option("--input", input, "step path file (.csv or .jsonl)")
        ->required()
        ->check(CLI::ExistingFile);

    auto* simulate = app.add_subcommand("simulate", "emit one scheme trajectory and its driver");
    add_common(*simulate, common);

    auto* converge = app.add_subcommand("converge", "Monte Carlo convergence of the Euler scheme");
    add_common(*converge, common);

    auto* compare = app.add_subcommand("compare", "Yosida and modified Yosida against Euler");
    add_common(*compare, common);

    auto* verify = app.add_subcommand("verify", "randomized property checks");
    add_common(*verify, common);
    verify->add_option("--inject-elastic-c", inject,
                       "replace the projection by p - c (z - p) without validating c");

    auto* defaults = app.add_subcommand("print-config", "print the default configuration");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (defaults->parsed()) {
            std::cout << mmsde::default_config_text();
            return 0;
        }
        if (skorokhod->parsed()) {
            return run_skorokhod(common, input);
        }
        if (simulate->parsed()) {
            return run_simulate(common);
        }
        if (converge->parsed()) {
            const auto config = load(common);
            return write_table(config, mmsde::run_convergence(config), "errors.csv");
        }
        if (compare->parsed()) {
            const auto config = load(common);
            return write_table(config, mmsde::compare_schemes(config), "errors.csv");
        }
        if (verify->parsed()) {
            return run_verify(common, inject);
        }
    } catch (const mmsde::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const mmsde::DomainViolation& e) {
        std::cerr << "domain violation: " << e.what() << "\n";
        return kExitConfig;
    } catch (const mmsde::NonConvergence& e) {
        std::cerr << "non-convergence: " << e.what() << " (residual "
                  << mmsde::format_real(e.residual()) << ")\n";
        return kExitNonConvergence;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitFailure;
}
