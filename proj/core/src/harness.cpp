#include "mmsde/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <ostream>
#include <random>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "mmsde/errors.hpp"

namespace mmsde {

void parallel_for(std::size_t count, std::size_t workers,
                  const std::function<void(std::size_t)>& job) {
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::size_t> next{0};
    const auto work = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                job(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const std::size_t threads = std::min(std::max<std::size_t>(workers, 1), std::max<std::size_t>(count, 1));
    if (threads <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (std::size_t t = 0; t < threads; ++t) {
            pool.emplace_back(work);
        }
        for (auto& thread : pool) {
            thread.join();
        }
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

const ErrorRow& ErrorTable::find(const std::string& level, const std::string& scheme,
                                 double checkpoint) const {
    for (const auto& row : rows) {
        if (row.level == level && row.scheme == scheme && row.checkpoint == checkpoint) {
            return row;
        }
    }
    throw std::out_of_range("ErrorTable: no row for level " + level + ", scheme " + scheme);
}

void ErrorTable::write_csv(std::ostream& out) const {
    out << "# reference=" << reference << '\n';
    if (escalations) {
        out << "# escalations=" << *escalations << '\n';
    }
    out << "level,scheme,checkpoint,mean_err,std_err,sup_err,p_gt_1e-1,p_gt_1e-2,n_traj\n";
    for (const auto& r : rows) {
        out << r.level << ',' << r.scheme << ',' << format_real(r.checkpoint) << ','
            << format_real(r.mean_err) << ',' << format_real(r.std_err) << ','
            << format_real(r.sup_err) << ',' << format_real(r.p_gt_1e1) << ','
            << format_real(r.p_gt_1e2) << ',' << r.n_traj << '\n';
    }
}

namespace {

struct Setup {
    MonotoneOperator op;
    GeneralizedProjection projection;
    Coefficient f;
    std::optional<double> truncation;
};

Setup make_setup(const ExperimentConfig& config) {
    validate(config);
    return Setup{make_operator(config.op), config.projection, make_coefficient(config.coefficient),
                 config.truncation};
}

SchemeOutput run_with(const Setup& s, const std::function<SchemeOutput(const Coefficient&)>& run,
                      long long& escalations) {
    if (!s.truncation) {
        return run(s.f);
    }
    TruncatedRun r = run_truncated(s.f, *s.truncation, run);
    escalations += r.escalations;
    return std::move(r.output);
}

bool oracle_applies(const Setup& s) {
    return s.op.kind() == "halfline" && s.projection.kind == ProjectionKind::classical &&
           (s.f.spec().kind == "zero" || s.f.spec().kind == "constant") && !s.truncation;
}

StepPath oracle_reference(const Setup& s, const DriverRealization& driver) {
    const Matrix c = s.f(Point::Zero(s.op.dimension()));
    return reflect_halfline_oracle(StepPath(driver.grid, driver.h.values() + c * driver.z.values())).x;
}

/// Per-trajectory errors: checkpoint[row][cp], sup[row].
struct TrajectoryErrors {
    std::vector<std::vector<double>> checkpoint;
    std::vector<double> sup;
    long long escalations = 0;
};

void aggregate(const std::vector<TrajectoryErrors>& per_traj, const std::vector<std::string>& levels,
               const std::vector<std::string>& schemes, const std::vector<Checkpoint>& checkpoints,
               ErrorTable& table) {
    const std::size_t n = per_traj.size();
    for (std::size_t row = 0; row < levels.size(); ++row) {
        double sup = 0.0;
        for (const auto& t : per_traj) {
            sup += t.sup[row];
        }
        sup /= static_cast<double>(n);
        for (std::size_t c = 0; c < checkpoints.size(); ++c) {
            double sum = 0.0;
            double gt1 = 0.0;
            double gt2 = 0.0;
            for (const auto& t : per_traj) {
                const double e = t.checkpoint[row][c];
                sum += e;
                gt1 += e > 1e-1 ? 1.0 : 0.0;
                gt2 += e > 1e-2 ? 1.0 : 0.0;
            }
            const double mean = sum / static_cast<double>(n);
            double ss = 0.0;
            for (const auto& t : per_traj) {
                const double dev = t.checkpoint[row][c] - mean;
                ss += dev * dev;
            }
            const double sd = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
            table.rows.push_back(ErrorRow{levels[row], schemes[row], checkpoints[c].time, mean, sd,
                                          sup, gt1 / static_cast<double>(n),
                                          gt2 / static_cast<double>(n), n});
        }
    }
}

std::vector<double> checkpoint_errors(const StepPath& x, const StepPath& reference,
                                      const std::vector<Checkpoint>& checkpoints) {
    std::vector<double> out;
    out.reserve(checkpoints.size());
    for (const auto& cp : checkpoints) {
        out.push_back((x(cp.time) - reference(cp.time)).norm());
    }
    return out;
}

}  // namespace

ErrorTable run_convergence(const ExperimentConfig& config) {
    const Setup s = make_setup(config);
    const std::size_t finest = config.levels.back();
    const Partition reference_base = uniform_partition(config.horizon, finest * config.reference_refinement);
    std::vector<Partition> bases;
    std::vector<std::string> level_names;
    for (const std::size_t n : config.levels) {
        bases.push_back(uniform_partition(config.horizon, n));
        level_names.push_back(std::to_string(n));
    }
    const std::vector<std::string> schemes(config.levels.size(), "euler");
    const bool oracle = oracle_applies(s);

    std::vector<TrajectoryErrors> per_traj(config.trajectories);
    parallel_for(config.trajectories, config.workers, [&](std::size_t i) {
        TrajectoryErrors& out = per_traj[i];
        const DriverRealization ref_driver = simulate(config.driver, reference_base, config.seed, i);
        StepPath reference = [&] {
            if (oracle) {
                return oracle_reference(s, ref_driver);
            }
            return run_with(
                       s,
                       [&](const Coefficient& f) {
                           return euler_scheme(s.op, s.projection, f, ref_driver, config.flow_substeps);
                       },
                       out.escalations)
                .x;
        }();
        for (const Partition& base : bases) {
            const DriverRealization driver = simulate(config.driver, base, config.seed, i);
            const SchemeOutput run = run_with(
                s,
                [&](const Coefficient& f) {
                    return euler_scheme(s.op, s.projection, f, driver, config.flow_substeps);
                },
                out.escalations);
            out.checkpoint.push_back(checkpoint_errors(run.x, reference, config.checkpoints));
            out.sup.push_back(grid_distance(run.x, reference, driver.grid, config.horizon));
        }
    });

    ErrorTable table;
    table.reference = oracle ? "oracle: half-line reflection of H + f Z on a grid of " +
                                   std::to_string(reference_base.intervals()) + " intervals"
                             : "SELF-REFERENCE: euler on a grid of " +
                                   std::to_string(reference_base.intervals()) + " intervals";
    if (s.truncation) {
        long long total = 0;
        for (const auto& t : per_traj) {
            total += t.escalations;
        }
        table.escalations = total;
    }
    aggregate(per_traj, level_names, schemes, config.checkpoints, table);
    return table;
}

ErrorTable compare_schemes(const ExperimentConfig& config) {
    const Setup s = make_setup(config);
    if (config.yosida_levels.empty()) {
        throw ConfigError("experiment.yosida_levels", "compare needs at least one n");
    }
    const Partition base = uniform_partition(config.horizon, config.levels.back());
    std::vector<std::string> level_names;
    std::vector<std::string> schemes;
    for (const double n : config.yosida_levels) {
        level_names.push_back(format_real(n));
        schemes.emplace_back("yosida");
        level_names.push_back(format_real(n));
        schemes.emplace_back("modified_yosida");
    }

    std::vector<TrajectoryErrors> per_traj(config.trajectories);
    parallel_for(config.trajectories, config.workers, [&](std::size_t i) {
        TrajectoryErrors& out = per_traj[i];
        const DriverRealization driver = simulate(config.driver, base, config.seed, i);
        const StepPath reference =
            run_with(
                s,
                [&](const Coefficient& f) {
                    return euler_scheme(s.op, s.projection, f, driver, config.flow_substeps);
                },
                out.escalations)
                .x;
        for (const double n : config.yosida_levels) {
            const SchemeOutput plain = run_with(
                s,
                [&](const Coefficient& f) {
                    return yosida_scheme(s.op, n, f, driver, config.yosida_substeps);
                },
                out.escalations);
            out.checkpoint.push_back(checkpoint_errors(plain.x, reference, config.checkpoints));
            out.sup.push_back(grid_distance(yosida_j_path(s.op, n, plain.x), reference, driver.grid,
                                            config.horizon));
            const SchemeOutput modified = run_with(
                s,
                [&](const Coefficient& f) {
                    return modified_yosida_scheme(s.op, s.projection, n, f, driver,
                                                  config.yosida_substeps);
                },
                out.escalations);
            out.checkpoint.push_back(checkpoint_errors(modified.x, reference, config.checkpoints));
            out.sup.push_back(grid_distance(modified.x, reference, driver.grid, config.horizon));
        }
    });

    ErrorTable table;
    table.reference = "SELF-REFERENCE: euler on the level " + std::to_string(config.levels.back()) +
                      " grid of the same realization";
    if (s.truncation) {
        long long total = 0;
        for (const auto& t : per_traj) {
            total += t.escalations;
        }
        table.escalations = total;
    }
    aggregate(per_traj, level_names, schemes, config.checkpoints, table);
    return table;
}

SimulationResult simulate_one(const ExperimentConfig& config) {
    const Setup s = make_setup(config);
    const SchemeKind kind = parse_scheme(config.scheme);
    DriverRealization driver = simulate(config.driver, uniform_partition(config.horizon, config.level),
                                        config.seed, config.trajectory);
    long long escalations = 0;
    SchemeOutput output = run_with(
        s,
        [&](const Coefficient& f) {
            switch (kind) {
                case SchemeKind::yosida:
                    return yosida_scheme(s.op, config.yosida_n, f, driver, config.yosida_substeps);
                case SchemeKind::modified_yosida:
                    return modified_yosida_scheme(s.op, s.projection, config.yosida_n, f, driver,
                                                  config.yosida_substeps);
                case SchemeKind::euler:
                    break;
            }
            return euler_scheme(s.op, s.projection, f, driver, config.flow_substeps);
        },
        escalations);
    Metadata meta = describe(output, driver, s.op, s.projection, s.f);
    meta["level"] = std::to_string(config.level);
    if (s.truncation) {
        meta["escalations"] = std::to_string(escalations);
    }
    return SimulationResult{std::move(driver), std::move(output), std::move(meta),
                            static_cast<int>(escalations)};
}

// ---------------------------------------------------------------------------
// Sampling

Sampler::Sampler(const MonotoneOperator& op, std::uint64_t key)
    : op_(op), engine_(key), center_(Point::Zero(op.dimension())) {
    const OperatorSpec spec = op.spec();
    if (spec.kind == "halfline") {
        center_ = Point::Constant(1, 0.5);
    } else if (spec.kind == "halfspace") {
        center_ = spec.normal * (spec.offset / spec.normal.squaredNorm());
    } else if (spec.kind == "box") {
        center_ = 0.5 * (spec.lo + spec.hi);
        scale_ = 0.75 * (spec.hi - spec.lo).maxCoeff();
    } else if (spec.kind == "ball") {
        center_ = spec.center;
        scale_ = spec.radius;
    } else if (op.is_indicator()) {
        center_ = op.project_domain(center_);
    }
}

Point Sampler::point() {
    std::normal_distribution<double> normal;
    Point z(center_.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) {
        z(i) = center_(i) + scale_ * normal(engine_);
    }
    return z;
}

Point Sampler::domain_point() { return op_.project_domain(point()); }

double Sampler::uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
}

StepPath Sampler::step_path(std::size_t steps, double horizon) {
    std::vector<double> times{0.0};
    for (std::size_t i = 0; i < steps; ++i) {
        times.push_back(uniform(0.0, horizon));
    }
    times.push_back(horizon);
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());
    return step_path(Partition(std::move(times)));
}

StepPath Sampler::step_path(const Partition& partition) {
    std::normal_distribution<double> normal;
    Matrix values(center_.size(), static_cast<Eigen::Index>(partition.size()));
    values.col(0) = domain_point();
    for (Eigen::Index k = 1; k < values.cols(); ++k) {
        Point step(center_.size());
        for (Eigen::Index i = 0; i < step.size(); ++i) {
            step(i) = 0.5 * scale_ * normal(engine_);
        }
        values.col(k) = values.col(k - 1) + step;
    }
    return StepPath(partition, std::move(values));
}

std::pair<Point, Point> Sampler::graph_pair() {
    return op_.graph_point(uniform(0.1, 2.0), point());
}

// ---------------------------------------------------------------------------
// Verification

bool VerifyReport::pass() const {
    return std::all_of(properties.begin(), properties.end(),
                       [](const PropertyResult& p) { return p.pass; });
}

void VerifyReport::write_json(std::ostream& out) const {
    nlohmann::ordered_json doc;
    doc["pass"] = pass();
    doc["properties"] = nlohmann::ordered_json::array();
    for (const auto& p : properties) {
        nlohmann::ordered_json entry;
        entry["name"] = p.name;
        entry["pass"] = p.pass;
        entry["worst"] = p.worst;
        entry["tolerance"] = p.tolerance;
        entry["samples"] = p.samples;
        if (!p.detail.empty()) {
            entry["detail"] = p.detail;
        }
        doc["properties"].push_back(std::move(entry));
    }
    out << doc.dump(2) << '\n';
}

namespace {

/// Accumulates lhs - rhs for an inequality lhs <= rhs.
struct Check {
    PropertyResult result;

    Check(std::string name, double tolerance) {
        result.name = std::move(name);
        result.tolerance = tolerance;
        result.worst = -std::numeric_limits<double>::infinity();
    }

    void add(double margin) {
        ++result.samples;
        if (!(margin <= result.worst)) {
            result.worst = std::isnan(margin) ? std::numeric_limits<double>::infinity() : margin;
        }
    }

    PropertyResult done() {
        result.pass = result.samples > 0 && result.worst <= result.tolerance;
        return result;
    }
};

using ProjectionMap = std::function<Point(const Point&)>;

double log_uniform(Sampler& s, double lo, double hi) {
    return std::exp(s.uniform(std::log(lo), std::log(hi)));
}

void resolvent_group(const MonotoneOperator& op, std::size_t samples, std::uint64_t seed,
                     std::vector<PropertyResult>& out) {
    const bool iterative = op.kind() == "polyhedron";
    Sampler s(op, substream_key(seed, 0, static_cast<std::uint64_t>(StreamTag::verification), {1}));
    Check nonexpansive("resolvent.nonexpansive", iterative ? 1e-10 : 1e-12);
    Check range("resolvent.range", kMembershipTol);
    Check monotone("resolvent.monotone", 1e-10);
    Check identity("resolvent.identity", 1e-9);
    for (std::size_t i = 0; i < samples; ++i) {
        const double lambda = log_uniform(s, 1e-2, 1e1);
        const Point z = s.point();
        const Point w = s.point();
        const Point jz = op.resolve(lambda, z);
        const Point jw = op.resolve(lambda, w);
        nonexpansive.add((jz - jw).norm() - (z - w).norm());
        range.add(op.distance_to_domain(jz));
        const Point az = (z - jz) / lambda;
        const Point aw = (w - jw) / lambda;
        monotone.add(-(az - aw).dot(jz - jw));
        const double mu = lambda * s.uniform(0.01, 1.0);
        const Point inner = (mu / lambda) * z + (1.0 - mu / lambda) * jz;
        identity.add((jz - op.resolve(mu, inner)).norm());
    }
    out.push_back(nonexpansive.done());
    out.push_back(range.done());
    out.push_back(monotone.done());
    out.push_back(identity.done());
}

void yosida_group(const MonotoneOperator& op, std::size_t samples, std::uint64_t seed,
                  std::vector<PropertyResult>& out) {
    Sampler s(op, substream_key(seed, 0, static_cast<std::uint64_t>(StreamTag::verification), {2}));
    Check j_nonexpansive("yosida.j_nonexpansive", 1e-10);
    Check lipschitz("yosida.lipschitz", 1e-10);
    Check monotone("yosida.monotone", 1e-10);
    Check gap("yosida.gap_nonincreasing", 1e-12);
    Check indicator_gap("yosida.indicator_gap", 0.0);
    Check implicit("yosida.resolvent_identity", 1e-9);
    const double ns[] = {1.0, 10.0, 100.0, 1000.0};
    for (std::size_t i = 0; i < samples; ++i) {
        const double n = log_uniform(s, 1.0, 1e3);
        const Point z = s.point();
        const Point w = s.point();
        j_nonexpansive.add((yosida_j(op, n, z) - yosida_j(op, n, w)).norm() - (z - w).norm());
        const Point az = yosida_a(op, n, z);
        const Point aw = yosida_a(op, n, w);
        lipschitz.add((az - aw).norm() - n * (z - w).norm());
        monotone.add(-(z - w).dot(az - aw));

        const Point p = op.project_domain(z);
        double previous = std::numeric_limits<double>::infinity();
        double increase = -std::numeric_limits<double>::infinity();
        double largest = 0.0;
        for (const double m : ns) {
            const double g = (yosida_j(op, m, z) - p).norm();
            increase = std::max(increase, g - previous);
            previous = g;
            largest = std::max(largest, g);
        }
        gap.add(increase);
        if (op.is_indicator()) {
            indicator_gap.add(largest);
        }

        const double mu = log_uniform(s, 1e-4, 1.0);
        const Point y = yosida_resolvent(op, n, mu, z);
        implicit.add((y + mu * yosida_a(op, n, y) - z).norm());
    }
    out.push_back(j_nonexpansive.done());
    out.push_back(lipschitz.done());
    out.push_back(monotone.done());
    out.push_back(gap.done());
    if (op.is_indicator()) {
        out.push_back(indicator_gap.done());
    }
    out.push_back(implicit.done());
}

void projection_group(const MonotoneOperator& op, const GeneralizedProjection& projection,
                      const ProjectionMap& pi, bool injected, std::size_t samples,
                      std::uint64_t seed, std::vector<PropertyResult>& out) {
    const bool iterative = op.kind() == "polyhedron";
    Sampler s(op, substream_key(seed, 0, static_cast<std::uint64_t>(StreamTag::verification), {3}));
    Check lipschitz("projection.lipschitz", 1e-10);
    const double fix_tol = projection.kind == ProjectionKind::elastic_iterated
                               ? std::max(projection.tol, 1e-12)
                               : (iterative ? 1e-9 : 1e-12);
    Check fixes("projection.fixes_domain", fix_tol);
    const bool check_range = !injected && projection.kind != ProjectionKind::elastic;
    Check range("projection.range", std::max(kMembershipTol, projection.tol));
    const bool check_firm = !injected && projection.kind == ProjectionKind::classical;
    Check firm("projection.firmly_nonexpansive", 1e-10);
    for (std::size_t i = 0; i < samples; ++i) {
        const Point z = s.point();
        const Point w = s.point();
        const Point pz = pi(z);
        const Point pw = pi(w);
        lipschitz.add((pz - pw).norm() - (z - w).norm());
        const Point x = s.domain_point();
        fixes.add((pi(x) - x).norm());
        if (check_range) {
            range.add(op.distance_to_domain(pz));
        }
        if (check_firm) {
            firm.add((pz - pw).squaredNorm() - (pz - pw).dot(z - w));
        }
    }
    out.push_back(lipschitz.done());
    out.push_back(fixes.done());
    if (check_range) {
        out.push_back(range.done());
    }
    if (check_firm) {
        out.push_back(firm.done());
    }
}

void skorokhod_group(const MonotoneOperator& op, const GeneralizedProjection& projection,
                     std::size_t samples, std::uint64_t seed, std::vector<PropertyResult>& out) {
    Sampler s(op, substream_key(seed, 0, static_cast<std::uint64_t>(StreamTag::verification), {4}));
    const VerifyTolerances tol;
    Check additivity("skorokhod.additivity", tol.additivity);
    Check jump("skorokhod.jump_condition", tol.jump);
    Check domain("skorokhod.domain", tol.domain);
    Check monotonicity("skorokhod.monotonicity", tol.monotonicity);
    Check bound("skorokhod.jump_bound", 0.0);
    Check start("skorokhod.initial_k", 0.0);
    for (std::size_t i = 0; i < samples; ++i) {
        const auto steps = static_cast<std::size_t>(s.uniform(1.0, 51.0));
        const StepPath y = s.step_path(steps, 1.0);
        const SkorokhodSolution sol = solve_step(op, projection, y);
        std::vector<std::pair<Point, Point>> pairs;
        for (int p = 0; p < 4; ++p) {
            pairs.push_back(s.graph_pair());
        }
        const VerificationReport r = verify_solution(op, projection, sol, pairs, tol);
        additivity.add(r.additivity_residual);
        jump.add(r.jump_residual);
        domain.add(r.domain_residual);
        monotonicity.add(-r.min_monotonicity);
        // The bound is checked exactly; the ratio only reports how close it came.
        bound.add(r.jump_bound_ok ? std::min(r.worst_jump_ratio - 1.0, 0.0)
                                  : std::max(r.worst_jump_ratio - 1.0, 1e-300));
        start.add(r.initial_k);
    }
    out.push_back(additivity.done());
    out.push_back(jump.done());
    out.push_back(domain.done());
    out.push_back(monotonicity.done());
    out.push_back(bound.done());
    out.push_back(start.done());
}

void comparison_group(const MonotoneOperator& op, const GeneralizedProjection& projection,
                      std::size_t samples, std::uint64_t seed, std::vector<PropertyResult>& out) {
    Sampler s(op, substream_key(seed, 0, static_cast<std::uint64_t>(StreamTag::verification), {5}));
    Check increments("comparison.stieltjes_sum", 1e-9);
    Check slack("comparison.square_bound", 1e-8);
    for (std::size_t i = 0; i < samples; ++i) {
        const auto steps = static_cast<std::size_t>(s.uniform(1.0, 31.0));
        const Partition grid = s.step_path(steps, 1.0).partition();
        const SkorokhodSolution a = solve_step(op, projection, s.step_path(grid));
        const SkorokhodSolution b = solve_step(op, projection, s.step_path(grid));
        increments.add(-min_window_sum(comparison_increments(a, b)));
        const auto sl = comparison_slack(a, b);
        slack.add(-*std::min_element(sl.begin(), sl.end()));
    }
    out.push_back(increments.done());
    out.push_back(slack.done());
}

}  // namespace

VerifyReport verify_operator(const MonotoneOperator& op, const GeneralizedProjection& projection,
                             const std::vector<std::string>& groups, std::size_t samples,
                             std::uint64_t seed, const VerifyOptions& options) {
    VerifyReport report;
    ProjectionMap pi = [&](const Point& z) { return projection(op, z); };
    if (options.inject_elastic_c) {
        const double c = *options.inject_elastic_c;
        pi = [&op, c](const Point& z) { return detail::elastic_unchecked(op, c, z); };
    }
    // Path-level checks run on fewer, larger inputs.
    const std::size_t path_samples = std::max<std::size_t>(1, samples / 5);
    for (const auto& group : groups) {
        if (group == "resolvent") {
            resolvent_group(op, samples, seed, report.properties);
        } else if (group == "yosida") {
            yosida_group(op, samples, seed, report.properties);
        } else if (group == "projection") {
            projection_group(op, projection, pi, options.inject_elastic_c.has_value(), samples, seed,
                             report.properties);
        } else if (group == "skorokhod") {
            skorokhod_group(op, projection, path_samples, seed, report.properties);
        } else if (group == "comparison") {
            comparison_group(op, projection, path_samples, seed, report.properties);
        } else {
            throw std::invalid_argument("verify: unknown property group '" + group + "'");
        }
    }
    return report;
}

VerifyReport verify_suite(const ExperimentConfig& config, const VerifyOptions& options) {
    validate(config);
    return verify_operator(make_operator(config.op), config.projection, config.verify_tests,
                           config.verify_samples, config.seed, options);
}

}  // namespace mmsde
