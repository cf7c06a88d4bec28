#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mmsde/config.hpp"
#include "mmsde/rng.hpp"
#include "mmsde/schemes.hpp"

namespace mmsde {

/// Runs job(i) for i in [0, count) on `workers` threads. Jobs must write to
/// disjoint slots; the first exception by index is rethrown after all
/// workers finish.
void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& job);

struct ErrorRow {
    std::string level;
    std::string scheme;
    double checkpoint = 0.0;
    double mean_err = 0.0;
    double std_err = 0.0;
    /// Mean over trajectories of the grid-sup error.
    double sup_err = 0.0;
    double p_gt_1e1 = 0.0;
    double p_gt_1e2 = 0.0;
    std::size_t n_traj = 0;
};

struct ErrorTable {
    /// "oracle: ..." or "SELF-REFERENCE: ...".
    std::string reference;
    /// Number of truncation radius escalations, when a truncation was used.
    std::optional<long long> escalations;
    std::vector<ErrorRow> rows;

    /// Throws std::out_of_range if there is no such row.
    const ErrorRow& find(const std::string& level, const std::string& scheme, double checkpoint) const;
    /// Leading `# key=value` comments, then
    /// level,scheme,checkpoint,mean_err,std_err,sup_err,p_gt_1e-1,p_gt_1e-2,n_traj.
    void write_csv(std::ostream& out) const;
};

/// Monte Carlo convergence of the Euler scheme across `config.levels`.
/// Every level sees the same driver realization per trajectory. The reference
/// is the closed-form half-line reflection of H + f Z when it applies
/// (half-line operator, classical projection, constant f), otherwise the Euler
/// scheme on the finest level refined by `reference_refinement`.
ErrorTable run_convergence(const ExperimentConfig& config);

/// Yosida and modified Yosida schemes for each n in `config.yosida_levels`
/// against the Euler scheme, all on the finest level grid of one driver
/// realization per trajectory. Yosida rows report sup_err for J_n(X^n),
/// modified Yosida rows for X^n itself.
ErrorTable compare_schemes(const ExperimentConfig& config);

/// One trajectory of `config.scheme` on the uniform grid of `config.level`.
struct SimulationResult {
    DriverRealization driver;
    SchemeOutput output;
    Metadata metadata;
    int escalations = 0;
};
SimulationResult simulate_one(const ExperimentConfig& config);

struct PropertyResult {
    std::string name;
    bool pass = true;
    /// Largest observed value of lhs - rhs for an inequality lhs <= rhs.
    double worst = 0.0;
    double tolerance = 0.0;
    std::size_t samples = 0;
    std::string detail;
};

struct VerifyReport {
    std::vector<PropertyResult> properties;

    bool pass() const;
    void write_json(std::ostream& out) const;
};

struct VerifyOptions {
    /// Replaces the configured projection by p - c (z - p) with this c,
    /// bypassing validation, to exercise the failure path.
    std::optional<double> inject_elastic_c;
};

/// Randomized property checks for the configured operator and projection.
/// Groups: resolvent, yosida, projection, skorokhod, comparison.
VerifyReport verify_suite(const ExperimentConfig& config, const VerifyOptions& options = {});

/// Same checks for an explicit operator and projection.
VerifyReport verify_operator(const MonotoneOperator& op, const GeneralizedProjection& projection,
                             const std::vector<std::string>& groups, std::size_t samples,
                             std::uint64_t seed, const VerifyOptions& options = {});

/// Random inputs scaled to the geometry of an operator's domain.
class Sampler {
  public:
    Sampler(const MonotoneOperator& op, std::uint64_t key);

    /// Gaussian point around the domain.
    Point point();
    /// Point of the domain closure.
    Point domain_point();
    double uniform(double lo, double hi);
    /// Step path with y_0 in the domain, `steps` random jump times in (0, T).
    StepPath step_path(std::size_t steps, double horizon);
    /// Step path on a given partition.
    StepPath step_path(const Partition& partition);
    /// (alpha, beta) with beta in A(alpha).
    std::pair<Point, Point> graph_pair();

    CounterRng& engine() { return engine_; }
    double scale() const { return scale_; }

  private:
    MonotoneOperator op_;
    CounterRng engine_;
    Point center_;
    double scale_ = 1.0;
};

}  // namespace mmsde
