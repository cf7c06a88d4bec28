#pragma once

#include <string>
#include <utility>
#include <vector>

#include "mmsde/operators.hpp"
#include "mmsde/paths.hpp"
#include "mmsde/projections.hpp"

namespace mmsde {

/// Solution (x, k) of the Skorokhod problem for a step input y.
///
/// Grid values are taken at partition points (right limits). Between grid
/// points x follows the constant-input flow; `x_left[k]` is the left limit at
/// t_k and `flow_traces[k]` the resolvent iterates on [t_k, t_{k+1}). The
/// bounded-variation part splits as k = k_continuous + k_jump, where
/// k_continuous collects flow accumulation and k_jump projection corrections.
struct SkorokhodSolution {
    StepPath y;
    StepPath x;
    StepPath k;
    StepPath k_continuous;
    StepPath k_jump;
    std::vector<Point> x_left;
    /// Delta k at each grid point, x_left + Delta y - x.
    std::vector<Point> k_jumps;
    std::vector<std::vector<Point>> flow_traces;
    int flow_substeps = 16;
};

struct SkorokhodOptions {
    int flow_substeps = 16;
    bool record_traces = true;
    double domain_tol = kMembershipTol;
};

/// Incremental form of the step-input recursion: flow over an interval, then
/// project the post-jump state. Shared by the Skorokhod solver and the Euler
/// scheme.
class SkorokhodRecursion {
  public:
    SkorokhodRecursion(MonotoneOperator op, GeneralizedProjection projection, const Point& y0,
                       SkorokhodOptions options = {});

    /// Runs the flow for `dt` from the current grid value; returns x_{t-}.
    const Point& advance(double dt);
    /// Applies an input jump at the grid point just reached.
    void jump(const Point& dy);

    const Point& current() const noexcept { return x_.back(); }
    const Point& left_limit() const noexcept { return x_left_.back(); }
    std::size_t steps() const noexcept { return x_.size() - 1; }

    /// Assembles the solution for input y on `partition`; y must have one
    /// value per recorded grid point.
    SkorokhodSolution finish(const StepPath& y) &&;

  private:
    MonotoneOperator op_;
    GeneralizedProjection projection_;
    SkorokhodOptions options_;
    std::vector<Point> x_;
    std::vector<Point> x_left_;
    std::vector<Point> k_jumps_;
    std::vector<std::vector<Point>> traces_;
    bool awaiting_jump_ = false;
};

/// SP(A, Pi; y) for a step input y with y_0 in cl D(A).
/// Throws DomainViolation if y_0 is outside the domain closure.
SkorokhodSolution solve_step(const MonotoneOperator& op, const GeneralizedProjection& projection,
                             const StepPath& y, SkorokhodOptions options = {});

/// Closed-form reflection on [0, inf): x = y + max(0, sup_{s<=t} -y_s).
SkorokhodSolution reflect_halfline_oracle(const StepPath& y);

struct VerifyTolerances {
    double additivity = 1e-12;
    double jump = 1e-12;
    double monotonicity = 1e-9;
    double domain = kMembershipTol;
};

struct VerificationReport {
    double additivity_residual = 0.0;
    double jump_residual = 0.0;
    double domain_residual = 0.0;
    double initial_k = 0.0;
    /// Smallest grid sum of <x - alpha, dk^c - beta du> over intervals and
    /// over prefixes [0, t_k].
    double min_monotonicity = 0.0;
    /// max |Delta k| / (2 |Delta y|) over grid points with Delta y != 0.
    double worst_jump_ratio = 0.0;
    bool jump_bound_ok = true;
    bool pass = true;
    std::vector<std::string> failures;
};

/// Checks the defining properties of a Skorokhod solution on its grid.
/// `graph_pairs` are points (alpha, beta) of the graph of A.
VerificationReport verify_solution(const MonotoneOperator& op,
                                   const GeneralizedProjection& projection,
                                   const SkorokhodSolution& solution,
                                   const std::vector<std::pair<Point, Point>>& graph_pairs,
                                   const VerifyTolerances& tol = {});

/// Per grid point contributions to sum <x - x', dk - dk'> + 1/2 sum |Dk - Dk'|^2
/// for two solutions on the same grid with equally long flow traces. Entry 0
/// is zero; entry k covers the flow on (t_{k-1}, t_k) and the jump at t_k.
std::vector<double> comparison_increments(const SkorokhodSolution& a, const SkorokhodSolution& b);

/// Smallest sum of consecutive entries (0 for the empty range).
double min_window_sum(const std::vector<double>& increments);

/// For each grid point t: |y_t - y'_t|^2 - 2 sum_{u<=t} <dy_t - dy_u, d(k - k')_u>
/// - |x_t - x'_t|^2, which is nonnegative for exact solutions.
std::vector<double> comparison_slack(const SkorokhodSolution& a, const SkorokhodSolution& b);

}  // namespace mmsde
