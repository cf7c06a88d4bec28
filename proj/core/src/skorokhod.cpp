#include "mmsde/skorokhod.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mmsde/errors.hpp"

namespace mmsde {
namespace {

Matrix columns(const std::vector<Point>& points) {
    Matrix m(points.front().size(), static_cast<Eigen::Index>(points.size()));
    for (std::size_t k = 0; k < points.size(); ++k) {
        m.col(static_cast<Eigen::Index>(k)) = points[k];
    }
    return m;
}

void require_same_grid(const SkorokhodSolution& a, const SkorokhodSolution& b) {
    if (!(a.x.partition() == b.x.partition()) || a.x.dimension() != b.x.dimension()) {
        throw std::invalid_argument("comparison: solutions must share grid and dimension");
    }
}

}  // namespace

SkorokhodRecursion::SkorokhodRecursion(MonotoneOperator op, GeneralizedProjection projection,
                                       const Point& y0, SkorokhodOptions options)
    : op_(std::move(op)), projection_(projection), options_(options) {
    if (y0.size() != op_.dimension()) {
        throw std::invalid_argument("solve_step: input dimension does not match the operator");
    }
    if (options_.flow_substeps < 1) {
        throw std::invalid_argument("solve_step: flow_substeps must be >= 1");
    }
    const double distance = op_.distance_to_domain(y0);
    if (distance > options_.domain_tol) {
        throw DomainViolation("solve_step: y_0 lies outside the domain closure", distance);
    }
    x_.push_back(y0);
    x_left_.push_back(y0);
    k_jumps_.push_back(Point::Zero(y0.size()));
}

const Point& SkorokhodRecursion::advance(double dt) {
    if (awaiting_jump_) {
        throw std::logic_error("SkorokhodRecursion: advance called twice without jump");
    }
    // Jump times inserted into a grid can create very short intervals; keep
    // every resolvent step at or above the library-wide minimum.
    int substeps = options_.flow_substeps;
    if (dt / substeps < kMinResolventStep) {
        substeps = static_cast<int>(std::max(1.0, std::floor(dt / kMinResolventStep)));
    }
    auto trace = dt < kMinResolventStep ? std::vector<Point>{x_.back(), x_.back()}
                                        : flow_trace(op_, x_.back(), dt, substeps);
    x_left_.push_back(trace.back());
    if (options_.record_traces) {
        traces_.push_back(std::move(trace));
    }
    awaiting_jump_ = true;
    return x_left_.back();
}

void SkorokhodRecursion::jump(const Point& dy) {
    if (!awaiting_jump_) {
        throw std::logic_error("SkorokhodRecursion: jump without a preceding advance");
    }
    const Point shifted = x_left_.back() + dy;
    Point projected = projection_(op_, shifted);
    k_jumps_.push_back(shifted - projected);
    x_.push_back(std::move(projected));
    awaiting_jump_ = false;
}

SkorokhodSolution SkorokhodRecursion::finish(const StepPath& y) && {
    if (awaiting_jump_) {
        jump(Point::Zero(y.dimension()));
    }
    if (y.size() != x_.size()) {
        throw std::invalid_argument("SkorokhodRecursion::finish: input length mismatch");
    }
    const Partition& grid = y.partition();
    StepPath x(grid, columns(x_));
    StepPath k(grid, y.values() - x.values());
    Matrix kd(y.dimension(), static_cast<Eigen::Index>(x_.size()));
    kd.col(0).setZero();
    for (std::size_t i = 1; i < x_.size(); ++i) {
        kd.col(static_cast<Eigen::Index>(i)) = kd.col(static_cast<Eigen::Index>(i - 1)) + k_jumps_[i];
    }
    StepPath k_jump(grid, kd);
    StepPath k_continuous(grid, k.values() - kd);
    return SkorokhodSolution{y,
                             std::move(x),
                             std::move(k),
                             std::move(k_continuous),
                             std::move(k_jump),
                             std::move(x_left_),
                             std::move(k_jumps_),
                             std::move(traces_),
                             options_.flow_substeps};
}

SkorokhodSolution solve_step(const MonotoneOperator& op, const GeneralizedProjection& projection,
                             const StepPath& y, SkorokhodOptions options) {
    SkorokhodRecursion recursion(op, projection, y.value(0), options);
    for (std::size_t k = 1; k < y.size(); ++k) {
        recursion.advance(y.time(k) - y.time(k - 1));
        recursion.jump(y.jump(k));
    }
    return std::move(recursion).finish(y);
}

SkorokhodSolution reflect_halfline_oracle(const StepPath& y) {
    if (y.dimension() != 1) {
        throw std::invalid_argument("reflect_halfline_oracle: input must be one-dimensional");
    }
    if (!(y.values()(0, 0) >= 0.0)) {
        throw std::invalid_argument("reflect_halfline_oracle: y_0 must be >= 0");
    }
    const auto n = static_cast<Eigen::Index>(y.size());
    Matrix x(1, n), k(1, n);
    double pushed = 0.0;  // max(0, sup_{s<=t} -y_s)
    for (Eigen::Index i = 0; i < n; ++i) {
        pushed = std::max(pushed, -y.values()(0, i));
        x(0, i) = y.values()(0, i) + pushed;
        k(0, i) = -pushed;
    }
    std::vector<Point> x_left(static_cast<std::size_t>(n));
    std::vector<Point> k_jumps(static_cast<std::size_t>(n), Point::Zero(1));
    x_left[0] = x.col(0);
    for (Eigen::Index i = 1; i < n; ++i) {
        x_left[static_cast<std::size_t>(i)] = x.col(i - 1);
        k_jumps[static_cast<std::size_t>(i)] = Point::Constant(1, k(0, i) - k(0, i - 1));
    }
    StepPath kpath(y.partition(), k);
    return SkorokhodSolution{y,
                             StepPath(y.partition(), x),
                             kpath,
                             StepPath::constant(y.partition(), Point::Zero(1)),
                             kpath,
                             std::move(x_left),
                             std::move(k_jumps),
                             {},
                             1};
}

VerificationReport verify_solution(const MonotoneOperator& op,
                                   const GeneralizedProjection& projection,
                                   const SkorokhodSolution& sol,
                                   const std::vector<std::pair<Point, Point>>& graph_pairs,
                                   const VerifyTolerances& tol) {
    VerificationReport report;
    const std::size_t n = sol.x.size();

    report.additivity_residual =
        (sol.x.values() + sol.k.values() - sol.y.values()).colwise().norm().maxCoeff();
    report.initial_k = sol.k.value(0).norm();
    for (std::size_t i = 0; i < n; ++i) {
        report.domain_residual = std::max(report.domain_residual, op.distance_to_domain(sol.x.value(i)));
    }
    for (std::size_t i = 1; i < n; ++i) {
        const Point dy = sol.y.jump(i);
        const Point expected = projection(op, sol.x_left[i] + dy);
        report.jump_residual = std::max(report.jump_residual, (sol.x.value(i) - expected).norm());
        const double dk = sol.k_jumps[i].norm();
        const double bound = 2.0 * dy.norm();
        if (dk > bound) {
            report.jump_bound_ok = false;
        }
        if (bound > 0.0) {
            report.worst_jump_ratio = std::max(report.worst_jump_ratio, dk / bound);
        }
    }

    double min_sum = std::numeric_limits<double>::infinity();
    for (const auto& [alpha, beta] : graph_pairs) {
        double prefix = 0.0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            const double dt = sol.x.time(i + 1) - sol.x.time(i);
            std::vector<Point> fallback;
            const std::vector<Point>* trace = &fallback;
            if (i < sol.flow_traces.size()) {
                trace = &sol.flow_traces[i];
            } else {
                fallback = {sol.x.value(i), sol.x_left[i + 1]};
            }
            if (trace->size() < 2) {
                continue;
            }
            const double du = dt / static_cast<double>(trace->size() - 1);
            double interval = 0.0;
            for (std::size_t j = 0; j + 1 < trace->size(); ++j) {
                const Point dkc = (*trace)[j] - (*trace)[j + 1];
                interval += ((*trace)[j + 1] - alpha).dot(dkc - du * beta);
            }
            prefix += interval;
            min_sum = std::min({min_sum, interval, prefix});
        }
    }
    report.min_monotonicity = std::isfinite(min_sum) ? min_sum : 0.0;

    const auto fail = [&report](const std::string& why) {
        report.pass = false;
        report.failures.push_back(why);
    };
    if (report.additivity_residual > tol.additivity) {
        fail("additivity x + k = y violated");
    }
    if (report.initial_k > tol.additivity) {
        fail("k_0 != 0");
    }
    if (report.jump_residual > tol.jump) {
        fail("jump condition x_t = Pi(x_{t-} + dy_t) violated");
    }
    if (report.domain_residual > tol.domain) {
        fail("x leaves the domain closure");
    }
    if (!report.jump_bound_ok) {
        fail("|dk| > 2|dy|");
    }
    if (report.min_monotonicity < -tol.monotonicity) {
        fail("monotonicity sum negative");
    }
    return report;
}

std::vector<double> comparison_increments(const SkorokhodSolution& a, const SkorokhodSolution& b) {
    require_same_grid(a, b);
    const std::size_t n = a.x.size();
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) {
        double sum = 0.0;
        const bool traced = i - 1 < a.flow_traces.size() && i - 1 < b.flow_traces.size() &&
                            a.flow_traces[i - 1].size() == b.flow_traces[i - 1].size();
        if (traced) {
            const auto& ta = a.flow_traces[i - 1];
            const auto& tb = b.flow_traces[i - 1];
            for (std::size_t j = 0; j + 1 < ta.size(); ++j) {
                const Point dx = ta[j + 1] - tb[j + 1];
                const Point ddk = (ta[j] - ta[j + 1]) - (tb[j] - tb[j + 1]);
                sum += dx.dot(ddk);
            }
        } else {
            const Point dx = a.x_left[i] - b.x_left[i];
            const Point ddk = (a.x.value(i - 1) - a.x_left[i]) - (b.x.value(i - 1) - b.x_left[i]);
            sum += dx.dot(ddk);
        }
        const Point jump_diff = a.k_jumps[i] - b.k_jumps[i];
        sum += (a.x.value(i) - b.x.value(i)).dot(jump_diff) + 0.5 * jump_diff.squaredNorm();
        out[i] = sum;
    }
    return out;
}

double min_window_sum(const std::vector<double>& increments) {
    double best = 0.0;
    double running = 0.0;
    for (const double v : increments) {
        running = std::min(v, running + v);
        best = std::min(best, running);
    }
    return best;
}

std::vector<double> comparison_slack(const SkorokhodSolution& a, const SkorokhodSolution& b) {
    require_same_grid(a, b);
    const std::size_t n = a.x.size();
    // Increment of k - k' attributed to the input value y_j: the jump at t_j
    // plus the flow on [t_j, t_{j+1}).
    const auto dk_left = [&](std::size_t j) -> Point {
        if (j == 0) {
            return Point::Zero(a.x.dimension());
        }
        return (a.k.value(j - 1) + a.x.value(j - 1) - a.x_left[j]) -
               (b.k.value(j - 1) + b.x.value(j - 1) - b.x_left[j]);
    };
    std::vector<double> slack(n, 0.0);
    for (std::size_t t = 0; t < n; ++t) {
        const Point dyt = a.y.value(t) - b.y.value(t);
        double integral = 0.0;
        for (std::size_t j = 0; j < t; ++j) {
            const Point dyj = a.y.value(j) - b.y.value(j);
            integral += (dyt - dyj).dot(dk_left(j + 1) - dk_left(j));
        }
        // The jump at t itself pairs with dy_t - dy_t = 0.
        const Point dxt = a.x.value(t) - b.x.value(t);
        slack[t] = dyt.squaredNorm() - 2.0 * integral - dxt.squaredNorm();
    }
    return slack;
}

}  // namespace mmsde
