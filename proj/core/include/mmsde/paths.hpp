#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "mmsde/types.hpp"

namespace mmsde {

/// Finite partition 0 = t_0 < t_1 < ... < t_N = T of [0, T].
class Partition {
  public:
    /// Throws std::invalid_argument unless times start at 0 and strictly increase.
    explicit Partition(std::vector<double> times);

    const std::vector<double>& times() const noexcept { return times_; }
    std::size_t size() const noexcept { return times_.size(); }
    /// Number of intervals [t_k, t_{k+1}).
    std::size_t intervals() const noexcept { return times_.size() - 1; }
    double operator[](std::size_t k) const { return times_[k]; }
    double horizon() const noexcept { return times_.back(); }
    /// Largest gap; 0 for the single-point partition {0}.
    double mesh() const noexcept;
    /// Index k of the interval [t_k, t_{k+1}) containing t; N for t >= T.
    std::size_t locate(double t) const;
    bool contains(double t) const;
    /// True when every point of `coarse` is a point of this partition.
    bool refines(const Partition& coarse) const;

    friend bool operator==(const Partition&, const Partition&) = default;

  private:
    std::vector<double> times_;
};

Partition uniform_partition(double horizon, std::size_t n);

/// Splits every interval into `factor` equal pieces.
Partition refine(const Partition& p, std::size_t factor);

/// Sorted union of two partitions on the same horizon. Points closer than
/// `merge_tol` to an existing point of `base` are dropped.
Partition merge(const Partition& base, std::span<const double> extra, double merge_tol = 0.0);

/// Right-continuous piecewise-constant path: value k holds on [t_k, t_{k+1}),
/// the last value is the terminal value at T.
class StepPath {
  public:
    /// `values` is d x (N+1), one column per partition point.
    StepPath(Partition partition, Matrix values);
    static StepPath constant(Partition partition, const Point& value);

    const Partition& partition() const noexcept { return partition_; }
    const Matrix& values() const noexcept { return values_; }
    int dimension() const noexcept { return static_cast<int>(values_.rows()); }
    std::size_t size() const noexcept { return partition_.size(); }
    double time(std::size_t k) const { return partition_[k]; }

    Point value(std::size_t k) const { return values_.col(static_cast<Eigen::Index>(k)); }
    /// Value at time t (right-continuous).
    Point operator()(double t) const;
    /// Left limit at t; equals the initial value at t = 0.
    Point left_limit(double t) const;
    /// Jump at grid point k: value_k - value_{k-1}; zero at k = 0.
    Point jump(std::size_t k) const;

  private:
    Partition partition_;
    Matrix values_;
};

StepPath operator+(const StepPath& a, const StepPath& b);
StepPath operator-(const StepPath& a, const StepPath& b);

/// y^{(n)}_t := y_{t_k} on [t_k, t_{k+1}).
StepPath discretize(const StepPath& path, const Partition& partition);
StepPath discretize(const std::function<Point(double)>& path, const Partition& partition);

/// sup_{t <= T} |p_t - q_t| over the merged grid of the two paths.
double sup_distance(const StepPath& p, const StepPath& q, double horizon);

/// max over partition points t <= T of |p_t - q_t|.
double grid_distance(const StepPath& p, const StepPath& q, const Partition& partition,
                     double horizon);

/// Upper bound on the Skorokhod J1 distance on [0, T]. Searches piecewise
/// linear monotone time changes whose nodes lie on the union of a uniform grid
/// of `grid_density` intervals and both paths' partition points.
double j1_distance_approx(const StepPath& p, const StepPath& q, double horizon,
                          std::size_t grid_density);

/// Sum of |increments| over grid points in (s, t].
double variation(const StepPath& path, double s, double t);

}  // namespace mmsde
