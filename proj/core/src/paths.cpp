#include "mmsde/paths.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace mmsde {

Partition::Partition(std::vector<double> times) : times_(std::move(times)) {
    if (times_.empty() || times_.front() != 0.0) {
        throw std::invalid_argument("Partition: must start at t_0 = 0");
    }
    for (std::size_t k = 1; k < times_.size(); ++k) {
        if (!(times_[k] > times_[k - 1]) || !std::isfinite(times_[k])) {
            throw std::invalid_argument("Partition: times must be finite and strictly increasing");
        }
    }
}

double Partition::mesh() const noexcept {
    double widest = 0.0;
    for (std::size_t k = 1; k < times_.size(); ++k) {
        widest = std::max(widest, times_[k] - times_[k - 1]);
    }
    return widest;
}

std::size_t Partition::locate(double t) const {
    if (t < 0.0) {
        throw std::invalid_argument("Partition::locate: negative time");
    }
    const auto it = std::upper_bound(times_.begin(), times_.end(), t);
    return static_cast<std::size_t>(it - times_.begin()) - 1;
}

bool Partition::contains(double t) const {
    return std::binary_search(times_.begin(), times_.end(), t);
}

bool Partition::refines(const Partition& coarse) const {
    return std::includes(times_.begin(), times_.end(), coarse.times_.begin(), coarse.times_.end());
}

Partition uniform_partition(double horizon, std::size_t n) {
    if (!(horizon > 0.0) || !std::isfinite(horizon) || n == 0) {
        throw std::invalid_argument("uniform_partition: need T > 0 and n >= 1");
    }
    std::vector<double> times(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        times[k] = horizon * static_cast<double>(k) / static_cast<double>(n);
    }
    times[n] = horizon;
    return Partition(std::move(times));
}

Partition refine(const Partition& p, std::size_t factor) {
    if (factor == 0) {
        throw std::invalid_argument("refine: factor must be >= 1");
    }
    std::vector<double> times;
    times.reserve(p.intervals() * factor + 1);
    for (std::size_t k = 0; k < p.intervals(); ++k) {
        const double a = p[k];
        const double b = p[k + 1];
        times.push_back(a);
        for (std::size_t j = 1; j < factor; ++j) {
            times.push_back(a + (b - a) * static_cast<double>(j) / static_cast<double>(factor));
        }
    }
    times.push_back(p.horizon());
    return Partition(std::move(times));
}

Partition merge(const Partition& base, std::span<const double> extra, double merge_tol) {
    std::vector<double> added;
    for (const double t : extra) {
        if (!(t > 0.0) || t > base.horizon()) {
            continue;
        }
        const auto it = std::lower_bound(base.times().begin(), base.times().end(), t);
        bool near = false;
        if (it != base.times().end() && *it - t <= merge_tol) {
            near = true;
        }
        if (it != base.times().begin() && t - *(it - 1) <= merge_tol) {
            near = true;
        }
        if (!near) {
            added.push_back(t);
        }
    }
    std::vector<double> times = base.times();
    times.insert(times.end(), added.begin(), added.end());
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());
    return Partition(std::move(times));
}

StepPath::StepPath(Partition partition, Matrix values)
    : partition_(std::move(partition)), values_(std::move(values)) {
    if (static_cast<std::size_t>(values_.cols()) != partition_.size() || values_.rows() < 1) {
        throw std::invalid_argument("StepPath: need one value per partition point, d >= 1");
    }
}

StepPath StepPath::constant(Partition partition, const Point& value) {
    const auto n = static_cast<Eigen::Index>(partition.size());
    Matrix values = value.replicate(1, n);
    return StepPath(std::move(partition), std::move(values));
}

Point StepPath::operator()(double t) const {
    return value(partition_.locate(t));
}

Point StepPath::left_limit(double t) const {
    if (t <= 0.0) {
        return value(0);
    }
    const auto it = std::lower_bound(partition_.times().begin(), partition_.times().end(), t);
    const auto k = static_cast<std::size_t>(it - partition_.times().begin());
    return value(k - 1);
}

Point StepPath::jump(std::size_t k) const {
    if (k == 0) {
        return Point::Zero(dimension());
    }
    return value(k) - value(k - 1);
}

namespace {

StepPath combine(const StepPath& a, const StepPath& b, double sign) {
    if (a.dimension() != b.dimension()) {
        throw std::invalid_argument("StepPath arithmetic: dimension mismatch");
    }
    if (a.partition() == b.partition()) {
        return StepPath(a.partition(), a.values() + sign * b.values());
    }
    const Partition grid = merge(a.partition(), b.partition().times());
    Matrix values(a.dimension(), static_cast<Eigen::Index>(grid.size()));
    for (std::size_t k = 0; k < grid.size(); ++k) {
        values.col(static_cast<Eigen::Index>(k)) = a(grid[k]) + sign * b(grid[k]);
    }
    return StepPath(grid, std::move(values));
}

std::vector<double> merged_times(const StepPath& p, const StepPath& q, double horizon) {
    std::vector<double> times;
    std::set_union(p.partition().times().begin(), p.partition().times().end(),
                   q.partition().times().begin(), q.partition().times().end(),
                   std::back_inserter(times));
    std::erase_if(times, [horizon](double t) { return t > horizon; });
    return times;
}

}  // namespace

StepPath operator+(const StepPath& a, const StepPath& b) { return combine(a, b, 1.0); }
StepPath operator-(const StepPath& a, const StepPath& b) { return combine(a, b, -1.0); }

StepPath discretize(const StepPath& path, const Partition& partition) {
    Matrix values(path.dimension(), static_cast<Eigen::Index>(partition.size()));
    for (std::size_t k = 0; k < partition.size(); ++k) {
        values.col(static_cast<Eigen::Index>(k)) = path(partition[k]);
    }
    return StepPath(partition, std::move(values));
}

StepPath discretize(const std::function<Point(double)>& path, const Partition& partition) {
    const Point first = path(0.0);
    Matrix values(first.size(), static_cast<Eigen::Index>(partition.size()));
    values.col(0) = first;
    for (std::size_t k = 1; k < partition.size(); ++k) {
        values.col(static_cast<Eigen::Index>(k)) = path(partition[k]);
    }
    return StepPath(partition, std::move(values));
}

double sup_distance(const StepPath& p, const StepPath& q, double horizon) {
    double worst = 0.0;
    for (const double t : merged_times(p, q, horizon)) {
        worst = std::max(worst, (p(t) - q(t)).norm());
    }
    return worst;
}

double grid_distance(const StepPath& p, const StepPath& q, const Partition& partition,
                     double horizon) {
    double worst = 0.0;
    for (const double t : partition.times()) {
        if (t > horizon) {
            break;
        }
        worst = std::max(worst, (p(t) - q(t)).norm());
    }
    return worst;
}

double j1_distance_approx(const StepPath& p, const StepPath& q, double horizon,
                          std::size_t grid_density) {
    std::vector<double> nodes = merged_times(p, q, horizon);
    const std::size_t density = std::max<std::size_t>(grid_density, 1);
    for (std::size_t k = 0; k <= density; ++k) {
        nodes.push_back(horizon * static_cast<double>(k) / static_cast<double>(density));
    }
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    std::erase_if(nodes, [horizon](double t) { return t > horizon; });
    const std::size_t m = nodes.size();
    if (m == 1) {
        return (p(0.0) - q(0.0)).norm();
    }

    // Exact sup of |p(t) - q(lambda(t))| + |lambda(t) - t| bound on one linear
    // piece mapping [nodes[i], nodes[i2]] onto [nodes[j], nodes[j2]].
    const auto segment_cost = [&](std::size_t i, std::size_t j, std::size_t i2, std::size_t j2) {
        const double a = nodes[i], b = nodes[i2], c = nodes[j], d = nodes[j2];
        const double slope = (b - a) / (d - c);
        double cost = std::max(std::abs(a - c), std::abs(b - d));
        std::vector<double> cuts{a, b};
        for (std::size_t k = i + 1; k < i2; ++k) {
            cuts.push_back(nodes[k]);
        }
        for (std::size_t k = j + 1; k < j2; ++k) {
            cuts.push_back(a + (nodes[k] - c) * slope);
        }
        std::sort(cuts.begin(), cuts.end());
        cost = std::max(cost, (p(a) - q(c)).norm());
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
            if (!(cuts[k + 1] > cuts[k])) {
                continue;
            }
            const double mid = 0.5 * (cuts[k] + cuts[k + 1]);
            const double mapped = c + (mid - a) / slope;
            cost = std::max(cost, (p(mid) - q(mapped)).norm());
        }
        return cost;
    };

    constexpr std::size_t kMaxStretch = 3;
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> best(m * m, inf);
    best[0] = (p(0.0) - q(0.0)).norm();
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            const double here = best[i * m + j];
            if (here == inf) {
                continue;
            }
            for (std::size_t di = 1; di <= kMaxStretch && i + di < m; ++di) {
                for (std::size_t dj = 1; dj <= kMaxStretch && j + dj < m; ++dj) {
                    double& target = best[(i + di) * m + (j + dj)];
                    const double candidate = std::max(here, segment_cost(i, j, i + di, j + dj));
                    target = std::min(target, candidate);
                }
            }
        }
    }
    const double terminal = (p(horizon) - q(horizon)).norm();
    return std::max(best[m * m - 1], terminal);
}

double variation(const StepPath& path, double s, double t) {
    if (t < s) {
        throw std::invalid_argument("variation: need s <= t");
    }
    double total = 0.0;
    for (std::size_t k = 1; k < path.size(); ++k) {
        const double tk = path.time(k);
        if (tk > s && tk <= t) {
            total += path.jump(k).norm();
        }
    }
    return total;
}

}  // namespace mmsde
