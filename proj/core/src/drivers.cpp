#include "mmsde/drivers.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <random>
#include <stdexcept>

#include "json.hpp"
#include "mmsde/rng.hpp"

namespace mmsde {
namespace {

struct JumpEvent {
    double time;
    Point size;
};

struct ProcessTags {
    StreamTag brownian, count, times, sizes;
};

constexpr ProcessTags kZTags{StreamTag::z_brownian, StreamTag::z_jump_count,
                             StreamTag::z_jump_times, StreamTag::z_jump_sizes};
constexpr ProcessTags kHTags{StreamTag::h_brownian, StreamTag::h_jump_count,
                             StreamTag::h_jump_times, StreamTag::h_jump_sizes};

std::uint64_t tag(StreamTag t) { return static_cast<std::uint64_t>(t); }

double standard_normal(std::uint64_t key) {
    CounterRng rng(key);
    return std::normal_distribution<double>{}(rng);
}

// Levy construction of one Brownian component evaluated at sorted times.
class DyadicBrownian {
  public:
    DyadicBrownian(double horizon, std::uint64_t seed, std::uint64_t trajectory, StreamTag stream,
                   std::uint64_t component)
        : horizon_(horizon), seed_(seed), trajectory_(trajectory), stream_(stream),
          component_(component) {}

    std::vector<double> evaluate(const std::vector<double>& times) const {
        std::vector<double> out(times.size());
        const double terminal = std::sqrt(horizon_) * draw(0, 0);
        fill(times, out, 0, times.size(), 0.0, horizon_, 0.0, terminal, 0, 0);
        return out;
    }

  private:
    double draw(std::uint64_t level, std::uint64_t index) const {
        return standard_normal(
            substream_key(seed_, trajectory_, tag(stream_), {component_, level, index}));
    }

    void fill(const std::vector<double>& times, std::vector<double>& out, std::size_t lo,
              std::size_t hi, double a, double b, double wa, double wb, std::uint64_t level,
              std::uint64_t index) const {
        // Endpoints are returned exactly so that a time's value never depends on
        // which other times are queried.
        while (lo < hi && times[lo] == a) {
            out[lo++] = wa;
        }
        while (hi > lo && times[hi - 1] == b) {
            out[--hi] = wb;
        }
        if (lo >= hi) {
            return;
        }
        if (level >= static_cast<std::uint64_t>(kBrownianLevels)) {
            for (std::size_t i = lo; i < hi; ++i) {
                out[i] = wa + (times[i] - a) / (b - a) * (wb - wa);
            }
            return;
        }
        const double mid = 0.5 * (a + b);
        const double wm = 0.5 * (wa + wb) + 0.5 * std::sqrt(b - a) * draw(level + 1, index);
        const auto split = static_cast<std::size_t>(
            std::lower_bound(times.begin() + static_cast<std::ptrdiff_t>(lo),
                             times.begin() + static_cast<std::ptrdiff_t>(hi), mid) -
            times.begin());
        fill(times, out, lo, split, a, mid, wa, wm, level + 1, 2 * index);
        fill(times, out, split, hi, mid, b, wm, wb, level + 1, 2 * index + 1);
    }

    double horizon_;
    std::uint64_t seed_, trajectory_;
    StreamTag stream_;
    std::uint64_t component_;
};

Point sample_jump(const JumpLaw& law, int d, CounterRng& rng) {
    switch (law.kind) {
        case JumpLaw::Kind::fixed:
            return law.value;
        case JumpLaw::Kind::gaussian: {
            Point xi(d);
            for (int i = 0; i < d; ++i) {
                xi(i) = std::normal_distribution<double>{}(rng);
            }
            // Symmetric square root tolerates singular covariances.
            const Eigen::SelfAdjointEigenSolver<Matrix> eig(law.covariance);
            const Matrix root = eig.eigenvectors() *
                                eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
                                eig.eigenvectors().transpose();
            return law.mean + root * xi;
        }
        case JumpLaw::Kind::uniform_ball: {
            Point dir(d);
            for (int i = 0; i < d; ++i) {
                dir(i) = std::normal_distribution<double>{}(rng);
            }
            const double norm = dir.norm();
            const double u = std::uniform_real_distribution<double>{}(rng);
            const double r = law.radius * std::pow(u, 1.0 / d);
            return norm > 0.0 ? Point(dir * (r / norm)) : Point::Zero(d);
        }
    }
    throw std::logic_error("sample_jump: unknown law");
}

std::vector<JumpEvent> sample_jumps(const ProcessSpec& p, int d, double horizon, std::uint64_t seed,
                                    std::uint64_t trajectory, const ProcessTags& tags) {
    std::vector<JumpEvent> events;
    if (p.jump_rate <= 0.0) {
        return events;
    }
    CounterRng count_rng(substream_key(seed, trajectory, tag(tags.count)));
    const long count = std::poisson_distribution<long>(p.jump_rate * horizon)(count_rng);
    CounterRng time_rng(substream_key(seed, trajectory, tag(tags.times)));
    for (long i = 0; i < count; ++i) {
        // (0, T]: a jump at t = 0 would break Z_0 = 0.
        const double u = std::uniform_real_distribution<double>{}(time_rng);
        CounterRng size_rng(substream_key(seed, trajectory, tag(tags.sizes), {static_cast<std::uint64_t>(i)}));
        events.push_back({horizon * (1.0 - u), sample_jump(p.jumps, d, size_rng)});
    }
    std::stable_sort(events.begin(), events.end(),
                     [](const JumpEvent& a, const JumpEvent& b) { return a.time < b.time; });
    return events;
}

// Continuous-part values vol * W_t + drift * t at the grid times, plus jumps.
Matrix evaluate_process(const ProcessSpec& p, int d, const std::vector<double>& times,
                        const std::vector<JumpEvent>& events, double horizon, std::uint64_t seed,
                        std::uint64_t trajectory, StreamTag brownian) {
    const auto n = static_cast<Eigen::Index>(times.size());
    Matrix w = Matrix::Zero(d, n);
    if (!p.vol.isZero(0.0)) {
        for (int i = 0; i < d; ++i) {
            const DyadicBrownian bm(horizon, seed, trajectory, brownian, static_cast<std::uint64_t>(i));
            const auto values = bm.evaluate(times);
            for (Eigen::Index k = 0; k < n; ++k) {
                w(i, k) = values[static_cast<std::size_t>(k)];
            }
        }
    }
    Matrix out(d, n);
    Point cumulative = Point::Zero(d);
    std::size_t next = 0;
    for (Eigen::Index k = 0; k < n; ++k) {
        const double t = times[static_cast<std::size_t>(k)];
        while (next < events.size() && events[next].time <= t) {
            cumulative += events[next].size;
            ++next;
        }
        out.col(k) = p.vol * w.col(k) + p.drift * t + cumulative;
    }
    return out;
}

void validate_process(const ProcessSpec& p, int d, const char* name) {
    const std::string prefix = std::string("driver ") + name + ": ";
    if (p.vol.rows() != d || p.vol.cols() != d || !p.vol.allFinite()) {
        throw std::invalid_argument(prefix + "vol must be a finite d x d matrix");
    }
    if (p.drift.size() != d || !p.drift.allFinite()) {
        throw std::invalid_argument(prefix + "drift must be a finite d-vector");
    }
    if (!(p.jump_rate >= 0.0) || !std::isfinite(p.jump_rate)) {
        throw std::invalid_argument(prefix + "jump_rate must be finite and >= 0");
    }
    if (p.jump_rate == 0.0) {
        return;
    }
    switch (p.jumps.kind) {
        case JumpLaw::Kind::gaussian:
            if (p.jumps.mean.size() != d || p.jumps.covariance.rows() != d ||
                p.jumps.covariance.cols() != d || !p.jumps.covariance.allFinite() ||
                !p.jumps.mean.allFinite()) {
                throw std::invalid_argument(prefix + "gaussian jumps need d-mean and d x d covariance");
            }
            break;
        case JumpLaw::Kind::uniform_ball:
            if (!(p.jumps.radius > 0.0) || !std::isfinite(p.jumps.radius)) {
                throw std::invalid_argument(prefix + "uniform_ball jumps need radius > 0");
            }
            break;
        case JumpLaw::Kind::fixed:
            if (p.jumps.value.size() != d || !p.jumps.value.allFinite()) {
                throw std::invalid_argument(prefix + "fixed jumps need a finite d-vector");
            }
            break;
    }
}

std::vector<Point> jumps_on_grid(const std::vector<JumpEvent>& events, const Partition& grid, int d) {
    std::vector<Point> out(grid.size(), Point::Zero(d));
    for (const auto& e : events) {
        out[grid.locate(e.time)] += e.size;
    }
    return out;
}

}  // namespace

ProcessSpec ProcessSpec::zero(int dimension) {
    ProcessSpec p;
    p.vol = Matrix::Zero(dimension, dimension);
    p.drift = Point::Zero(dimension);
    p.jumps.mean = Point::Zero(dimension);
    p.jumps.covariance = Matrix::Identity(dimension, dimension);
    p.jumps.value = Point::Zero(dimension);
    return p;
}

DriverSpec DriverSpec::zero(int dimension) {
    return DriverSpec{dimension, ProcessSpec::zero(dimension), ProcessSpec::zero(dimension),
                      Point::Zero(dimension)};
}

void validate(const DriverSpec& spec) {
    if (spec.dimension < 1) {
        throw std::invalid_argument("driver: dimension must be >= 1");
    }
    validate_process(spec.z, spec.dimension, "z");
    validate_process(spec.h, spec.dimension, "h");
    if (spec.h0.size() != spec.dimension || !spec.h0.allFinite()) {
        throw std::invalid_argument("driver h: initial point must be a finite d-vector");
    }
}

DriverRealization simulate(const DriverSpec& spec, const Partition& partition, std::uint64_t seed,
                           std::uint64_t trajectory) {
    validate(spec);
    const int d = spec.dimension;
    const double horizon = partition.horizon();
    if (!(horizon > 0.0)) {
        throw std::invalid_argument("simulate: partition must have positive horizon");
    }
    const auto z_events = sample_jumps(spec.z, d, horizon, seed, trajectory, kZTags);
    const auto h_events = sample_jumps(spec.h, d, horizon, seed, trajectory, kHTags);

    std::vector<double> jump_times;
    for (const auto& e : z_events) {
        jump_times.push_back(e.time);
    }
    for (const auto& e : h_events) {
        jump_times.push_back(e.time);
    }
    Partition grid = merge(partition, jump_times);

    Matrix z = evaluate_process(spec.z, d, grid.times(), z_events, horizon, seed, trajectory,
                                StreamTag::z_brownian);
    Matrix h = evaluate_process(spec.h, d, grid.times(), h_events, horizon, seed, trajectory,
                                StreamTag::h_brownian);
    h.colwise() += spec.h0;

    std::vector<bool> flags(grid.size(), false);
    for (const double t : jump_times) {
        flags[grid.locate(t)] = true;
    }
    auto z_jumps = jumps_on_grid(z_events, grid, d);
    auto h_jumps = jumps_on_grid(h_events, grid, d);
    return DriverRealization{partition,
                             grid,
                             StepPath(grid, std::move(h)),
                             StepPath(grid, std::move(z)),
                             std::move(flags),
                             std::move(h_jumps),
                             std::move(z_jumps),
                             spec,
                             seed,
                             trajectory};
}

DriverRealization refine_consistent(const DriverRealization& r, const Partition& finer) {
    if (!finer.refines(r.base) || finer.horizon() != r.base.horizon()) {
        throw std::invalid_argument("refine_consistent: finer partition must contain the base partition");
    }
    if (r.spec) {
        return simulate(*r.spec, finer, r.seed, r.trajectory);
    }
    const Partition grid = merge(finer, r.grid.times());
    std::vector<bool> flags(grid.size(), false);
    std::vector<Point> h_jumps(grid.size(), Point::Zero(r.h.dimension()));
    std::vector<Point> z_jumps(grid.size(), Point::Zero(r.z.dimension()));
    for (std::size_t k = 0; k < r.grid.size(); ++k) {
        const std::size_t at = grid.locate(r.grid[k]);
        flags[at] = r.jump_flags[k];
        h_jumps[at] = r.h_jumps[k];
        z_jumps[at] = r.z_jumps[k];
    }
    return DriverRealization{finer,           grid,  discretize(r.h, grid), discretize(r.z, grid),
                             std::move(flags), std::move(h_jumps), std::move(z_jumps), std::nullopt,
                             r.seed,          r.trajectory};
}

DriverRealization driver_from_paths(StepPath h, StepPath z, std::vector<bool> jump_flags) {
    if (h.dimension() != z.dimension()) {
        throw std::invalid_argument("driver_from_paths: H and Z dimensions differ");
    }
    if (!(h.partition() == z.partition())) {
        const Partition grid = merge(h.partition(), z.partition().times());
        h = discretize(h, grid);
        z = discretize(z, grid);
    }
    if (z.value(0).norm() != 0.0) {
        throw std::invalid_argument("driver_from_paths: Z must start at 0");
    }
    const Partition grid = h.partition();
    if (jump_flags.empty()) {
        jump_flags.assign(grid.size(), false);
    }
    if (jump_flags.size() != grid.size()) {
        throw std::invalid_argument("driver_from_paths: one jump flag per grid point required");
    }
    std::vector<Point> h_jumps(grid.size(), Point::Zero(h.dimension()));
    std::vector<Point> z_jumps(grid.size(), Point::Zero(h.dimension()));
    for (std::size_t k = 1; k < grid.size(); ++k) {
        if (jump_flags[k]) {
            h_jumps[k] = h.jump(k);
            z_jumps[k] = z.jump(k);
        }
    }
    return DriverRealization{grid,
                             grid,
                             std::move(h),
                             std::move(z),
                             std::move(jump_flags),
                             std::move(h_jumps),
                             std::move(z_jumps),
                             std::nullopt,
                             0,
                             0};
}

void write_driver(std::ostream& out, const DriverRealization& r, Format format) {
    const int d = r.z.dimension();
    if (format == Format::csv) {
        out << "time";
        for (int i = 1; i <= d; ++i) {
            out << ",h_" << i;
        }
        for (int i = 1; i <= d; ++i) {
            out << ",z_" << i;
        }
        out << ",jump\n";
        for (std::size_t k = 0; k < r.grid.size(); ++k) {
            out << format_real(r.grid[k]);
            const auto col = static_cast<Eigen::Index>(k);
            for (int i = 0; i < d; ++i) {
                out << ',' << format_real(r.h.values()(i, col));
            }
            for (int i = 0; i < d; ++i) {
                out << ',' << format_real(r.z.values()(i, col));
            }
            out << ',' << (r.jump_flags[k] ? 1 : 0) << '\n';
        }
        return;
    }
    for (std::size_t k = 0; k < r.grid.size(); ++k) {
        const Point hk = r.h.value(k);
        const Point zk = r.z.value(k);
        nlohmann::json record{{"t", r.grid[k]},
                              {"h", std::vector<double>(hk.data(), hk.data() + d)},
                              {"z", std::vector<double>(zk.data(), zk.data() + d)},
                              {"jump", r.jump_flags[k] ? 1 : 0}};
        out << record.dump() << '\n';
    }
}

}  // namespace mmsde
