#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mmsde/path_io.hpp"
#include "mmsde/paths.hpp"

namespace mmsde {

/// Distribution of compound Poisson jump sizes.
struct JumpLaw {
    enum class Kind { gaussian, uniform_ball, fixed };
    Kind kind = Kind::gaussian;
    Point mean;        ///< gaussian
    Matrix covariance; ///< gaussian
    double radius = 1.0;  ///< uniform_ball
    Point value;       ///< fixed
};

/// Brownian motion with drift plus compound Poisson jumps:
/// vol * W_t + drift * t + sum of jumps up to t.
struct ProcessSpec {
    Matrix vol;
    Point drift;
    double jump_rate = 0.0;
    JumpLaw jumps;

    static ProcessSpec zero(int dimension);
};

/// Driving processes of the equation: Z starts at 0, H starts at h0.
struct DriverSpec {
    int dimension = 1;
    ProcessSpec z;
    ProcessSpec h;
    Point h0;

    static DriverSpec zero(int dimension);
};

/// Throws std::invalid_argument on shape mismatches, non-finite entries or a
/// negative jump rate.
void validate(const DriverSpec& spec);

/// One sampled pair (H, Z) on a partition augmented by the jump times.
struct DriverRealization {
    Partition base;
    Partition grid;
    StepPath h;
    StepPath z;
    /// True at grid points carrying a compound Poisson arrival of H or Z.
    std::vector<bool> jump_flags;
    /// Pure jump components of H and Z at each grid point (zero elsewhere).
    std::vector<Point> h_jumps;
    std::vector<Point> z_jumps;
    std::optional<DriverSpec> spec;
    std::uint64_t seed = 0;
    std::uint64_t trajectory = 0;
};

/// Deterministic function of (spec, seed, trajectory); values at any time t
/// do not depend on the partition, so realizations on nested partitions
/// agree bit for bit at common points.
///
/// The Brownian part uses a dyadic Brownian-bridge (Levy) construction on
/// [0, T]: the midpoint of the dyadic interval (level, index) is drawn from
/// its bridge law with a substream keyed by (seed, trajectory, tag, component,
/// level, index), down to `kBrownianLevels`, then linearly interpolated.
DriverRealization simulate(const DriverSpec& spec, const Partition& partition, std::uint64_t seed,
                           std::uint64_t trajectory);

inline constexpr int kBrownianLevels = 24;

/// Re-evaluates the realization on a finer partition. Throws
/// std::invalid_argument unless `finer` contains every base point.
DriverRealization refine_consistent(const DriverRealization& realization, const Partition& finer);

/// Wraps user-supplied driver paths. Jump flags, when given, mark grid points
/// whose full increments count as jumps.
DriverRealization driver_from_paths(StepPath h, StepPath z, std::vector<bool> jump_flags = {});

/// CSV columns time,h_1..h_d,z_1..z_d,jump; JSONL {"t","h","z","jump"}.
void write_driver(std::ostream& out, const DriverRealization& realization, Format format);

}  // namespace mmsde
