#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>

namespace mmsde {

/// SplitMix64 output function.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Key of an independent random substream. The key is a chained SplitMix64
/// hash of (master seed, trajectory index, purpose tag, further ids), so any
/// substream can be reached directly without advancing a shared generator.
std::uint64_t substream_key(std::uint64_t seed, std::uint64_t trajectory, std::uint64_t tag,
                            std::initializer_list<std::uint64_t> ids = {}) noexcept;

/// Counter-based generator: the i-th output is mix64(key + i * golden).
/// Satisfies UniformRandomBitGenerator.
class CounterRng {
  public:
    using result_type = std::uint64_t;

    explicit CounterRng(std::uint64_t key) noexcept : key_(key) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept;
    std::uint64_t counter() const noexcept { return counter_; }

  private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

/// Purpose tags for driver substreams.
enum class StreamTag : std::uint64_t {
    z_brownian = 1,
    z_jump_count = 2,
    z_jump_times = 3,
    z_jump_sizes = 4,
    h_brownian = 11,
    h_jump_count = 12,
    h_jump_times = 13,
    h_jump_sizes = 14,
    verification = 100,
};

}  // namespace mmsde
