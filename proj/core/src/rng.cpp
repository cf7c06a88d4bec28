#include "mmsde/rng.hpp"

namespace mmsde {

namespace {
constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
}

std::uint64_t mix64(std::uint64_t x) noexcept {
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t substream_key(std::uint64_t seed, std::uint64_t trajectory, std::uint64_t tag,
                            std::initializer_list<std::uint64_t> ids) noexcept {
    std::uint64_t h = mix64(seed + kGolden);
    h = mix64(h ^ (trajectory + kGolden));
    h = mix64(h ^ (tag + kGolden));
    for (const auto id : ids) {
        h = mix64(h ^ (id + kGolden));
    }
    return h;
}

CounterRng::result_type CounterRng::operator()() noexcept {
    ++counter_;
    return mix64(key_ + counter_ * kGolden);
}

}  // namespace mmsde
