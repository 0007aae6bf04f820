#pragma once

#include <cstdint>
#include <limits>

namespace rdrho {

// SplitMix64 as a counter-based generator: the k-th output is a bijective
// mix of (key + k * golden gamma), so a stream is fully determined by its key.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t key) noexcept : state_(key) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    state_ += kGamma;
    return mix(state_);
  }

  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

 private:
  std::uint64_t state_;
};

// Named stream families.
enum class Stream : std::uint64_t { replicate = 1, sweep_config = 2 };

// Key for item `index` of stream family `stream` under `seed`.
constexpr std::uint64_t stream_key(std::uint64_t seed, Stream stream, std::uint64_t index) noexcept {
  std::uint64_t k = SplitMix64::mix(seed + SplitMix64::kGamma);
  k = SplitMix64::mix(k ^ (static_cast<std::uint64_t>(stream) * 0xd1b54a32d192ed03ULL));
  return SplitMix64::mix(k ^ SplitMix64::mix(index + 0x632be59bd9b4e019ULL));
}

}  // namespace rdrho
