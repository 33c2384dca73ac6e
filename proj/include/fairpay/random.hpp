#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace fairpay {

/// Seeded pseudo-random source.
///
/// Wraps a 64-bit Mersenne Twister. Conversions to reals and indices are done
/// by hand so the produced sequence does not depend on the standard library's
/// distribution implementations.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  /// Independent stream derived from this source's seed and a stream id.
  /// Deriving does not advance this source.
  [[nodiscard]] RandomSource substream(std::uint64_t stream_id) const {
    return RandomSource(mix(seed_ ^ mix(stream_id + 0x9e3779b97f4a7c15ULL)));
  }

  /// Uniform real in [0, 1) with 53 bits of precision.
  double uniform() {
    ++draws_;
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform index in [0, n). Requires n >= 1.
  std::size_t index(std::size_t n) {
    const std::uint64_t range = static_cast<std::uint64_t>(n);
    // Rejection keeps the draw exactly uniform.
    const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % range);
    std::uint64_t value = 0;
    do {
      ++draws_;
      value = engine_();
    } while (value >= limit);
    return static_cast<std::size_t>(value % range);
  }

  [[nodiscard]] std::uint64_t seed() const { return seed_; }
  /// Number of engine outputs consumed so far.
  [[nodiscard]] std::uint64_t position() const { return draws_; }

 private:
  // splitmix64 finalizer
  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::uint64_t draws_ = 0;
};

/// Sub-stream ids. Each consumer of randomness in a run owns one stream so
/// that swapping the payment scheme leaves the environment draws unchanged.
enum class Stream : std::uint64_t {
  kContexts = 1,
  kAgent = 2,
  kScheme = 3,
  // Reward streams are kRewards + arm index.
  kRewards = 1000,
};

inline RandomSource stream(const RandomSource& master, Stream s, std::uint64_t offset = 0) {
  return master.substream(static_cast<std::uint64_t>(s) + offset);
}

}  // namespace fairpay
