#ifndef RANKGAUGE_RNG_HPP
#define RANKGAUGE_RNG_HPP

#include <array>
#include <bit>
#include <cstdint>

namespace rankgauge {

/// Purpose salts for deriving independent substreams from one master seed.
/// Every Monte-Carlo loop keys its per-replicate stream as
/// stream(master, salt, replicate_index), which makes the draws of replicate
/// b identical no matter how the loop is partitioned across workers.
enum class StreamSalt : std::uint64_t {
  kCoverageDraw = 0x1,
  kMethodInner = 0x2,
  kQuantile = 0x3,
  kZhangColumn = 0x4,
  kCenterDraw = 0x5,
  kDataDraw = 0x6,
  kRescale = 0x7,
  kVerify = 0x8,
  kSweepPoint = 0x9,
};

/// SplitMix64 finalizer; used as the key-derivation mixer.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t salt,
                                    std::uint64_t index = 0) {
  return mix64(mix64(mix64(master) ^ mix64(salt)) ^ mix64(index));
}

constexpr std::uint64_t derive_seed(std::uint64_t master, StreamSalt salt,
                                    std::uint64_t index = 0) {
  return derive_seed(master, static_cast<std::uint64_t>(salt), index);
}

/// xoshiro256++ with SplitMix64 state expansion.  Chosen over <random>
/// engines because normal deviates from std::normal_distribution are
/// implementation defined, which would break the bit-reproducibility
/// contract of the library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t s = seed;
    for (auto& word : state_) {
      s += 0x9E3779B97F4A7C15ULL;
      word = mix64(s);
    }
  }

  Rng(std::uint64_t master, StreamSalt salt, std::uint64_t index = 0)
      : Rng(derive_seed(master, salt, index)) {}

  std::uint64_t next_u64() {
    const std::uint64_t result = std::rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = std::rotl(state_[3], 45);
    return result;
  }

  /// Uniform double in (0, 1]; never 0 so -log(u) is finite.
  double next_unit_positive() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  /// Uniform double in [0, 1).
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Standard normal deviate via a 256-layer ziggurat.
  double next_normal();

 private:
  std::array<std::uint64_t, 4> state_;
};

}  // namespace rankgauge

#endif  // RANKGAUGE_RNG_HPP
