#pragma once

#include <cstdint>
#include <limits>

namespace qna {

/// SplitMix64 finalizer; bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Small counter-based generator satisfying UniformRandomBitGenerator.
/// Cheap to construct, so a fresh stream can be derived per component and
/// per round without carrying generator state across rounds.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  constexpr explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix64(state_);
  }

 private:
  std::uint64_t state_;
};

/// Independent draw purposes. Noise and outcome sampling never share a stream,
/// which keeps the evolved state independent of the sampling draws.
enum class StreamPurpose : std::uint64_t {
  kInit = 1,
  kNoise = 2,
  kSampling = 3,
  kProbMap = 4,
};

constexpr std::uint64_t derive_seed(std::uint64_t master, StreamPurpose purpose, std::uint64_t component,
                                    std::uint64_t round) noexcept {
  std::uint64_t h = mix64(master ^ 0x6a09e667f3bcc909ULL);
  h = mix64(h ^ static_cast<std::uint64_t>(purpose));
  h = mix64(h + component * 0x9e3779b97f4a7c15ULL);
  return mix64(h ^ (round + 0x3c6ef372fe94f82bULL));
}

inline SplitMix64 derive_stream(std::uint64_t master, StreamPurpose purpose, std::uint64_t component,
                                std::uint64_t round) noexcept {
  return SplitMix64{derive_seed(master, purpose, component, round)};
}

/// Uniform double in [0, 1) with 53 random bits.
template <class Engine>
double uniform01(Engine& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

}  // namespace qna
