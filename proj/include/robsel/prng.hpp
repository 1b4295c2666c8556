#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string_view>

namespace robsel {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

/// Folds a list of indices (image index, checkpoint index, draw index...)
/// into one stream id. Order matters.
constexpr std::uint64_t stream_key(std::initializer_list<std::uint64_t> parts) noexcept {
  std::uint64_t h = 0;
  for (std::uint64_t p : parts) h = mix64(h ^ (p + kGoldenGamma));
  return h;
}

/// FNV-1a over the bytes of a label, for deriving streams from checkpoint ids.
constexpr std::uint64_t hash_label(std::string_view label) noexcept {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (char ch : label) {
    h ^= static_cast<unsigned char>(ch);
    h *= 0x100000001B3ULL;
  }
  return h;
}

/// Deterministic random stream identified by (master_seed, stream_id).
///
/// State derivation:   s0 = mix64(master_seed ^ mix64(stream_id + kGoldenGamma))
/// Step:               s += kGoldenGamma; out = mix64(s)
/// Uniform real:       (out >> 11) * 2^-53, in [0, 1)
///
/// Everything is integer arithmetic up to the final scaling, so uniform draws
/// are bit-identical on any IEEE-754 platform. Normal and gamma variates go
/// through libm (log, cos, sqrt) and are reproducible per platform.
class Prng {
 public:
  Prng(std::uint64_t master_seed, std::uint64_t stream_id) noexcept
      : state_(mix64(master_seed ^ mix64(stream_id + kGoldenGamma))) {}

  std::uint64_t next_u64() noexcept {
    state_ += kGoldenGamma;
    return mix64(state_);
  }

  double uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

  /// floor(u * n), in [0, n). n must be positive.
  std::size_t index(std::size_t n) noexcept;

  /// True with probability p (u < p).
  bool bernoulli(double p) noexcept { return uniform() < p; }

  /// Standard normal via Box-Muller; consumes exactly two uniforms.
  double normal() noexcept;

  double normal(double mean, double sd) noexcept { return mean + sd * normal(); }

  /// Gamma(shape, 1) by Marsaglia-Tsang; shape < 1 uses the boost trick.
  double gamma(double shape) noexcept;

  double beta(double a, double b) noexcept;

 private:
  std::uint64_t state_;
};

}  // namespace robsel
