#pragma once

#include <cstdint>
#include <string_view>

namespace nkiso {

/// Counter-based SplitMix64 stream.
///
/// Draw n (n = 0, 1, ...) of the stream with key K and stream id S is
///
///     state = mix64(K) ^ mix64(S + 0x632BE59BD9B4E019)
///     u64_n = mix64(state + (n + 1) * 0x9E3779B97F4A7C15)
///
/// where mix64 is the SplitMix64 finalizer. Uniform doubles use the top 53
/// bits, ((u64 >> 11) + 0.5) * 2^-53, and normals use the cosine branch of
/// Box-Muller on two consecutive uniforms. The scheme has no hidden state
/// beyond the counter, so any implementation reproduces the same draws.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key, std::uint64_t stream = 0);

  /// Stream keyed by a label, e.g. the name of a verification check.
  static CounterRng named(std::uint64_t key, std::string_view label,
                          std::uint64_t index = 0);

  std::uint64_t next_u64();
  /// Uniform on the open interval (0, 1).
  double uniform();
  double uniform(double lo, double hi);
  double normal();

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t state_;
  std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t z);
std::uint64_t fnv1a64(std::string_view text);

}  // namespace nkiso
