#pragma once

#include <cstdint>
#include <limits>

namespace covmeas {

/// Counter-based stream: the k-th draw of trial t depends only on
/// (seed, t, k), so trials can be evaluated in any order or thread.
/// SplitMix64 output function over a per-trial key.
class TrialRng {
 public:
  using result_type = std::uint64_t;

  TrialRng(std::uint64_t seed, std::uint64_t trial);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();
  /// [0, 1) with 53 random bits.
  double uniform();
  /// (0, 1], safe for log.
  double uniform_positive();
  /// Index in [0, n).
  std::size_t index(std::size_t n);
  /// Standard normal (Box-Muller, second value cached).
  double normal();

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t mix64(std::uint64_t z);

}  // namespace covmeas
