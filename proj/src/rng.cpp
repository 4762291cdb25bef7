#include "covmeas/rng.hpp"

#include <cmath>

#include "covmeas/types.hpp"

namespace covmeas {

namespace {
constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
}

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

TrialRng::TrialRng(std::uint64_t seed, std::uint64_t trial)
    : key_(mix64(mix64(seed + kGolden) ^ (trial * 0xd1b54a32d192ed03ULL + 0x2545f4914f6cdd1dULL))) {}

TrialRng::result_type TrialRng::operator()() {
  ++counter_;
  return mix64(key_ + counter_ * kGolden);
}

double TrialRng::uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

double TrialRng::uniform_positive() { return (static_cast<double>((*this)() >> 11) + 1.0) * 0x1.0p-53; }

std::size_t TrialRng::index(std::size_t n) {
  const auto k = static_cast<std::size_t>(uniform() * static_cast<double>(n));
  return k < n ? k : n - 1;
}

double TrialRng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double r = std::sqrt(-2.0 * std::log(uniform_positive()));
  const double a = kTwoPi * uniform();
  spare_ = r * std::sin(a);
  has_spare_ = true;
  return r * std::cos(a);
}

}  // namespace covmeas
