#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace cfas::rng {

/// splitmix64 finalizer; decorrelates nearby (seed, stream) pairs.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

/// Seed for an independent substream. Every stochastic quantity in the
/// toolkit is drawn from a (seed, stream) pair so results do not depend on
/// chunking or thread scheduling.
inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t stream) {
  return mix64(mix64(seed) ^ mix64(stream * 0x9e3779b97f4a7c15ull + 1));
}

/// Deterministic standard-normal source: mt19937_64 driving Box-Muller.
/// The transform is spelled out here (rather than std::normal_distribution)
/// because the standard leaves that distribution's algorithm unspecified and
/// stored results must be reproducible across toolchains.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : engine_(seed) {}

  NormalStream(std::uint64_t seed, std::uint64_t stream)
      : engine_(substream_seed(seed, stream)) {}

  double operator()() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    // u1 in (0,1] so the log is finite.
    const double u1 =
        (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * M_PI * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace cfas::rng
