#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace sbloc {

// Counter-based random numbers. Every draw is a pure function of
// (seed, stream, block, channel, index), so generators can be evaluated in any
// order or in parallel and still give bitwise identical output. The mixing
// function is the splitmix64 finaliser; the normal deviates use Box-Muller so
// results do not depend on the standard library's distribution code.

namespace rng_detail {

constexpr std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

} // namespace rng_detail

/// Named seed streams so that independent consumers never share draws.
enum class Stream : std::uint64_t {
  source_amplitudes = 1,
  noise = 2,
  mic_position = 3,
  time_signal = 4,
  kmeans = 5,
  test = 99,
};

struct CounterRng {
  std::uint64_t seed = 0;
  Stream stream = Stream::test;

  constexpr std::uint64_t bits(std::uint64_t block, std::uint64_t channel, std::uint64_t index) const {
    using rng_detail::mix;
    std::uint64_t h = mix(seed ^ mix(static_cast<std::uint64_t>(stream)));
    h = mix(h ^ block);
    h = mix(h ^ (channel * 0xd1b54a32d192ed03ULL));
    return mix(h ^ (index * 0x8cb92ba72f3d8dd7ULL));
  }

  /// Uniform on the open interval (0, 1).
  double uniform(std::uint64_t block, std::uint64_t channel, std::uint64_t index) const {
    return (static_cast<double>(bits(block, channel, index) >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Pair of independent standard normals packed as (re, im).
  std::complex<double> normal_pair(std::uint64_t block, std::uint64_t channel,
                                   std::uint64_t index) const {
    const double u1 = uniform(block, channel, 2 * index);
    const double u2 = uniform(block, channel, 2 * index + 1);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(t), r * std::sin(t)};
  }

  /// Circular complex Gaussian with E|z|^2 = variance.
  std::complex<double> complex_normal(std::uint64_t block, std::uint64_t channel,
                                      std::uint64_t index, double variance) const {
    return normal_pair(block, channel, index) * std::sqrt(0.5 * variance);
  }
};

/// Sequential view of a CounterRng for consumers that just want the next draw.
class SequentialRng {
public:
  SequentialRng(std::uint64_t seed, Stream stream, std::uint64_t block = 0)
      : rng_{seed, stream}, block_(block) {}

  double uniform() { return rng_.uniform(block_, 0, counter_++); }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const auto z = rng_.normal_pair(block_, 1, counter_++);
    spare_ = z.imag();
    has_spare_ = true;
    return z.real();
  }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>(uniform() * static_cast<double>(n)) % n;
  }

private:
  CounterRng rng_;
  std::uint64_t block_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

} // namespace sbloc
