#pragma once

#include <cstdint>
#include <limits>

namespace concentra {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// stream ids, kept distinct so that e.g. X and Y draws of one trial never share a key
namespace streams {
inline constexpr std::uint64_t kGeneric = 0;
inline constexpr std::uint64_t kRademacher = 1;
inline constexpr std::uint64_t kSampleX = 2;
inline constexpr std::uint64_t kSampleY = 3;
inline constexpr std::uint64_t kEnvelope = 4;
inline constexpr std::uint64_t kNormEstimate = 5;
inline constexpr std::uint64_t kTheta = 6;
inline constexpr std::uint64_t kFeatures = 7;
}  // namespace streams

// xoshiro256** keyed by (seed, stream, counter). Trial i of an experiment uses counter = i,
// so any trial can be regenerated in isolation.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0, std::uint64_t counter = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  double uniform();       // in (0, 1)
  double normal();        // standard normal, Box-Muller
  double exponential(double rate = 1.0);
  double pareto(double shape, double scale = 1.0);
  int sign();             // uniform on {-1, +1}
  std::uint64_t below(std::uint64_t bound);

 private:
  std::uint64_t s_[4];
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace concentra
