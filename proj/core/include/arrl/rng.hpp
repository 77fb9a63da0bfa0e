#pragma once

#include <cstdint>
#include <random>
#include <sstream>
#include <string>

namespace arrl {

/// Seeded RNG stream. Components derive independent streams from a run seed
/// plus a fixed per-component tag so that runs are reproducible bit-exactly.
class Rng {
public:
  Rng() : engine_(0) {}
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::uint64_t seed, std::uint64_t stream_tag)
      : engine_(mix(seed, stream_tag)) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }
  double normal(double mean = 0.0, double std = 1.0) {
    // One-sample-at-a-time polar method; std::normal_distribution caches a
    // second value, which complicates state serialization.
    double u1 = uniform(std::numeric_limits<double>::min(), 1.0);
    double u2 = uniform(0.0, 1.0);
    double r = std::sqrt(-2.0 * std::log(u1));
    return mean + std * r * std::cos(2.0 * M_PI * u2);
  }
  std::uint64_t integer(std::uint64_t n) {  // uniform in [0, n)
    return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(engine_);
  }

  std::mt19937_64& engine() { return engine_; }

  std::string save_state() const {
    std::ostringstream os;
    os << engine_;
    return os.str();
  }
  void load_state(const std::string& s) {
    std::istringstream is(s);
    is >> engine_;
  }

  static std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    // splitmix64 finalizer over the pair
    std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

private:
  std::mt19937_64 engine_;
};

}  // namespace arrl
