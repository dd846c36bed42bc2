#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace signkit {

// Deterministic random source used by every randomized component.
//
// The engine is std::mt19937_64 (bit-exact across standard libraries) and all
// distribution transforms are implemented here explicitly, so a (seed, call
// sequence) pair reproduces the same values on any conforming platform:
//   uniform:  53-bit mantissa mapping, [0, 1)
//   gaussian: Box-Muller, both branches consumed in order
// Child streams are derived with splitmix64 mixing.
class Rng {
 public:
  // Identifier recorded in configs so reruns can assert sequence compatibility.
  static constexpr std::string_view kAlgorithm = "mt19937_64+boxmuller-v1";

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [lo, hi], inclusive.
  int uniform_int(int lo, int hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(next_u64() % span);
  }

  // Standard normal via Box-Muller; the sine branch is cached.
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * 3.141592653589793238462643383279502884 * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

  double gaussian(double mean, double stddev) { return mean + stddev * gaussian(); }

  // splitmix64 finalizer; used standalone for seed mixing.
  static std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
  }

  // Derives an independent child-stream seed for (seed, stream).
  static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(seed ^ splitmix64(stream));
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace signkit
