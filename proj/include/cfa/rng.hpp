#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace cfa {

// splitmix64 finalizer; full-avalanche mix of a 64-bit word.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Child seed for the i-th stream under a master seed.  This is the i-th
// output of splitmix64 seeded with `master`, so distinct indices give
// decorrelated streams and the mapping is stable across runs and machines.
constexpr std::uint64_t child_seed(std::uint64_t master, std::uint64_t index) {
  return mix64(master + index * 0x9e3779b97f4a7c15ULL);
}

// Seed domains keep independent uses of one experiment seed provably
// disjoint (e.g. tuning paths vs. validation paths).
enum class SeedDomain : std::uint64_t {
  Simulate = 0x53494d55,
  Tune = 0x54554e45,
  Validate = 0x56414c49,
  Test = 0x54455354,
};

constexpr std::uint64_t domain_seed(std::uint64_t master, SeedDomain d) {
  return mix64(master ^ mix64(static_cast<std::uint64_t>(d)));
}

// Deterministic RNG: mt19937_64 core (fully specified by the standard) with
// our own normal transform, so draws do not depend on the standard library's
// unspecified distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller, one spare cached.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = (static_cast<double>(gen_() >> 11) + 1.0) * 0x1.0p-53;  // (0,1]
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  double normal(double mean, double stdev) { return mean + stdev * normal(); }

  // +1 or -1 with equal probability.
  int rademacher() { return (gen_() & 1u) ? 1 : -1; }

  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return gen_() % n; }

  std::uint64_t raw() { return gen_(); }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace cfa
