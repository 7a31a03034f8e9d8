#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace jcas {

// One SplitMix64 step. Advances `state` and returns the next output word.
std::uint64_t splitmix64(std::uint64_t& state);

// Deterministic sub-stream seed. The mixing function is
//   splitmix64(base ^ (0x9E3779B97F4A7C15 * (stream + 1)))
// and is part of the reproducibility contract: trial seeds, channel seeds and
// solver seeds are all derived this way.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

// mt19937_64 engine with explicit uniform/Box-Muller transforms. The standard
// specifies the engine output exactly, but not the library distributions, so
// the transforms are spelled out here to keep runs bit-reproducible.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();
  double uniform();                    // [0, 1), 53-bit resolution
  double uniform(double lo, double hi);
  int uniform_int(int n);              // {0, ..., n-1}
  double normal();                     // standard normal
  std::complex<double> cnormal();      // circular complex normal, E|z|^2 = 1

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace jcas
