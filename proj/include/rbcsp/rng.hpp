#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace rbcsp {

// SplitMix64 finalizer. Used to derive independent substream seeds.
std::uint64_t mix64(std::uint64_t x);

// Folds a sequence of words into one seed: hash(seed, i, j, ...).
std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> path);

// Seeded generator backed by std::mt19937_64, whose output sequence is fixed
// by the standard. Bounded draws are done here rather than through
// std::uniform_int_distribution, whose algorithm is implementation-defined,
// so that instances are identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform integer in [0, bound). bound must be nonzero.
  std::uint64_t below(std::uint64_t bound);

  // Uniform double in [0, 1) with 53 random bits.
  double unit();

 private:
  std::mt19937_64 engine_;
};

}  // namespace rbcsp
