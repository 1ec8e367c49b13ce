#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace mnmt {

// Deterministic PRNG: xoshiro256++ seeded through splitmix64. All sampling
// (uniform, gaussian via Box-Muller) is implemented here rather than with
// std:: distributions so that sequences are identical across standard
// libraries, not just across runs.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  // Uniform in [0, 1) with 53 random bits.
  double uniform01();

  // Standard normal, Box-Muller; pairs are cached so consecutive draws
  // consume uniforms in a fixed pattern.
  double gaussian();
  double gaussian(double stddev) { return stddev * gaussian(); }

  // Bernoulli(p_keep).
  bool bernoulli(double p_keep) { return uniform01() < p_keep; }

  // Independent child stream derived from this generator's seed and a tag.
  // Forking does not advance this generator; identical (seed, tag) pairs
  // always yield the same child.
  Rng fork(std::string_view tag) const;

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_ = 0;
  std::array<std::uint64_t, 4> s_{};
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// FNV-1a 64-bit hash, used for rng stream tags and vocabulary content hashes.
std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace mnmt
