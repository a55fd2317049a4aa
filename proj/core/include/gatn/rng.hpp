// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string_view>

namespace gatn {

std::uint64_t fnv1a64(std::string_view text);

// Deterministic xoshiro256++ stream. Every stochastic choice in a run flows
// through one of these, so (config, seed) fixes trajectories bit-exactly and
// results do not depend on the platform's <random> distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  // Independent substream derived from this stream's seed and a label.
  // Forking with the same label twice yields the same substream.
  Rng fork(std::string_view label) const;

  std::uint64_t next_u64();
  double uniform();                      // [0, 1)
  double uniform(double lo, double hi);  // [lo, hi)
  int uniform_int(int n);                // [0, n), n >= 1
  double normal();                       // standard normal via Box-Muller
  double normal(double mean, double sigma);

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::uint64_t s_[4];
};

}  // namespace gatn
