#pragma once

#include <map>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "mtasep/bigint.hpp"
#include "mtasep/core.hpp"

namespace mtasep {

/// A string over '0'/'1'.
using BinaryString = std::string;

/// Number of strings reachable from b (b included) by moving 1s rightward
/// through 0s, by explicit closure enumeration.
BigInt omega_push(std::string_view b);

/// Same weight through omega(B10B') = omega(B1B') + omega(B0B'), with
/// omega(0...01...1) = 1.
BigInt omega_reduce(std::string_view b);

/// Product of omega over the strings separating the class-2 particles.
/// Requires N == 2 and at least one class-2 particle.
BigInt two_species_weight(const Configuration& config);

/// The level-(N-1) configurations that generate `config`, sorted.
using AncestorSet = std::vector<Configuration>;

/// Sets after each pushing stage K = 1..N-1 (still at level N), followed by
/// the final level-(N-1) ancestor set.
std::vector<AncestorSet> ancestor_stages(const Configuration& config);

/// Requires N >= 2 and at least one class-N particle.
AncestorSet ancestors(const Configuration& config);

/// Sum over ancestors, recursed down to single-species level where every
/// configuration has weight 1. Memoized by canonical rotation; thread-safe.
class AncestorWeigher {
 public:
  BigInt weight(const Configuration& config);

 private:
  BigInt weight_reduced(const Configuration& config);

  std::mutex mutex_;
  std::map<Configuration, BigInt> cache_;
};

BigInt weight_recursive(const Configuration& config);

}  // namespace mtasep
