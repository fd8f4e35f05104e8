#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mtasep/bigint.hpp"
#include "mtasep/core.hpp"
#include "mtasep/multiline.hpp"

namespace mtasep {

inline constexpr std::uint64_t kDefaultMaxStates = 200000;

/// Master-equation generator of one sector. Columns index source
/// configurations, rows target configurations; columns sum to zero.
struct SectorGenerator {
  Sector sector;
  std::vector<Configuration> states;  // lexicographic
  std::map<Configuration, int> index;
  /// columns[j] = (row, rate) pairs, diagonal included.
  std::vector<std::vector<std::pair<int, long>>> columns;

  int size() const { return static_cast<int>(states.size()); }
};

SectorGenerator build_generator(const Sector& sector, std::uint64_t max_states = kDefaultMaxStates);

struct StationaryVector {
  std::vector<Configuration> states;
  std::vector<Rational> probabilities;
  /// Set for sectors with a single configuration.
  bool frozen = false;

  const Rational& at(const Configuration& c) const;
};

/// Unique normalized kernel vector of Q, by fraction-free elimination.
/// Throws InternalConsistencyError if the kernel is not one-dimensional.
StationaryVector stationary(const SectorGenerator& gen);

/// Exact re-multiplication Q * P == 0.
bool is_balanced(const SectorGenerator& gen, const StationaryVector& p);

struct CompareOptions {
  std::uint64_t max_states = kDefaultMaxStates;
  std::uint64_t multiline_bound = kDefaultEnumerationBound;
};

struct ComparisonRow {
  Configuration config;
  BigInt tensor_weight;
  BigInt pushing_weight;
  std::optional<BigInt> multiline_weight;  // absent above the enumeration bound
  Rational tensor_probability;
  Rational pushing_probability;
  std::optional<Rational> multiline_probability;
  Rational oracle_probability;
  bool agree = false;
};

struct ComparisonReport {
  Sector sector;
  std::vector<ComparisonRow> rows;
  bool frozen = false;
  bool balanced = false;
  std::optional<std::string> first_mismatch;

  bool pass() const { return balanced && !first_mismatch; }
  nlohmann::json to_json() const;
};

/// Probability of every configuration in the sector by the tensor trace, the
/// ancestor recursion, multiline counting (when within bound) and the
/// master-equation oracle.
ComparisonReport compare_all(const Sector& sector, const CompareOptions& options = {});

}  // namespace mtasep
