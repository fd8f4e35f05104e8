#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "mtasep/bigint.hpp"
#include "mtasep/core.hpp"

namespace mtasep {

/// One occupancy row: 1 = particle, 0 = empty.
using Row = std::vector<std::uint8_t>;

/// N stacked rows over the same ring; row k holds m_k particles.
struct MultilineConfig {
  std::vector<Row> rows;

  int lines() const { return static_cast<int>(rows.size()); }
  int length() const { return rows.empty() ? 0 : static_cast<int>(rows.front().size()); }
  /// Throws InputError if rows differ in length or popcounts decrease.
  void validate() const;
};

/// Class labels carried by the particles of row `level`; labels lie in 0..level.
struct LabeledLine {
  std::vector<ClassLabel> labels;
  int level = 0;
};

MultilineConfig parse_multiline(const std::string& text);
std::string render(const MultilineConfig& ml);
nlohmann::json to_json(const MultilineConfig& ml);

/// Each row k an independent uniform m_k-subset of the ring.
MultilineConfig sample_multiline(const Sector& sector, std::uint64_t seed);

/// Labels `lower_row` from the labels of the row above it.
///
/// Classes are processed in increasing order. Within a class the upper
/// particles are visited right to left, starting from the rightmost site, and
/// each binds the nearest unbound lower particle at its own site or to its
/// left, wrapping around the ring. Bound lower particles inherit the class;
/// unbound ones receive level + 1.
LabeledLine associate_line(const LabeledLine& upper, const Row& lower_row);

/// Folds associate_line from line 1 down to line N.
Configuration label_multiline(const MultilineConfig& ml);

/// Default cap on prod_{k<N} C(L, m_k) for brute-force ancestor counting.
inline constexpr std::uint64_t kDefaultEnumerationBound = 50'000'000;

/// Number of multiline configurations whose bottom row equals the particle
/// positions of `config` and which label to exactly `config`.
BigInt count_ancestors(const Configuration& config,
                       std::uint64_t bound = kDefaultEnumerationBound);

struct EmpiricalDistribution {
  std::uint64_t samples = 0;
  std::map<Configuration, std::uint64_t> counts;

  double frequency(const Configuration& c) const;
};

/// Samples are drawn in fixed-size chunks, each seeded from `seed` by
/// splitmix64, so the result does not depend on how many threads run.
EmpiricalDistribution empirical_distribution(const Sector& sector, std::uint64_t samples,
                                             std::uint64_t seed, unsigned threads = 0);

}  // namespace mtasep
