#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mtasep/bigint.hpp"

namespace mtasep {

/// Class of a site: 0 is a hole, 1..N are particle classes (1 = highest priority).
using ClassLabel = int;

/// A ring configuration (tau_1, ..., tau_L) together with the declared number
/// of species N. Ordering is lexicographic on the sites, then on N.
class Configuration {
 public:
  Configuration() = default;
  /// Species defaults to the largest label present.
  explicit Configuration(std::vector<ClassLabel> sites);
  Configuration(std::vector<ClassLabel> sites, int species);

  const std::vector<ClassLabel>& sites() const { return sites_; }
  int length() const { return static_cast<int>(sites_.size()); }
  int species() const { return species_; }
  ClassLabel operator[](int i) const { return sites_[static_cast<std::size_t>(i)]; }

  auto operator<=>(const Configuration&) const = default;
  bool operator==(const Configuration&) const = default;

 private:
  std::vector<ClassLabel> sites_;
  int species_ = 0;
};

/// Per-class populations P_1..P_N.
struct Counts {
  std::vector<int> populations;

  /// m_k = P_1 + ... + P_k.
  std::vector<int> cumulative() const;
  int total() const;
  bool operator==(const Counts&) const = default;
};

/// All configurations of a ring of given length with fixed populations.
struct Sector {
  int length = 0;
  std::vector<int> populations;

  int species() const { return static_cast<int>(populations.size()); }
  int holes() const;
  std::vector<int> cumulative() const;
  /// Throws InputError unless 1 <= L and the populations fit.
  void validate() const;
  /// Multinomial L! / (P_1! ... P_N! (L - m_N)!).
  BigInt size() const;
  /// All members, sorted lexicographically; throws BoundExceeded above max_states.
  std::vector<Configuration> configurations(std::uint64_t max_states = 200000) const;
  /// True when every class 1..N has at least one particle.
  bool all_classes_present() const;

  auto operator<=>(const Sector&) const = default;
};

Configuration parse_config(std::string_view text, std::optional<int> species = std::nullopt);
std::string render(const Configuration& config);
nlohmann::json to_json(const Configuration& config);

/// Parses "1,1,2" into {1,1,2}.
std::vector<int> parse_int_list(std::string_view text);

Counts particle_counts(const Configuration& config);
Sector sector_of(const Configuration& config);

/// rotate(c, k)[i] = c[(i + k) mod L].
Configuration rotate(const Configuration& config, long k);
/// Lexicographically minimal rotation.
Configuration canonical_rotation(const Configuration& config);

struct SpeciesReduction {
  Configuration config;
  std::map<ClassLabel, ClassLabel> relabel;  // old class -> new class, present classes only
};

/// Compresses the classes actually present to 1..N' preserving order.
SpeciesReduction reduce_species(const Configuration& config);

/// Enumerates every sector of a ring of length L with exactly N species, all present.
std::vector<Sector> sectors_with_all_classes(int length, int species);

}  // namespace mtasep
