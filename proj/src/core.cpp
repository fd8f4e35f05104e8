#include "mtasep/core.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <set>

#include "mtasep/error.hpp"

namespace mtasep {

Configuration::Configuration(std::vector<ClassLabel> sites)
    : sites_(std::move(sites)) {
  for (ClassLabel c : sites_) {
    if (c < 0) throw InputError("negative class label");
    species_ = std::max(species_, c);
  }
}

Configuration::Configuration(std::vector<ClassLabel> sites, int species)
    : sites_(std::move(sites)), species_(species) {
  if (species_ < 0) throw InputError("negative species count");
  for (ClassLabel c : sites_) {
    if (c < 0 || c > species_)
      throw InputError("class label " + std::to_string(c) + " outside 0.." +
                       std::to_string(species_));
  }
}

std::vector<int> Counts::cumulative() const {
  std::vector<int> m(populations.size());
  std::partial_sum(populations.begin(), populations.end(), m.begin());
  return m;
}

int Counts::total() const {
  return std::accumulate(populations.begin(), populations.end(), 0);
}

int Sector::holes() const {
  return length - std::accumulate(populations.begin(), populations.end(), 0);
}

std::vector<int> Sector::cumulative() const {
  return Counts{populations}.cumulative();
}

void Sector::validate() const {
  if (length < 1) throw InputError("ring length must be at least 1");
  for (int p : populations)
    if (p < 0) throw InputError("negative population");
  if (holes() < 0) throw InputError("populations exceed the ring length");
}

BigInt Sector::size() const {
  validate();
  // Product of binomials C(remaining, P_K) is the multinomial.
  BigInt out = 1;
  unsigned long remaining = static_cast<unsigned long>(length);
  for (int p : populations) {
    out *= binomial(remaining, static_cast<unsigned long>(p));
    remaining -= static_cast<unsigned long>(p);
  }
  return out;
}

std::vector<Configuration> Sector::configurations(std::uint64_t max_states) const {
  if (size() > BigInt(std::to_string(max_states)))
    throw BoundExceeded("sector has " + size().get_str() + " states, bound is " +
                        std::to_string(max_states));
  std::vector<ClassLabel> sites;
  sites.reserve(static_cast<std::size_t>(length));
  sites.insert(sites.end(), static_cast<std::size_t>(holes()), 0);
  for (int k = 0; k < species(); ++k)
    sites.insert(sites.end(), static_cast<std::size_t>(populations[k]), k + 1);

  std::vector<Configuration> out;
  do {
    out.emplace_back(sites, species());
  } while (std::next_permutation(sites.begin(), sites.end()));
  return out;
}

bool Sector::all_classes_present() const {
  return std::all_of(populations.begin(), populations.end(), [](int p) { return p > 0; });
}

namespace {

int parse_nonnegative(std::string_view token) {
  while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
  while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
  if (token.empty()) throw InputError("empty token");
  int value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size() || value < 0)
    throw InputError("malformed token '" + std::string(token) + "'");
  return value;
}

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

}  // namespace

std::vector<int> parse_int_list(std::string_view text) {
  text = trim(text);
  if (text.empty()) throw InputError("empty list");
  std::vector<int> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    out.push_back(parse_nonnegative(text.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

Configuration parse_config(std::string_view text, std::optional<int> species) {
  text = trim(text);
  if (text.empty()) throw InputError("empty configuration");

  std::vector<ClassLabel> sites;
  if (text.find(',') != std::string_view::npos) {
    sites = parse_int_list(text);
  } else {
    for (char ch : text) {
      if (ch < '0' || ch > '9')
        throw InputError(std::string("malformed configuration character '") + ch + "'");
      sites.push_back(ch - '0');
    }
  }
  if (species) return Configuration(std::move(sites), *species);
  return Configuration(std::move(sites));
}

std::string render(const Configuration& config) {
  std::string out;
  if (config.species() <= 9) {
    for (ClassLabel c : config.sites()) out.push_back(static_cast<char>('0' + c));
    return out;
  }
  for (std::size_t i = 0; i < config.sites().size(); ++i) {
    if (i) out.push_back(',');
    out += std::to_string(config.sites()[i]);
  }
  return out;
}

nlohmann::json to_json(const Configuration& config) {
  return {{"L", config.length()}, {"N", config.species()}, {"sites", config.sites()}};
}

Counts particle_counts(const Configuration& config) {
  Counts counts;
  counts.populations.assign(static_cast<std::size_t>(config.species()), 0);
  for (ClassLabel c : config.sites())
    if (c > 0) ++counts.populations[static_cast<std::size_t>(c - 1)];
  return counts;
}

Sector sector_of(const Configuration& config) {
  return Sector{config.length(), particle_counts(config).populations};
}

Configuration rotate(const Configuration& config, long k) {
  const long n = config.length();
  if (n == 0) return config;
  const long shift = ((k % n) + n) % n;
  std::vector<ClassLabel> sites(config.sites());
  std::rotate(sites.begin(), sites.begin() + shift, sites.end());
  return Configuration(std::move(sites), config.species());
}

Configuration canonical_rotation(const Configuration& config) {
  Configuration best = config;
  for (int k = 1; k < config.length(); ++k) {
    Configuration candidate = rotate(config, k);
    if (candidate < best) best = std::move(candidate);
  }
  return best;
}

SpeciesReduction reduce_species(const Configuration& config) {
  std::set<ClassLabel> present;
  for (ClassLabel c : config.sites())
    if (c > 0) present.insert(c);

  SpeciesReduction out;
  ClassLabel next = 1;
  for (ClassLabel c : present) out.relabel[c] = next++;

  std::vector<ClassLabel> sites;
  sites.reserve(config.sites().size());
  for (ClassLabel c : config.sites()) sites.push_back(c == 0 ? 0 : out.relabel.at(c));
  out.config = Configuration(std::move(sites), static_cast<int>(present.size()));
  return out;
}

namespace {

void compositions(int remaining, int slots, std::vector<int>& prefix,
                  std::vector<std::vector<int>>& out) {
  if (slots == 0) {
    if (remaining == 0) out.push_back(prefix);
    return;
  }
  for (int p = 1; p <= remaining - (slots - 1); ++p) {
    prefix.push_back(p);
    compositions(remaining - p, slots - 1, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

std::vector<Sector> sectors_with_all_classes(int length, int species) {
  std::vector<Sector> out;
  if (species == 0) {
    out.push_back(Sector{length, {}});
    return out;
  }
  for (int particles = species; particles <= length; ++particles) {
    std::vector<std::vector<int>> pops;
    std::vector<int> prefix;
    compositions(particles, species, prefix, pops);
    for (auto& p : pops) out.push_back(Sector{length, std::move(p)});
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace mtasep
