#include "mtasep/pushing.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "mtasep/error.hpp"

namespace mtasep {

namespace {

void check_binary(std::string_view b) {
  for (char ch : b)
    if (ch != '0' && ch != '1') throw InputError("binary string must contain only 0/1");
}

BigInt omega_reduce_memo(const std::string& b, std::unordered_map<std::string, BigInt>& memo) {
  const auto pos = b.find("10");
  if (pos == std::string::npos) return 1;
  if (auto it = memo.find(b); it != memo.end()) return it->second;

  std::string keep_one = b;
  keep_one.erase(pos + 1, 1);
  std::string keep_zero = b;
  keep_zero.erase(pos, 1);
  BigInt w = omega_reduce_memo(keep_one, memo) + omega_reduce_memo(keep_zero, memo);
  memo.emplace(b, w);
  return w;
}

}  // namespace

BigInt omega_push(std::string_view b) {
  check_binary(b);
  std::unordered_set<std::string> seen{std::string(b)};
  std::deque<std::string> frontier{std::string(b)};
  while (!frontier.empty()) {
    std::string s = std::move(frontier.front());
    frontier.pop_front();
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
      if (s[i] != '1' || s[i + 1] != '0') continue;
      std::string t = s;
      std::swap(t[i], t[i + 1]);
      if (seen.insert(t).second) frontier.push_back(std::move(t));
    }
  }
  return BigInt(static_cast<unsigned long>(seen.size()));
}

BigInt omega_reduce(std::string_view b) {
  check_binary(b);
  std::unordered_map<std::string, BigInt> memo;
  return omega_reduce_memo(std::string(b), memo);
}

BigInt two_species_weight(const Configuration& config) {
  if (config.species() != 2)
    throw InputError("two_species_weight needs a configuration with N = 2");
  const auto& sites = config.sites();
  const auto first_two = std::find(sites.begin(), sites.end(), 2);
  if (first_two == sites.end())
    throw InputError("two_species_weight needs at least one class-2 particle");

  // Cut the ring just after a 2 so that the sequence ends with a 2.
  const auto start = static_cast<long>(first_two - sites.begin()) + 1;
  const Configuration cut = rotate(config, start);

  BigInt w = 1;
  std::string segment;
  for (ClassLabel c : cut.sites()) {
    if (c == 2) {
      w *= omega_reduce(segment);
      segment.clear();
    } else {
      segment.push_back(c == 1 ? '1' : '0');
    }
  }
  return w;
}

namespace {

// All configurations reachable by moving class-`cls` particles rightward into
// holes, hopping over lower classes and blocked by classes >= cls.
std::vector<Configuration> push_closure(const Configuration& start, ClassLabel cls) {
  const int length = start.length();
  std::set<Configuration> seen{start};
  std::deque<Configuration> frontier{start};
  while (!frontier.empty()) {
    Configuration c = std::move(frontier.front());
    frontier.pop_front();
    for (int i = 0; i < length; ++i) {
      if (c[i] != cls) continue;
      int j = (i + 1) % length;
      while (j != i && c[j] > 0 && c[j] < cls) j = (j + 1) % length;
      if (j == i || c[j] != 0) continue;
      std::vector<ClassLabel> sites = c.sites();
      std::swap(sites[static_cast<std::size_t>(i)], sites[static_cast<std::size_t>(j)]);
      Configuration next(std::move(sites), c.species());
      if (seen.insert(next).second) frontier.push_back(std::move(next));
    }
  }
  return {seen.begin(), seen.end()};
}

void require_distinct(AncestorSet& set, const char* stage) {
  std::sort(set.begin(), set.end());
  if (std::adjacent_find(set.begin(), set.end()) != set.end())
    throw InternalConsistencyError(std::string("duplicate configuration produced by ") + stage);
}

}  // namespace

std::vector<AncestorSet> ancestor_stages(const Configuration& config) {
  const int n = config.species();
  if (n < 2) throw InputError("ancestors need N >= 2");
  if (std::find(config.sites().begin(), config.sites().end(), n) == config.sites().end())
    throw InputError("ancestors need at least one class-N particle; reduce species first");

  std::vector<AncestorSet> stages;
  AncestorSet current{config};
  for (ClassLabel k = 1; k < n; ++k) {
    AncestorSet next;
    for (const Configuration& c : current) {
      auto reached = push_closure(c, k);
      next.insert(next.end(), reached.begin(), reached.end());
    }
    require_distinct(next, "a pushing stage");
    stages.push_back(next);
    current = std::move(next);
  }

  AncestorSet final_set;
  final_set.reserve(current.size());
  for (const Configuration& c : current) {
    std::vector<ClassLabel> sites = c.sites();
    for (auto& s : sites)
      if (s == n) s = 0;
    final_set.emplace_back(std::move(sites), n - 1);
  }
  require_distinct(final_set, "the final relabeling");
  stages.push_back(std::move(final_set));
  return stages;
}

AncestorSet ancestors(const Configuration& config) {
  return std::move(ancestor_stages(config).back());
}

BigInt AncestorWeigher::weight(const Configuration& config) {
  return weight_reduced(reduce_species(config).config);
}

BigInt AncestorWeigher::weight_reduced(const Configuration& config) {
  if (config.species() <= 1) return 1;
  const Configuration key = canonical_rotation(config);
  {
    std::lock_guard lock(mutex_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  BigInt total = 0;
  // Ancestors of a species-reduced configuration are species-reduced too.
  for (const Configuration& a : ancestors(key)) total += weight_reduced(a);
  std::lock_guard lock(mutex_);
  cache_.emplace(key, total);
  return total;
}

BigInt weight_recursive(const Configuration& config) {
  AncestorWeigher weigher;
  return weigher.weight(config);
}

}  // namespace mtasep
