#include "mtasep/multiline.hpp"

#include <algorithm>
#include <future>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

#include "mtasep/error.hpp"

namespace mtasep {

void MultilineConfig::validate() const {
  int previous = 0;
  for (const Row& row : rows) {
    if (static_cast<int>(row.size()) != length())
      throw InputError("multiline rows have different lengths");
    int count = 0;
    for (auto b : row) {
      if (b > 1) throw InputError("multiline row entries must be 0 or 1");
      count += b;
    }
    if (count < previous) throw InputError("multiline popcounts must be non-decreasing");
    previous = count;
  }
}

MultilineConfig parse_multiline(const std::string& text) {
  MultilineConfig ml;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    Row row;
    for (char ch : line) {
      if (ch != '0' && ch != '1') throw InputError("multiline rows must contain only 0/1");
      row.push_back(static_cast<std::uint8_t>(ch - '0'));
    }
    ml.rows.push_back(std::move(row));
  }
  if (ml.rows.empty()) throw InputError("empty multiline configuration");
  ml.validate();
  return ml;
}

std::string render(const MultilineConfig& ml) {
  std::string out;
  for (const Row& row : ml.rows) {
    for (auto b : row) out.push_back(static_cast<char>('0' + b));
    out.push_back('\n');
  }
  return out;
}

nlohmann::json to_json(const MultilineConfig& ml) {
  nlohmann::json rows = nlohmann::json::array();
  for (const Row& row : ml.rows) {
    std::string s;
    for (auto b : row) s.push_back(static_cast<char>('0' + b));
    rows.push_back(s);
  }
  return {{"L", ml.length()}, {"N", ml.lines()}, {"rows", rows}};
}

namespace {

Row uniform_row(int length, int particles, std::mt19937_64& rng) {
  std::vector<int> sites(static_cast<std::size_t>(length));
  std::iota(sites.begin(), sites.end(), 0);
  std::vector<int> chosen;
  chosen.reserve(static_cast<std::size_t>(particles));
  std::sample(sites.begin(), sites.end(), std::back_inserter(chosen), particles, rng);
  Row row(static_cast<std::size_t>(length), 0);
  for (int s : chosen) row[static_cast<std::size_t>(s)] = 1;
  return row;
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

MultilineConfig sample_with(const Sector& sector, const std::vector<int>& m,
                            std::mt19937_64& rng) {
  MultilineConfig ml;
  ml.rows.reserve(m.size());
  for (int mk : m) ml.rows.push_back(uniform_row(sector.length, mk, rng));
  return ml;
}

}  // namespace

MultilineConfig sample_multiline(const Sector& sector, std::uint64_t seed) {
  sector.validate();
  std::mt19937_64 rng(seed);
  return sample_with(sector, sector.cumulative(), rng);
}

LabeledLine associate_line(const LabeledLine& upper, const Row& lower_row) {
  const int length = static_cast<int>(lower_row.size());
  if (static_cast<int>(upper.labels.size()) != length)
    throw InputError("associate_line: rows have different lengths");

  int upper_particles = 0;
  for (ClassLabel c : upper.labels) upper_particles += (c > 0);
  const int lower_particles =
      static_cast<int>(std::count(lower_row.begin(), lower_row.end(), std::uint8_t{1}));
  if (lower_particles < upper_particles)
    throw InputError("associate_line: lower row has fewer particles than the upper row");

  LabeledLine lower;
  lower.level = upper.level + 1;
  lower.labels.assign(static_cast<std::size_t>(length), 0);
  std::vector<bool> bound(static_cast<std::size_t>(length), false);

  for (ClassLabel cls = 1; cls <= upper.level; ++cls) {
    for (int i = length - 1; i >= 0; --i) {
      if (upper.labels[static_cast<std::size_t>(i)] != cls) continue;
      // Nearest unbound lower particle at i or to its left, cyclically.
      for (int step = 0; step < length; ++step) {
        const int j = ((i - step) % length + length) % length;
        const auto uj = static_cast<std::size_t>(j);
        if (lower_row[uj] && !bound[uj]) {
          bound[uj] = true;
          lower.labels[uj] = cls;
          break;
        }
      }
    }
  }
  for (int j = 0; j < length; ++j) {
    const auto uj = static_cast<std::size_t>(j);
    if (lower_row[uj] && !bound[uj]) lower.labels[uj] = lower.level;
  }
  return lower;
}

namespace {

LabeledLine first_line(const Row& row) {
  LabeledLine line;
  line.level = 1;
  line.labels.reserve(row.size());
  for (auto b : row) line.labels.push_back(b ? 1 : 0);
  return line;
}

}  // namespace

Configuration label_multiline(const MultilineConfig& ml) {
  ml.validate();
  if (ml.rows.empty()) throw InputError("label_multiline: no rows");
  LabeledLine line = first_line(ml.rows.front());
  for (std::size_t k = 1; k < ml.rows.size(); ++k) line = associate_line(line, ml.rows[k]);
  return Configuration(std::move(line.labels), ml.lines());
}

namespace {

// Calls visit(row) for every 0/1 row of the given length with `particles` ones.
template <typename Visit>
void for_each_row(int length, int particles, Visit&& visit) {
  Row row(static_cast<std::size_t>(length), 0);
  std::fill(row.end() - particles, row.end(), std::uint8_t{1});
  do {
    visit(row);
  } while (std::next_permutation(row.begin(), row.end()));
}

struct AncestorCounter {
  const Configuration& target;
  const std::vector<int>& m;
  Row bottom;
  BigInt count = 0;

  void descend(const LabeledLine& line) {
    const int next = line.level;  // index of the next row to choose
    if (next == static_cast<int>(m.size()) - 1) {
      if (associate_line(line, bottom).labels == target.sites()) ++count;
      return;
    }
    for_each_row(target.length(), m[static_cast<std::size_t>(next)],
                 [&](const Row& row) { descend(associate_line(line, row)); });
  }
};

}  // namespace

BigInt count_ancestors(const Configuration& config, std::uint64_t bound) {
  const int n = config.species();
  if (n <= 1) return 1;
  const auto m = particle_counts(config).cumulative();

  BigInt space = 1;
  for (int k = 0; k + 1 < n; ++k)
    space *= binomial(static_cast<unsigned long>(config.length()),
                      static_cast<unsigned long>(m[static_cast<std::size_t>(k)]));
  if (space > BigInt(std::to_string(bound)))
    throw BoundExceeded("multiline enumeration of " + space.get_str() +
                        " row choices exceeds bound " + std::to_string(bound));

  AncestorCounter counter{config, m, {}, 0};
  counter.bottom.reserve(config.sites().size());
  for (ClassLabel c : config.sites()) counter.bottom.push_back(c > 0 ? 1 : 0);
  for_each_row(config.length(), m[0],
               [&](const Row& row) { counter.descend(first_line(row)); });
  return counter.count;
}

double EmpiricalDistribution::frequency(const Configuration& c) const {
  auto it = counts.find(c);
  if (it == counts.end() || samples == 0) return 0.0;
  return static_cast<double>(it->second) / static_cast<double>(samples);
}

EmpiricalDistribution empirical_distribution(const Sector& sector, std::uint64_t samples,
                                             std::uint64_t seed, unsigned threads) {
  if (samples == 0) throw InputError("samples must be at least 1");
  sector.validate();
  EmpiricalDistribution out;
  out.samples = samples;
  if (sector.species() == 0) {
    out.counts[Configuration(std::vector<ClassLabel>(static_cast<std::size_t>(sector.length), 0), 0)] =
        samples;
    return out;
  }
  constexpr std::uint64_t kChunk = 1 << 16;
  const std::uint64_t chunks = (samples + kChunk - 1) / kChunk;

  std::vector<std::uint64_t> chunk_seeds(chunks);
  std::uint64_t state = seed;
  for (auto& s : chunk_seeds) s = splitmix64(state);

  const auto m = sector.cumulative();
  auto run_chunk = [&](std::uint64_t c) {
    std::map<Configuration, std::uint64_t> local;
    std::mt19937_64 rng(chunk_seeds[c]);
    const std::uint64_t begin = c * kChunk;
    const std::uint64_t end = std::min(samples, begin + kChunk);
    for (std::uint64_t s = begin; s < end; ++s)
      ++local[label_multiline(sample_with(sector, m, rng))];
    return local;
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  for (std::uint64_t base = 0; base < chunks; base += threads) {
    std::vector<std::future<std::map<Configuration, std::uint64_t>>> jobs;
    for (std::uint64_t c = base; c < std::min(chunks, base + threads); ++c)
      jobs.push_back(std::async(threads > 1 ? std::launch::async : std::launch::deferred,
                                run_chunk, c));
    for (auto& job : jobs)
      for (auto& [config, n] : job.get()) out.counts[config] += n;
  }
  return out;
}

}  // namespace mtasep
