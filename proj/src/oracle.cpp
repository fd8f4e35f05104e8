#include "mtasep/oracle.hpp"

#include <algorithm>

#include "mtasep/algebra.hpp"
#include "mtasep/error.hpp"
#include "mtasep/pushing.hpp"
#include "mtasep/tensor.hpp"

namespace mtasep {

SectorGenerator build_generator(const Sector& sector, std::uint64_t max_states) {
  SectorGenerator gen;
  gen.sector = sector;
  gen.states = sector.configurations(max_states);
  for (int i = 0; i < gen.size(); ++i) gen.index.emplace(gen.states[static_cast<std::size_t>(i)], i);
  gen.columns.resize(gen.states.size());

  const int length = sector.length;
  for (int j = 0; j < gen.size(); ++j) {
    const Configuration& c = gen.states[static_cast<std::size_t>(j)];
    std::map<int, long> column;
    // A ring of one site has no bond between distinct sites.
    for (int i = 0; length > 1 && i < length; ++i) {
      const int next = (i + 1) % length;
      if (!exchange_allowed(c[i], c[next])) continue;
      std::vector<ClassLabel> sites = c.sites();
      std::swap(sites[static_cast<std::size_t>(i)], sites[static_cast<std::size_t>(next)]);
      const int target = gen.index.at(Configuration(std::move(sites), c.species()));
      column[target] += 1;
      column[j] -= 1;
    }
    for (auto [row, rate] : column)
      if (rate != 0) gen.columns[static_cast<std::size_t>(j)].emplace_back(row, rate);
  }
  return gen;
}

const Rational& StationaryVector::at(const Configuration& c) const {
  auto it = std::lower_bound(states.begin(), states.end(), c);
  if (it == states.end() || *it != c) throw InputError("configuration not in sector: " + render(c));
  return probabilities[static_cast<std::size_t>(it - states.begin())];
}

StationaryVector stationary(const SectorGenerator& gen) {
  const int n = gen.size();
  StationaryVector out;
  out.states = gen.states;
  if (n == 1) {
    out.frozen = true;
    out.probabilities = {Rational(1)};
    return out;
  }

  // Q with its last row replaced by sum(P) = 1, augmented with e_last.
  const auto un = static_cast<std::size_t>(n);
  std::vector<std::vector<BigInt>> m(un, std::vector<BigInt>(un + 1, 0));
  for (std::size_t j = 0; j < un; ++j)
    for (auto [row, rate] : gen.columns[j]) m[static_cast<std::size_t>(row)][j] = rate;
  for (std::size_t j = 0; j < un; ++j) m[un - 1][j] = 1;
  m[un - 1][un] = 1;

  // Bareiss forward elimination; every division below is exact.
  BigInt previous = 1;
  for (std::size_t k = 0; k < un; ++k) {
    std::size_t pivot = k;
    while (pivot < un && m[pivot][k] == 0) ++pivot;
    if (pivot == un)
      throw InternalConsistencyError("generator kernel is not one-dimensional for sector L=" +
                                     std::to_string(gen.sector.length));
    if (pivot != k) std::swap(m[pivot], m[k]);
    for (std::size_t i = k + 1; i < un; ++i) {
      for (std::size_t j = k + 1; j <= un; ++j) {
        m[i][j] = m[k][k] * m[i][j] - m[i][k] * m[k][j];
        mpz_divexact(m[i][j].get_mpz_t(), m[i][j].get_mpz_t(), previous.get_mpz_t());
      }
      m[i][k] = 0;
    }
    previous = m[k][k];
  }

  // Back substitution for x = det * solution, which is integral.
  const BigInt det = m[un - 1][un - 1];
  std::vector<BigInt> x(un);
  for (std::size_t i = un; i-- > 0;) {
    BigInt acc = det * m[i][un];
    for (std::size_t j = i + 1; j < un; ++j) acc -= m[i][j] * x[j];
    mpz_divexact(x[i].get_mpz_t(), acc.get_mpz_t(), m[i][i].get_mpz_t());
  }
  out.probabilities.reserve(un);
  for (const auto& xi : x) out.probabilities.push_back(make_rational(xi, det));
  return out;
}

bool is_balanced(const SectorGenerator& gen, const StationaryVector& p) {
  std::vector<Rational> flow(gen.states.size(), Rational(0));
  Rational total = 0;
  for (std::size_t j = 0; j < gen.columns.size(); ++j) {
    total += p.probabilities[j];
    for (auto [row, rate] : gen.columns[j])
      flow[static_cast<std::size_t>(row)] += Rational(rate) * p.probabilities[j];
  }
  return total == 1 &&
         std::all_of(flow.begin(), flow.end(), [](const Rational& f) { return f == 0; });
}

nlohmann::json ComparisonReport::to_json() const {
  nlohmann::json table = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json row{{"config", render(r.config)},
                       {"oracle", to_string(r.oracle_probability)},
                       {"tensor_weight", to_string(r.tensor_weight)},
                       {"pushing_weight", to_string(r.pushing_weight)},
                       {"agree", r.agree}};
    row["multiline_weight"] =
        r.multiline_weight ? nlohmann::json(to_string(*r.multiline_weight)) : nlohmann::json();
    table.push_back(std::move(row));
  }
  return {{"L", sector.length},
          {"P", sector.populations},
          {"states", rows.size()},
          {"frozen", frozen},
          {"balanced", balanced},
          {"rows", table},
          {"first_mismatch", first_mismatch ? nlohmann::json(*first_mismatch) : nlohmann::json()},
          {"pass", pass()}};
}

ComparisonReport compare_all(const Sector& sector, const CompareOptions& options) {
  ComparisonReport report;
  report.sector = sector;
  const SectorGenerator gen = build_generator(sector, options.max_states);
  const StationaryVector oracle = stationary(gen);
  report.frozen = oracle.frozen;
  report.balanced = is_balanced(gen, oracle);

  // The multiline count uses the declared sector; the other routes work on
  // the species-reduced configuration.
  const BigInt z_declared = normalization(sector);
  const bool degenerate = !sector.all_classes_present();
  AncestorWeigher weigher;

  for (std::size_t i = 0; i < gen.states.size(); ++i) {
    const Configuration& c = gen.states[i];
    const Configuration reduced = reduce_species(c).config;
    const BigInt z_reduced = normalization(sector_of(reduced));

    ComparisonRow row;
    row.config = c;
    row.tensor_weight = trace_weight(reduced);
    row.pushing_weight = weigher.weight(reduced);
    row.tensor_probability = make_rational(row.tensor_weight, z_reduced);
    row.pushing_probability = make_rational(row.pushing_weight, z_reduced);
    row.oracle_probability = oracle.probabilities[i];
    try {
      row.multiline_weight = count_ancestors(c, options.multiline_bound);
      row.multiline_probability = make_rational(*row.multiline_weight, z_declared);
    } catch (const BoundExceeded&) {
      row.multiline_weight.reset();
    }

    row.agree = row.tensor_weight == row.pushing_weight &&
                row.tensor_probability == row.oracle_probability &&
                row.pushing_probability == row.oracle_probability;
    if (row.multiline_weight) {
      row.agree = row.agree && *row.multiline_probability == row.oracle_probability;
      if (!degenerate) row.agree = row.agree && *row.multiline_weight == row.tensor_weight;
    }
    if (!row.agree && !report.first_mismatch) {
      report.first_mismatch = render(c) + ": tensor W=" + to_string(row.tensor_weight) +
                              ", pushing W=" + to_string(row.pushing_weight) + ", multiline W=" +
                              (row.multiline_weight ? to_string(*row.multiline_weight) : "n/a") +
                              ", oracle P=" + to_string(row.oracle_probability) +
                              ", tensor P=" + to_string(row.tensor_probability);
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace mtasep
