#include "mtasep/algebra.hpp"

#include <algorithm>
#include <cstdlib>
#include <unordered_map>

#include "mtasep/error.hpp"

namespace mtasep {

namespace {

void check_word(std::string_view w) {
  for (char ch : w)
    if (ch != 'D' && ch != 'E' && ch != 'A') throw InputError("word letters must be D, E or A");
}

BigInt reduce_memo(const std::string& w, std::unordered_map<std::string, BigInt>& memo) {
  if (auto it = memo.find(w); it != memo.end()) return it->second;
  BigInt value;
  if (auto p = w.find("DE"); p != std::string::npos) {
    value = reduce_memo(w.substr(0, p) + "D" + w.substr(p + 2), memo) +
            reduce_memo(w.substr(0, p) + "E" + w.substr(p + 2), memo);
  } else if (auto q = w.find("DA"); q != std::string::npos) {
    value = reduce_memo(w.substr(0, q) + w.substr(q + 1), memo);
  } else if (auto r = w.find("AE"); r != std::string::npos) {
    value = reduce_memo(w.substr(0, r + 1) + w.substr(r + 2), memo);
  } else if (auto s = w.find("AA"); s != std::string::npos) {
    value = reduce_memo(w.substr(0, s) + w.substr(s + 1), memo);
  } else {
    value = 1;  // E^a [A] D^b
  }
  memo.emplace(w, value);
  return value;
}

Symbol letter_symbol(char ch) {
  switch (ch) {
    case 'D': return Symbol::D;
    case 'E': return Symbol::E;
    default: return Symbol::A;
  }
}

std::int64_t max_abs(const IntMatrix& m, int limit) {
  std::int64_t out = 0;
  for (int i = 0; i < limit; ++i)
    for (int j = 0; j < limit; ++j) out = std::max(out, std::abs(m(i, j)));
  return out;
}

}  // namespace

BigInt reduce_word(std::string_view word) {
  check_word(word);
  std::unordered_map<std::string, BigInt> memo;
  return reduce_memo(std::string(word), memo);
}

BigInt evaluate_word(std::string_view word, int d) {
  check_word(word);
  IntMatrix product = IntMatrix::identity(d);
  for (char ch : word) product = product * build_fundamental(letter_symbol(ch), d);
  return BigInt(static_cast<long>(product(0, 0)));
}

nlohmann::json QuadraticReport::to_json() const {
  return {{"what", "quadratic"},
          {"d", d},
          {"delta_eps_minus_one", delta_eps_deviation},
          {"delta_A", delta_a_deviation},
          {"A_eps", a_eps_deviation},
          {"pass", pass()}};
}

QuadraticReport check_quadratic(int d) {
  if (d < 3) throw InputError("check_quadratic needs d >= 3");
  const IntMatrix eps = build_fundamental(Symbol::Eps, d);
  const IntMatrix delta = build_fundamental(Symbol::Delta, d);
  const IntMatrix a = build_fundamental(Symbol::A, d);

  QuadraticReport report;
  report.d = d;
  report.delta_eps_deviation = max_abs(delta * eps - IntMatrix::identity(d), d - 1);
  report.delta_a_deviation = max_abs(delta * a, d);
  report.a_eps_deviation = max_abs(a * eps, d);
  return report;
}

IntMatrix local_generator(int n) {
  if (n < 0) throw InputError("negative species count");
  const int q = n + 1;
  IntMatrix g(q * q, q * q);
  for (int a = 0; a <= n; ++a)
    for (int b = 0; b <= n; ++b) {
      if (!exchange_allowed(a, b)) continue;
      const int from = a * q + b;
      const int to = b * q + a;
      g(to, from) += 1;
      g(from, from) -= 1;
    }
  return g;
}

HatSet build_hats(int n) {
  using S = Symbol;
  HatSet set;
  set.species = n;
  if (n == 2) {
    set.hats = {TensorOperator::identity(1, -1), TensorOperator::identity(1, 1), TensorOperator(1)};
    return set;
  }
  if (n == 3) {
    const auto& x = ansatz(3);
    set.hats.resize(4);
    set.hats[1] = TensorOperator::identity(3) - TensorOperator::monomial({S::Delta, S::One, S::One});
    set.hats[2] = TensorOperator::monomial({S::A, S::Delta, S::One}, -1);
    set.hats[3] = TensorOperator::monomial({S::A, S::A, S::One}, -1);
    set.hats[0] = -x[0] + TensorOperator::monomial({S::Eps, S::One, S::One}) -
                  TensorOperator::identity(3);
    return set;
  }
  throw InputError("hat operators are only available for N = 2 and N = 3");
}

namespace {

// Signed sum of two-operator products; each applies right factor first.
struct ProductSum {
  struct Term {
    int sign;
    const TensorOperator* left;
    const TensorOperator* right;
  };
  std::vector<Term> terms;

  CounterState column(const Counters& v, int d) const {
    CounterState out;
    const CounterState basis{{v, BigInt(1)}};
    for (const auto& t : terms) {
      const CounterState image = apply(*t.left, apply(*t.right, basis, d), d);
      for (const auto& [c, coeff] : image) out[c] += t.sign * coeff;
    }
    std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
    return out;
  }
};

std::string describe(const Counters& v, const CounterState& lhs, const CounterState& rhs) {
  std::string s = "column |";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  s += ">: lhs has " + std::to_string(lhs.size()) + " terms, rhs has " +
       std::to_string(rhs.size()) + " terms";
  return s;
}

RelationCheck compare(const std::string& name, int k, int j, const ProductSum& lhs,
                      const ProductSum& rhs, int rank, int d) {
  RelationCheck check{name, k, j, true, {}};
  const int window = d - 2;
  Counters v(static_cast<std::size_t>(rank), 0);
  while (true) {
    const auto l = lhs.column(v, d);
    const auto r = rhs.column(v, d);
    if (l != r) {
      check.holds = false;
      check.detail = describe(v, l, r);
      return check;
    }
    std::size_t s = 0;
    for (; s < v.size(); ++s) {
      if (++v[s] < window) break;
      v[s] = 0;
    }
    if (s == v.size()) break;
  }
  return check;
}

}  // namespace

bool HatReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.holds; });
}

nlohmann::json HatReport::to_json() const {
  nlohmann::json failures = nlohmann::json::array();
  for (const auto& c : checks)
    if (!c.holds)
      failures.push_back({{"relation", c.relation}, {"K", c.k}, {"J", c.j}, {"detail", c.detail}});
  return {{"what", "hats"},
          {"N", species},
          {"d", d},
          {"relations_checked", checks.size()},
          {"failures", failures},
          {"pass", pass()}};
}

HatReport check_hat_relations(int n, int d) {
  if (d < 4) throw InputError("check_hat_relations needs d >= 4");
  const auto& x = ansatz(n);
  const HatSet hats = build_hats(n);
  const auto& h = hats.hats;
  const int rank = x[0].rank();

  HatReport report;
  report.species = n;
  report.d = d;
  for (int k = 1; k <= n; ++k)
    for (int j = 0; j <= n; ++j) {
      if (!exchange_allowed(k, j)) continue;
      const auto K = static_cast<std::size_t>(k);
      const auto J = static_cast<std::size_t>(j);
      const ProductSum xx{{{1, &x[K], &x[J]}}};
      const ProductSum rhs1{{{1, &h[K], &x[J]}, {-1, &x[K], &h[J]}}};
      const ProductSum rhs2{{{1, &x[J], &h[K]}, {-1, &h[J], &x[K]}}};
      report.checks.push_back(compare("hat1", k, j, xx, rhs1, rank, d));
      report.checks.push_back(compare("hat2", k, j, xx, rhs2, rank, d));
    }
  for (int j = 0; j <= n; ++j) {
    const auto J = static_cast<std::size_t>(j);
    const ProductSum zero{};
    const ProductSum commutator{{{1, &x[J], &h[J]}, {-1, &h[J], &x[J]}}};
    report.checks.push_back(compare("hat3", j, j, zero, commutator, rank, d));
  }
  return report;
}

namespace {

// Calls term(sign, labels) for every bond with a nonzero Y term, where labels
// is the class sequence of the product starting at that bond.
template <typename Term>
void for_each_bond_term(const Configuration& config, Term&& term) {
  const int length = config.length();
  std::vector<ClassLabel> labels(static_cast<std::size_t>(length));
  for (int i = 0; i < length; ++i) {
    const int next = (i + 1) % length;
    const ClassLabel a = config[i];
    const ClassLabel b = config[next];
    int sign = 0;
    if (exchange_allowed(a, b)) {  // Y_ab = -X_a X_b
      sign = -1;
      labels[0] = a;
      labels[1] = b;
    } else if (exchange_allowed(b, a)) {  // Y_ab = X_b X_a
      sign = 1;
      labels[0] = b;
      labels[1] = a;
    } else {
      continue;
    }
    for (int t = 2; t < length; ++t) labels[static_cast<std::size_t>(t)] = config[(i + t) % length];
    term(sign, labels);
  }
}

BigInt trace_of_labels(const std::vector<ClassLabel>& labels, int n, int d) {
  const auto& x = ansatz(n);
  std::vector<const TensorOperator*> ops;
  ops.reserve(labels.size());
  for (ClassLabel c : labels) ops.push_back(&x[static_cast<std::size_t>(c)]);
  return trace_product(ops, d);
}

}  // namespace

BigInt stationarity_residual(const Configuration& original, std::optional<int> d) {
  const Configuration config = reduce_species(original).config;
  if (config.species() <= 1 || config.length() < 2) return 0;
  const int trunc = d.value_or(config.length() + 1);
  BigInt residual = 0;
  for_each_bond_term(config, [&](int sign, const std::vector<ClassLabel>& labels) {
    residual += sign * trace_of_labels(labels, config.species(), trunc);
  });
  return residual;
}

BigInt StationarityChecker::residual(const Configuration& original) {
  const Configuration config = reduce_species(original).config;
  if (config.species() <= 1 || config.length() < 2) return 0;
  const int trunc = d_.value_or(config.length() + 1);
  BigInt residual = 0;
  for_each_bond_term(config, [&](int sign, const std::vector<ClassLabel>& labels) {
    const auto key = std::make_pair(
        canonical_rotation(Configuration(labels, config.species())).sites(), trunc);
    auto it = traces_.find(key);
    if (it == traces_.end())
      it = traces_.emplace(key, trace_of_labels(labels, config.species(), trunc)).first;
    residual += sign * it->second;
  });
  return residual;
}

}  // namespace mtasep
