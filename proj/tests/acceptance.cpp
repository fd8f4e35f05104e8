// One line per acceptance criterion; exit status is nonzero if any fails.
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "mtasep/algebra.hpp"
#include "mtasep/core.hpp"
#include "mtasep/multiline.hpp"
#include "mtasep/oracle.hpp"
#include "mtasep/pushing.hpp"
#include "mtasep/tensor.hpp"

using namespace mtasep;

namespace {

int failures = 0;

void criterion(const std::string& name, const std::function<bool(std::ostream&)>& body) {
  std::ostringstream why;
  const auto start = std::chrono::steady_clock::now();
  bool ok = false;
  try {
    ok = body(why);
  } catch (const std::exception& e) {
    why << "exception: " << e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cout << (ok ? "[PASS] " : "[FAIL] ") << name << " (" << std::fixed
            << std::setprecision(2) << secs << " s)";
  if (!why.str().empty()) std::cout << "  " << why.str();
  std::cout << std::endl;
  if (!ok) ++failures;
}

template <typename T>
bool expect(std::ostream& why, const std::string& what, const T& got, const T& want) {
  if (got == want) return true;
  why << what << ": got " << got << ", want " << want << "; ";
  return false;
}

std::string names(const AncestorSet& set) {
  std::string out;
  for (const auto& c : set) out += (out.empty() ? "" : ",") + render(c);
  return out;
}

bool golden(std::ostream& why) {
  bool ok = true;
  ok &= expect(why, "omega(10)", omega_reduce("10"), BigInt(2));
  ok &= expect(why, "omega(110)", omega_reduce("110"), BigInt(3));
  ok &= expect(why, "omega(1010)", omega_reduce("1010"), BigInt(5));
  for (const auto& [text, w, p] : {std::tuple{"0210", 3, make_rational(3, 24)},
                                   std::tuple{"0211021", 6, make_rational(6, 735)},
                                   std::tuple{"2103", 9, make_rational(9, 96)}}) {
    const auto c = parse_config(text);
    ok &= expect(why, std::string("trace W(") + text + ")", trace_weight(c), BigInt(w));
    ok &= expect(why, std::string("pushing W(") + text + ")", weight_recursive(c), BigInt(w));
    ok &= expect(why, std::string("multiline W(") + text + ")", count_ancestors(c), BigInt(w));
    ok &= expect(why, std::string("P(") + text + ")", probability(c), p);
  }
  const auto stages = ancestor_stages(parse_config("2103"));
  ok &= expect(why, "ancestors(2103)", names(stages.back()), std::string("0120,0210,2010,2100"));
  ok &= expect(why, "stage 1 of 2103", names(stages.front()), std::string("2013,2103"));
  ok &= expect(why, "Z(4,(1,1))", normalization(Sector{4, {1, 1}}), BigInt(24));
  ok &= expect(why, "Z(7,(3,2))", normalization(Sector{7, {3, 2}}), BigInt(735));
  return ok;
}

bool four_way(std::ostream& why) {
  std::size_t configs = 0;
  for (int n = 1; n <= 3; ++n)
    for (int length = n; length <= 6; ++length)
      for (const auto& sector : sectors_with_all_classes(length, n)) {
        const auto rep = compare_all(sector);
        configs += rep.rows.size();
        for (const auto& row : rep.rows)
          if (!row.multiline_weight) {
            why << "multiline skipped for " << render(row.config);
            return false;
          }
        if (!rep.pass()) {
          why << rep.first_mismatch.value_or("unbalanced oracle");
          return false;
        }
      }
  why << configs << " configurations";
  return true;
}

bool four_species(std::ostream& why) {
  std::size_t configs = 0;
  for (int length : {4, 5})
    for (const auto& sector : sectors_with_all_classes(length, 4)) {
      const auto gen = build_generator(sector);
      const auto p = stationary(gen);
      for (std::size_t i = 0; i < p.states.size(); ++i, ++configs)
        if (probability(p.states[i]) != p.probabilities[i]) {
          why << render(p.states[i]) << ": tensor " << probability(p.states[i]) << ", oracle "
              << p.probabilities[i];
          return false;
        }
    }
  why << "conjecture check, " << configs << " configurations";
  return true;
}

bool identities(std::ostream& why) {
  for (int d = 3; d <= 10; ++d)
    if (!check_quadratic(d).pass()) {
      why << "quadratic algebra fails at d=" << d;
      return false;
    }
  for (int n : {2, 3})
    for (int d : {4, 6, 8}) {
      const auto rep = check_hat_relations(n, d);
      if (!rep.pass()) {
        why << "hats: " << rep.to_json().dump();
        return false;
      }
    }
  StationarityChecker checker;
  std::size_t configs = 0;
  for (int n = 1; n <= 4; ++n)
    for (int length = n; length <= 6; ++length)
      for (const auto& sector : sectors_with_all_classes(length, n))
        for (const auto& c : sector.configurations()) {
          ++configs;
          const BigInt r = checker.residual(c);
          if (r != 0) {
            why << "residual " << r << " at " << render(c);
            return false;
          }
        }
  why << "stationarity on " << configs << " configurations";
  return true;
}

CounterState ket(int l, int m, int n) { return {{{l, m, n}, BigInt(1)}}; }

void put(CounterState& s, int l, int m, int n) {
  if (l >= 0 && m >= 0 && n >= 0) s[{l, m, n}] += 1;
}

bool queue_actions(std::ostream& why) {
  const auto& x = ansatz(3);
  for (int l = 0; l <= 4; ++l)
    for (int m = 0; m <= 4; ++m)
      for (int n = 0; n <= 4; ++n) {
        CounterState want[4];
        put(want[0], l + 1, m, n);
        put(want[0], l + 1, m, n - 1);
        if (n == 0) put(want[0], l, m + 1, 0);
        put(want[0], l, m, n);
        put(want[0], l, m, n + 1);
        put(want[1], l, m, n);
        put(want[1], l, m, n - 1);
        if (n == 0) put(want[1], l - 1, m + 1, 0);
        put(want[1], l - 1, m, n);
        put(want[1], l - 1, m, n + 1);
        if (l == 0) {
          if (n == 0) put(want[2], 0, m, 0);
          put(want[2], 0, m - 1, n);
          put(want[2], 0, m - 1, n + 1);
        }
        if (l == 0 && m == 0) {
          put(want[3], 0, 0, n);
          put(want[3], 0, 0, n + 1);
        }
        for (int tau = 0; tau < 4; ++tau)
          if (apply(x[tau], ket(l, m, n), 8) != want[tau]) {
            why << "X_" << tau << " on |" << l << "," << m << "," << n << ">";
            return false;
          }
      }
  return true;
}

bool monte_carlo(std::ostream& why) {
  const auto start = std::chrono::steady_clock::now();
  const std::uint64_t samples = 1'000'000;
  for (const Sector& s : {Sector{4, {1, 1}}, Sector{4, {1, 1, 1}}}) {
    const auto dist = empirical_distribution(s, samples, 20240601);
    for (const auto& c : s.configurations()) {
      const double p = probability(c).get_d();
      const auto it = dist.counts.find(c);
      const double k = it == dist.counts.end() ? 0.0 : static_cast<double>(it->second);
      const double sigma = std::sqrt(samples * p * (1 - p));
      if (std::abs(k - samples * p) > 4 * sigma) {
        why << render(c) << " count " << k << " vs " << samples * p << " +- " << sigma;
        return false;
      }
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (secs >= 60) why << "took " << secs << " s";
  return secs < 60;
}

bool properties(std::ostream& why) {
  for (int n = 2; n <= 3; ++n)
    for (int length = n; length <= 6; ++length)
      for (const auto& sector : sectors_with_all_classes(length, n)) {
        Rational total = 0;
        for (const auto& c : sector.configurations()) {
          const BigInt w = trace_weight(c, length + 1);
          if (trace_weight(c, length + 2) != w || trace_weight(c, length + 3) != w) {
            why << "truncation dependence at " << render(c);
            return false;
          }
          for (long k = 1; k < length; ++k)
            if (trace_weight(rotate(c, k)) != w) {
              why << "not cyclic at " << render(c);
              return false;
            }
          total += probability(c);
        }
        if (total != 1) {
          why << "sum P = " << total << " for L=" << sector.length;
          return false;
        }
      }
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 2000; ++trial) {
    const int len = 2 + static_cast<int>(rng() % 9);
    std::string b;
    for (int i = 0; i < len; ++i) b += (rng() & 1) ? '1' : '0';
    const auto pos = b.find("10");
    if (pos == std::string::npos) continue;
    const std::string head = b.substr(0, pos), tail = b.substr(pos + 2);
    if (omega_push(b) != omega_push(head + "1" + tail) + omega_push(head + "0" + tail)) {
      why << "omega relation fails on " << b;
      return false;
    }
  }
  return true;
}

}  // namespace

int main() {
  criterion("1 golden values", golden);
  criterion("2 four-way equality, L<=6, N<=3", four_way);
  criterion("3 tensor = oracle for N=4, L in {4,5}", four_species);
  criterion("4 quadratic algebra, hat relations, stationarity", identities);
  criterion("5 level-3 operator actions on |l,m,n>, l,m,n<=4", queue_actions);
  criterion("6 Monte Carlo within 4 sigma", monte_carlo);
  criterion("7 truncation, cyclicity, omega relation, normalization", properties);
  std::cout << (failures == 0 ? "all criteria pass" : std::to_string(failures) + " failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
