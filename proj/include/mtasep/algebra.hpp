#pragma once

#include <map>
#include <optional>
#include <utility>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mtasep/bigint.hpp"
#include "mtasep/core.hpp"
#include "mtasep/tensor.hpp"

namespace mtasep {

/// <0| w |0> for a word over {D, E, A}, by rewriting with DE = D + E,
/// DA = A, AE = A (and AA = A) down to E^a [A] D^b, whose element is 1.
BigInt reduce_word(std::string_view word);

/// <0| w |0> from the truncated d x d matrices.
BigInt evaluate_word(std::string_view word, int d);

struct QuadraticReport {
  int d = 0;
  /// Largest |entry| of delta*eps - 1 on indices < d-1.
  std::int64_t delta_eps_deviation = 0;
  /// Largest |entry| of delta*A and of A*eps over the whole truncation.
  std::int64_t delta_a_deviation = 0;
  std::int64_t a_eps_deviation = 0;

  bool pass() const {
    return delta_eps_deviation == 0 && delta_a_deviation == 0 && a_eps_deviation == 0;
  }
  nlohmann::json to_json() const;
};

QuadraticReport check_quadratic(int d);

/// True when "left right" on a bond exchanges at rate 1: left = K >= 1 and
/// right = 0 or right > K.
constexpr bool exchange_allowed(ClassLabel left, ClassLabel right) {
  return left >= 1 && (right == 0 || right > left);
}

/// (N+1)^2 x (N+1)^2 local rate matrix; pair (a, b) has index a*(N+1)+b.
/// Column = source pair, row = target pair.
IntMatrix local_generator(int n);

struct HatSet {
  int species = 0;
  std::vector<TensorOperator> hats;  // indexed by class
};

/// Hat operators for N = 2 (scalars +1, -1, 0 for classes 1, 0, 2) and N = 3.
HatSet build_hats(int n);

struct RelationCheck {
  std::string relation;  // "hat1", "hat2" or "hat3"
  int k = 0;
  int j = 0;
  bool holds = true;
  std::string detail;  // first offending column when !holds
};

struct HatReport {
  int species = 0;
  int d = 0;
  std::vector<RelationCheck> checks;

  bool pass() const;
  nlohmann::json to_json() const;
};

/// Checks every bond relation satisfied by the hats:
///   X_K X_J = Xh_K X_J - X_K Xh_J      (K >= 1, J > K or J = 0)
///   X_K X_J = X_J Xh_K - Xh_J X_K      (same pairs)
///   0       = X_J Xh_J - Xh_J X_J      (all J)
/// by comparing full columns of both sides for every basis vector whose
/// counters are all below d-2.
HatReport check_hat_relations(int n, int d);

/// Sum over bonds of Tr(X ... Y_{tau_i tau_{i+1}} ... X), with
/// Y_KJ = -X_K X_J for an allowed exchange and Y_JK = X_K X_J for its
/// reverse. Zero for every configuration when the measure is stationary.
/// Truncation defaults to L+1.
BigInt stationarity_residual(const Configuration& config, std::optional<int> d = std::nullopt);

/// Residuals over many configurations. Each bond term is a trace of a product
/// of ansatz operators, memoized by the cyclic class of its label sequence.
class StationarityChecker {
 public:
  explicit StationarityChecker(std::optional<int> d = std::nullopt) : d_(d) {}
  BigInt residual(const Configuration& config);

 private:
  std::optional<int> d_;
  std::map<std::pair<std::vector<ClassLabel>, int>, BigInt> traces_;
};

}  // namespace mtasep
