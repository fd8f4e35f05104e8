#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mtasep/bigint.hpp"
#include "mtasep/core.hpp"

namespace mtasep {

/// Building blocks of the matrix ansatz, acting on one queue counter |n>:
///   One   |n> = |n>
///   Eps   |n> = |n+1>
///   Delta |n> = |n-1>, Delta|0> = 0
///   A     |n> = [n == 0] |0>
///   D = One + Delta,  E = One + Eps
enum class Symbol : std::uint8_t { One, Eps, Delta, A, D, E };

std::string_view symbol_name(Symbol s);
Symbol parse_symbol(std::string_view name);

/// Small dense integer matrix, row-major.
class IntMatrix {
 public:
  IntMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows * cols), 0) {}
  static IntMatrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::int64_t& operator()(int i, int j) { return data_[static_cast<std::size_t>(i * cols_ + j)]; }
  std::int64_t operator()(int i, int j) const { return data_[static_cast<std::size_t>(i * cols_ + j)]; }

  IntMatrix operator*(const IntMatrix& rhs) const;
  IntMatrix operator-(const IntMatrix& rhs) const;
  bool operator==(const IntMatrix&) const = default;

 private:
  int rows_;
  int cols_;
  std::vector<std::int64_t> data_;
};

/// Truncated d x d realization of a symbol on counters 0..d-1.
IntMatrix build_fundamental(Symbol sym, int d);

struct Monomial {
  std::int64_t coefficient = 1;
  std::vector<Symbol> factors;

  auto operator<=>(const Monomial&) const = default;
};

/// Formal sum of tensor products of symbols, all of the same rank.
class TensorOperator {
 public:
  /// The zero operator of the given rank.
  explicit TensorOperator(int rank = 0) : rank_(rank) {}

  static TensorOperator monomial(std::vector<Symbol> factors, std::int64_t coefficient = 1);
  /// coefficient * One^(x rank); rank 0 gives a plain scalar.
  static TensorOperator identity(int rank, std::int64_t coefficient = 1);

  int rank() const { return rank_; }
  const std::vector<Monomial>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  TensorOperator& operator+=(const TensorOperator& rhs);
  TensorOperator& operator-=(const TensorOperator& rhs);
  friend TensorOperator operator+(TensorOperator lhs, const TensorOperator& rhs) { return lhs += rhs; }
  friend TensorOperator operator-(TensorOperator lhs, const TensorOperator& rhs) { return lhs -= rhs; }
  TensorOperator operator-() const;

  /// Merges equal monomials and folds One+Delta into D, One+Eps into E.
  /// Terms come back sorted.
  TensorOperator simplified() const;

  /// Slots in which every monomial carries the projector A.
  std::vector<bool> forced_zero_slots() const;

  /// Each monomial as an array of symbol names, prefixed by its coefficient
  /// when that is not 1.
  nlohmann::json to_json() const;

  /// Term-by-term comparison of the simplified forms.
  bool operator==(const TensorOperator& rhs) const;

 private:
  int rank_ = 0;
  std::vector<Monomial> terms_;
};

/// Kronecker product: slots of lhs first, then slots of rhs.
TensorOperator tensor(const TensorOperator& lhs, const TensorOperator& rhs);

/// The rank-(N-1) building block a_{KM} of the level-N ansatz.
TensorOperator build_aKM(int n, int k, int m);

/// X_0 .. X_N at level N, rank C(N,2).
std::vector<TensorOperator> build_ansatz(int n);
/// Cached build_ansatz; thread-safe.
const std::vector<TensorOperator>& ansatz(int n);

using Counters = std::vector<int>;
/// Sparse vector over counter tuples, no zero coefficients.
using CounterState = std::map<Counters, BigInt>;

enum class OverflowPolicy {
  Throw,     ///< raising a counter to d throws TruncationOverflow
  Truncate,  ///< the truncated matrix: amplitude leaving 0..d-1 is dropped
};

CounterState apply(const TensorOperator& op, const CounterState& state, int d,
                   OverflowPolicy policy = OverflowPolicy::Throw);

/// Tr(ops[0] ops[1] ... ops[n-1]) with each operator truncated to counters
/// 0..d-1. The rightmost operator acts first.
BigInt trace_product(std::span<const TensorOperator* const> ops, int d);

/// W(C) = Tr(X_{tau_1} ... X_{tau_L}) after species reduction; 1 for N <= 1.
/// Without an explicit truncation, d starts at L+1 and is doubled while any
/// start vector above the reachable counter range still contributes.
BigInt trace_weight(const Configuration& config, std::optional<int> truncation = std::nullopt);

/// Z = prod_{k=1}^{N} C(L, m_k).
BigInt normalization(const Sector& sector);

/// P(C) = W(C) / Z over the species-reduced sector, in lowest terms.
Rational probability(const Configuration& config);

}  // namespace mtasep
