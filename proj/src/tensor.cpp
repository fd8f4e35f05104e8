#include "mtasep/tensor.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <mutex>
#include <unordered_map>

#include "mtasep/error.hpp"

namespace mtasep {

std::string_view symbol_name(Symbol s) {
  switch (s) {
    case Symbol::One: return "1";
    case Symbol::Eps: return "eps";
    case Symbol::Delta: return "delta";
    case Symbol::A: return "A";
    case Symbol::D: return "D";
    case Symbol::E: return "E";
  }
  return "?";
}

Symbol parse_symbol(std::string_view name) {
  for (Symbol s : {Symbol::One, Symbol::Eps, Symbol::Delta, Symbol::A, Symbol::D, Symbol::E})
    if (symbol_name(s) == name) return s;
  throw InputError("unknown symbol '" + std::string(name) + "'");
}

IntMatrix IntMatrix::identity(int n) {
  IntMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::operator*(const IntMatrix& rhs) const {
  if (cols_ != rhs.rows_) throw InputError("matrix shape mismatch");
  IntMatrix out(rows_, rhs.cols_);
  for (int i = 0; i < rows_; ++i)
    for (int k = 0; k < cols_; ++k) {
      const auto a = (*this)(i, k);
      if (a == 0) continue;
      for (int j = 0; j < rhs.cols_; ++j) out(i, j) += a * rhs(k, j);
    }
  return out;
}

IntMatrix IntMatrix::operator-(const IntMatrix& rhs) const {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw InputError("matrix shape mismatch");
  IntMatrix out(*this);
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] -= rhs.data_[i];
  return out;
}

IntMatrix build_fundamental(Symbol sym, int d) {
  if (d < 1) throw InputError("truncation dimension must be at least 1");
  IntMatrix m(d, d);
  // Column n holds the image of |n>.
  for (int n = 0; n < d; ++n) {
    const bool keep = sym == Symbol::One || sym == Symbol::D || sym == Symbol::E;
    if (keep) m(n, n) = 1;
    if ((sym == Symbol::Eps || sym == Symbol::E) && n + 1 < d) m(n + 1, n) = 1;
    if ((sym == Symbol::Delta || sym == Symbol::D) && n > 0) m(n - 1, n) = 1;
  }
  if (sym == Symbol::A) m(0, 0) = 1;
  return m;
}

TensorOperator TensorOperator::monomial(std::vector<Symbol> factors, std::int64_t coefficient) {
  TensorOperator op(static_cast<int>(factors.size()));
  if (coefficient != 0) op.terms_.push_back(Monomial{coefficient, std::move(factors)});
  return op;
}

TensorOperator TensorOperator::identity(int rank, std::int64_t coefficient) {
  return monomial(std::vector<Symbol>(static_cast<std::size_t>(rank), Symbol::One), coefficient);
}

TensorOperator& TensorOperator::operator+=(const TensorOperator& rhs) {
  if (rhs.rank_ != rank_ && !rhs.is_zero()) {
    if (!is_zero()) throw InputError("adding tensor operators of different rank");
    rank_ = rhs.rank_;
  }
  terms_.insert(terms_.end(), rhs.terms_.begin(), rhs.terms_.end());
  return *this;
}

TensorOperator& TensorOperator::operator-=(const TensorOperator& rhs) { return *this += -rhs; }

TensorOperator TensorOperator::operator-() const {
  TensorOperator out(*this);
  for (auto& t : out.terms_) t.coefficient = -t.coefficient;
  return out;
}

namespace {

// Folds a One/Delta or One/Eps pair differing in exactly one slot.
bool fold_pair(std::vector<Monomial>& terms) {
  for (std::size_t i = 0; i < terms.size(); ++i)
    for (std::size_t j = 0; j < terms.size(); ++j) {
      if (i == j || terms[i].coefficient != terms[j].coefficient) continue;
      const auto& a = terms[i].factors;
      const auto& b = terms[j].factors;
      std::size_t diff = a.size();
      int mismatches = 0;
      for (std::size_t s = 0; s < a.size(); ++s)
        if (a[s] != b[s]) {
          diff = s;
          ++mismatches;
        }
      if (mismatches != 1 || a[diff] != Symbol::One) continue;
      Symbol folded;
      if (b[diff] == Symbol::Delta) folded = Symbol::D;
      else if (b[diff] == Symbol::Eps) folded = Symbol::E;
      else continue;
      terms[i].factors[diff] = folded;
      terms.erase(terms.begin() + static_cast<std::ptrdiff_t>(j));
      return true;
    }
  return false;
}

void merge_equal(std::vector<Monomial>& terms) {
  std::map<std::vector<Symbol>, std::int64_t> sum;
  for (const auto& t : terms) sum[t.factors] += t.coefficient;
  terms.clear();
  for (auto& [f, c] : sum)
    if (c != 0) terms.push_back(Monomial{c, f});
}

}  // namespace

TensorOperator TensorOperator::simplified() const {
  TensorOperator out(*this);
  merge_equal(out.terms_);
  while (fold_pair(out.terms_)) merge_equal(out.terms_);
  std::sort(out.terms_.begin(), out.terms_.end());
  return out;
}

std::vector<bool> TensorOperator::forced_zero_slots() const {
  std::vector<bool> forced(static_cast<std::size_t>(rank_), !terms_.empty());
  for (const auto& t : terms_)
    for (std::size_t s = 0; s < t.factors.size(); ++s)
      if (t.factors[s] != Symbol::A) forced[s] = false;
  return forced;
}

nlohmann::json TensorOperator::to_json() const {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& t : terms_) {
    nlohmann::json m = nlohmann::json::array();
    if (t.coefficient != 1) m.push_back(t.coefficient);
    for (Symbol s : t.factors) m.push_back(std::string(symbol_name(s)));
    out.push_back(std::move(m));
  }
  return out;
}

bool TensorOperator::operator==(const TensorOperator& rhs) const {
  const auto a = simplified();
  const auto b = rhs.simplified();
  return a.rank_ == b.rank_ && a.terms_ == b.terms_;
}

TensorOperator tensor(const TensorOperator& lhs, const TensorOperator& rhs) {
  TensorOperator out(lhs.rank() + rhs.rank());
  for (const auto& a : lhs.terms())
    for (const auto& b : rhs.terms()) {
      std::vector<Symbol> f = a.factors;
      f.insert(f.end(), b.factors.begin(), b.factors.end());
      out += TensorOperator::monomial(std::move(f), a.coefficient * b.coefficient);
    }
  return out;
}

namespace {

std::vector<Symbol> repeat(Symbol s, int times) {
  return std::vector<Symbol>(static_cast<std::size_t>(std::max(times, 0)), s);
}

std::vector<Symbol> concat(std::initializer_list<std::vector<Symbol>> parts) {
  std::vector<Symbol> out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

}  // namespace

TensorOperator build_aKM(int n, int k, int m) {
  if (n < 1 || k < 0 || k > n || m < 0 || m > n - 1)
    throw InputError("a_KM index out of range");
  using S = Symbol;
  std::vector<Symbol> f;
  if (k == 0 && m == 0) {
    f = repeat(S::One, n - 1);
  } else if (k == 0) {
    f = concat({repeat(S::One, m - 1), {S::Eps}, repeat(S::One, n - m - 1)});
  } else if (k == n) {
    if (m != 0) throw InputError("a_NM only exists for M = 0");
    f = repeat(S::A, n - 1);
  } else if (m == 0) {
    f = concat({repeat(S::A, k - 1), {S::Delta}, repeat(S::One, n - k - 1)});
  } else if (m == k) {
    f = concat({repeat(S::A, k - 1), repeat(S::One, n - k)});
  } else if (k < m) {
    f = concat({repeat(S::A, k - 1), {S::Delta}, repeat(S::One, m - k - 1), {S::Eps},
                repeat(S::One, n - m - 1)});
  } else {
    throw InputError("a_KM with 0 < M < K does not appear in the ansatz");
  }
  return TensorOperator::monomial(std::move(f));
}

std::vector<TensorOperator> build_ansatz(int n) {
  if (n < 0) throw InputError("negative species count");
  std::vector<TensorOperator> level{TensorOperator::identity(0)};  // X_0^(0) = 1
  for (int lvl = 1; lvl <= n; ++lvl) {
    std::vector<TensorOperator> next;
    TensorOperator x0;
    for (int m = 0; m <= lvl - 1; ++m) x0 += tensor(build_aKM(lvl, 0, m), level[static_cast<std::size_t>(m)]);
    next.push_back(x0.simplified());
    for (int k = 1; k <= lvl; ++k) {
      TensorOperator xk = tensor(build_aKM(lvl, k, 0), level[0]);
      for (int m = k; m <= lvl - 1; ++m) xk += tensor(build_aKM(lvl, k, m), level[static_cast<std::size_t>(m)]);
      next.push_back(xk.simplified());
    }
    level = std::move(next);
  }
  return level;
}

const std::vector<TensorOperator>& ansatz(int n) {
  static std::mutex mutex;
  static std::map<int, std::vector<TensorOperator>> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build_ansatz(n)).first;
  return it->second;
}

namespace {

// Up to two (new value) outcomes of a symbol acting on counter value c.
struct Outcomes {
  std::array<int, 2> values{};
  int count = 0;
};

Outcomes act(Symbol s, int c) {
  Outcomes o;
  auto push = [&](int v) { o.values[static_cast<std::size_t>(o.count++)] = v; };
  switch (s) {
    case Symbol::One: push(c); break;
    case Symbol::Eps: push(c + 1); break;
    case Symbol::Delta: if (c > 0) push(c - 1); break;
    case Symbol::A: if (c == 0) push(0); break;
    case Symbol::D: push(c); if (c > 0) push(c - 1); break;
    case Symbol::E: push(c); push(c + 1); break;
  }
  return o;
}

// Calls emit(out) for every counter tuple reached from `in` by the monomial.
// Values reaching d are handled according to the policy.
template <typename Emit>
void expand(const Monomial& m, const int* in, int* out, std::size_t slot, int d,
            OverflowPolicy policy, Emit& emit) {
  if (slot == m.factors.size()) {
    emit(out);
    return;
  }
  const Outcomes o = act(m.factors[slot], in[slot]);
  for (int i = 0; i < o.count; ++i) {
    const int v = o.values[static_cast<std::size_t>(i)];
    if (v >= d) {
      if (policy == OverflowPolicy::Throw)
        throw TruncationOverflow("counter " + std::to_string(slot) + " reached truncation " +
                                 std::to_string(d));
      continue;
    }
    out[slot] = v;
    expand(m, in, out, slot + 1, d, policy, emit);
  }
}

}  // namespace

CounterState apply(const TensorOperator& op, const CounterState& state, int d,
                   OverflowPolicy policy) {
  CounterState out;
  std::vector<int> buffer(static_cast<std::size_t>(op.rank()));
  for (const auto& [counters, coeff] : state) {
    if (static_cast<int>(counters.size()) != op.rank())
      throw InputError("counter tuple rank does not match the operator");
    for (int c : counters)
      if (c < 0 || c >= d) throw InputError("counter outside 0..d-1");
    for (const auto& term : op.terms()) {
      auto emit = [&](const int* v) {
        out[Counters(v, v + op.rank())] += coeff * term.coefficient;
      };
      expand(term, counters.data(), buffer.data(), 0, d, policy, emit);
    }
  }
  std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
  return out;
}

namespace {

// Counter tuples packed into a 64-bit key, `bits` bits per slot.
class Packing {
 public:
  Packing(int rank, int d) : rank_(rank) {
    bits_ = std::max(1, static_cast<int>(std::bit_width(static_cast<unsigned>(d))));
    if (rank_ * bits_ > 64)
      throw BoundExceeded("counter tuple of rank " + std::to_string(rank) +
                          " does not fit the packed trace representation");
  }
  std::uint64_t pack(const int* v) const {
    std::uint64_t key = 0;
    for (int s = rank_ - 1; s >= 0; --s) key = (key << bits_) | static_cast<std::uint64_t>(v[s]);
    return key;
  }
  void unpack(std::uint64_t key, int* v) const {
    const std::uint64_t mask = (bits_ == 64) ? ~0ULL : ((1ULL << bits_) - 1);
    for (int s = 0; s < rank_; ++s) {
      v[s] = static_cast<int>(key & mask);
      key >>= bits_;
    }
  }

 private:
  int rank_;
  int bits_;
};

struct TraceResult {
  BigInt total = 0;
  bool high_start_contributes = false;
};

// Tr(ops[0] ... ops[n-1]) over truncated counters. Paths that can no longer
// return to their start within the remaining steps are discarded; each symbol
// moves a counter by at most one. Starts with any counter above
// `high_threshold` are reported if they contribute.
TraceResult trace_impl(std::span<const TensorOperator* const> ops, int d, int high_threshold) {
  TraceResult result;
  if (ops.empty()) throw InputError("trace of an empty product");
  const int rank = ops.front()->rank();
  for (const auto* op : ops)
    if (op->rank() != rank) throw InputError("trace of operators with different ranks");

  // Rotate so the most constraining operator acts first.
  std::size_t pivot = 0;
  std::size_t best = 0;
  for (std::size_t i = 0; i < ops.size(); ++i) {
    const auto forced = ops[i]->forced_zero_slots();
    const auto n = static_cast<std::size_t>(std::count(forced.begin(), forced.end(), true));
    if (n > best) {
      best = n;
      pivot = i;
    }
  }
  std::vector<const TensorOperator*> seq;
  seq.reserve(ops.size());
  for (std::size_t i = 1; i <= ops.size(); ++i) seq.push_back(ops[(pivot + i) % ops.size()]);
  const auto forced = seq.back()->forced_zero_slots();

  const Packing packing(rank, d);
  const auto rank_sz = static_cast<std::size_t>(rank);
  std::vector<int> start(rank_sz, 0), cur(rank_sz), nxt(rank_sz);

  using State = std::unordered_map<std::uint64_t, BigInt>;
  State state, next;

  while (true) {
    const std::uint64_t start_key = packing.pack(start.data());
    state.clear();
    state.emplace(start_key, 1);
    for (std::size_t t = seq.size(); t-- > 0 && !state.empty();) {
      const int remaining = static_cast<int>(t);
      next.clear();
      for (const auto& [key, coeff] : state) {
        packing.unpack(key, cur.data());
        for (const auto& term : seq[t]->terms()) {
          auto emit = [&](const int* v) {
            for (std::size_t s = 0; s < rank_sz; ++s)
              if (std::abs(v[s] - start[s]) > remaining) return;
            BigInt& slot = next[packing.pack(v)];
            if (term.coefficient == 1) slot += coeff;
            else slot += coeff * term.coefficient;
          };
          expand(term, cur.data(), nxt.data(), 0, d, OverflowPolicy::Truncate, emit);
        }
      }
      std::swap(state, next);
    }
    if (auto it = state.find(start_key); it != state.end() && it->second != 0) {
      result.total += it->second;
      if (std::any_of(start.begin(), start.end(), [&](int c) { return c > high_threshold; }))
        result.high_start_contributes = true;
    }

    // Next start tuple over the free slots.
    std::size_t s = 0;
    for (; s < rank_sz; ++s) {
      if (forced[s]) continue;
      if (++start[s] < d) break;
      start[s] = 0;
    }
    if (s == rank_sz) break;
  }
  return result;
}

}  // namespace

BigInt trace_product(std::span<const TensorOperator* const> ops, int d) {
  if (d < 1) throw InputError("truncation dimension must be at least 1");
  return trace_impl(ops, d, d).total;
}

BigInt trace_weight(const Configuration& config, std::optional<int> truncation) {
  const Configuration reduced = reduce_species(config).config;
  if (reduced.species() <= 1) return 1;
  const auto& x = ansatz(reduced.species());
  std::vector<const TensorOperator*> ops;
  ops.reserve(reduced.sites().size());
  for (ClassLabel c : reduced.sites()) ops.push_back(&x[static_cast<std::size_t>(c)]);

  if (truncation) return trace_product(ops, *truncation);

  // A contributing closed path touches 0 in every slot (otherwise shifting it
  // up by one would give infinitely many), so its counters stay below L/2.
  const int length = reduced.length();
  const int limit = 8 * (length + 1);
  for (int d = length + 1; d <= limit; d *= 2) {
    TraceResult r = trace_impl(ops, d, length / 2);
    if (!r.high_start_contributes) return r.total;
  }
  throw TruncationOverflow("trace of " + render(config) + " does not stabilize under truncation");
}

BigInt normalization(const Sector& sector) {
  sector.validate();
  BigInt z = 1;
  for (int m : sector.cumulative())
    z *= binomial(static_cast<unsigned long>(sector.length), static_cast<unsigned long>(m));
  return z;
}

Rational probability(const Configuration& config) {
  const Configuration reduced = reduce_species(config).config;
  return make_rational(trace_weight(reduced), normalization(sector_of(reduced)));
}

}  // namespace mtasep
