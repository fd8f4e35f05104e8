#pragma once

#include <gmpxx.h>

#include <string>

namespace mtasep {

using BigInt = mpz_class;
using Rational = mpq_class;

inline BigInt binomial(unsigned long n, unsigned long k) {
  BigInt out;
  if (k > n) return out;
  mpz_bin_uiui(out.get_mpz_t(), n, k);
  return out;
}

/// Exact fraction in lowest terms.
inline Rational make_rational(const BigInt& num, const BigInt& den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline std::string to_string(const BigInt& x) { return x.get_str(); }
inline std::string to_string(const Rational& q) { return q.get_str(); }

}  // namespace mtasep
