#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace soficperm {

using Rational = mpq_class;
using Integer = mpz_class;

/// Canonical num/den, e.g. "3/8" or "1".
inline std::string to_string(const Rational& q) { return q.get_str(); }
inline std::string to_string(const Integer& z) { return z.get_str(); }

inline double to_double(const Rational& q) { return q.get_d(); }

inline Rational make_rational(std::uint64_t num, std::uint64_t den) {
  Rational q{Integer{std::to_string(num)}, Integer{std::to_string(den)}};
  q.canonicalize();
  return q;
}

/// num/den in lowest terms.
inline Rational ratio(const Integer& num, const Integer& den) {
  Rational q{num, den};
  q.canonicalize();
  return q;
}

inline Integer make_integer(std::uint64_t v) { return Integer{std::to_string(v)}; }

/// a^e for small exponents.
inline Integer ipow(std::uint64_t base, unsigned e) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), base, e);
  return r;
}

}  // namespace soficperm
