#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace spencer {

using Rational = mpq_class;
using Integer = mpz_class;

/// "num/den" with den always printed, the token format used in matrix exports.
std::string to_token(const Rational& q);

/// Shortest form: "num" when integral, "num/den" otherwise.
std::string to_string(const Rational& q);

/// Accepts "a", "-a", "a/b". Throws UsageError on anything else or b == 0.
Rational parse_rational(std::string_view text);

/// Residue of q modulo prime p; caller guarantees p does not divide den(q).
std::uint64_t mod_p(const Rational& q, std::uint64_t p);

bool denominator_divisible(const Rational& q, std::uint64_t p);

inline Rational abs_value(const Rational& q) { return q < 0 ? Rational(-q) : q; }

}  // namespace spencer
