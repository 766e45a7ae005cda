#pragma once
/// @file rational.hpp
/// @brief Exact rationals and big integers on top of GMP.

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>

namespace apriori {

using Rational = mpq_class;
using BigInt = mpz_class;

/// "num/den", always with an explicit denominator.
std::string to_string(const Rational& q);
std::string to_string(const BigInt& z);

/// Accepts "a", "a/b" and decimal notation such as "-2.51" or "1e-3".
Rational parse_rational(const std::string& s);

Rational make_rational(long num, long den = 1);
BigInt floor_of(const Rational& q);
Rational frac_of(const Rational& q);
bool is_integer(const Rational& q);
Rational pow_int(const Rational& q, long e);

/// q^e for rational e, when the result is rational.
std::optional<Rational> pow_exact(const Rational& q, const Rational& e);

double to_double(const Rational& q);

BigInt factorial(long n);
BigInt binomial(long n, long k);

}  // namespace apriori
