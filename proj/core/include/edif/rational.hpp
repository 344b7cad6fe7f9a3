#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace edif {

/// Exact rational backed by GMP. Always kept canonical.
using Rational = mpq_class;
using BigInt = mpz_class;

Rational make_rational(long num, long den = 1);

/// Parses "p/q", an integer, or a decimal such as "-0.125" / "1e-3" exactly.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" (or "p" when q = 1).
std::string format_rational(const Rational& q);

/// The exact dyadic rational equal to a finite double.
Rational from_double(double x);

/// Nearest double (round-to-nearest via GMP, then corrected).
double to_double(const Rational& q);

/// 2^k for any integer k.
Rational pow2(long k);

/// base^k for k >= 0.
BigInt ipow(long base, unsigned long k);

int sign(const Rational& q);

/// Floor of log2(q) for q > 0.
long floor_log2(const Rational& q);

}  // namespace edif
