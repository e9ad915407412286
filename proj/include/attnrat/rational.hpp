#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace attnrat {

// Exact rational scalar. mpq_class keeps numerator/denominator canonical
// (positive denominator, gcd 1) after every arithmetic operation.
using Rational = mpq_class;
using Integer = mpz_class;

// Parses "p", "p/q" or "-p/q". Throws ValidationError on malformed input or
// a zero denominator.
Rational parse_rational(std::string_view text);

// Always renders "num/den", including integers ("3/1").
std::string format_rational(const Rational& value);

// Convenience decimal rendering for reports; never used in verdicts.
std::string decimal_string(const Rational& value, int digits = 12);

inline Rational make_rational(long num, long den = 1) {
    Rational r(num, den);
    r.canonicalize();
    return r;
}

inline int sign(const Rational& value) { return sgn(value); }

Rational abs_value(const Rational& value);

// base^exponent for exponent >= 0.
Rational power(const Rational& base, unsigned exponent);

}  // namespace attnrat
