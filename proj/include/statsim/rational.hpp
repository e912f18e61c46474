#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <string_view>

namespace statsim {

/// Arbitrary-precision rational. GMP keeps results in lowest terms as long as
/// inputs are canonical, which the helpers below guarantee.
using Rational = mpq_class;

inline Rational rational(long num, long den = 1) {
    Rational r(num, den);
    r.canonicalize();
    return r;
}

/// Parses "num", "-num" or "num/den" (den > 0). Returns nullopt when the text
/// does not have that shape; no whitespace, no decimals.
std::optional<Rational> parse_rational(std::string_view text);

/// "num/den" in lowest terms, or just "num" for integers.
std::string to_string(const Rational& r);

/// Nearest double (GMP rounds toward zero; error below one ulp).
inline double to_double(const Rational& r) { return r.get_d(); }

}  // namespace statsim
