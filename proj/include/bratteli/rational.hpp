#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace bratteli {

/// Exact arbitrary-precision rational, always kept in canonical form.
using Rational = mpq_class;

/// Values indexed by level, then by vertex index within the level (levels 0..N).
using VertexFunction = std::vector<std::vector<Rational>>;

/// Values indexed by level, then by edge index within the level. Slot 0 is
/// always empty so that `f[n]` is the function on E(n).
using EdgeFunction = std::vector<std::vector<Rational>>;

/// Parses "num/den", "num", or "-num/den". Throws ParseError on anything else
/// (including zero denominators and embedded whitespace).
Rational parse_rational(std::string_view text);

/// Canonical "num/den" form; integers print as "num/1" so that every value in
/// a table has the same shape.
std::string to_string(const Rational& q);

/// num/den in canonical form (the two-argument mpq_class constructor does not
/// reduce).
inline Rational ratio(long num, long den) {
    Rational q(num, den);
    q.canonicalize();
    return q;
}

Rational binomial(unsigned n, unsigned k);

/// Best rational approximation with denominator at most `max_den`
/// (continued-fraction convergents and semiconvergents).
Rational rationalize(double x, unsigned long max_den);

} // namespace bratteli
