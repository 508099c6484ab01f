#pragma once

#include <gmpxx.h>
#include <string>

namespace ncpn {

// Exact rational coefficients. The engine never touches floating point:
// "zero" always means the canonical zero of mpq_class.
using Rational = mpq_class;

inline bool is_zero(const Rational& r) { return sgn(r) == 0; }

inline Rational rat(long num, long den = 1) {
    Rational r(num, den);
    r.canonicalize();
    return r;
}

// Prints "p" or "p/q" with q > 0, matching the CLI and JSON coefficient syntax.
inline std::string rat_str(const Rational& r) {
    return r.get_str();
}

// Accepts "p", "-p", "p/q"; throws std::invalid_argument on junk.
Rational rat_parse(const std::string& text);

} // namespace ncpn
