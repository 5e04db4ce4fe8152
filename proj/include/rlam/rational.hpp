#ifndef RLAM_RATIONAL_HPP
#define RLAM_RATIONAL_HPP

#include <gmpxx.h>

#include <optional>
#include <string>
#include <string_view>

namespace rlam {

using Rational = mpq_class;

// Accepts "12", "-3.25", "1e-6", "2.5E3" and "2/3". The result is exact.
std::optional<Rational> parse_rational(std::string_view text);

// Finite decimal when the reduced denominator is of the form 2^a 5^b
// ("5.0", "0.25", "-1.5"), otherwise "p/q".
std::string format_rational(const Rational& q);

double to_double(const Rational& q);

// Exact: every finite double is a dyadic rational.
Rational from_double(double d);

} // namespace rlam

#endif
