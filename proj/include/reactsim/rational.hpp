#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

namespace reactsim {

/// Exact quantity type used for stoichiometric coefficients, mole amounts
/// and volumes. Conservation checks compare these values with `==`.
using Rational = boost::multiprecision::cpp_rational;

/// Parses a plain decimal literal ("0.01", "5", "-2.5e-3", "1/3") into an
/// exact rational. Throws Error{ErrorCode::parse_error} on malformed text.
Rational parse_decimal(std::string_view text);

/// Shortest round-trip decimal representation of `value`, read back exactly.
/// 0.01 becomes 1/100 rather than the binary expansion of the double.
Rational rational_from_double(double value);

inline double to_double(const Rational& value) { return value.convert_to<double>(); }

/// "p/q" or "p" for integers; parse_decimal accepts this form back.
std::string to_exact_string(const Rational& value);

}  // namespace reactsim
