#include "reactsim/rational.hpp"

#include "reactsim/error.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

namespace reactsim {

namespace {

using boost::multiprecision::cpp_int;

[[noreturn]] void fail(std::string_view text, std::string_view why) {
  throw Error(ErrorCode::parse_error,
              "malformed number '" + std::string(text) + "': " + std::string(why));
}

cpp_int pow10(long exponent) {
  cpp_int result = 1;
  for (long i = 0; i < exponent; ++i) result *= 10;
  return result;
}

Rational parse_plain_decimal(std::string_view text, std::string_view whole) {
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
    negative = text[i] == '-';
    ++i;
  }
  cpp_int mantissa = 0;
  long scale = 0;
  bool any_digit = false;
  while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
    mantissa = mantissa * 10 + (text[i] - '0');
    any_digit = true;
    ++i;
  }
  if (i < text.size() && text[i] == '.') {
    ++i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      mantissa = mantissa * 10 + (text[i] - '0');
      ++scale;
      any_digit = true;
      ++i;
    }
  }
  if (!any_digit) fail(whole, "no digits");
  long exponent = 0;
  if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
    ++i;
    bool exp_negative = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
      exp_negative = text[i] == '-';
      ++i;
    }
    bool exp_digit = false;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      exponent = exponent * 10 + (text[i] - '0');
      if (exponent > 4000) fail(whole, "exponent out of range");
      exp_digit = true;
      ++i;
    }
    if (!exp_digit) fail(whole, "empty exponent");
    if (exp_negative) exponent = -exponent;
  }
  if (i != text.size()) fail(whole, "unexpected character");

  long net = exponent - scale;
  Rational value = net >= 0 ? Rational(mantissa * pow10(net))
                            : Rational(mantissa, pow10(-net));
  return negative ? Rational(-value) : value;
}

}  // namespace

Rational parse_decimal(std::string_view text) {
  if (text.empty()) fail(text, "empty");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Rational num = parse_plain_decimal(text.substr(0, slash), text);
    Rational den = parse_plain_decimal(text.substr(slash + 1), text);
    if (den == 0) fail(text, "zero denominator");
    return num / den;
  }
  return parse_plain_decimal(text, text);
}

Rational rational_from_double(double value) {
  if (!std::isfinite(value)) {
    throw Error(ErrorCode::invalid_argument, "non-finite quantity");
  }
  char buffer[64];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc()) throw Error(ErrorCode::invalid_argument, "unformattable quantity");
  return parse_decimal(std::string_view(buffer, static_cast<std::size_t>(end - buffer)));
}

std::string to_exact_string(const Rational& value) {
  return value.str();
}

}  // namespace reactsim
