#pragma once

#include "reactsim/error.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>

namespace reactsim {

/// Element symbol -> atom count. Counts are always >= 1; absent elements are
/// not stored.
using ElementComposition = std::map<std::string, std::int64_t>;

struct ParsedFormula {
  ElementComposition composition;
  int charge = 0;
};

/// Raised for malformed formulas. `position()` is the 0-based offset of the
/// offending character in the input.
class FormulaError : public Error {
 public:
  FormulaError(const std::string& message, std::string formula, std::size_t position);

  std::size_t position() const noexcept { return position_; }
  const std::string& formula() const noexcept { return formula_; }

 private:
  std::string formula_;
  std::size_t position_;
};

/// Parses formulas such as "H2O", "Fe(SCN)3", "MnO4-", "Fe^2+" and
/// "[PbBr4]^2-".
///
/// Grammar:
///   formula := group+ charge?
///   group   := element count? | '(' group+ ')' count? | '[' group+ ']' count?
///   charge  := '^' digits? ('+' | '-') | '+' | '-'
///
/// A bare trailing sign is a unit charge, so "Fe2+" reads as Fe2 with charge
/// +1; multi-unit charges need the caret form.
ParsedFormula parse_formula(std::string_view text);

/// True for the 118 IUPAC element symbols.
bool is_element_symbol(std::string_view symbol);

}  // namespace reactsim
