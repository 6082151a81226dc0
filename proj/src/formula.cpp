#include "reactsim/formula.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <limits>
#include <vector>

namespace reactsim {

namespace {

constexpr std::array<std::string_view, 118> kElements = {
    "H",  "He", "Li", "Be", "B",  "C",  "N",  "O",  "F",  "Ne", "Na", "Mg", "Al", "Si", "P",
    "S",  "Cl", "Ar", "K",  "Ca", "Sc", "Ti", "V",  "Cr", "Mn", "Fe", "Co", "Ni", "Cu", "Zn",
    "Ga", "Ge", "As", "Se", "Br", "Kr", "Rb", "Sr", "Y",  "Zr", "Nb", "Mo", "Tc", "Ru", "Rh",
    "Pd", "Ag", "Cd", "In", "Sn", "Sb", "Te", "I",  "Xe", "Cs", "Ba", "La", "Ce", "Pr", "Nd",
    "Pm", "Sm", "Eu", "Gd", "Tb", "Dy", "Ho", "Er", "Tm", "Yb", "Lu", "Hf", "Ta", "W",  "Re",
    "Os", "Ir", "Pt", "Au", "Hg", "Tl", "Pb", "Bi", "Po", "At", "Rn", "Fr", "Ra", "Ac", "Th",
    "Pa", "U",  "Np", "Pu", "Am", "Cm", "Bk", "Cf", "Es", "Fm", "Md", "No", "Lr", "Rf", "Db",
    "Sg", "Bh", "Hs", "Mt", "Ds", "Rg", "Cn", "Nh", "Fl", "Mc", "Lv", "Ts", "Og"};

constexpr std::int64_t kMaxCount = std::numeric_limits<std::int64_t>::max() / 1024;

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  ParsedFormula run() {
    if (text_.empty()) fail("empty formula", 0);
    ParsedFormula out;
    out.composition = parse_sequence('\0');
    if (out.composition.empty()) fail("formula has no elements", pos_);
    out.charge = parse_charge();
    if (pos_ != text_.size()) fail("unexpected character", pos_);
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& what, std::size_t at) const {
    throw FormulaError(what, std::string(text_), at);
  }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }

  // Parses groups until `closer` (or end of input / charge suffix at top level).
  ElementComposition parse_sequence(char closer) {
    ElementComposition total;
    while (!at_end()) {
      char c = peek();
      if (c == closer) return total;
      if (c == '(' || c == '[') {
        const std::size_t open_at = pos_;
        const char close = c == '(' ? ')' : ']';
        ++pos_;
        ElementComposition inner = parse_sequence(close);
        if (peek() != close) fail(std::string("unbalanced '") + c + "'", open_at);
        if (inner.empty()) fail("empty group", open_at);
        ++pos_;
        merge(total, inner, parse_count());
      } else if (std::isupper(static_cast<unsigned char>(c))) {
        const std::size_t sym_at = pos_;
        std::string symbol(1, c);
        ++pos_;
        if (std::islower(static_cast<unsigned char>(peek()))) {
          symbol += peek();
          ++pos_;
        }
        if (!is_element_symbol(symbol)) fail("unknown element '" + symbol + "'", sym_at);
        ElementComposition single{{symbol, 1}};
        merge(total, single, parse_count());
      } else if (c == ')' || c == ']') {
        fail(std::string("unbalanced '") + c + "'", pos_);
      } else if (c == '^' || c == '+' || c == '-') {
        if (closer != '\0') fail("charge inside group", pos_);
        return total;
      } else {
        fail(std::string("unexpected character '") + c + "'", pos_);
      }
    }
    return total;
  }

  std::int64_t parse_count() {
    if (!std::isdigit(static_cast<unsigned char>(peek()))) return 1;
    const std::size_t start = pos_;
    std::int64_t value = 0;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      value = value * 10 + (peek() - '0');
      if (value > kMaxCount) fail("count too large", start);
      ++pos_;
    }
    if (value == 0) fail("zero count", start);
    return value;
  }

  int parse_charge() {
    if (at_end()) return 0;
    const std::size_t start = pos_;
    if (peek() == '+' || peek() == '-') {
      int sign = peek() == '+' ? 1 : -1;
      ++pos_;
      return sign;
    }
    if (peek() != '^') fail("unexpected character", pos_);
    ++pos_;
    int magnitude = 1;
    if (std::isdigit(static_cast<unsigned char>(peek()))) {
      magnitude = 0;
      while (std::isdigit(static_cast<unsigned char>(peek()))) {
        magnitude = magnitude * 10 + (peek() - '0');
        if (magnitude > 99) fail("malformed charge suffix", start);
        ++pos_;
      }
      if (magnitude == 0) fail("malformed charge suffix", start);
    }
    if (peek() != '+' && peek() != '-') fail("malformed charge suffix", start);
    int sign = peek() == '+' ? 1 : -1;
    ++pos_;
    return sign * magnitude;
  }

  void merge(ElementComposition& into, const ElementComposition& part, std::int64_t times) {
    for (const auto& [symbol, count] : part) {
      if (count > kMaxCount / times) fail("count too large", pos_);
      into[symbol] += count * times;
      if (into[symbol] > kMaxCount) fail("count too large", pos_);
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

FormulaError::FormulaError(const std::string& message, std::string formula, std::size_t position)
    : Error(ErrorCode::parse_error,
            message + " at position " + std::to_string(position) + " in '" + formula + "'"),
      formula_(std::move(formula)),
      position_(position) {}

ParsedFormula parse_formula(std::string_view text) { return Parser(text).run(); }

bool is_element_symbol(std::string_view symbol) {
  return std::find(kElements.begin(), kElements.end(), symbol) != kElements.end();
}

}  // namespace reactsim
