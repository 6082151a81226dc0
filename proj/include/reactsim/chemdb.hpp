#pragma once

#include "reactsim/formula.hpp"
#include "reactsim/rational.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace reactsim {

enum class PhysicalState { solid, liquid, gas, aqueous };

std::string_view state_code(PhysicalState state);  // "s", "l", "g", "aq"
PhysicalState parse_state(std::string_view code);

struct RGB {
  std::uint8_t r = 0, g = 0, b = 0;
  friend bool operator==(const RGB&, const RGB&) = default;
};

struct ChemicalSpecies {
  std::string name;
  int charge = 0;
  std::optional<double> formation_enthalpy;  // kJ/mol
  std::optional<RGB> color;                  // absent = colorless
  PhysicalState state = PhysicalState::aqueous;
  ElementComposition composition;
  double opacity_constant = 1.0;  // L/mol

  friend bool operator==(const ChemicalSpecies&, const ChemicalSpecies&) = default;
};

enum class ReactionType { acid_base, double_displacement, redox, complexation };

std::string_view reaction_type_name(ReactionType type);
ReactionType parse_reaction_type(std::string_view name);

struct Term {
  std::string species;
  Rational coefficient;
  friend bool operator==(const Term&, const Term&) = default;
};

struct Reaction {
  int id = 0;
  ReactionType type = ReactionType::acid_base;
  std::vector<Term> reactants;  // file order
  std::vector<Term> products;
  std::optional<double> enthalpy_per_equation;  // kJ/mol
  std::optional<double> enthalpy_override;
  std::optional<double> rate_constant;  // 1/s
  std::string note;

  const Rational* reactant_coefficient(std::string_view species) const;
  const Rational* product_coefficient(std::string_view species) const;

  friend bool operator==(const Reaction&, const Reaction&) = default;
};

/// "5Fe^2+ + MnO4- + 8H+ -> 5Fe^3+ + Mn^2+ + 4H2O"
std::string format_equation(const Reaction& reaction);

/// Swaps reactants and products; enthalpy fields are cleared.
Reaction reversed(const Reaction& reaction);

struct Violation {
  enum class Kind { charge, element, overlap } kind;
  std::string element;  // element symbol or overlapping species, empty for charge
  Rational lhs;
  Rational rhs;
  std::string message;
};

/// Thrown by build_database when one or more reactions fail validation.
class ReactionValidationError : public Error {
 public:
  explicit ReactionValidationError(std::vector<std::pair<int, std::vector<Violation>>> failures);

  const std::vector<std::pair<int, std::vector<Violation>>>& failures() const { return failures_; }

 private:
  std::vector<std::pair<int, std::vector<Violation>>> failures_;
};

/// Immutable after construction. Reaction order is resolution priority.
class ReactionDatabase {
 public:
  ReactionDatabase() = default;

  const std::map<std::string, ChemicalSpecies>& species() const { return species_; }
  const std::vector<Reaction>& reactions() const { return reactions_; }

  /// Number of rows in the species source before identical duplicates merged.
  std::size_t species_rows() const { return species_rows_; }

  const ChemicalSpecies* find_species(std::string_view name) const;
  const ChemicalSpecies& species_at(std::string_view name) const;  // throws unknown_species
  const Reaction* find_reaction(int id) const;

  /// Maps a user-facing spelling ("Fe2+", "CoCl4^2-") to the canonical
  /// species name. Returns nullopt when nothing matches unambiguously.
  std::optional<std::string> canonical_name(std::string_view name) const;

 private:
  friend ReactionDatabase build_database(const nlohmann::json&, const nlohmann::ordered_json&,
                                         const nlohmann::json*);

  std::map<std::string, ChemicalSpecies> species_;
  std::vector<Reaction> reactions_;
  std::map<std::string, std::string> aliases_;
  std::size_t species_rows_ = 0;
};

/// Structural checks (charge balance, element balance, disjoint sides).
/// Species must exist in `db`.
std::vector<Violation> validate_reaction(const Reaction& reaction, const ReactionDatabase& db);

/// Hess sum over formation enthalpies; nullopt when any participant lacks one.
std::optional<double> reaction_enthalpy(const Reaction& reaction, const ReactionDatabase& db);

/// Builds a validated database. `errata` optionally overrides species fields
/// by name (only "state" and "opacity_constant" are honoured).
ReactionDatabase build_database(const nlohmann::json& species,
                                const nlohmann::ordered_json& reactions,
                                const nlohmann::json* errata = nullptr);

ReactionDatabase load_database(const std::filesystem::path& species_file,
                               const std::filesystem::path& reactions_file,
                               const std::optional<std::filesystem::path>& errata_file = {});

nlohmann::json to_json(const ChemicalSpecies& species);
nlohmann::json to_json(const Reaction& reaction);

}  // namespace reactsim
