#pragma once

#include "reactsim/chemdb.hpp"
#include "reactsim/rational.hpp"

#include <nlohmann/json.hpp>

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace reactsim {

using Amounts = std::map<std::string, Rational>;

/// Amounts at or below this many moles count as absent.
inline const Rational& presence_threshold() {
  static const Rational value(1, 1'000'000'000'000LL);
  return value;
}
constexpr double kPresenceThreshold = 1e-12;

inline bool is_present(const Rational& amount) { return amount > presence_threshold(); }

struct Mixture {
  Amounts amounts;        // moles; zero entries are pruned
  Rational volume_l = 1;  // liters
  double temperature_c = 25.0;

  Rational amount(const std::string& species) const;
  /// Species whose amount exceeds the presence threshold, sorted by name.
  std::vector<std::string> present_species() const;

  friend bool operator==(const Mixture&, const Mixture&) = default;
};

struct ResolutionStep {
  int reaction_id = 0;
  Rational quantity;  // moles of equation (N)
  Amounts consumed;
  Amounts produced;
  std::optional<double> heat_released_kj;  // positive = exothermic
};

struct ResolutionReport {
  Mixture initial;
  std::vector<ResolutionStep> steps;
  Mixture final;
  std::set<std::string> spectators;
  double total_heat_kj = 0.0;  // sum of known step heats (released)
};

/// Partition of a mixture's present species by reactant membership.
struct Extraction {
  Amounts reacting;
  Amounts spectating;
};

/// Sum of amount x charge. Throws unknown_species.
Rational net_charge(const Mixture& mixture, const ReactionDatabase& db);
Rational net_charge(const Amounts& amounts, const ReactionDatabase& db);

/// Element totals (moles of atoms) across all species.
std::map<std::string, Rational> element_totals(const Amounts& amounts, const ReactionDatabase& db);

bool is_applicable(const Mixture& mixture, const Reaction& reaction);

/// First reaction in database order whose reactants are all present.
const Reaction* find_applicable(const Mixture& mixture, const ReactionDatabase& db);

Extraction extract(const Mixture& mixture, const Reaction& reaction);

/// Limiting-reagent quantity: min over reactants of amount / coefficient.
Rational reaction_quantity(const Mixture& mixture, const Reaction& reaction);

/// Consumes N x reactant coefficients and adds N x product coefficients.
std::pair<Mixture, ResolutionStep> apply_reaction(const Mixture& mixture, const Reaction& reaction,
                                                  const Rational& quantity);

/// Runs the cascade: index, extract, limit, apply until nothing applies.
/// Requires a charge-balanced input.
ResolutionReport resolve(const Mixture& mixture, const ReactionDatabase& db);

/// Re-applies recorded steps to `initial`.
Mixture replay(const Mixture& initial, const std::vector<ResolutionStep>& steps);

nlohmann::json to_json(const Mixture& mixture);
nlohmann::json to_json(const ResolutionStep& step, const ReactionDatabase& db);
nlohmann::json to_json(const ResolutionReport& report, const ReactionDatabase& db);

/// Expands user-facing names into canonical species: database spellings and
/// aliases first, then the dissociation table. Throws unknown_species.
class DissociationTable {
 public:
  DissociationTable() = default;
  explicit DissociationTable(std::map<std::string, std::map<std::string, int>> entries)
      : entries_(std::move(entries)) {}

  static DissociationTable load(const std::filesystem::path& file, const ReactionDatabase& db);

  Amounts expand(const std::string& name, const Rational& moles, const ReactionDatabase& db) const;
  Amounts expand(const std::vector<std::pair<std::string, Rational>>& items,
                 const ReactionDatabase& db) const;

  const std::map<std::string, std::map<std::string, int>>& entries() const { return entries_; }

 private:
  std::map<std::string, std::map<std::string, int>> entries_;
};

}  // namespace reactsim
