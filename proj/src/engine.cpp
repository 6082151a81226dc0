#include "reactsim/engine.hpp"

#include <fstream>

namespace reactsim {

using nlohmann::json;

Rational Mixture::amount(const std::string& species) const {
  auto it = amounts.find(species);
  return it == amounts.end() ? Rational(0) : it->second;
}

std::vector<std::string> Mixture::present_species() const {
  std::vector<std::string> out;
  for (const auto& [name, n] : amounts) {
    if (is_present(n)) out.push_back(name);
  }
  return out;
}

Rational net_charge(const Amounts& amounts, const ReactionDatabase& db) {
  Rational total = 0;
  for (const auto& [name, n] : amounts) total += n * db.species_at(name).charge;
  return total;
}

Rational net_charge(const Mixture& mixture, const ReactionDatabase& db) {
  return net_charge(mixture.amounts, db);
}

std::map<std::string, Rational> element_totals(const Amounts& amounts, const ReactionDatabase& db) {
  std::map<std::string, Rational> totals;
  for (const auto& [name, n] : amounts) {
    for (const auto& [el, count] : db.species_at(name).composition) totals[el] += n * count;
  }
  for (auto it = totals.begin(); it != totals.end();) {
    it = it->second == 0 ? totals.erase(it) : std::next(it);
  }
  return totals;
}

bool is_applicable(const Mixture& mixture, const Reaction& reaction) {
  for (const auto& t : reaction.reactants) {
    if (!is_present(mixture.amount(t.species))) return false;
  }
  return true;
}

const Reaction* find_applicable(const Mixture& mixture, const ReactionDatabase& db) {
  for (const auto& r : db.reactions()) {
    if (is_applicable(mixture, r)) return &r;
  }
  return nullptr;
}

namespace {

void require_applicable(const Mixture& mixture, const Reaction& reaction) {
  if (!is_applicable(mixture, reaction)) {
    throw Error(ErrorCode::not_applicable,
                "reaction " + std::to_string(reaction.id) + " is not applicable to the mixture");
  }
}

}  // namespace

Extraction extract(const Mixture& mixture, const Reaction& reaction) {
  require_applicable(mixture, reaction);
  Extraction out;
  for (const auto& [name, n] : mixture.amounts) {
    if (!is_present(n)) continue;
    (reaction.reactant_coefficient(name) ? out.reacting : out.spectating).emplace(name, n);
  }
  return out;
}

Rational reaction_quantity(const Mixture& mixture, const Reaction& reaction) {
  require_applicable(mixture, reaction);
  std::optional<Rational> limit;
  for (const auto& t : reaction.reactants) {
    Rational ratio = mixture.amount(t.species) / t.coefficient;
    if (!limit || ratio < *limit) limit = ratio;
  }
  return *limit;
}

std::pair<Mixture, ResolutionStep> apply_reaction(const Mixture& mixture, const Reaction& reaction,
                                                  const Rational& quantity) {
  if (quantity < 0) throw Error(ErrorCode::invalid_argument, "negative reaction quantity");
  if (quantity > 0 && quantity > reaction_quantity(mixture, reaction)) {
    throw Error(ErrorCode::excess_quantity,
                "quantity exceeds the limiting reagent for reaction " + std::to_string(reaction.id));
  }
  Mixture next = mixture;
  ResolutionStep step;
  step.reaction_id = reaction.id;
  step.quantity = quantity;
  for (const auto& t : reaction.reactants) {
    Rational used = quantity * t.coefficient;
    step.consumed[t.species] = used;
    Rational& slot = next.amounts[t.species];
    slot -= used;
    if (slot == 0) next.amounts.erase(t.species);
  }
  for (const auto& t : reaction.products) {
    Rational made = quantity * t.coefficient;
    step.produced[t.species] = made;
    if (made != 0) next.amounts[t.species] += made;
  }
  if (reaction.enthalpy_per_equation) {
    step.heat_released_kj = -(to_double(quantity) * *reaction.enthalpy_per_equation);
  }
  return {std::move(next), std::move(step)};
}

ResolutionReport resolve(const Mixture& mixture, const ReactionDatabase& db) {
  if (!(mixture.volume_l > 0)) throw Error(ErrorCode::invalid_volume, "mixture volume must be positive");
  Rational charge = net_charge(mixture, db);
  if (charge != 0) {
    throw Error(ErrorCode::charge_imbalance,
                "input mixture is not charge-balanced (net " + to_exact_string(charge) + ")");
  }
  ResolutionReport report;
  report.initial = mixture;
  Mixture current = mixture;
  std::set<std::string> consumed;
  const std::size_t cap = 10 * db.reactions().size();
  std::size_t iterations = 0;
  while (const Reaction* r = find_applicable(current, db)) {
    if (++iterations > cap) {
      throw Error(ErrorCode::non_termination,
                  "cascade exceeded " + std::to_string(cap) + " iterations");
    }
    Rational n = reaction_quantity(current, *r);
    auto [next, step] = apply_reaction(current, *r, n);
    for (const auto& [name, _] : step.consumed) consumed.insert(name);
    if (step.heat_released_kj) report.total_heat_kj += *step.heat_released_kj;
    report.steps.push_back(std::move(step));
    current = std::move(next);
  }
  for (const auto& name : mixture.present_species()) {
    if (!consumed.count(name)) report.spectators.insert(name);
  }
  report.final = std::move(current);
  return report;
}

Mixture replay(const Mixture& initial, const std::vector<ResolutionStep>& steps) {
  Mixture m = initial;
  for (const auto& step : steps) {
    for (const auto& [name, n] : step.consumed) {
      m.amounts[name] -= n;
      if (m.amounts[name] == 0) m.amounts.erase(name);
    }
    for (const auto& [name, n] : step.produced) {
      if (n != 0) m.amounts[name] += n;
    }
  }
  return m;
}

namespace {

json amounts_json(const Amounts& amounts) {
  json out = json::object();
  for (const auto& [name, n] : amounts) out[name] = to_double(n);
  return out;
}

}  // namespace

json to_json(const Mixture& mixture) {
  return json{{"amounts", amounts_json(mixture.amounts)},
              {"volume_l", to_double(mixture.volume_l)},
              {"temperature_c", mixture.temperature_c}};
}

json to_json(const ResolutionStep& step, const ReactionDatabase& db) {
  json j;
  j["reaction_id"] = step.reaction_id;
  if (const auto* r = db.find_reaction(step.reaction_id)) {
    j["equation"] = format_equation(*r);
    j["type"] = reaction_type_name(r->type);
  }
  j["N"] = to_double(step.quantity);
  j["consumed"] = amounts_json(step.consumed);
  j["produced"] = amounts_json(step.produced);
  j["heat_released_kj"] = step.heat_released_kj ? json(*step.heat_released_kj) : json(nullptr);
  return j;
}

json to_json(const ResolutionReport& report, const ReactionDatabase& db) {
  json steps = json::array();
  for (const auto& s : report.steps) steps.push_back(to_json(s, db));
  return json{{"initial", to_json(report.initial)},
              {"steps", std::move(steps)},
              {"final", to_json(report.final)},
              {"spectators", report.spectators},
              {"total_heat_kj", report.total_heat_kj}};
}

DissociationTable DissociationTable::load(const std::filesystem::path& file,
                                          const ReactionDatabase& db) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorCode::io_error, "cannot open " + file.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::parse_error, file.string() + ": " + e.what());
  }
  std::map<std::string, std::map<std::string, int>> entries;
  for (const auto& [compound, ions] : j.items()) {
    auto& row = entries[compound];
    int charge = 0;
    for (const auto& [ion, count] : ions.items()) {
      const auto& s = db.species_at(ion);
      row[ion] = count.get<int>();
      if (row[ion] <= 0) {
        throw Error(ErrorCode::validation_failed, "dissociation of " + compound + ": non-positive count");
      }
      charge += row[ion] * s.charge;
    }
    if (charge != 0) {
      throw Error(ErrorCode::validation_failed, "dissociation of " + compound + " is not neutral");
    }
  }
  return DissociationTable(std::move(entries));
}

Amounts DissociationTable::expand(const std::string& name, const Rational& moles,
                                  const ReactionDatabase& db) const {
  if (moles < 0) throw Error(ErrorCode::invalid_argument, "negative amount for " + name);
  Amounts out;
  if (auto canonical = db.canonical_name(name)) {
    if (moles != 0) out[*canonical] = moles;
    return out;
  }
  auto it = entries_.find(name);
  if (it == entries_.end()) throw Error(ErrorCode::unknown_species, "unknown species or compound '" + name + "'");
  if (moles == 0) return out;
  for (const auto& [ion, count] : it->second) out[ion] += moles * count;
  return out;
}

Amounts DissociationTable::expand(const std::vector<std::pair<std::string, Rational>>& items,
                                  const ReactionDatabase& db) const {
  Amounts total;
  for (const auto& [name, moles] : items) {
    for (const auto& [ion, n] : expand(name, moles, db)) total[ion] += n;
  }
  return total;
}

}  // namespace reactsim
