#include "reactsim/chemdb.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace reactsim {

using nlohmann::json;
using nlohmann::ordered_json;

std::string_view state_code(PhysicalState state) {
  switch (state) {
    case PhysicalState::solid: return "s";
    case PhysicalState::liquid: return "l";
    case PhysicalState::gas: return "g";
    case PhysicalState::aqueous: return "aq";
  }
  return "aq";
}

PhysicalState parse_state(std::string_view code) {
  if (code == "s") return PhysicalState::solid;
  if (code == "l") return PhysicalState::liquid;
  if (code == "g") return PhysicalState::gas;
  if (code == "aq") return PhysicalState::aqueous;
  throw Error(ErrorCode::validation_failed, "invalid state '" + std::string(code) + "'");
}

std::string_view reaction_type_name(ReactionType type) {
  switch (type) {
    case ReactionType::acid_base: return "AcidBase";
    case ReactionType::double_displacement: return "DoubleDisplacement";
    case ReactionType::redox: return "Redox";
    case ReactionType::complexation: return "Complexation";
  }
  return "AcidBase";
}

ReactionType parse_reaction_type(std::string_view name) {
  for (auto t : {ReactionType::acid_base, ReactionType::double_displacement, ReactionType::redox,
                 ReactionType::complexation}) {
    if (reaction_type_name(t) == name) return t;
  }
  throw Error(ErrorCode::validation_failed, "invalid reaction type '" + std::string(name) + "'");
}

namespace {

const Rational* find_coefficient(const std::vector<Term>& terms, std::string_view species) {
  for (const auto& t : terms) {
    if (t.species == species) return &t.coefficient;
  }
  return nullptr;
}

std::string format_side(const std::vector<Term>& terms) {
  std::string out;
  for (const auto& t : terms) {
    if (!out.empty()) out += " + ";
    if (t.coefficient != 1) out += to_exact_string(t.coefficient);
    out += t.species;
  }
  return out;
}

std::string signed_string(const Rational& value) {
  return (value > 0 ? "+" : "") + to_exact_string(value);
}

Rational read_coefficient(const ordered_json& value, int reaction_id) {
  Rational c;
  if (value.is_number_integer()) {
    c = Rational(value.get<std::int64_t>());
  } else if (value.is_number()) {
    c = rational_from_double(value.get<double>());
  } else if (value.is_string()) {
    c = parse_decimal(value.get<std::string>());
  } else {
    throw Error(ErrorCode::validation_failed,
                "reaction " + std::to_string(reaction_id) + ": coefficient must be a number");
  }
  if (c <= 0) {
    throw Error(ErrorCode::validation_failed,
                "reaction " + std::to_string(reaction_id) + ": coefficient must be positive");
  }
  return c;
}

std::vector<Term> read_side(const ordered_json& side, int reaction_id) {
  if (!side.is_object() || side.empty()) {
    throw Error(ErrorCode::validation_failed,
                "reaction " + std::to_string(reaction_id) + ": empty reactant or product set");
  }
  std::vector<Term> terms;
  for (const auto& [name, coeff] : side.items()) {
    terms.push_back({name, read_coefficient(coeff, reaction_id)});
  }
  return terms;
}

ChemicalSpecies read_species(const json& row) {
  ChemicalSpecies s;
  try {
    s.name = row.at("name").get<std::string>();
    s.charge = row.at("charge").get<int>();
    const auto& h = row.at("enthalpy_kj_per_mol");
    if (!h.is_null()) s.formation_enthalpy = h.get<double>();
    const auto& color = row.at("color_rgb");
    if (!color.is_null()) {
      if (!color.is_array() || color.size() != 3) {
        throw Error(ErrorCode::validation_failed, "species '" + s.name + "': color_rgb needs 3 channels");
      }
      std::array<int, 3> ch{};
      for (std::size_t i = 0; i < 3; ++i) {
        ch[i] = color[i].get<int>();
        if (ch[i] < 0 || ch[i] > 255) {
          throw Error(ErrorCode::validation_failed, "species '" + s.name + "': color channel out of range");
        }
      }
      s.color = RGB{static_cast<std::uint8_t>(ch[0]), static_cast<std::uint8_t>(ch[1]),
                    static_cast<std::uint8_t>(ch[2])};
    }
    s.state = parse_state(row.at("state").get<std::string>());
    if (row.contains("opacity_constant")) s.opacity_constant = row.at("opacity_constant").get<double>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::validation_failed, std::string("species row: ") + e.what());
  }
  if (!(s.opacity_constant > 0)) {
    throw Error(ErrorCode::validation_failed, "species '" + s.name + "': opacity_constant must be positive");
  }
  ParsedFormula parsed = parse_formula(s.name);
  if (parsed.charge != s.charge) {
    throw Error(ErrorCode::validation_failed,
                "species '" + s.name + "': stored charge " + std::to_string(s.charge) +
                    " differs from formula charge " + std::to_string(parsed.charge));
  }
  s.composition = std::move(parsed.composition);
  return s;
}

std::vector<std::string> alias_spellings(const std::string& name) {
  auto strip = [](std::string s, std::string_view chars) {
    s.erase(std::remove_if(s.begin(), s.end(),
                           [&](char c) { return chars.find(c) != std::string_view::npos; }),
            s.end());
    return s;
  };
  return {strip(name, "^"), strip(name, "[]"), strip(name, "^[]")};
}

std::string describe_failures(const std::vector<std::pair<int, std::vector<Violation>>>& failures) {
  std::string msg = "unbalanced reactions:";
  for (const auto& [id, violations] : failures) {
    msg += " reaction " + std::to_string(id) + " (";
    for (std::size_t i = 0; i < violations.size(); ++i) {
      msg += (i ? "; " : "") + violations[i].message;
    }
    msg += ")";
  }
  return msg;
}

}  // namespace

ReactionValidationError::ReactionValidationError(
    std::vector<std::pair<int, std::vector<Violation>>> failures)
    : Error(ErrorCode::validation_failed, describe_failures(failures)),
      failures_(std::move(failures)) {}

const Rational* Reaction::reactant_coefficient(std::string_view species) const {
  return find_coefficient(reactants, species);
}

const Rational* Reaction::product_coefficient(std::string_view species) const {
  return find_coefficient(products, species);
}

std::string format_equation(const Reaction& reaction) {
  return format_side(reaction.reactants) + " -> " + format_side(reaction.products);
}

Reaction reversed(const Reaction& reaction) {
  Reaction r = reaction;
  std::swap(r.reactants, r.products);
  r.enthalpy_per_equation.reset();
  r.enthalpy_override.reset();
  return r;
}

const ChemicalSpecies* ReactionDatabase::find_species(std::string_view name) const {
  auto it = species_.find(std::string(name));
  return it == species_.end() ? nullptr : &it->second;
}

const ChemicalSpecies& ReactionDatabase::species_at(std::string_view name) const {
  if (const auto* s = find_species(name)) return *s;
  throw Error(ErrorCode::unknown_species, "unknown species '" + std::string(name) + "'");
}

const Reaction* ReactionDatabase::find_reaction(int id) const {
  for (const auto& r : reactions_) {
    if (r.id == id) return &r;
  }
  return nullptr;
}

std::optional<std::string> ReactionDatabase::canonical_name(std::string_view name) const {
  if (species_.count(std::string(name))) return std::string(name);
  auto it = aliases_.find(std::string(name));
  if (it == aliases_.end() || it->second.empty()) return std::nullopt;
  return it->second;
}

std::vector<Violation> validate_reaction(const Reaction& reaction, const ReactionDatabase& db) {
  std::vector<Violation> out;
  Rational charge_lhs = 0, charge_rhs = 0;
  std::map<std::string, Rational> elements_lhs, elements_rhs;
  auto tally = [&](const std::vector<Term>& terms, Rational& charge,
                   std::map<std::string, Rational>& elements) {
    for (const auto& t : terms) {
      const auto& s = db.species_at(t.species);
      charge += t.coefficient * s.charge;
      for (const auto& [el, n] : s.composition) elements[el] += t.coefficient * n;
    }
  };
  tally(reaction.reactants, charge_lhs, elements_lhs);
  tally(reaction.products, charge_rhs, elements_rhs);

  if (charge_lhs != charge_rhs) {
    out.push_back({Violation::Kind::charge, "", charge_lhs, charge_rhs,
                   "charge " + signed_string(charge_lhs) + " vs " + signed_string(charge_rhs)});
  }
  std::set<std::string> symbols;
  for (const auto& [el, _] : elements_lhs) symbols.insert(el);
  for (const auto& [el, _] : elements_rhs) symbols.insert(el);
  for (const auto& el : symbols) {
    Rational l = elements_lhs.count(el) ? elements_lhs[el] : Rational(0);
    Rational r = elements_rhs.count(el) ? elements_rhs[el] : Rational(0);
    if (l != r) {
      out.push_back({Violation::Kind::element, el, l, r,
                     "element " + el + " " + to_exact_string(l) + " vs " + to_exact_string(r)});
    }
  }
  for (const auto& t : reaction.reactants) {
    if (reaction.product_coefficient(t.species)) {
      out.push_back({Violation::Kind::overlap, t.species, 0, 0,
                     "species " + t.species + " appears on both sides"});
    }
  }
  return out;
}

std::optional<double> reaction_enthalpy(const Reaction& reaction, const ReactionDatabase& db) {
  auto side_sum = [&](const std::vector<Term>& terms) -> std::optional<double> {
    double sum = 0.0;
    for (const auto& t : terms) {
      const auto* s = db.find_species(t.species);
      if (!s || !s->formation_enthalpy) return std::nullopt;
      sum += to_double(t.coefficient) * *s->formation_enthalpy;
    }
    return sum;
  };
  auto products = side_sum(reaction.products);
  auto reactants = side_sum(reaction.reactants);
  if (!products || !reactants) return std::nullopt;
  return *products - *reactants;
}

ReactionDatabase build_database(const json& species, const ordered_json& reactions,
                                const json* errata) {
  ReactionDatabase db;
  if (!species.is_array()) throw Error(ErrorCode::validation_failed, "species source must be an array");
  if (!reactions.is_array()) throw Error(ErrorCode::validation_failed, "reactions source must be an array");

  for (const auto& row : species) {
    ChemicalSpecies s = read_species(row);
    ++db.species_rows_;
    auto [it, inserted] = db.species_.emplace(s.name, s);
    if (!inserted && !(it->second == s)) {
      throw Error(ErrorCode::duplicate_species, "duplicate species '" + s.name + "' with conflicting data");
    }
  }

  if (errata) {
    if (!errata->is_array()) throw Error(ErrorCode::validation_failed, "errata source must be an array");
    for (const auto& fix : *errata) {
      const std::string name = fix.at("name").get<std::string>();
      auto it = db.species_.find(name);
      if (it == db.species_.end()) {
        throw Error(ErrorCode::unknown_species, "errata names unknown species '" + name + "'");
      }
      if (fix.contains("state")) it->second.state = parse_state(fix.at("state").get<std::string>());
      if (fix.contains("opacity_constant")) it->second.opacity_constant = fix.at("opacity_constant").get<double>();
    }
  }

  std::set<int> ids;
  std::vector<std::pair<int, std::vector<Violation>>> failures;
  for (const auto& row : reactions) {
    Reaction r;
    try {
      r.id = row.at("id").get<int>();
      if (r.id <= 0) throw Error(ErrorCode::validation_failed, "reaction ids must be positive");
      r.type = parse_reaction_type(row.at("type").get<std::string>());
      r.reactants = read_side(row.at("reactants"), r.id);
      r.products = read_side(row.at("products"), r.id);
      if (row.contains("enthalpy_override") && !row.at("enthalpy_override").is_null()) {
        r.enthalpy_override = row.at("enthalpy_override").get<double>();
      }
      if (row.contains("rate_constant")) {
        r.rate_constant = row.at("rate_constant").get<double>();
        if (!(*r.rate_constant > 0)) {
          throw Error(ErrorCode::validation_failed,
                      "reaction " + std::to_string(r.id) + ": rate_constant must be positive");
        }
      }
      if (row.contains("note")) r.note = row.at("note").get<std::string>();
    } catch (const ordered_json::exception& e) {
      throw Error(ErrorCode::validation_failed, std::string("reaction row: ") + e.what());
    }
    if (!ids.insert(r.id).second) {
      throw Error(ErrorCode::duplicate_reaction, "duplicate reaction id " + std::to_string(r.id));
    }
    for (const auto* side : {&r.reactants, &r.products}) {
      for (const auto& t : *side) {
        if (!db.find_species(t.species)) {
          throw Error(ErrorCode::unknown_species, "reaction " + std::to_string(r.id) +
                                                      " references unknown species '" + t.species + "'");
        }
      }
    }
    auto violations = validate_reaction(r, db);
    if (!violations.empty()) failures.emplace_back(r.id, std::move(violations));
    r.enthalpy_per_equation = r.enthalpy_override ? r.enthalpy_override : reaction_enthalpy(r, db);
    db.reactions_.push_back(std::move(r));
  }
  if (!failures.empty()) throw ReactionValidationError(std::move(failures));

  // Alternate spellings; an empty target marks an ambiguous alias.
  for (const auto& [name, _] : db.species_) {
    for (const auto& alias : alias_spellings(name)) {
      if (alias == name || db.species_.count(alias)) continue;
      auto [it, inserted] = db.aliases_.emplace(alias, name);
      if (!inserted && it->second != name) it->second.clear();
    }
  }
  return db;
}

namespace {

template <typename Json>
Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_error, "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const typename Json::parse_error& e) {
    throw Error(ErrorCode::parse_error, path.string() + ": " + e.what());
  }
}

}  // namespace

ReactionDatabase load_database(const std::filesystem::path& species_file,
                               const std::filesystem::path& reactions_file,
                               const std::optional<std::filesystem::path>& errata_file) {
  auto species = read_json_file<json>(species_file);
  auto reactions = read_json_file<ordered_json>(reactions_file);
  if (errata_file) {
    auto errata = read_json_file<json>(*errata_file);
    return build_database(species, reactions, &errata);
  }
  return build_database(species, reactions, nullptr);
}

json to_json(const ChemicalSpecies& s) {
  json j;
  j["name"] = s.name;
  j["charge"] = s.charge;
  j["enthalpy_kj_per_mol"] = s.formation_enthalpy ? json(*s.formation_enthalpy) : json(nullptr);
  j["color_rgb"] = s.color ? json::array({s.color->r, s.color->g, s.color->b}) : json(nullptr);
  j["state"] = state_code(s.state);
  j["opacity_constant"] = s.opacity_constant;
  j["composition"] = s.composition;
  return j;
}

json to_json(const Reaction& r) {
  json j;
  j["id"] = r.id;
  j["type"] = reaction_type_name(r.type);
  j["equation"] = format_equation(r);
  auto side = [](const std::vector<Term>& terms) {
    json out = json::object();
    for (const auto& t : terms) {
      out[t.species] = boost::multiprecision::denominator(t.coefficient) == 1 ? json(to_double(t.coefficient))
                                                        : json(to_exact_string(t.coefficient));
    }
    return out;
  };
  j["reactants"] = side(r.reactants);
  j["products"] = side(r.products);
  j["enthalpy_kj_per_mol"] = r.enthalpy_per_equation ? json(*r.enthalpy_per_equation) : json(nullptr);
  if (r.rate_constant) j["rate_constant"] = *r.rate_constant;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

}  // namespace reactsim
