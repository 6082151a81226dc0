#include "reactsim/observables.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <tuple>

namespace reactsim {

using nlohmann::json;

double concentration(double moles, double volume_l) {
  if (!(volume_l > 0)) throw Error(ErrorCode::invalid_volume, "volume must be positive");
  if (moles < 0) throw Error(ErrorCode::invalid_argument, "negative amount");
  return moles / volume_l;
}

double temperature_change(double heat_released_kj, const SolventParams& solvent, double volume_l) {
  if (!(volume_l > 0)) throw Error(ErrorCode::invalid_volume, "volume must be positive");
  if (!(solvent.specific_heat > 0) || !(solvent.density > 0)) {
    throw Error(ErrorCode::invalid_argument, "solvent parameters must be positive");
  }
  return heat_released_kj * 1000.0 / (solvent.specific_heat * solvent.density * volume_l);
}

double temperature_change(const ResolutionReport& report, const SolventParams& solvent,
                          double volume_l) {
  return temperature_change(report.total_heat_kj, solvent, volume_l);
}

double opacity(double concentration_mol_l, double opacity_constant) {
  if (concentration_mol_l < 0) throw Error(ErrorCode::invalid_argument, "negative concentration");
  if (!(opacity_constant > 0)) throw Error(ErrorCode::invalid_argument, "opacity constant must be positive");
  // 1 - 10^-x, accurate for small x
  return -std::expm1(-opacity_constant * concentration_mol_l * std::log(10.0));
}

namespace {

std::uint8_t to_channel(double value) {
  return static_cast<std::uint8_t>(std::clamp(std::lround(value), 0L, 255L));
}

RGBA complement_average(const std::vector<ColorEntry>& entries) {
  double total_alpha = 0.0;
  for (const auto& e : entries) total_alpha += e.color.alpha;
  double dr = 0.0, dg = 0.0, db = 0.0;
  for (const auto& e : entries) {
    const double w = e.color.alpha / total_alpha;
    dr += w * (255.0 - e.color.r);
    dg += w * (255.0 - e.color.g);
    db += w * (255.0 - e.color.b);
  }
  return RGBA{to_channel(255.0 - dr), to_channel(255.0 - dg), to_channel(255.0 - db), 0.0};
}

}  // namespace

RGBA mix_colors(std::span<const ColorEntry> entries) {
  std::vector<ColorEntry> solids, liquids;
  for (const auto& e : entries) {
    if (e.color.alpha < 0 || e.color.alpha > 1) {
      throw Error(ErrorCode::invalid_argument, "alpha outside [0, 1]");
    }
    if (e.color.alpha == 0) continue;
    switch (e.state) {
      case PhysicalState::gas: break;
      case PhysicalState::solid: solids.push_back(e); break;
      case PhysicalState::liquid:
      case PhysicalState::aqueous: liquids.push_back(e); break;
    }
  }
  // Fixed summation order makes the result independent of input order.
  auto key = [](const ColorEntry& e) {
    return std::make_tuple(e.color.r, e.color.g, e.color.b, e.color.alpha);
  };
  auto by_key = [&](const ColorEntry& a, const ColorEntry& b) { return key(a) < key(b); };
  std::sort(solids.begin(), solids.end(), by_key);
  std::sort(liquids.begin(), liquids.end(), by_key);

  if (!solids.empty()) {
    RGBA out = complement_average(solids);
    out.alpha = 1.0;
    return out;
  }
  if (liquids.empty()) return RGBA{};
  RGBA out = complement_average(liquids);
  double transmitted = 1.0;
  for (const auto& e : liquids) transmitted *= 1.0 - e.color.alpha;
  out.alpha = 1.0 - transmitted;
  return out;
}

std::vector<ColorEntry> color_entries(const std::map<std::string, double>& amounts, double volume_l,
                                      const ReactionDatabase& db) {
  std::vector<ColorEntry> out;
  for (const auto& [name, n] : amounts) {
    if (!(n > kPresenceThreshold)) continue;
    const auto& s = db.species_at(name);
    ColorEntry e;
    e.state = s.state;
    if (s.color) {
      e.color = RGBA{s.color->r, s.color->g, s.color->b,
                     opacity(concentration(n, volume_l), s.opacity_constant)};
    }
    out.push_back(e);
  }
  return out;
}

RGBA mixture_color(const std::map<std::string, double>& amounts, double volume_l,
                   const ReactionDatabase& db) {
  return mix_colors(color_entries(amounts, volume_l, db));
}

RGBA mixture_color(const Mixture& mixture, const ReactionDatabase& db) {
  return mixture_color(to_double_amounts(mixture.amounts), to_double(mixture.volume_l), db);
}

KwTable::KwTable(std::vector<std::pair<double, double>> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.size() < 2) throw Error(ErrorCode::validation_failed, "Kw table needs at least two nodes");
  for (std::size_t i = 1; i < nodes_.size(); ++i) {
    if (!(nodes_[i].first > nodes_[i - 1].first)) {
      throw Error(ErrorCode::validation_failed, "Kw table temperatures must increase");
    }
  }
}

KwTable KwTable::load(const std::filesystem::path& csv) {
  std::ifstream in(csv);
  if (!in) throw Error(ErrorCode::io_error, "cannot open " + csv.string());
  std::vector<std::pair<double, double>> nodes;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    std::istringstream row(line);
    double t = 0, pkw = 0;
    char comma = 0;
    if (!(row >> t >> comma >> pkw) || comma != ',') {
      throw Error(ErrorCode::parse_error, csv.string() + ": bad row '" + line + "'");
    }
    nodes.emplace_back(t, pkw);
  }
  return KwTable(std::move(nodes));
}

double KwTable::pkw_at(double temperature_c) const {
  if (nodes_.empty()) throw Error(ErrorCode::out_of_range, "empty Kw table");
  if (!(temperature_c >= min_temperature() && temperature_c <= max_temperature())) {
    std::ostringstream msg;
    msg << "temperature " << temperature_c << " C outside Kw table range";
    throw Error(ErrorCode::out_of_range, msg.str());
  }
  auto hi = std::lower_bound(nodes_.begin(), nodes_.end(), temperature_c,
                             [](const auto& node, double t) { return node.first < t; });
  if (hi->first == temperature_c) return hi->second;
  auto lo = std::prev(hi);
  const double f = (temperature_c - lo->first) / (hi->first - lo->first);
  return lo->second + f * (hi->second - lo->second);
}

double KwTable::kw_at(double temperature_c) const { return std::pow(10.0, -pkw_at(temperature_c)); }

AcidBaseState acid_base_state(double net_strong_acid_mol_l, double kw) {
  AcidBaseState s;
  s.kw = kw;
  const double root = std::sqrt(net_strong_acid_mol_l * net_strong_acid_mol_l + 4.0 * kw);
  if (net_strong_acid_mol_l >= 0) {
    s.c_h = 0.5 * (net_strong_acid_mol_l + root);
    s.c_oh = kw / s.c_h;
  } else {
    s.c_oh = 0.5 * (-net_strong_acid_mol_l + root);
    s.c_h = kw / s.c_oh;
  }
  s.ph = -std::log10(s.c_h);
  return s;
}

namespace {

double lookup(const std::map<std::string, double>& amounts, const char* name) {
  auto it = amounts.find(name);
  return it == amounts.end() ? 0.0 : it->second;
}

}  // namespace

AcidBaseState ph_of(const std::map<std::string, double>& amounts, double volume_l, const KwTable& kw,
                    double temperature_c) {
  const double h = lookup(amounts, "H+");
  const double oh = lookup(amounts, "OH-");
  if (h > kPresenceThreshold && oh > kPresenceThreshold) {
    throw Error(ErrorCode::unresolved_mixture, "both H+ and OH- present; resolve the mixture first");
  }
  return net_ph_of(amounts, volume_l, kw, temperature_c);
}

AcidBaseState ph_of(const Mixture& mixture, const KwTable& kw, double temperature_c) {
  return ph_of(to_double_amounts(mixture.amounts), to_double(mixture.volume_l), kw, temperature_c);
}

AcidBaseState net_ph_of(const std::map<std::string, double>& amounts, double volume_l,
                        const KwTable& kw, double temperature_c) {
  double h = lookup(amounts, "H+");
  double oh = lookup(amounts, "OH-");
  if (!(h > kPresenceThreshold)) h = 0.0;
  if (!(oh > kPresenceThreshold)) oh = 0.0;
  const double net = concentration(h, volume_l) - concentration(oh, volume_l);
  return acid_base_state(net, kw.kw_at(temperature_c));
}

std::map<std::string, double> to_double_amounts(const Amounts& amounts) {
  std::map<std::string, double> out;
  for (const auto& [name, n] : amounts) out[name] = to_double(n);
  return out;
}

json to_json(const RGBA& c) { return json{{"r", c.r}, {"g", c.g}, {"b", c.b}, {"a", c.alpha}}; }

json to_json(const AcidBaseState& s) {
  return json{{"pH", s.ph}, {"c_H", s.c_h}, {"c_OH", s.c_oh}, {"Kw", s.kw}};
}

}  // namespace reactsim
