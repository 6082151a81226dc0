#pragma once

#include "reactsim/chemdb.hpp"
#include "reactsim/engine.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace reactsim {

/// Solvent heat properties. Defaults describe water.
struct SolventParams {
  double specific_heat = 4.18;  // J/(g K)
  double density = 1000.0;      // g/L
};

struct RGBA {
  std::uint8_t r = 255, g = 255, b = 255;
  double alpha = 0.0;

  friend bool operator==(const RGBA&, const RGBA&) = default;
};

struct ColorEntry {
  RGBA color;
  PhysicalState state = PhysicalState::aqueous;
};

struct AcidBaseState {
  double c_h = 0.0;   // mol/L
  double c_oh = 0.0;  // mol/L
  double kw = 0.0;
  double ph = 7.0;
};

double concentration(double moles, double volume_l);

/// Q = N x dH (kJ, signed; negative is exothermic).
inline double enthalpy_total(double quantity, double enthalpy_per_equation) {
  return quantity * enthalpy_per_equation;
}

/// Temperature rise in K from the report's released heat spread over
/// `volume_l` of solvent.
double temperature_change(double heat_released_kj, const SolventParams& solvent, double volume_l);
double temperature_change(const ResolutionReport& report, const SolventParams& solvent, double volume_l);

/// a = 1 - 10^(-K c)
double opacity(double concentration_mol_l, double opacity_constant);

/// Subtractive (complement-average) mixing with state priority: gas entries
/// are ignored, any coloured solid makes the result turbid (alpha 1), and
/// otherwise liquid/aqueous entries are weighted by their alpha.
RGBA mix_colors(std::span<const ColorEntry> entries);

/// Color entries for every present species of a mixture.
std::vector<ColorEntry> color_entries(const std::map<std::string, double>& amounts, double volume_l,
                                      const ReactionDatabase& db);
RGBA mixture_color(const std::map<std::string, double>& amounts, double volume_l,
                   const ReactionDatabase& db);
RGBA mixture_color(const Mixture& mixture, const ReactionDatabase& db);

/// pKw(T) by linear interpolation between table nodes.
class KwTable {
 public:
  KwTable() = default;
  explicit KwTable(std::vector<std::pair<double, double>> nodes);  // (T degC, pKw), ascending

  static KwTable load(const std::filesystem::path& csv);

  double pkw_at(double temperature_c) const;  // throws out_of_range
  double kw_at(double temperature_c) const;
  double min_temperature() const { return nodes_.front().first; }
  double max_temperature() const { return nodes_.back().first; }
  const std::vector<std::pair<double, double>>& nodes() const { return nodes_; }

 private:
  std::vector<std::pair<double, double>> nodes_;
};

/// Solves c_H^2 - c_net c_H - Kw = 0 where c_net = c(H+) - c(OH-) from strong
/// electrolytes, choosing the numerically stable root on each side.
AcidBaseState acid_base_state(double net_strong_acid_mol_l, double kw);

/// pH of a resolved mixture. Throws unresolved_mixture when both H+ and OH-
/// are present.
AcidBaseState ph_of(const Mixture& mixture, const KwTable& kw, double temperature_c);
AcidBaseState ph_of(const std::map<std::string, double>& amounts, double volume_l, const KwTable& kw,
                    double temperature_c);

/// Like ph_of but nets H+ against OH- instead of rejecting; used for
/// interpolated mid-states where both are still present.
AcidBaseState net_ph_of(const std::map<std::string, double>& amounts, double volume_l,
                        const KwTable& kw, double temperature_c);

std::map<std::string, double> to_double_amounts(const Amounts& amounts);

nlohmann::json to_json(const RGBA& color);
nlohmann::json to_json(const AcidBaseState& state);

}  // namespace reactsim
