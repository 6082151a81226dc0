#pragma once

#include "reactsim/engine.hpp"
#include "reactsim/observables.hpp"

#include <nlohmann/json.hpp>

#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace reactsim {

/// Rate law with recorded orders. Evaluation always uses the first-order
/// reduction n(t) = n_final + (n_initial - n_final) e^(-k t).
struct RateLaw {
  double k = 1.0;  // 1/s
  double order_a = 1.0;
  double order_b = 1.0;
};

struct Observation {
  RGBA color;
  std::optional<AcidBaseState> acid_base;  // empty when T is outside the Kw table
  double temperature_c = 25.0;
};

struct TrajectoryPoint {
  double t = 0.0;  // seconds
  std::map<std::string, double> amounts;
  std::optional<Observation> observables;
  bool snapped = false;  // appended final state
};

/// Read-only inputs needed to compute observables.
struct ObservableContext {
  const ReactionDatabase& db;
  const KwTable& kw;
  SolventParams solvent;
};

/// Samples at t = 0, dt, 2dt, ... <= horizon. A snap-to-final point at
/// t = horizon is appended when any species is still further than the
/// presence threshold from its final amount.
std::vector<TrajectoryPoint> trajectory(const Mixture& initial, const Mixture& final,
                                        const RateLaw& law, double dt, double horizon);

/// As trajectory(), with colour, pH and temperature attached to every point.
/// Temperature follows T0 + dT_total (1 - e^(-k t)); when `heat_released_kj`
/// is absent it is derived from the net change in formation enthalpy.
std::vector<TrajectoryPoint> trajectory_with_observables(
    const Mixture& initial, const Mixture& final, const RateLaw& law, double dt, double horizon,
    const ObservableContext& ctx, std::optional<double> heat_released_kj = std::nullopt);

/// Observables of an arbitrary (possibly mid-state) composition.
Observation observe(const std::map<std::string, double>& amounts, double volume_l,
                    double temperature_c, const ObservableContext& ctx);

/// Heat released (kJ) implied by the net composition change, over species
/// with known formation enthalpy.
double net_heat_released_kj(const Amounts& initial, const Amounts& final, const ReactionDatabase& db);

/// Piecewise mid-state model of a resolution cascade. Each step relaxes
/// exponentially and the next step starts once every species of the current
/// one is within the presence threshold of its target.
class CascadeTrajectory {
 public:
  struct Segment {
    int reaction_id = 0;
    std::map<std::string, double> from, to;
    double k = 1.0;
    double duration = 0.0;
    double temperature_from = 25.0, temperature_to = 25.0;
    double heat_released_kj = 0.0;
  };

  struct State {
    std::map<std::string, double> amounts;
    double temperature_c = 25.0;
    double heat_released_kj = 0.0;  // released so far within this cascade
  };

  CascadeTrajectory() = default;

  /// `start_temperature_c` is the pre-reaction (mixed) temperature.
  static CascadeTrajectory from_report(const ResolutionReport& report, const ReactionDatabase& db,
                                       const SolventParams& solvent, double default_rate_constant,
                                       double start_temperature_c);

  double duration() const { return duration_; }
  double volume_l() const { return volume_l_; }
  const std::vector<Segment>& segments() const { return segments_; }

  State state_at(double t) const;

  /// Points at t = from + i dt (i >= 0) up to and including `until`.
  std::vector<TrajectoryPoint> sample(double dt, double from, double until,
                                      const ObservableContext& ctx) const;

 private:
  std::vector<Segment> segments_;
  std::map<std::string, double> initial_;
  double initial_temperature_ = 25.0;
  double volume_l_ = 1.0;
  double duration_ = 0.0;
};

/// CSV with header `t_s,<species...>,pH,temp_c,r,g,b,a`; species sorted by name.
void write_trajectory_csv(std::ostream& out, const std::vector<TrajectoryPoint>& points);

/// Shortest round-trip decimal form used by CSV and text outputs.
std::string format_number(double value);

nlohmann::json to_json(const TrajectoryPoint& point);

}  // namespace reactsim
