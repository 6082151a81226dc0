#include "reactsim/kinetics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

namespace reactsim {

using nlohmann::json;

namespace {

void check_sampling(double dt, double horizon) {
  if (!(dt > 0) || !std::isfinite(dt)) throw Error(ErrorCode::invalid_argument, "time step must be positive");
  if (!(horizon >= dt) || !std::isfinite(horizon)) {
    throw Error(ErrorCode::invalid_argument, "horizon must be at least one time step");
  }
}

std::set<std::string> species_union(const std::map<std::string, double>& a,
                                    const std::map<std::string, double>& b) {
  std::set<std::string> out;
  for (const auto& [name, _] : a) out.insert(name);
  for (const auto& [name, _] : b) out.insert(name);
  return out;
}

double get(const std::map<std::string, double>& m, const std::string& key) {
  auto it = m.find(key);
  return it == m.end() ? 0.0 : it->second;
}

std::map<std::string, double> relax(const std::map<std::string, double>& from,
                                    const std::map<std::string, double>& to, double decay) {
  std::map<std::string, double> out;
  for (const auto& name : species_union(from, to)) {
    const double target = get(to, name);
    if (decay == 1.0) {
      out[name] = get(from, name);
    } else if (decay == 0.0) {
      out[name] = target;
    } else {
      out[name] = target + (get(from, name) - target) * decay;
    }
  }
  return out;
}

double max_gap(const std::map<std::string, double>& a, const std::map<std::string, double>& b) {
  double gap = 0.0;
  for (const auto& name : species_union(a, b)) gap = std::max(gap, std::abs(get(a, name) - get(b, name)));
  return gap;
}

std::size_t sample_count(double dt, double horizon) {
  return static_cast<std::size_t>(std::floor(horizon / dt * (1.0 + 1e-12)));
}

}  // namespace

std::vector<TrajectoryPoint> trajectory(const Mixture& initial, const Mixture& final,
                                        const RateLaw& law, double dt, double horizon) {
  if (initial.volume_l != final.volume_l) {
    throw Error(ErrorCode::invalid_argument, "initial and final mixtures must share a volume");
  }
  if (!(law.k > 0)) throw Error(ErrorCode::invalid_argument, "rate constant must be positive");
  check_sampling(dt, horizon);

  const auto from = to_double_amounts(initial.amounts);
  const auto to = to_double_amounts(final.amounts);
  std::vector<TrajectoryPoint> points;
  const std::size_t n = sample_count(dt, horizon);
  points.reserve(n + 2);
  for (std::size_t i = 0; i <= n; ++i) {
    TrajectoryPoint p;
    p.t = static_cast<double>(i) * dt;
    p.amounts = relax(from, to, std::exp(-law.k * p.t));
    points.push_back(std::move(p));
  }
  const auto at_horizon = relax(from, to, std::exp(-law.k * horizon));
  if (max_gap(at_horizon, to) > kPresenceThreshold) {
    TrajectoryPoint p;
    p.t = horizon;
    p.amounts = relax(from, to, 0.0);
    p.snapped = true;
    points.push_back(std::move(p));
  }
  return points;
}

Observation observe(const std::map<std::string, double>& amounts, double volume_l,
                    double temperature_c, const ObservableContext& ctx) {
  Observation o;
  o.temperature_c = temperature_c;
  o.color = mixture_color(amounts, volume_l, ctx.db);
  if (temperature_c >= ctx.kw.min_temperature() && temperature_c <= ctx.kw.max_temperature()) {
    o.acid_base = net_ph_of(amounts, volume_l, ctx.kw, temperature_c);
  }
  return o;
}

double net_heat_released_kj(const Amounts& initial, const Amounts& final, const ReactionDatabase& db) {
  std::set<std::string> names;
  for (const auto& [name, _] : initial) names.insert(name);
  for (const auto& [name, _] : final) names.insert(name);
  double enthalpy_change = 0.0;
  for (const auto& name : names) {
    const auto& s = db.species_at(name);
    if (!s.formation_enthalpy) continue;
    auto f = final.find(name);
    auto i = initial.find(name);
    const Rational delta = (f == final.end() ? Rational(0) : f->second) -
                           (i == initial.end() ? Rational(0) : i->second);
    enthalpy_change += to_double(delta) * *s.formation_enthalpy;
  }
  return -enthalpy_change;
}

std::vector<TrajectoryPoint> trajectory_with_observables(const Mixture& initial, const Mixture& final,
                                                         const RateLaw& law, double dt, double horizon,
                                                         const ObservableContext& ctx,
                                                         std::optional<double> heat_released_kj) {
  auto points = trajectory(initial, final, law, dt, horizon);
  const double volume = to_double(initial.volume_l);
  const double heat = heat_released_kj ? *heat_released_kj
                                       : net_heat_released_kj(initial.amounts, final.amounts, ctx.db);
  const double rise = temperature_change(heat, ctx.solvent, volume);
  for (auto& p : points) {
    const double progress = p.snapped ? 1.0 : -std::expm1(-law.k * p.t);
    p.observables = observe(p.amounts, volume, initial.temperature_c + rise * progress, ctx);
  }
  return points;
}

CascadeTrajectory CascadeTrajectory::from_report(const ResolutionReport& report,
                                                 const ReactionDatabase& db,
                                                 const SolventParams& solvent,
                                                 double default_rate_constant,
                                                 double start_temperature_c) {
  CascadeTrajectory out;
  out.volume_l_ = to_double(report.initial.volume_l);
  out.initial_ = to_double_amounts(report.initial.amounts);
  out.initial_temperature_ = start_temperature_c;

  Mixture current = report.initial;
  double temperature = start_temperature_c;
  for (const auto& step : report.steps) {
    Mixture next = replay(current, {step});
    Segment seg;
    seg.reaction_id = step.reaction_id;
    seg.from = to_double_amounts(current.amounts);
    seg.to = to_double_amounts(next.amounts);
    const Reaction* r = db.find_reaction(step.reaction_id);
    seg.k = r && r->rate_constant ? *r->rate_constant : default_rate_constant;
    const double gap = max_gap(seg.from, seg.to);
    seg.duration = gap > kPresenceThreshold ? std::log(gap / kPresenceThreshold) / seg.k : 0.0;
    seg.heat_released_kj = step.heat_released_kj.value_or(0.0);
    seg.temperature_from = temperature;
    temperature += temperature_change(seg.heat_released_kj, solvent, out.volume_l_);
    seg.temperature_to = temperature;
    out.duration_ += seg.duration;
    out.segments_.push_back(std::move(seg));
    current = std::move(next);
  }
  return out;
}

CascadeTrajectory::State CascadeTrajectory::state_at(double t) const {
  State s;
  s.amounts = initial_;
  s.temperature_c = initial_temperature_;
  double start = 0.0;
  for (const auto& seg : segments_) {
    const double end = start + seg.duration;
    if (t >= end) {
      s.amounts = seg.to;
      s.temperature_c = seg.temperature_to;
      s.heat_released_kj += seg.heat_released_kj;
      start = end;
      continue;
    }
    const double decay = std::exp(-seg.k * std::max(t - start, 0.0));
    s.amounts = relax(seg.from, seg.to, decay);
    s.temperature_c = seg.temperature_to + (seg.temperature_from - seg.temperature_to) * decay;
    s.heat_released_kj += seg.heat_released_kj * (1.0 - decay);
    return s;
  }
  return s;
}

std::vector<TrajectoryPoint> CascadeTrajectory::sample(double dt, double from, double until,
                                                       const ObservableContext& ctx) const {
  if (!(dt > 0)) throw Error(ErrorCode::invalid_argument, "time step must be positive");
  std::vector<TrajectoryPoint> out;
  if (until < from) return out;
  const std::size_t n = sample_count(dt, until - from);
  for (std::size_t i = 0; i <= n; ++i) {
    TrajectoryPoint p;
    p.t = from + static_cast<double>(i) * dt;
    State s = state_at(p.t);
    p.amounts = std::move(s.amounts);
    p.observables = observe(p.amounts, volume_l_, s.temperature_c, ctx);
    out.push_back(std::move(p));
  }
  return out;
}

std::string format_number(double value) {
  char buffer[64];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return ec == std::errc() ? std::string(buffer, end) : std::string("nan");
}

void write_trajectory_csv(std::ostream& out, const std::vector<TrajectoryPoint>& points) {
  std::set<std::string> names;
  for (const auto& p : points) {
    for (const auto& [name, _] : p.amounts) names.insert(name);
  }
  out << "t_s";
  for (const auto& name : names) out << ',' << name;
  out << ",pH,temp_c,r,g,b,a\n";
  for (const auto& p : points) {
    out << format_number(p.t);
    for (const auto& name : names) out << ',' << format_number(get(p.amounts, name));
    if (p.observables) {
      const auto& o = *p.observables;
      out << ',' << (o.acid_base ? format_number(o.acid_base->ph) : std::string()) << ','
          << format_number(o.temperature_c) << ',' << int(o.color.r) << ',' << int(o.color.g) << ','
          << int(o.color.b) << ',' << format_number(o.color.alpha);
    } else {
      out << ",,,,,,";
    }
    out << '\n';
  }
}

json to_json(const TrajectoryPoint& p) {
  json j;
  j["t_s"] = p.t;
  j["amounts"] = p.amounts;
  if (p.snapped) j["snapped"] = true;
  if (p.observables) {
    const auto& o = *p.observables;
    j["rgba"] = to_json(o.color);
    j["pH"] = o.acid_base ? json(o.acid_base->ph) : json(nullptr);
    j["temp_c"] = o.temperature_c;
  }
  return j;
}

}  // namespace reactsim
