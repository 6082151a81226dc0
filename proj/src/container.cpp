#include "reactsim/container.hpp"

#include <algorithm>
#include <cmath>

namespace reactsim {

using nlohmann::json;

namespace {

json exact_amounts(const Amounts& amounts) {
  json j = json::object();
  for (const auto& [name, n] : amounts) j[name] = to_exact_string(n);
  return j;
}

Amounts parse_exact_amounts(const json& j) {
  Amounts out;
  for (const auto& [name, v] : j.items()) out[name] = parse_decimal(v.get<std::string>());
  return out;
}

Amounts scaled(const Amounts& amounts, const Rational& fraction) {
  Amounts out;
  for (const auto& [name, n] : amounts) {
    Rational moved = n * fraction;
    if (moved != 0) out[name] = moved;
  }
  return out;
}

void subtract(Amounts& from, const Amounts& moved) {
  for (const auto& [name, n] : moved) {
    auto it = from.find(name);
    it->second -= n;
    if (it->second == 0) from.erase(it);
  }
}

void add(Amounts& into, const Amounts& moved) {
  for (const auto& [name, n] : moved) {
    Rational& slot = into[name];
    slot += n;
    if (slot == 0) into.erase(name);
  }
}

void check_positive_volume(const Rational& volume_l) {
  if (volume_l <= 0) throw Error(ErrorCode::invalid_volume, "volume must be positive");
}

json container_json(const Container& c) {
  json j;
  j["id"] = c.id;
  j["volume_l"] = to_exact_string(c.contents.volume_l);
  j["temperature_c"] = c.contents.temperature_c;
  j["amounts"] = exact_amounts(c.contents.amounts);
  j["heat_released_kj"] = c.heat_released_kj;
  if (c.pending) {
    j["pending"] = {{"trajectory_id", c.pending->trajectory_id},
                    {"cursor_s", c.pending->cursor},
                    {"duration_s", c.pending->model.duration()},
                    {"final_amounts", exact_amounts(c.pending->final.amounts)},
                    {"final_temperature_c", c.pending->final.temperature_c}};
  } else {
    j["pending"] = nullptr;
  }
  return j;
}

}  // namespace

double TrajectoryRecord::elapsed(double clock) const {
  const double limit = closed_at ? *closed_at : model.duration();
  return std::clamp(clock - start_clock, 0.0, limit);
}

bool TrajectoryRecord::complete(double clock) const {
  return closed_at.has_value() || clock - start_clock >= model.duration();
}

World::World(std::shared_ptr<const ChemistryContext> ctx) : ctx_(std::move(ctx)) {
  if (!ctx_) throw Error(ErrorCode::invalid_argument, "world needs a chemistry context");
}

const Container& World::container(const std::string& id) const {
  auto it = containers_.find(id);
  if (it == containers_.end()) throw Error(ErrorCode::unknown_container, "unknown container: " + id);
  return it->second;
}

Container& World::mutable_container(const std::string& id) {
  return const_cast<Container&>(std::as_const(*this).container(id));
}

const TrajectoryRecord& World::trajectory(int id) const {
  auto it = trajectories_.find(id);
  if (it == trajectories_.end()) {
    throw Error(ErrorCode::unknown_trajectory, "unknown trajectory: " + std::to_string(id));
  }
  return it->second;
}

HistoryEvent& World::record(const std::string& kind, json detail, std::initializer_list<Container*> involved) {
  HistoryEvent e{log_.size(), clock_, kind, std::move(detail)};
  for (Container* c : involved) {
    if (c) c->history.push_back(e);
  }
  log_.push_back(std::move(e));
  return log_.back();
}

const Container& World::create_container(const std::string& id, const Amounts& amounts,
                                         const Rational& volume_l, double temperature_c) {
  if (id.empty()) throw Error(ErrorCode::invalid_argument, "container id must not be empty");
  if (containers_.count(id)) throw Error(ErrorCode::duplicate_id, "container already exists: " + id);
  if (volume_l < 0) throw Error(ErrorCode::invalid_volume, "volume must not be negative");
  if (!std::isfinite(temperature_c)) throw Error(ErrorCode::invalid_argument, "temperature must be finite");
  Amounts clean;
  for (const auto& [name, n] : amounts) {
    ctx_->db.species_at(name);
    if (n < 0) throw Error(ErrorCode::invalid_argument, "negative amount for " + name);
    if (n != 0) clean[name] = n;
  }
  if (volume_l == 0 && !clean.empty()) {
    throw Error(ErrorCode::invalid_volume, "a container with contents needs a positive volume");
  }
  if (net_charge(clean, ctx_->db) != 0) {
    throw Error(ErrorCode::charge_imbalance, "contents of " + id + " are not charge balanced");
  }

  Container c;
  c.id = id;
  c.contents = Mixture{std::move(clean), volume_l, temperature_c};
  c.solvent = ctx_->solvent;
  auto& stored = containers_.emplace(id, std::move(c)).first->second;
  record("create",
         {{"id", id},
          {"amounts", exact_amounts(stored.contents.amounts)},
          {"volume_l", to_exact_string(volume_l)},
          {"temperature_c", temperature_c}},
         {&stored});
  return stored;
}

const Container& World::create_container_from_names(
    const std::string& id, const std::vector<std::pair<std::string, Rational>>& items,
    const Rational& volume_l, double temperature_c) {
  return create_container(id, ctx_->dissociation.expand(items, ctx_->db), volume_l, temperature_c);
}

void World::commit(Container& c, const std::string& reason) {
  if (!c.pending) return;
  PendingTrajectory p = std::move(*c.pending);
  c.pending.reset();
  c.contents = p.final;
  c.heat_released_kj += p.heat_released_kj;
  auto& rec = trajectories_.at(p.trajectory_id);
  if (p.cursor < p.model.duration()) rec.closed_at = p.cursor;
  record("commit", {{"container", c.id}, {"trajectory_id", p.trajectory_id}, {"reason", reason}}, {&c});
}

PourResult World::pour(const std::string& src_id, const std::string& dst_id, const Rational& volume_l) {
  Container& src = mutable_container(src_id);
  Container& dst = mutable_container(dst_id);
  if (src_id == dst_id) throw Error(ErrorCode::invalid_argument, "cannot pour a container into itself");
  check_positive_volume(volume_l);
  if (volume_l > src.contents.volume_l) {
    throw Error(ErrorCode::insufficient_volume, "cannot pour " + to_exact_string(volume_l) + " L from " +
                                                    src_id + " holding " +
                                                    to_exact_string(src.contents.volume_l) + " L");
  }

  commit(src, "pour");
  commit(dst, "pour");

  const Rational fraction = volume_l / src.contents.volume_l;
  const Amounts moved = scaled(src.contents.amounts, fraction);
  subtract(src.contents.amounts, moved);
  src.contents.volume_l -= volume_l;

  const Rational old_volume = dst.contents.volume_l;
  const Rational new_volume = old_volume + volume_l;
  if (old_volume == 0) {
    dst.contents.temperature_c = src.contents.temperature_c;
  } else {
    const double w = to_double(volume_l / new_volume);
    dst.contents.temperature_c += (src.contents.temperature_c - dst.contents.temperature_c) * w;
  }
  add(dst.contents.amounts, moved);
  dst.contents.volume_l = new_volume;

  record("pour", {{"src", src_id}, {"dst", dst_id}, {"volume_l", to_exact_string(volume_l)}}, {&src, &dst});

  PourResult result;
  result.report = resolve(dst.contents, ctx_->db);
  if (result.report.steps.empty()) return result;

  const double rise = temperature_change(result.report, dst.solvent, to_double(new_volume));
  PendingTrajectory p;
  p.trajectory_id = next_trajectory_id_++;
  p.model = CascadeTrajectory::from_report(result.report, ctx_->db, dst.solvent, ctx_->default_rate_constant,
                                           dst.contents.temperature_c);
  p.final = result.report.final;
  p.final.temperature_c = dst.contents.temperature_c + rise;
  p.heat_released_kj = result.report.total_heat_kj;
  result.trajectory_id = p.trajectory_id;

  json steps = json::array();
  for (const auto& s : result.report.steps) {
    steps.push_back({{"reaction_id", s.reaction_id}, {"quantity", to_exact_string(s.quantity)}});
  }
  record("resolution",
         {{"container", dst_id},
          {"trajectory_id", p.trajectory_id},
          {"steps", std::move(steps)},
          {"heat_released_kj", p.heat_released_kj},
          {"delta_t_k", rise}},
         {&dst});

  trajectories_.emplace(p.trajectory_id, TrajectoryRecord{p.trajectory_id, dst_id, clock_, p.model, {}});
  dst.pending = std::move(p);
  return result;
}

const Container& World::sample(const std::string& src_id, const std::string& new_id, const Rational& volume_l) {
  Container& src = mutable_container(src_id);
  if (new_id.empty()) throw Error(ErrorCode::invalid_argument, "container id must not be empty");
  if (containers_.count(new_id)) throw Error(ErrorCode::duplicate_id, "container already exists: " + new_id);
  check_positive_volume(volume_l);
  if (volume_l > src.contents.volume_l) {
    throw Error(ErrorCode::insufficient_volume, "cannot sample " + to_exact_string(volume_l) + " L from " +
                                                    src_id + " holding " +
                                                    to_exact_string(src.contents.volume_l) + " L");
  }
  commit(src, "sample");

  const Amounts moved = scaled(src.contents.amounts, volume_l / src.contents.volume_l);
  subtract(src.contents.amounts, moved);
  src.contents.volume_l -= volume_l;

  Container c;
  c.id = new_id;
  c.contents = Mixture{moved, volume_l, src.contents.temperature_c};
  c.solvent = src.solvent;
  auto& stored = containers_.emplace(new_id, std::move(c)).first->second;
  record("sample", {{"src", src_id}, {"new_id", new_id}, {"volume_l", to_exact_string(volume_l)}},
         {&src, &stored});
  return stored;
}

void World::tick(double dt_s) {
  if (!(dt_s > 0) || !std::isfinite(dt_s)) throw Error(ErrorCode::invalid_argument, "tick must be positive");
  clock_ += dt_s;
  record("tick", {{"dt_s", dt_s}}, {});
  for (auto& [id, c] : containers_) {
    if (!c.pending) continue;
    c.pending->cursor += dt_s;
    if (c.pending->cursor >= c.pending->model.duration()) commit(c, "complete");
  }
}

ContainerInfo World::get_info(const std::string& id) const {
  const Container& c = container(id);
  ContainerInfo info;
  info.id = id;
  info.volume_l = to_double(c.contents.volume_l);

  std::map<std::string, double> amounts;
  double temperature = c.contents.temperature_c;
  double heat = c.heat_released_kj;
  if (c.pending) {
    auto s = c.pending->model.state_at(c.pending->cursor);
    amounts = std::move(s.amounts);
    temperature = s.temperature_c;
    heat += s.heat_released_kj;
    info.trajectory_id = c.pending->trajectory_id;
    info.trajectory_cursor_s = c.pending->cursor;
    info.trajectory_duration_s = c.pending->model.duration();
  } else {
    amounts = to_double_amounts(c.contents.amounts);
  }
  for (const auto& [name, n] : amounts) {
    if (n > kPresenceThreshold) info.components[name] = n;
  }
  if (c.contents.volume_l == 0) return info;

  Representation rep;
  const Observation o = observe(info.components, info.volume_l, temperature,
                                ObservableContext{ctx_->db, ctx_->kw, c.solvent});
  rep.rgba = o.color;
  rep.acid_base = o.acid_base;
  rep.temperature_c = temperature;
  rep.heat_released_kj = heat;
  for (const auto& [name, _] : info.components) rep.states[name] = ctx_->db.species_at(name).state;
  info.representation = std::move(rep);
  return info;
}

json World::snapshot() const {
  json j;
  j["clock_s"] = clock_;
  j["containers"] = json::array();
  for (const auto& [id, c] : containers_) j["containers"].push_back(container_json(c));
  j["history"] = json::array();
  for (const auto& e : log_) j["history"].push_back(to_json(e));
  return j;
}

World World::restore(std::shared_ptr<const ChemistryContext> ctx, const json& snap) {
  World w(std::move(ctx));
  try {
    for (const auto& e : snap.at("history")) {
      const std::string kind = e.at("kind").get<std::string>();
      const json& d = e.at("detail");
      if (kind == "create") {
        w.create_container(d.at("id").get<std::string>(), parse_exact_amounts(d.at("amounts")),
                           parse_decimal(d.at("volume_l").get<std::string>()),
                           d.at("temperature_c").get<double>());
      } else if (kind == "pour") {
        w.pour(d.at("src").get<std::string>(), d.at("dst").get<std::string>(),
               parse_decimal(d.at("volume_l").get<std::string>()));
      } else if (kind == "sample") {
        w.sample(d.at("src").get<std::string>(), d.at("new_id").get<std::string>(),
                 parse_decimal(d.at("volume_l").get<std::string>()));
      } else if (kind == "tick") {
        w.tick(d.at("dt_s").get<double>());
      } else if (kind != "resolution" && kind != "commit") {
        throw Error(ErrorCode::snapshot_mismatch, "unknown history event: " + kind);
      }
    }
  } catch (const json::exception& ex) {
    throw Error(ErrorCode::parse_error, std::string("malformed snapshot: ") + ex.what());
  }
  if (w.snapshot() != snap) {
    throw Error(ErrorCode::snapshot_mismatch, "replayed history does not reproduce the snapshot");
  }
  return w;
}

json to_json(const HistoryEvent& e) {
  return {{"seq", e.seq}, {"clock_s", e.clock}, {"kind", e.kind}, {"detail", e.detail}};
}

json to_json(const ContainerInfo& info) {
  json j;
  j["id"] = info.id;
  j["volume_l"] = info.volume_l;
  j["components"] = info.components;
  if (info.representation) {
    const auto& r = *info.representation;
    json states = json::object();
    for (const auto& [name, s] : r.states) states[name] = std::string(state_code(s));
    j["representation"] = {{"rgba", to_json(r.rgba)},
                           {"pH", r.acid_base ? json(r.acid_base->ph) : json(nullptr)},
                           {"temperature_c", r.temperature_c},
                           {"heat_released_kj", r.heat_released_kj},
                           {"states", std::move(states)}};
  } else {
    j["representation"] = nullptr;
  }
  if (info.trajectory_id) {
    j["trajectory"] = {{"id", *info.trajectory_id},
                       {"cursor_s", info.trajectory_cursor_s},
                       {"duration_s", info.trajectory_duration_s}};
  } else {
    j["trajectory"] = nullptr;
  }
  return j;
}

}  // namespace reactsim
