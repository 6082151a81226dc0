#pragma once

#include "reactsim/context.hpp"
#include "reactsim/engine.hpp"
#include "reactsim/kinetics.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace reactsim {

/// One entry of the world's append-only log. Command kinds ("create",
/// "pour", "sample", "tick") drive replay; "resolution" and "commit" record
/// consequences and are regenerated by replay.
struct HistoryEvent {
  std::uint64_t seq = 0;
  double clock = 0.0;
  std::string kind;
  nlohmann::json detail;
};

/// In-flight mid-state after a pour. `cursor` is time since the pour.
struct PendingTrajectory {
  int trajectory_id = 0;
  CascadeTrajectory model;
  double cursor = 0.0;
  Mixture final;
  double heat_released_kj = 0.0;
};

struct Container {
  std::string id;
  Mixture contents;  // committed state; pre-reaction mixture while pending
  SolventParams solvent;
  std::optional<PendingTrajectory> pending;
  double heat_released_kj = 0.0;  // committed total over the container's life
  std::vector<HistoryEvent> history;
};

/// Trajectory bookkeeping for pollers: time is relative to the pour.
struct TrajectoryRecord {
  int id = 0;
  std::string container;
  double start_clock = 0.0;
  CascadeTrajectory model;
  std::optional<double> closed_at;  // set when committed early by a later action

  double elapsed(double clock) const;
  bool complete(double clock) const;
};

struct Representation {
  RGBA rgba;
  std::optional<AcidBaseState> acid_base;
  double temperature_c = 25.0;
  double heat_released_kj = 0.0;
  std::map<std::string, PhysicalState> states;
};

struct ContainerInfo {
  std::string id;
  std::map<std::string, double> components;
  double volume_l = 0.0;
  std::optional<Representation> representation;  // absent for empty vessels
  std::optional<int> trajectory_id;
  double trajectory_cursor_s = 0.0;
  double trajectory_duration_s = 0.0;
};

struct PourResult {
  ResolutionReport report;
  std::optional<int> trajectory_id;
};

/// Single-writer container world. Callers serialise mutations.
class World {
 public:
  explicit World(std::shared_ptr<const ChemistryContext> ctx);

  const ChemistryContext& context() const { return *ctx_; }
  std::shared_ptr<const ChemistryContext> context_ptr() const { return ctx_; }
  double clock() const { return clock_; }
  const std::map<std::string, Container>& containers() const { return containers_; }
  const Container& container(const std::string& id) const;  // throws unknown_container
  const std::vector<HistoryEvent>& log() const { return log_; }
  const TrajectoryRecord& trajectory(int id) const;  // throws unknown_trajectory

  /// Amounts must use canonical species names.
  const Container& create_container(const std::string& id, const Amounts& amounts,
                                    const Rational& volume_l, double temperature_c = 25.0);

  /// Accepts compound names ("KMnO4") and aliases; expanded through the
  /// dissociation table.
  const Container& create_container_from_names(
      const std::string& id, const std::vector<std::pair<std::string, Rational>>& items,
      const Rational& volume_l, double temperature_c = 25.0);

  PourResult pour(const std::string& src, const std::string& dst, const Rational& volume_l);
  const Container& sample(const std::string& src, const std::string& new_id, const Rational& volume_l);
  void tick(double dt_s);

  ContainerInfo get_info(const std::string& id) const;

  /// Containers, clock and log. Exact quantities are written as "p/q" strings.
  nlohmann::json snapshot() const;

  /// Rebuilds a world by replaying the snapshot's command log, then checks the
  /// result against the snapshot's container section.
  static World restore(std::shared_ptr<const ChemistryContext> ctx, const nlohmann::json& snapshot);

 private:
  Container& mutable_container(const std::string& id);
  void commit(Container& c, const std::string& reason);
  HistoryEvent& record(const std::string& kind, nlohmann::json detail,
                       std::initializer_list<Container*> involved);

  std::shared_ptr<const ChemistryContext> ctx_;
  std::map<std::string, Container> containers_;
  std::map<int, TrajectoryRecord> trajectories_;
  std::vector<HistoryEvent> log_;
  double clock_ = 0.0;
  int next_trajectory_id_ = 1;
};

nlohmann::json to_json(const ContainerInfo& info);
nlohmann::json to_json(const HistoryEvent& event);

}  // namespace reactsim
