#pragma once

#include "reactsim/container.hpp"
#include "reactsim/error.hpp"

#include <nlohmann/json.hpp>

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace reactsim {

/// Observable read from a container: pH, temp, alpha, volume, or
/// moles of `species`.
struct ObservationRef {
  std::string observable;
  std::string species;  // only for "moles"
  std::string container;

  friend bool operator==(const ObservationRef&, const ObservationRef&) = default;
};

/// Literal numbers keep their source spelling so quantities stay exact.
struct Literal {
  std::string text;
  friend bool operator==(const Literal&, const Literal&) = default;
};

/// Either a literal or a reference bound when the task starts.
using Value = std::variant<Literal, ObservationRef>;

enum class TaskKind { create, pour, sample, tick, expect, print };
std::string_view task_kind_name(TaskKind kind);

struct RecipeTask {
  TaskKind kind = TaskKind::print;
  std::size_t line = 0;  // 1-based source line

  std::string id;   // create / print / sample target
  std::string src;  // pour / sample
  std::string dst;  // pour
  std::vector<std::pair<std::string, Value>> amounts;  // create, mol
  std::optional<Value> quantity;                       // L for create/pour/sample, s for tick
  std::optional<Value> temperature;                    // create, C
  ObservationRef observation;                          // expect
  double lo = 0.0, hi = 0.0;                           // expect

  /// Source lines are not compared.
  bool operator==(const RecipeTask& other) const;
};

struct Recipe {
  std::vector<RecipeTask> tasks;
  std::string source;
};

class RecipeParseError : public Error {
 public:
  RecipeParseError(std::size_t line, std::size_t column, const std::string& message);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_, column_;
};

Recipe parse_recipe(std::string_view text);

/// Canonical text, one task per line; parse_recipe(format_recipe(r)) has the
/// same tasks as r.
std::string format_recipe(const Recipe& recipe);
std::string format_task(const RecipeTask& task);

struct ExpectResult {
  std::size_t task_index = 0;
  std::size_t line = 0;
  std::string text;
  std::optional<double> value;  // empty when the observable is undefined
  double lo = 0.0, hi = 0.0;
  bool passed = false;
};

struct TaskOutcome {
  std::size_t task_index = 0;
  std::size_t line = 0;
  TaskKind kind = TaskKind::print;
  std::string status;  // ok, passed, failed, error
  nlohmann::json detail;
};

struct ExecutionReport {
  std::vector<TaskOutcome> outcomes;
  std::vector<ExpectResult> expects;
  std::optional<std::size_t> halted_at;
  std::string error_code;
  std::string error_message;
  std::vector<int> trajectories;  // ids created by pours, in order

  bool ok() const;
};

/// Current value of an observable; empty when the container has no
/// representation or the quantity is undefined (pH outside the Kw table).
std::optional<double> observe(const World& world, const ObservationRef& ref);

ExecutionReport execute(const Recipe& recipe, World& world);

/// Stable key order, doubles in shortest round-trip form.
nlohmann::json to_json(const ExecutionReport& report);
std::string canonical_report(const ExecutionReport& report);

}  // namespace reactsim
