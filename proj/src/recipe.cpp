#include "reactsim/recipe.hpp"

#include "reactsim/kinetics.hpp"

#include <cctype>
#include <sstream>

namespace reactsim {

using nlohmann::json;

namespace {

const char* const kObservables[] = {"pH", "temp", "alpha", "volume", "moles"};

bool is_observable(std::string_view name) {
  for (const char* o : kObservables) {
    if (name == o) return true;
  }
  return false;
}

bool is_id_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class LineParser {
 public:
  LineParser(std::string_view text, std::size_t line) : text_(text), line_(line) {}

  [[noreturn]] void fail(const std::string& message) const { fail_at(pos_, message); }
  [[noreturn]] void fail_at(std::size_t pos, const std::string& message) const {
    throw RecipeParseError(line_, pos + 1, message);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool at_end() {
    skip_ws();
    return pos_ >= text_.size();
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  bool peek_word(std::string_view word) {
    skip_ws();
    if (text_.substr(pos_, word.size()) != word) return false;
    const std::size_t end = pos_ + word.size();
    return end >= text_.size() || !is_id_char(text_[end]);
  }

  void expect(char c) {
    if (!peek(c)) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  void expect(std::string_view token) {
    skip_ws();
    if (text_.substr(pos_, token.size()) != token) fail("expected '" + std::string(token) + "'");
    pos_ += token.size();
  }

  void expect_word(std::string_view word) {
    if (!peek_word(word)) fail("expected '" + std::string(word) + "'");
    pos_ += word.size();
  }

  std::string identifier(const char* what) {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && is_id_char(text_[pos_])) ++pos_;
    if (start == pos_) fail(std::string("expected ") + what);
    return std::string(text_.substr(start, pos_ - start));
  }

  /// Species token: no whitespace and none of `stops`.
  std::string species(std::string_view stops) {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
           stops.find(text_[pos_]) == std::string_view::npos) {
      ++pos_;
    }
    if (start == pos_) fail("expected species name");
    return std::string(text_.substr(start, pos_ - start));
  }

  bool at_number() {
    skip_ws();
    if (pos_ >= text_.size()) return false;
    const char c = text_[pos_];
    return std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '-' || c == '+';
  }

  std::string number_text() {
    skip_ws();
    const std::size_t start = pos_;
    if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
    while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
      ++pos_;
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) ++p;
      if (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) {
        pos_ = p;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      }
    }
    std::string text(text_.substr(start, pos_ - start));
    try {
      parse_decimal(text);
    } catch (const Error&) {
      fail_at(start, "malformed number '" + text + "'");
    }
    return text;
  }

  double number() { return std::stod(number_text()); }

  ObservationRef observation() {
    skip_ws();
    const std::size_t start = pos_;
    ObservationRef ref;
    ref.observable = identifier("observable");
    if (!is_observable(ref.observable)) fail_at(start, "unknown observable '" + ref.observable + "'");
    if (ref.observable == "moles") {
      expect(':');
      ref.species = species("(");
    }
    expect('(');
    ref.container = identifier("container id");
    expect(')');
    return ref;
  }

  Value value() {
    if (at_number()) return Literal{number_text()};
    return observation();
  }

  /// `<value> <unit>`; the unit is mandatory.
  Value quantity(std::string_view unit) {
    Value v = value();
    skip_ws();
    const std::size_t at = pos_;
    if (at_end()) fail_at(at, "missing unit '" + std::string(unit) + "'");
    const std::size_t start = pos_;
    while (pos_ < text_.size() && is_id_char(text_[pos_])) ++pos_;
    const std::string_view got = text_.substr(start, pos_ - start);
    if (got != unit) {
      fail_at(start, "expected unit '" + std::string(unit) + "', got '" + std::string(got) + "'");
    }
    return v;
  }

  void finish() {
    if (!at_end()) fail("unexpected trailing text");
  }

  std::size_t position() {
    skip_ws();
    return pos_;
  }

 private:
  std::string_view text_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

RecipeTask parse_line(std::string_view text, std::size_t line) {
  LineParser p(text, line);
  const std::size_t verb_at = p.position();
  const std::string verb = p.identifier("verb");
  RecipeTask t;
  t.line = line;
  if (verb == "create") {
    t.kind = TaskKind::create;
    t.id = p.identifier("container id");
    p.expect('{');
    if (!p.peek('}')) {
      while (true) {
        std::string name = p.species(":,{}");
        p.expect(':');
        t.amounts.emplace_back(std::move(name), p.quantity("mol"));
        if (p.peek(',')) {
          p.expect(',');
          continue;
        }
        break;
      }
    }
    p.expect('}');
    p.expect_word("volume");
    t.quantity = p.quantity("L");
    if (p.peek_word("temp")) {
      p.expect_word("temp");
      t.temperature = p.quantity("C");
    }
  } else if (verb == "pour" || verb == "sample") {
    t.kind = verb == "pour" ? TaskKind::pour : TaskKind::sample;
    t.src = p.identifier("source container id");
    p.expect("->");
    (t.kind == TaskKind::pour ? t.dst : t.id) = p.identifier("container id");
    t.quantity = p.quantity("L");
  } else if (verb == "tick") {
    t.kind = TaskKind::tick;
    t.quantity = p.quantity("s");
  } else if (verb == "expect") {
    t.kind = TaskKind::expect;
    t.observation = p.observation();
    p.expect_word("in");
    p.expect('[');
    t.lo = p.number();
    p.expect(',');
    t.hi = p.number();
    p.expect(']');
  } else if (verb == "print") {
    t.kind = TaskKind::print;
    t.id = p.identifier("container id");
  } else {
    p.fail_at(verb_at, "unknown verb '" + verb + "'");
  }
  p.finish();
  return t;
}

std::string format_value(const Value& v) {
  if (const auto* lit = std::get_if<Literal>(&v)) return lit->text;
  const auto& ref = std::get<ObservationRef>(v);
  std::string out = ref.observable;
  if (ref.observable == "moles") out += ":" + ref.species;
  return out + "(" + ref.container + ")";
}

double require(const std::optional<double>& v, const Value& source) {
  if (!v) throw Error(ErrorCode::invalid_argument, "observable " + format_value(source) + " is undefined");
  return *v;
}

Rational exact_value(const World& world, const Value& v) {
  if (const auto* lit = std::get_if<Literal>(&v)) return parse_decimal(lit->text);
  return rational_from_double(require(observe(world, std::get<ObservationRef>(v)), v));
}

double double_value(const World& world, const Value& v) {
  if (const auto* lit = std::get_if<Literal>(&v)) return std::stod(lit->text);
  return require(observe(world, std::get<ObservationRef>(v)), v);
}

json step_summary(const ResolutionReport& report) {
  json steps = json::array();
  for (const auto& s : report.steps) {
    steps.push_back({{"reaction_id", s.reaction_id}, {"quantity", to_double(s.quantity)}});
  }
  return steps;
}

json run_task(const RecipeTask& t, World& world, ExecutionReport& report) {
  switch (t.kind) {
    case TaskKind::create: {
      std::vector<std::pair<std::string, Rational>> items;
      for (const auto& [name, v] : t.amounts) items.emplace_back(name, exact_value(world, v));
      const Rational volume = exact_value(world, *t.quantity);
      const double temperature = t.temperature ? double_value(world, *t.temperature) : 25.0;
      const Container& c = world.create_container_from_names(t.id, items, volume, temperature);
      return {{"id", c.id}, {"components", to_double_amounts(c.contents.amounts)}};
    }
    case TaskKind::pour: {
      const Rational volume = exact_value(world, *t.quantity);
      PourResult r = world.pour(t.src, t.dst, volume);
      json d = {{"src", t.src},
                {"dst", t.dst},
                {"volume_l", to_double(volume)},
                {"steps", step_summary(r.report)},
                {"heat_released_kj", r.report.total_heat_kj}};
      d["trajectory_id"] = r.trajectory_id ? json(*r.trajectory_id) : json(nullptr);
      if (r.trajectory_id) report.trajectories.push_back(*r.trajectory_id);
      return d;
    }
    case TaskKind::sample: {
      const Rational volume = exact_value(world, *t.quantity);
      world.sample(t.src, t.id, volume);
      return {{"src", t.src}, {"id", t.id}, {"volume_l", to_double(volume)}};
    }
    case TaskKind::tick:
      world.tick(double_value(world, *t.quantity));
      return {{"clock_s", world.clock()}};
    case TaskKind::print:
      return to_json(world.get_info(t.id));
    case TaskKind::expect:
      break;
  }
  return json::object();
}

}  // namespace

std::string_view task_kind_name(TaskKind kind) {
  switch (kind) {
    case TaskKind::create: return "create";
    case TaskKind::pour: return "pour";
    case TaskKind::sample: return "sample";
    case TaskKind::tick: return "tick";
    case TaskKind::expect: return "expect";
    case TaskKind::print: return "print";
  }
  return "?";
}

bool RecipeTask::operator==(const RecipeTask& o) const {
  return kind == o.kind && id == o.id && src == o.src && dst == o.dst && amounts == o.amounts &&
         quantity == o.quantity && temperature == o.temperature && observation == o.observation &&
         lo == o.lo && hi == o.hi;
}

RecipeParseError::RecipeParseError(std::size_t line, std::size_t column, const std::string& message)
    : Error(ErrorCode::parse_error,
            "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

Recipe parse_recipe(std::string_view text) {
  Recipe r;
  r.source = std::string(text);
  std::size_t line = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line;
    std::string_view content = text.substr(start, end - start);
    if (auto hash = content.find('#'); hash != std::string_view::npos) content = content.substr(0, hash);
    if (!content.empty() && content.back() == '\r') content.remove_suffix(1);
    bool blank = true;
    for (char c : content) blank = blank && std::isspace(static_cast<unsigned char>(c));
    if (!blank) r.tasks.push_back(parse_line(content, line));
    start = end + 1;
  }
  return r;
}

std::string format_task(const RecipeTask& t) {
  std::ostringstream out;
  out << task_kind_name(t.kind);
  switch (t.kind) {
    case TaskKind::create: {
      out << ' ' << t.id << " {";
      for (std::size_t i = 0; i < t.amounts.size(); ++i) {
        out << (i ? ", " : "") << t.amounts[i].first << ": " << format_value(t.amounts[i].second) << " mol";
      }
      out << "} volume " << format_value(*t.quantity) << " L";
      if (t.temperature) out << " temp " << format_value(*t.temperature) << " C";
      break;
    }
    case TaskKind::pour:
      out << ' ' << t.src << " -> " << t.dst << ' ' << format_value(*t.quantity) << " L";
      break;
    case TaskKind::sample:
      out << ' ' << t.src << " -> " << t.id << ' ' << format_value(*t.quantity) << " L";
      break;
    case TaskKind::tick:
      out << ' ' << format_value(*t.quantity) << " s";
      break;
    case TaskKind::expect:
      out << ' ' << format_value(t.observation) << " in [" << format_number(t.lo) << ", "
          << format_number(t.hi) << ']';
      break;
    case TaskKind::print:
      out << ' ' << t.id;
      break;
  }
  return out.str();
}

std::string format_recipe(const Recipe& recipe) {
  std::string out;
  for (const auto& t : recipe.tasks) out += format_task(t) + "\n";
  return out;
}

std::optional<double> observe(const World& world, const ObservationRef& ref) {
  const ContainerInfo info = world.get_info(ref.container);
  if (ref.observable == "volume") return info.volume_l;
  if (ref.observable == "moles") {
    const auto name = world.context().db.canonical_name(ref.species);
    if (!name) throw Error(ErrorCode::unknown_species, "unknown species: " + ref.species);
    auto it = info.components.find(*name);
    return it == info.components.end() ? 0.0 : it->second;
  }
  if (!info.representation) return std::nullopt;
  const auto& rep = *info.representation;
  if (ref.observable == "temp") return rep.temperature_c;
  if (ref.observable == "alpha") return rep.rgba.alpha;
  if (ref.observable == "pH") {
    if (!rep.acid_base) return std::nullopt;
    return rep.acid_base->ph;
  }
  throw Error(ErrorCode::invalid_argument, "unknown observable: " + ref.observable);
}

bool ExecutionReport::ok() const {
  if (halted_at) return false;
  for (const auto& e : expects) {
    if (!e.passed) return false;
  }
  return true;
}

ExecutionReport execute(const Recipe& recipe, World& world) {
  ExecutionReport report;
  for (std::size_t i = 0; i < recipe.tasks.size(); ++i) {
    const RecipeTask& t = recipe.tasks[i];
    TaskOutcome outcome{i, t.line, t.kind, "ok", json::object()};
    try {
      if (t.kind == TaskKind::expect) {
        ExpectResult e{i, t.line, format_task(t), observe(world, t.observation), t.lo, t.hi, false};
        e.passed = e.value && *e.value >= t.lo && *e.value <= t.hi;
        outcome.status = e.passed ? "passed" : "failed";
        outcome.detail = {{"value", e.value ? json(*e.value) : json(nullptr)}};
        report.expects.push_back(std::move(e));
      } else {
        outcome.detail = run_task(t, world, report);
      }
    } catch (const Error& err) {
      outcome.status = "error";
      outcome.detail = {{"reason", std::string(reason_code(err.code()))}, {"message", err.what()}};
      report.outcomes.push_back(std::move(outcome));
      report.halted_at = i;
      report.error_code = std::string(reason_code(err.code()));
      report.error_message = err.what();
      return report;
    }
    report.outcomes.push_back(std::move(outcome));
  }
  return report;
}

json to_json(const ExecutionReport& report) {
  json j;
  j["ok"] = report.ok();
  json tasks = json::array();
  for (const auto& o : report.outcomes) {
    tasks.push_back({{"index", o.task_index},
                     {"line", o.line},
                     {"kind", std::string(task_kind_name(o.kind))},
                     {"status", o.status},
                     {"detail", o.detail}});
  }
  j["tasks"] = std::move(tasks);
  json expects = json::array();
  for (const auto& e : report.expects) {
    expects.push_back({{"index", e.task_index},
                       {"line", e.line},
                       {"expect", e.text},
                       {"value", e.value ? json(*e.value) : json(nullptr)},
                       {"lo", e.lo},
                       {"hi", e.hi},
                       {"passed", e.passed}});
  }
  j["expects"] = std::move(expects);
  if (report.halted_at) {
    j["halted"] = {{"index", *report.halted_at}, {"reason", report.error_code}, {"message", report.error_message}};
  } else {
    j["halted"] = nullptr;
  }
  return j;
}

std::string canonical_report(const ExecutionReport& report) { return to_json(report).dump(2) + "\n"; }

}  // namespace reactsim
