#include "reactsim/colorimetry.hpp"
#include "reactsim/container.hpp"
#include "reactsim/context.hpp"
#include "reactsim/kinetics.hpp"
#include "reactsim/recipe.hpp"
#include "reactsim/service.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace reactsim;
using nlohmann::json;

namespace {

constexpr int kDomainFailure = 1;
constexpr int kUsageError = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GlobalOptions {
  std::string data_dir;
  std::string species;
  std::string reactions;
  bool no_errata = false;
};

DataPaths data_paths(const GlobalOptions& g) {
  DataPaths p = DataPaths::in_directory(g.data_dir.empty() ? default_data_dir() : std::filesystem::path(g.data_dir));
  if (!g.species.empty()) p.species = g.species;
  if (!g.reactions.empty()) p.reactions = g.reactions;
  if (g.no_errata) p.errata.reset();
  return p;
}

std::shared_ptr<const ChemistryContext> load_context(const GlobalOptions& g) {
  return ChemistryContext::load(data_paths(g));
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io_error, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

/// "Fe2+:5,KMnO4:0.01" -> [(Fe2+, 5), (KMnO4, 1/100)]
std::vector<std::pair<std::string, Rational>> parse_amounts(const std::string& text) {
  std::vector<std::pair<std::string, Rational>> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.rfind(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == item.size()) {
      throw UsageError("malformed amount '" + item + "', expected <name>:<mol>");
    }
    try {
      out.emplace_back(item.substr(0, colon), parse_decimal(item.substr(colon + 1)));
    } catch (const Error&) {
      throw UsageError("malformed amount '" + item + "'");
    }
  }
  if (out.empty()) throw UsageError("--amounts needs at least one <name>:<mol> entry");
  return out;
}

Rational parse_volume(const std::string& text) {
  try {
    return parse_decimal(text);
  } catch (const Error&) {
    throw UsageError("malformed volume '" + text + "'");
  }
}

Mixture initial_mixture(const ChemistryContext& ctx, const std::string& amounts, const std::string& volume,
                        double temp) {
  Mixture m;
  m.amounts = ctx.dissociation.expand(parse_amounts(amounts), ctx.db);
  m.volume_l = parse_volume(volume);
  m.temperature_c = temp;
  return m;
}

json representation(const ChemistryContext& ctx, const Mixture& m) {
  const auto amounts = to_double_amounts(m.amounts);
  const Observation o = observe(amounts, to_double(m.volume_l), m.temperature_c,
                                ObservableContext{ctx.db, ctx.kw, ctx.solvent});
  return {{"rgba", to_json(o.color)},
          {"pH", o.acid_base ? json(o.acid_base->ph) : json(nullptr)},
          {"temperature_c", o.temperature_c}};
}

int cmd_db_validate(const GlobalOptions& g) {
  const DataPaths p = data_paths(g);
  try {
    const ReactionDatabase db = load_database(p.species, p.reactions, p.errata);
    std::cout << db.reactions().size() << " reactions OK\n";
    return 0;
  } catch (const ReactionValidationError& e) {
    for (const auto& [id, violations] : e.failures()) {
      std::cout << "reaction " << id << ":";
      for (const auto& v : violations) std::cout << ' ' << v.message << ';';
      std::cout << '\n';
    }
    std::cout << e.failures().size() << " reactions failed validation\n";
    return kDomainFailure;
  }
}

int cmd_db_show(const GlobalOptions& g, const std::string& key) {
  auto ctx = load_context(g);
  int id = 0;
  const auto [end, ec] = std::from_chars(key.data(), key.data() + key.size(), id);
  if (ec == std::errc() && end == key.data() + key.size()) {
    const Reaction* r = ctx->db.find_reaction(id);
    if (!r) throw Error(ErrorCode::invalid_argument, "no reaction with id " + key);
    json j = to_json(*r);
    j["equation"] = format_equation(*r);
    std::cout << j.dump(2) << '\n';
    return 0;
  }
  if (auto name = ctx->db.canonical_name(key)) {
    std::cout << to_json(ctx->db.species_at(*name)).dump(2) << '\n';
    return 0;
  }
  const auto& entries = ctx->dissociation.entries();
  if (auto it = entries.find(key); it != entries.end()) {
    std::cout << json{{"compound", key}, {"ions", it->second}}.dump(2) << '\n';
    return 0;
  }
  throw Error(ErrorCode::unknown_species, "unknown species, compound or reaction: " + key);
}

int cmd_mix(const GlobalOptions& g, const std::string& amounts, const std::string& volume, double temp) {
  auto ctx = load_context(g);
  const Mixture initial = initial_mixture(*ctx, amounts, volume, temp);
  ResolutionReport report = resolve(initial, ctx->db);
  Mixture final = report.final;
  final.temperature_c = temp + temperature_change(report, ctx->solvent, to_double(final.volume_l));
  json out;
  out["report"] = to_json(report, ctx->db);
  out["delta_t_k"] = final.temperature_c - temp;
  out["representation"] = representation(*ctx, final);
  std::cout << out.dump(2) << '\n';
  return 0;
}

int cmd_run(const GlobalOptions& g, const std::string& recipe_file, const std::string& snapshot_file,
            const std::string& csv_dir) {
  auto ctx = load_context(g);
  const Recipe recipe = parse_recipe(read_file(recipe_file));
  World world(ctx);
  const ExecutionReport report = execute(recipe, world);
  std::cout << canonical_report(report);
  if (!snapshot_file.empty()) {
    std::ofstream out(snapshot_file, std::ios::binary);
    if (!out) throw Error(ErrorCode::io_error, "cannot write " + snapshot_file);
    out << world.snapshot().dump(2) << '\n';
  }
  if (!csv_dir.empty()) {
    std::filesystem::create_directories(csv_dir);
    const ObservableContext octx{ctx->db, ctx->kw, ctx->solvent};
    for (int tid : report.trajectories) {
      const TrajectoryRecord& rec = world.trajectory(tid);
      const double until = rec.closed_at ? *rec.closed_at : rec.model.duration();
      const auto path = std::filesystem::path(csv_dir) / ("trajectory_" + std::to_string(tid) + ".csv");
      std::ofstream out(path, std::ios::binary);
      if (!out) throw Error(ErrorCode::io_error, "cannot write " + path.string());
      write_trajectory_csv(out, rec.model.sample(ctx->sample_dt, 0.0, until, octx));
    }
  }
  if (report.halted_at) std::cerr << "error: " << report.error_message << '\n';
  return report.ok() ? 0 : kDomainFailure;
}

int cmd_trajectory(const GlobalOptions& g, const std::string& amounts, const std::string& volume, double temp,
                   double dt, double horizon, double k, const std::string& csv) {
  auto ctx = load_context(g);
  const Mixture initial = initial_mixture(*ctx, amounts, volume, temp);
  const ResolutionReport report = resolve(initial, ctx->db);
  const auto points = trajectory_with_observables(initial, report.final, RateLaw{k}, dt, horizon,
                                                  ObservableContext{ctx->db, ctx->kw, ctx->solvent},
                                                  report.total_heat_kj);
  if (csv == "-") {
    write_trajectory_csv(std::cout, points);
  } else {
    std::ofstream out(csv, std::ios::binary);
    if (!out) throw Error(ErrorCode::io_error, "cannot write " + csv);
    write_trajectory_csv(out, points);
  }
  return 0;
}

int cmd_spectrum(const GlobalOptions& g, double kelvin, bool to_rgb, bool gamma) {
  const DataPaths p = data_paths(g);
  const CmfTable cmf = CmfTable::load(p.cmf_table);
  const auto spd = blackbody_spd(kelvin);
  if (to_rgb) {
    const RGB c = spectrum_to_rgb(spd, cmf, gamma ? RgbEncoding::srgb_gamma : RgbEncoding::linear);
    std::cout << int(c.r) << ',' << int(c.g) << ',' << int(c.b) << '\n';
  } else {
    const XYZ xyz = spectrum_to_xyz(spd, cmf);
    std::cout << format_number(xyz.x) << ',' << format_number(xyz.y) << ',' << format_number(xyz.z) << '\n';
  }
  return 0;
}

int cmd_serve(const GlobalOptions& g, const std::string& host, int port, std::optional<long> ttl,
              const std::string& static_dir) {
  auto ctx = load_context(g);
  ServiceOptions options = ServiceOptions::from_environment();
  if (ttl) options.session_ttl = std::chrono::seconds(*ttl);
  if (!static_dir.empty()) options.static_dir = static_dir;
  Service service(ctx, options);
  std::cerr << "listening on http://" << host << ':' << port << "/v1\n";
  if (!service.listen(host, port)) {
    std::cerr << "error: cannot listen on " << host << ':' << port << '\n';
    return kDomainFailure;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Inorganic reaction engine"};
  app.require_subcommand(1);
  GlobalOptions g;
  app.add_option("--data-dir", g.data_dir, "Directory holding the bundled tables");
  app.add_option("--db-species", g.species, "Species table (JSON)");
  app.add_option("--db-reactions", g.reactions, "Reaction table (JSON)");
  app.add_flag("--no-errata", g.no_errata, "Ignore the species errata overlay");

  app.fallthrough();
  auto* db = app.add_subcommand("db", "Inspect the reaction database");
  db->fallthrough();
  db->require_subcommand(1);
  auto* db_validate = db->add_subcommand("validate", "Check charge and element balance of every reaction");
  auto* db_show = db->add_subcommand("show", "Show a species, compound or reaction");
  std::string show_key;
  db_show->add_option("key", show_key, "Species name, compound name or reaction id")->required();

  std::string amounts, volume = "1";
  double temp = 25.0;
  auto* mix = app.add_subcommand("mix", "Resolve a mixture and print the report");
  mix->add_option("--amounts", amounts, "Comma-separated <name>:<mol> list")->required();
  mix->add_option("--volume", volume, "Volume in litres");
  mix->add_option("--temp", temp, "Temperature in degrees Celsius");

  std::string recipe_file, snapshot_file, csv_dir;
  auto* run = app.add_subcommand("run", "Execute a recipe");
  run->add_option("recipe", recipe_file, "Recipe file")->required()->check(CLI::ExistingFile);
  run->add_option("--snapshot", snapshot_file, "Write the final world snapshot here");
  run->add_option("--csv", csv_dir, "Write one CSV per trajectory into this directory");

  double dt = 0.5, horizon = 30.0, k = 1.0;
  std::string csv = "-";
  auto* traj = app.add_subcommand("trajectory", "Export a first-order mid-state trajectory");
  traj->add_option("--amounts", amounts, "Comma-separated <name>:<mol> list")->required();
  traj->add_option("--volume", volume, "Volume in litres");
  traj->add_option("--temp", temp, "Temperature in degrees Celsius");
  traj->add_option("--dt", dt, "Sampling step in seconds")->check(CLI::PositiveNumber);
  traj->add_option("--horizon", horizon, "Last sample time in seconds")->check(CLI::PositiveNumber);
  traj->add_option("--k", k, "Rate constant in 1/s")->check(CLI::PositiveNumber);
  traj->add_option("--csv", csv, "Output path, or - for standard output");

  double kelvin = 0.0;
  bool to_rgb = false, gamma = false;
  auto* spectrum = app.add_subcommand("spectrum", "Blackbody colour utilities");
  spectrum->add_option("--blackbody", kelvin, "Blackbody temperature in kelvin")->required()->check(CLI::PositiveNumber);
  spectrum->add_flag("--to-rgb", to_rgb, "Print 8-bit RGB instead of XYZ");
  spectrum->add_flag("--gamma", gamma, "Apply the sRGB transfer curve");

  std::string host = "127.0.0.1", static_dir;
  int port = 8080;
  std::optional<long> ttl;
  auto* serve = app.add_subcommand("serve", "Start the HTTP service");
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--port", port, "TCP port")->check(CLI::Range(0, 65535));
  serve->add_option("--session-ttl", ttl, "Idle session lifetime in seconds")->check(CLI::PositiveNumber);
  serve->add_option("--static-dir", static_dir, "Serve bench UI files from this directory")->check(CLI::ExistingDirectory);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  try {
    if (*db_validate) return cmd_db_validate(g);
    if (*db_show) return cmd_db_show(g, show_key);
    if (*mix) return cmd_mix(g, amounts, volume, temp);
    if (*run) return cmd_run(g, recipe_file, snapshot_file, csv_dir);
    if (*traj) return cmd_trajectory(g, amounts, volume, temp, dt, horizon, k, csv);
    if (*spectrum) return cmd_spectrum(g, kelvin, to_rgb, gamma);
    if (*serve) return cmd_serve(g, host, port, ttl, static_dir);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsageError;
  } catch (const Error& e) {
    std::cerr << "error [" << reason_code(e.code()) << "]: " << e.what() << '\n';
    return kDomainFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDomainFailure;
  }
  return kUsageError;
}
