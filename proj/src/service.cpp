#include "reactsim/service.hpp"

#include "reactsim/container.hpp"
#include "reactsim/kinetics.hpp"

#include <httplib.h>

#include <condition_variable>
#include <cstdlib>
#include <iomanip>
#include <map>
#include <mutex>
#include <random>
#include <shared_mutex>
#include <sstream>

namespace reactsim {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

constexpr std::size_t kMaxWindowPoints = 2000;
constexpr long kMaxWaitMs = 30000;

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::unknown_container:
    case ErrorCode::unknown_session:
    case ErrorCode::unknown_trajectory:
      return 404;
    case ErrorCode::duplicate_id:
      return 409;
    case ErrorCode::parse_error:
      return 400;
    default:
      return 422;
  }
}

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, std::string_view reason, const std::string& message) {
  send_json(res, status, {{"error", std::string(reason)}, {"message", message}});
}

json parse_body(const httplib::Request& req) {
  try {
    json j = json::parse(req.body);
    if (!j.is_object()) throw Error(ErrorCode::parse_error, "request body must be a JSON object");
    return j;
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::parse_error, std::string("invalid JSON: ") + e.what());
  }
}

Rational exact(const json& v, const char* field) {
  if (v.is_string()) return parse_decimal(v.get<std::string>());
  if (v.is_number()) return rational_from_double(v.get<double>());
  throw Error(ErrorCode::invalid_argument, std::string(field) + " must be a number");
}

const json& field(const json& body, const char* name) {
  auto it = body.find(name);
  if (it == body.end()) throw Error(ErrorCode::invalid_argument, std::string("missing field: ") + name);
  return *it;
}

std::string string_field(const json& body, const char* name) {
  const json& v = field(body, name);
  if (!v.is_string()) throw Error(ErrorCode::invalid_argument, std::string(name) + " must be a string");
  return v.get<std::string>();
}

double number_field(const json& body, const char* name) {
  const json& v = field(body, name);
  if (!v.is_number()) throw Error(ErrorCode::invalid_argument, std::string(name) + " must be a number");
  return v.get<double>();
}

std::string random_id() {
  static std::mutex mu;
  static std::mt19937_64 rng{std::random_device{}()};
  std::lock_guard lock(mu);
  std::ostringstream out;
  out << std::hex << std::setfill('0') << std::setw(16) << rng() << std::setw(16) << rng();
  return out.str();
}

}  // namespace

ServiceOptions ServiceOptions::from_environment() {
  ServiceOptions o;
  if (const char* ttl = std::getenv("REACTSIM_SESSION_TTL_S"); ttl && *ttl) {
    o.session_ttl = std::chrono::seconds(std::stol(ttl));
  }
  if (const char* dir = std::getenv("REACTSIM_STATIC_DIR"); dir && *dir) o.static_dir = dir;
  return o;
}

struct Session {
  explicit Session(std::shared_ptr<const ChemistryContext> ctx) : world(std::move(ctx)) {}

  std::shared_mutex mu;
  std::condition_variable_any changed;
  World world;
  std::atomic<Clock::rep> last_activity{Clock::now().time_since_epoch().count()};

  void touch() { last_activity = Clock::now().time_since_epoch().count(); }
};

struct Service::Impl {
  std::shared_ptr<const ChemistryContext> ctx;
  ServiceOptions options;
  httplib::Server server;
  mutable std::mutex sessions_mu;
  std::map<std::string, std::shared_ptr<Session>> sessions;

  std::shared_ptr<Session> session(const std::string& id) {
    std::lock_guard lock(sessions_mu);
    expire_locked();
    auto it = sessions.find(id);
    if (it == sessions.end()) throw Error(ErrorCode::unknown_session, "unknown session: " + id);
    it->second->touch();
    return it->second;
  }

  void expire_locked() {
    const auto now = Clock::now();
    for (auto it = sessions.begin(); it != sessions.end();) {
      const Clock::time_point last{Clock::duration(it->second->last_activity.load())};
      if (now - last > options.session_ttl) {
        it = sessions.erase(it);
      } else {
        ++it;
      }
    }
  }

  template <typename F>
  auto guarded(F handler) {
    return [handler](const httplib::Request& req, httplib::Response& res) {
      try {
        handler(req, res);
      } catch (const Error& e) {
        send_error(res, http_status(e.code()), reason_code(e.code()), e.what());
      } catch (const json::exception& e) {
        send_error(res, 400, reason_code(ErrorCode::parse_error), e.what());
      } catch (const std::exception& e) {
        send_error(res, 500, "internal_error", e.what());
      }
    };
  }

  json trajectory_window(const World& world, int tid, double from) const {
    const TrajectoryRecord& rec = world.trajectory(tid);
    const double elapsed = rec.elapsed(world.clock());
    json j;
    j["id"] = rec.id;
    j["container"] = rec.container;
    j["duration_s"] = rec.model.duration();
    j["elapsed_s"] = elapsed;
    j["complete"] = rec.complete(world.clock());
    json points = json::array();
    const double dt = ctx->sample_dt;
    if (from <= elapsed) {
      const ObservableContext octx{ctx->db, ctx->kw, ctx->solvent};
      const double until = std::min(elapsed, from + dt * static_cast<double>(kMaxWindowPoints - 1));
      for (const auto& p : rec.model.sample(dt, std::max(from, 0.0), until, octx)) points.push_back(to_json(p));
    }
    const std::size_t n = points.size();
    j["next_from"] = std::max(from, 0.0) + dt * static_cast<double>(n);
    if (rec.complete(world.clock()) && n < kMaxWindowPoints) {
      const auto final_state = rec.model.state_at(elapsed);
      TrajectoryPoint last;
      last.t = elapsed;
      last.amounts = final_state.amounts;
      last.observables = observe(last.amounts, rec.model.volume_l(), final_state.temperature_c,
                                 ObservableContext{ctx->db, ctx->kw, ctx->solvent});
      j["final"] = to_json(last);
    } else {
      j["final"] = nullptr;
    }
    j["points"] = std::move(points);
    return j;
  }

  void routes() {
    server.Post("/v1/sessions", guarded([this](const httplib::Request&, httplib::Response& res) {
      auto s = std::make_shared<Session>(ctx);
      const std::string id = random_id();
      {
        std::lock_guard lock(sessions_mu);
        expire_locked();
        sessions.emplace(id, s);
      }
      send_json(res, 201, {{"session_id", id}, {"ttl_s", options.session_ttl.count()}});
    }));

    server.Delete("/v1/sessions/:s", guarded([this](const httplib::Request& req, httplib::Response& res) {
      std::lock_guard lock(sessions_mu);
      if (!sessions.erase(req.path_params.at("s"))) {
        throw Error(ErrorCode::unknown_session, "unknown session: " + req.path_params.at("s"));
      }
      res.status = 204;
    }));

    server.Post("/v1/sessions/:s/containers", guarded([this](const httplib::Request& req, httplib::Response& res) {
      auto s = session(req.path_params.at("s"));
      const json body = parse_body(req);
      const std::string id = string_field(body, "id");
      std::vector<std::pair<std::string, Rational>> items;
      if (auto it = body.find("amounts"); it != body.end()) {
        if (!it->is_object()) throw Error(ErrorCode::invalid_argument, "amounts must be an object");
        for (const auto& [name, v] : it->items()) items.emplace_back(name, exact(v, "amount"));
      }
      const Rational volume = exact(field(body, "volume_l"), "volume_l");
      const double temp = body.contains("temp_c") ? number_field(body, "temp_c") : 25.0;
      std::unique_lock lock(s->mu);
      s->world.create_container_from_names(id, items, volume, temp);
      send_json(res, 201, to_json(s->world.get_info(id)));
    }));

    server.Get("/v1/sessions/:s/containers", guarded([this](const httplib::Request& req, httplib::Response& res) {
      auto s = session(req.path_params.at("s"));
      std::shared_lock lock(s->mu);
      json list = json::array();
      for (const auto& [id, _] : s->world.containers()) list.push_back(to_json(s->world.get_info(id)));
      send_json(res, 200, {{"clock_s", s->world.clock()}, {"containers", std::move(list)}});
    }));

    server.Get("/v1/sessions/:s/containers/:id", guarded([this](const httplib::Request& req, httplib::Response& res) {
      auto s = session(req.path_params.at("s"));
      std::shared_lock lock(s->mu);
      send_json(res, 200, to_json(s->world.get_info(req.path_params.at("id"))));
    }));

    server.Post("/v1/sessions/:s/actions/pour", guarded([this](const httplib::Request& req, httplib::Response& res) {
      auto s = session(req.path_params.at("s"));
      const json body = parse_body(req);
      const std::string src = string_field(body, "src");
      const std::string dst = string_field(body, "dst");
      const Rational volume = exact(field(body, "volume_l"), "volume_l");
      std::unique_lock lock(s->mu);
      PourResult r = s->world.pour(src, dst, volume);
      json out;
      out["report"] = to_json(r.report, ctx->db);
      out["reactions"] = json::array();
      for (const auto& step : r.report.steps) out["reactions"].push_back(step.reaction_id);
      out["trajectory_id"] = r.trajectory_id ? json(*r.trajectory_id) : json(nullptr);
      out["container"] = to_json(s->world.get_info(dst));
      lock.unlock();
      s->changed.notify_all();
      send_json(res, 200, out);
    }));

    server.Post("/v1/sessions/:s/actions/sample", guarded([this](const httplib::Request& req, httplib::Response& res) {
      auto s = session(req.path_params.at("s"));
      const json body = parse_body(req);
      const std::string src = string_field(body, "src");
      const std::string new_id = string_field(body, "new_id");
      const Rational volume = exact(field(body, "volume_l"), "volume_l");
      std::unique_lock lock(s->mu);
      s->world.sample(src, new_id, volume);
      json out = to_json(s->world.get_info(new_id));
      lock.unlock();
      s->changed.notify_all();
      send_json(res, 201, out);
    }));

    server.Post("/v1/sessions/:s/actions/tick", guarded([this](const httplib::Request& req, httplib::Response& res) {
      auto s = session(req.path_params.at("s"));
      const json body = parse_body(req);
      const double dt = number_field(body, "dt_s");
      std::unique_lock lock(s->mu);
      s->world.tick(dt);
      const double clock = s->world.clock();
      lock.unlock();
      s->changed.notify_all();
      send_json(res, 200, {{"clock_s", clock}});
    }));

    server.Get("/v1/sessions/:s/snapshot", guarded([this](const httplib::Request& req, httplib::Response& res) {
      auto s = session(req.path_params.at("s"));
      std::shared_lock lock(s->mu);
      send_json(res, 200, s->world.snapshot());
    }));

    server.Get("/v1/sessions/:s/trajectories/:tid", guarded([this](const httplib::Request& req, httplib::Response& res) {
      auto s = session(req.path_params.at("s"));
      int tid = 0;
      try {
        tid = std::stoi(req.path_params.at("tid"));
      } catch (const std::exception&) {
        throw Error(ErrorCode::unknown_trajectory, "unknown trajectory: " + req.path_params.at("tid"));
      }
      const double from = req.has_param("from") ? std::stod(req.get_param_value("from")) : 0.0;
      const long wait_ms =
          req.has_param("wait_ms") ? std::clamp(std::stol(req.get_param_value("wait_ms")), 0L, kMaxWaitMs) : 0L;
      std::shared_lock lock(s->mu);
      const auto ready = [&] {
        const TrajectoryRecord& rec = s->world.trajectory(tid);
        return rec.complete(s->world.clock()) || rec.elapsed(s->world.clock()) >= from;
      };
      if (wait_ms > 0 && !ready()) {
        s->changed.wait_for(lock, std::chrono::milliseconds(wait_ms), ready);
      }
      send_json(res, 200, trajectory_window(s->world, tid, from));
    }));

    server.Get("/v1/db/reactions", guarded([this](const httplib::Request&, httplib::Response& res) {
      json list = json::array();
      for (const auto& r : ctx->db.reactions()) list.push_back(to_json(r));
      send_json(res, 200, list);
    }));

    server.Get("/v1/db/species", guarded([this](const httplib::Request&, httplib::Response& res) {
      json list = json::array();
      for (const auto& [_, sp] : ctx->db.species()) list.push_back(to_json(sp));
      send_json(res, 200, list);
    }));

    if (options.static_dir) server.set_mount_point("/", options.static_dir->string());
  }
};

Service::Service(std::shared_ptr<const ChemistryContext> ctx, ServiceOptions options)
    : impl_(std::make_unique<Impl>()) {
  impl_->ctx = std::move(ctx);
  impl_->options = std::move(options);
  impl_->routes();
}

Service::~Service() { stop(); }

bool Service::listen(const std::string& host, int port) { return impl_->server.listen(host, port); }

int Service::bind_to_any_port(const std::string& host) { return impl_->server.bind_to_any_port(host); }

bool Service::listen_after_bind() { return impl_->server.listen_after_bind(); }

void Service::stop() {
  if (impl_) impl_->server.stop();
}

void Service::wait_until_ready() const { impl_->server.wait_until_ready(); }

std::size_t Service::session_count() const {
  std::lock_guard lock(impl_->sessions_mu);
  return impl_->sessions.size();
}

}  // namespace reactsim
