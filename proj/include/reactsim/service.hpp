#pragma once

#include "reactsim/context.hpp"

#include <chrono>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>

namespace reactsim {

struct ServiceOptions {
  std::chrono::seconds session_ttl{1800};
  std::optional<std::filesystem::path> static_dir;  // served at /

  /// Applies REACTSIM_SESSION_TTL_S and REACTSIM_STATIC_DIR when set.
  static ServiceOptions from_environment();
};

/// HTTP API under /v1. One World per session; mutations on a session are
/// serialized, reads share a lock.
class Service {
 public:
  Service(std::shared_ptr<const ChemistryContext> ctx, ServiceOptions options = {});
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Blocks until stop().
  bool listen(const std::string& host, int port);
  /// Binds an ephemeral port and returns it; follow with listen_after_bind().
  int bind_to_any_port(const std::string& host);
  bool listen_after_bind();
  void stop();
  void wait_until_ready() const;

  std::size_t session_count() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace reactsim
