// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "cop/errors.hpp"
#include "cop/session.hpp"

namespace cop {

struct HttpResponse {
  int status = 200;
  Json body;
};

/// HTTP status for an error code: 400 request problems, 404 unknown
/// session or KB, 409 wrong phase, 503 no backend, 500 otherwise.
int http_status(ErrorCode code);

/// JSON API over a SessionManager. Routing is transport independent so it
/// can be exercised without sockets; serve() binds it to a real server.
///
///   POST /api/tasks                   {"requirement_text", "config"?}
///   POST /api/tasks/{id}/answers      {"answers": {element: text}}
///   POST /api/tasks/{id}/feedback     DebugFeedback
///   GET  /api/tasks/{id}
///   GET  /api/tasks/{id}/artifacts
///   GET  /api/kb/{kind}/search?q=&platform=&language=&k=
class Service {
 public:
  explicit Service(SessionManager& sessions, std::optional<std::filesystem::path> static_dir = std::nullopt);
  ~Service();

  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  HttpResponse handle(std::string_view method, std::string_view path,
                      const std::map<std::string, std::string>& query, std::string_view body);

  /// Blocks until stop(). Returns false when the port cannot be bound.
  bool serve(const std::string& host, int port);
  /// Binds an ephemeral port and serves on a background thread; returns
  /// the port, or -1.
  int serve_in_background(const std::string& host = "127.0.0.1");
  void stop();

 private:
  struct Impl;
  HttpResponse dispatch(std::string_view method, std::string_view path,
                        const std::map<std::string, std::string>& query, std::string_view body);

  SessionManager* sessions_;
  std::optional<std::filesystem::path> static_dir_;
  std::unique_ptr<Impl> impl_;
};

}  // namespace cop
