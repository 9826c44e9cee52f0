// SPDX-License-Identifier: Apache-2.0
#include "cop/service.hpp"

#include <thread>

#include "httplib.h"

#include "cop/text.hpp"

namespace cop {

namespace {

std::vector<std::string> split_path(std::string_view path) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (start <= path.size()) {
    auto end = path.find('/', start);
    if (end == std::string_view::npos) end = path.size();
    if (end > start) parts.emplace_back(path.substr(start, end - start));
    start = end + 1;
  }
  return parts;
}

Json parse_body(std::string_view body) {
  if (text::trim(body).empty()) return Json::object();
  Json j = Json::parse(body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw Error(ErrorCode::Validation, "request body must be a JSON object");
  return j;
}

HttpResponse not_found(std::string_view path) {
  return {404, {{"error", "NotFound"}, {"message", "no route for " + std::string(path)}, {"details", Json::object()}}};
}

requirements::Answers parse_answers(const Json& body) {
  auto it = body.find("answers");
  if (it == body.end() || !it->is_object()) throw Error(ErrorCode::Validation, "'answers' must be an object");
  requirements::Answers answers;
  for (const auto& [k, v] : it->items()) {
    if (!v.is_string()) throw Error(ErrorCode::Validation, "answer for " + k + " must be a string", {{"element", k}});
    answers[k] = v.get<std::string>();
  }
  return answers;
}

HttpResponse search_kb(const kb::KnowledgeBases& kbs, const std::string& kind_name,
                       const std::map<std::string, std::string>& query) {
  auto kind = kb::kind_from_string(kind_name);
  if (!kind) throw Error(ErrorCode::Validation, "unknown KB kind: " + kind_name, {{"kind", kind_name}});
  auto index = kbs.get(*kind);
  if (!index) {
    return {404, {{"error", "NotFound"}, {"message", "knowledge base not loaded: " + kind_name},
                  {"details", {{"kind", kind_name}}}}};
  }
  auto q = query.find("q");
  if (q == query.end() || text::trim(q->second).empty()) throw Error(ErrorCode::Validation, "query parameter q is required");
  kb::SearchFilters filters;
  if (auto p = query.find("platform"); p != query.end() && !p->second.empty()) filters.platform = p->second;
  if (auto l = query.find("language"); l != query.end() && !l->second.empty()) filters.language = l->second;
  int k = 5;
  if (auto it = query.find("k"); it != query.end()) {
    try {
      std::size_t used = 0;
      k = std::stoi(it->second, &used);
      if (used != it->second.size()) throw std::invalid_argument("k");
    } catch (const std::exception&) {
      throw Error(ErrorCode::Validation, "k must be an integer", {{"k", it->second}});
    }
  }
  Json hits = Json::array();
  for (const auto& h : index->search(q->second, filters, k)) hits.push_back(h.to_json());
  return {200, {{"kind", kind_name}, {"query", q->second}, {"hits", hits}}};
}

}  // namespace

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::Validation:
    case ErrorCode::SchemaViolation:
    case ErrorCode::ParseError:
    case ErrorCode::UnknownElement:
    case ErrorCode::EmptyAnswer:
    case ErrorCode::InvalidFeedback:
    case ErrorCode::UnknownLanguage: return 400;
    case ErrorCode::UnknownSession: return 404;
    case ErrorCode::WrongPhase:
    case ErrorCode::WrongState: return 409;
    case ErrorCode::BackendUnavailable: return 503;
    default: return 500;
  }
}

struct Service::Impl {
  httplib::Server server;
  std::thread thread;
};

Service::Service(SessionManager& sessions, std::optional<std::filesystem::path> static_dir)
    : sessions_(&sessions), static_dir_(std::move(static_dir)), impl_(std::make_unique<Impl>()) {
  auto route = [this](const httplib::Request& req, httplib::Response& res) {
    std::map<std::string, std::string> query;
    for (const auto& [k, v] : req.params) query.emplace(k, v);
    auto out = handle(req.method, req.path, query, req.body);
    res.status = out.status;
    res.set_content(out.body.dump(), "application/json");
  };
  impl_->server.Get(R"(/api/.*)", route);
  impl_->server.Post(R"(/api/.*)", route);
  if (static_dir_) impl_->server.set_mount_point("/", static_dir_->string());
}

Service::~Service() { stop(); }

HttpResponse Service::handle(std::string_view method, std::string_view path,
                             const std::map<std::string, std::string>& query, std::string_view body) {
  try {
    return dispatch(method, path, query, body);
  } catch (const Error& e) {
    return {http_status(e.code()), e.to_json()};
  } catch (const std::exception& e) {
    return {500, {{"error", "Internal"}, {"message", e.what()}, {"details", Json::object()}}};
  }
}

HttpResponse Service::dispatch(std::string_view method, std::string_view path,
                               const std::map<std::string, std::string>& query, std::string_view body) {
  const auto parts = split_path(path);
  if (parts.size() < 2 || parts[0] != "api") return not_found(path);

  if (parts[1] == "kb") {
    if (method == "GET" && parts.size() == 4 && parts[3] == "search") {
      return search_kb(sessions_->knowledge_bases(), parts[2], query);
    }
    return not_found(path);
  }
  if (parts[1] != "tasks") return not_found(path);

  if (parts.size() == 2 && method == "POST") {
    Json req = parse_body(body);
    auto text_it = req.find("requirement_text");
    if (text_it == req.end() || !text_it->is_string()) {
      throw Error(ErrorCode::Validation, "'requirement_text' must be a string");
    }
    SessionConfig config;
    if (auto c = req.find("config"); c != req.end()) config = SessionConfig::from_json(*c);
    return {201, sessions_->create(text_it->get<std::string>(), config)};
  }
  if (parts.size() == 3 && method == "GET") return {200, sessions_->view(parts[2])};
  if (parts.size() == 4 && method == "GET" && parts[3] == "artifacts") return {200, sessions_->artifacts(parts[2])};
  if (parts.size() == 4 && method == "POST" && parts[3] == "answers") {
    return {200, sessions_->answers(parts[2], parse_answers(parse_body(body)))};
  }
  if (parts.size() == 4 && method == "POST" && parts[3] == "feedback") {
    return {200, sessions_->feedback(parts[2], debug::DebugFeedback::from_json(parse_body(body)))};
  }
  return not_found(path);
}

bool Service::serve(const std::string& host, int port) { return impl_->server.listen(host, port); }

int Service::serve_in_background(const std::string& host) {
  int port = impl_->server.bind_to_any_port(host);
  if (port < 0) return -1;
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return port;
}

void Service::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace cop
