// SPDX-License-Identifier: Apache-2.0
#include <chrono>
#include <cstdlib>
#include <thread>

#include <httplib.h>

#include "cop/errors.hpp"
#include "cop/llm_backend.hpp"

namespace cop::llm {

namespace {

std::string env_or(const char* name, std::string fallback) {
  const char* v = std::getenv(name);
  return v != nullptr && *v != '\0' ? std::string(v) : std::move(fallback);
}

}  // namespace

HttpBackendOptions HttpBackendOptions::from_env() {
  HttpBackendOptions o;
  o.base_url = env_or("COP_API_BASE", o.base_url);
  o.api_key = env_or("COP_API_KEY", "");
  o.model = env_or("COP_MODEL", o.model);
  return o;
}

HttpBackend::HttpBackend(HttpBackendOptions options) : options_(std::move(options)) {
  std::string url = options_.base_url;
  while (!url.empty() && url.back() == '/') url.pop_back();
  auto scheme = url.find("://");
  if (scheme == std::string::npos) throw Error(ErrorCode::Validation, "base URL needs a scheme: " + url);
  auto slash = url.find('/', scheme + 3);
  origin_ = slash == std::string::npos ? url : url.substr(0, slash);
  path_prefix_ = slash == std::string::npos ? std::string() : url.substr(slash);
}

std::string HttpBackend::complete(const CompletionRequest& request) {
  request.validate();

  Json messages = Json::array();
  for (const auto& m : request.messages) {
    messages.push_back({{"role", std::string(to_string(m.role))}, {"content", m.content}});
  }
  const Json body = {{"model", options_.model},
                     {"messages", std::move(messages)},
                     {"temperature", request.temperature},
                     {"max_tokens", request.max_tokens}};
  const std::string payload = body.dump();
  const std::string path = path_prefix_ + "/chat/completions";

  httplib::Headers headers;
  if (!options_.api_key.empty()) headers.emplace("Authorization", "Bearer " + options_.api_key);

  std::string last_error;
  int delay = options_.backoff_ms;
  for (int attempt = 0; attempt <= options_.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(std::chrono::milliseconds(delay));
      delay *= 2;
    }
    httplib::Client client(origin_);
    client.set_connection_timeout(options_.timeout_seconds, 0);
    client.set_read_timeout(options_.timeout_seconds, 0);
    client.set_write_timeout(options_.timeout_seconds, 0);
    auto res = client.Post(path, headers, payload, "application/json");
    if (!res) {
      last_error = "request failed: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 500) {
      last_error = "server error " + std::to_string(res->status);
      continue;
    }
    if (res->status < 200 || res->status >= 300) {
      throw Error(ErrorCode::Transport, "provider returned HTTP " + std::to_string(res->status),
                  {{"status", res->status}, {"body", res->body.substr(0, 500)}});
    }
    Json parsed;
    try {
      parsed = Json::parse(res->body);
    } catch (const Json::parse_error& e) {
      throw Error(ErrorCode::Transport, std::string("malformed provider response: ") + e.what());
    }
    const Json* content = nullptr;
    if (parsed.contains("choices") && parsed["choices"].is_array() && !parsed["choices"].empty()) {
      const auto& choice = parsed["choices"][0];
      if (choice.contains("message") && choice["message"].contains("content")) {
        content = &choice["message"]["content"];
      }
    }
    if (content == nullptr || !content->is_string() || content->get<std::string>().empty()) {
      throw Error(ErrorCode::ProviderRefusal, "provider returned no message content");
    }
    return content->get<std::string>();
  }
  throw Error(ErrorCode::Transport, last_error,
              {{"attempts", options_.max_retries + 1}, {"url", origin_ + path}});
}

}  // namespace cop::llm
