// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cop/json.hpp"

namespace cop::llm {

enum class Role { System, User, Assistant };
std::string_view to_string(Role r);

enum class Stage { RequirementAnalysis, AlgorithmDesign, CodeImplementation, CodeDebugging, CodeAnnotation };
inline constexpr std::array<Stage, 5> kAllStages = {Stage::RequirementAnalysis, Stage::AlgorithmDesign,
                                                    Stage::CodeImplementation, Stage::CodeDebugging,
                                                    Stage::CodeAnnotation};
std::string_view to_string(Stage s);
std::optional<Stage> stage_from_string(std::string_view s);

struct ChatMessage {
  Role role = Role::User;
  std::string content;

  bool operator==(const ChatMessage&) const = default;
};

struct CompletionRequest {
  std::vector<ChatMessage> messages;
  double temperature = 0.0;
  int max_tokens = 4096;
  Stage stage = Stage::RequirementAnalysis;

  /// Throws Error(Validation): empty message list, empty content, first
  /// message not system, temperature outside [0, 2], max_tokens < 1.
  void validate() const;
  /// Content of the last user-role message, empty if none.
  std::string_view last_user_message() const;
  Json to_json() const;
};

class Backend {
 public:
  virtual ~Backend() = default;
  /// Raw model text for the request.
  virtual std::string complete(const CompletionRequest& request) = 0;
};

struct ScriptedRule {
  Stage stage = Stage::RequirementAnalysis;
  std::string match_substring;  // against the last user message; empty matches anything
  std::string response;
  bool consume_once = false;

  Json to_json() const;
  static ScriptedRule from_json(const Json& j);
};

/// Deterministic backend replaying declared responses. Rules are tried in
/// declaration order; the first live rule whose stage matches and whose
/// substring occurs in the last user message fires. No match throws
/// Error(NoScriptedRule).
class ScriptedBackend final : public Backend {
 public:
  ScriptedBackend() = default;
  explicit ScriptedBackend(std::vector<ScriptedRule> rules);
  ScriptedBackend(ScriptedBackend&& other) noexcept;

  static ScriptedBackend from_json(const Json& rules);
  static ScriptedBackend load(const std::filesystem::path& path);

  void add_rule(ScriptedRule rule);
  std::string complete(const CompletionRequest& request) override;

  /// Resets consume-once rules so the script can be replayed.
  void rewind();
  std::size_t call_count() const;

 private:
  mutable std::mutex mu_;
  std::vector<ScriptedRule> rules_;
  std::vector<bool> consumed_;
  std::size_t calls_ = 0;
};

struct Exchange {
  CompletionRequest request;
  std::string response;
};

/// Pass-through that records every request/response pair.
class RecordingBackend final : public Backend {
 public:
  explicit RecordingBackend(Backend& inner) : inner_(inner) {}

  std::string complete(const CompletionRequest& request) override;
  std::vector<Exchange> exchanges() const;
  void clear();

 private:
  Backend& inner_;
  mutable std::mutex mu_;
  std::vector<Exchange> log_;
};

struct HttpBackendOptions {
  std::string base_url = "https://api.openai.com/v1";
  std::string api_key;
  std::string model = "gpt-4o";
  int timeout_seconds = 120;
  int max_retries = 2;
  int backoff_ms = 500;  // doubled after each failed attempt

  /// COP_API_BASE, COP_API_KEY, COP_MODEL.
  static HttpBackendOptions from_env();
};

/// OpenAI-compatible chat-completions client:
/// POST {base_url}/chat/completions. Connect failures, timeouts and 5xx
/// are retried; everything else fails immediately with Error(Transport).
/// Empty content raises Error(ProviderRefusal).
class HttpBackend final : public Backend {
 public:
  explicit HttpBackend(HttpBackendOptions options);
  std::string complete(const CompletionRequest& request) override;

  const HttpBackendOptions& options() const { return options_; }

 private:
  HttpBackendOptions options_;
  std::string origin_;       // scheme://host[:port]
  std::string path_prefix_;  // e.g. /v1
};

struct StageOptions {
  double temperature = 0.0;
  int max_tokens = 4096;
};

struct LlmSettings {
  std::array<StageOptions, 5> stages{};
  int max_reasks = 2;

  /// 0.0 for requirement analysis and design, 0.2 for code, repair and
  /// annotation.
  static LlmSettings defaults();
  const StageOptions& for_stage(Stage s) const { return stages[static_cast<std::size_t>(s)]; }
  StageOptions& for_stage(Stage s) { return stages[static_cast<std::size_t>(s)]; }
};

/// Pulls a JSON value out of model text: fenced blocks first, then the
/// first balanced {...} or [...] span. nullopt if nothing parses.
std::optional<Json> extract_json(std::string_view text);

struct JsonCompletion {
  Json document;
  int reask_count = 0;
  std::string raw;
};

/// Completes, extracts and validates against `schema_id`, re-asking with
/// the violation list up to `max_reasks` times. Throws
/// Error(StructuredOutputFailure) carrying every attempt's violations.
JsonCompletion complete_json(Backend& backend, CompletionRequest request, std::string_view schema_id,
                             int max_reasks = 2);

/// Backend plus per-stage sampling settings; what the stages call.
class StageClient {
 public:
  StageClient(Backend& backend, LlmSettings settings = LlmSettings::defaults())
      : backend_(&backend), settings_(settings) {}

  std::string text(Stage stage, std::vector<ChatMessage> messages);
  JsonCompletion json(Stage stage, std::vector<ChatMessage> messages, std::string_view schema_id);

  CompletionRequest make_request(Stage stage, std::vector<ChatMessage> messages) const;
  Backend& backend() { return *backend_; }
  const LlmSettings& settings() const { return settings_; }

 private:
  Backend* backend_;
  LlmSettings settings_;
};

}  // namespace cop::llm
