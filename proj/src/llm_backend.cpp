// SPDX-License-Identifier: Apache-2.0
#include "cop/llm_backend.hpp"

#include <fstream>
#include <sstream>

#include "cop/documents.hpp"
#include "cop/errors.hpp"
#include "cop/text.hpp"

namespace cop::llm {

std::string_view to_string(Role r) {
  switch (r) {
    case Role::System: return "system";
    case Role::User: return "user";
    case Role::Assistant: return "assistant";
  }
  return "user";
}

std::string_view to_string(Stage s) {
  switch (s) {
    case Stage::RequirementAnalysis: return "requirement_analysis";
    case Stage::AlgorithmDesign: return "algorithm_design";
    case Stage::CodeImplementation: return "code_implementation";
    case Stage::CodeDebugging: return "code_debugging";
    case Stage::CodeAnnotation: return "code_annotation";
  }
  return "unknown";
}

std::optional<Stage> stage_from_string(std::string_view s) {
  for (auto st : kAllStages) {
    if (to_string(st) == s) return st;
  }
  return std::nullopt;
}

void CompletionRequest::validate() const {
  if (messages.empty()) throw Error(ErrorCode::Validation, "completion request has no messages");
  if (messages.front().role != Role::System) {
    throw Error(ErrorCode::Validation, "first message of a stage request must be a system message");
  }
  for (std::size_t i = 0; i < messages.size(); ++i) {
    if (messages[i].content.empty()) {
      throw Error(ErrorCode::Validation, "message " + std::to_string(i) + " has empty content");
    }
  }
  if (!(temperature >= 0.0 && temperature <= 2.0)) {
    throw Error(ErrorCode::Validation, "temperature must be within [0, 2]");
  }
  if (max_tokens < 1) throw Error(ErrorCode::Validation, "max_tokens must be positive");
}

std::string_view CompletionRequest::last_user_message() const {
  for (auto it = messages.rbegin(); it != messages.rend(); ++it) {
    if (it->role == Role::User) return it->content;
  }
  return {};
}

Json CompletionRequest::to_json() const {
  Json msgs = Json::array();
  for (const auto& m : messages) msgs.push_back({{"role", std::string(to_string(m.role))}, {"content", m.content}});
  return {{"stage_tag", std::string(to_string(stage))},
          {"temperature", temperature},
          {"max_tokens", max_tokens},
          {"messages", std::move(msgs)}};
}

Json ScriptedRule::to_json() const {
  return {{"stage_tag", std::string(to_string(stage))},
          {"match_substring", match_substring},
          {"response", response},
          {"consume_once", consume_once}};
}

ScriptedRule ScriptedRule::from_json(const Json& j) {
  if (!j.is_object()) throw Error(ErrorCode::ParseError, "scripted rule must be an object");
  auto tag = j.value("stage_tag", std::string());
  auto stage = stage_from_string(tag);
  if (!stage) throw Error(ErrorCode::ParseError, "scripted rule has unknown stage_tag: " + tag);
  if (!j.contains("response") || !j["response"].is_string()) {
    throw Error(ErrorCode::ParseError, "scripted rule needs a string response");
  }
  return {*stage, j.value("match_substring", std::string()), j["response"].get<std::string>(),
          j.value("consume_once", false)};
}

ScriptedBackend::ScriptedBackend(std::vector<ScriptedRule> rules)
    : rules_(std::move(rules)), consumed_(rules_.size(), false) {}

ScriptedBackend::ScriptedBackend(ScriptedBackend&& other) noexcept {
  std::lock_guard lock(other.mu_);
  rules_ = std::move(other.rules_);
  consumed_ = std::move(other.consumed_);
  calls_ = other.calls_;
}

ScriptedBackend ScriptedBackend::from_json(const Json& rules) {
  if (!rules.is_array()) throw Error(ErrorCode::ParseError, "script must be a JSON array of rules");
  std::vector<ScriptedRule> out;
  for (const auto& r : rules) out.push_back(ScriptedRule::from_json(r));
  return ScriptedBackend(std::move(out));
}

ScriptedBackend ScriptedBackend::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open script file: " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return from_json(Json::parse(buf.str()));
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
}

void ScriptedBackend::add_rule(ScriptedRule rule) {
  std::lock_guard lock(mu_);
  rules_.push_back(std::move(rule));
  consumed_.push_back(false);
}

std::string ScriptedBackend::complete(const CompletionRequest& request) {
  request.validate();
  const auto last = request.last_user_message();
  std::lock_guard lock(mu_);
  ++calls_;
  for (std::size_t i = 0; i < rules_.size(); ++i) {
    const auto& rule = rules_[i];
    if (consumed_[i] || rule.stage != request.stage) continue;
    if (last.find(rule.match_substring) == std::string_view::npos) continue;
    if (rule.consume_once) consumed_[i] = true;
    return rule.response;
  }
  throw Error(ErrorCode::NoScriptedRule,
              "no scripted rule matches stage " + std::string(to_string(request.stage)),
              {{"stage_tag", std::string(to_string(request.stage))},
               {"last_user_message", std::string(last.substr(0, 200))}});
}

void ScriptedBackend::rewind() {
  std::lock_guard lock(mu_);
  consumed_.assign(rules_.size(), false);
}

std::size_t ScriptedBackend::call_count() const {
  std::lock_guard lock(mu_);
  return calls_;
}

std::string RecordingBackend::complete(const CompletionRequest& request) {
  std::string response;
  try {
    response = inner_.complete(request);
  } catch (...) {
    std::lock_guard lock(mu_);
    log_.push_back({request, {}});
    throw;
  }
  std::lock_guard lock(mu_);
  log_.push_back({request, response});
  return response;
}

std::vector<Exchange> RecordingBackend::exchanges() const {
  std::lock_guard lock(mu_);
  return log_;
}

void RecordingBackend::clear() {
  std::lock_guard lock(mu_);
  log_.clear();
}

LlmSettings LlmSettings::defaults() {
  LlmSettings s;
  s.for_stage(Stage::RequirementAnalysis).temperature = 0.0;
  s.for_stage(Stage::AlgorithmDesign).temperature = 0.0;
  s.for_stage(Stage::CodeImplementation).temperature = 0.2;
  s.for_stage(Stage::CodeDebugging).temperature = 0.2;
  s.for_stage(Stage::CodeAnnotation).temperature = 0.2;
  return s;
}

namespace {

// End of the balanced value starting at `open`, honouring JSON strings.
std::optional<std::size_t> balanced_end(std::string_view s, std::size_t open) {
  std::vector<char> stack;
  bool in_string = false, escaped = false;
  for (std::size_t i = open; i < s.size(); ++i) {
    char c = s[i];
    if (in_string) {
      if (escaped) escaped = false;
      else if (c == '\\') escaped = true;
      else if (c == '"') in_string = false;
      continue;
    }
    if (c == '"') in_string = true;
    else if (c == '{' || c == '[') stack.push_back(c == '{' ? '}' : ']');
    else if (c == '}' || c == ']') {
      if (stack.empty() || stack.back() != c) return std::nullopt;
      stack.pop_back();
      if (stack.empty()) return i;
    }
  }
  return std::nullopt;
}

std::optional<Json> try_parse(std::string_view s) {
  try {
    return Json::parse(s);
  } catch (const Json::parse_error&) {
    return std::nullopt;
  }
}

std::optional<Json> scan_for_value(std::string_view s) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '{' && s[i] != '[') continue;
    if (auto end = balanced_end(s, i)) {
      if (auto j = try_parse(s.substr(i, *end - i + 1))) return j;
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<Json> extract_json(std::string_view raw) {
  // Fenced blocks, in order.
  std::size_t pos = 0;
  while ((pos = raw.find("```", pos)) != std::string_view::npos) {
    auto body = raw.find('\n', pos);
    if (body == std::string_view::npos) break;
    auto close = raw.find("```", body + 1);
    if (close == std::string_view::npos) break;
    if (auto j = try_parse(raw.substr(body + 1, close - body - 1))) return j;
    pos = close + 3;
  }
  if (auto j = try_parse(text::trim(raw))) {
    if (j->is_object() || j->is_array()) return j;
  }
  return scan_for_value(raw);
}

JsonCompletion complete_json(Backend& backend, CompletionRequest request, std::string_view schema_id,
                             int max_reasks) {
  if (!schema_registered(schema_id)) {
    throw Error(ErrorCode::Validation, "unregistered schema: " + std::string(schema_id));
  }
  Json attempts = Json::array();
  for (int attempt = 0;; ++attempt) {
    std::string raw = backend.complete(request);
    std::vector<std::string> violations;
    auto doc = extract_json(raw);
    if (!doc) {
      violations.emplace_back("response did not contain a parseable JSON document");
    } else {
      violations = validate_schema(schema_id, *doc);
    }
    if (violations.empty()) return {std::move(*doc), attempt, std::move(raw)};

    attempts.push_back(violations);
    if (attempt >= max_reasks) {
      throw Error(ErrorCode::StructuredOutputFailure,
                  "no valid " + std::string(schema_id) + " document after " + std::to_string(attempt + 1) +
                      " attempt(s)",
                  {{"schema_id", std::string(schema_id)}, {"violations", attempts}});
    }
    std::string correction = "Your previous reply could not be accepted as a " + std::string(schema_id) +
                             " document:\n";
    for (const auto& v : violations) correction += "- " + v + "\n";
    correction += "Reply again with only the corrected JSON document.";
    request.messages.push_back({Role::Assistant, raw.empty() ? std::string("(empty reply)") : raw});
    request.messages.push_back({Role::User, std::move(correction)});
  }
}

CompletionRequest StageClient::make_request(Stage stage, std::vector<ChatMessage> messages) const {
  const auto& opts = settings_.for_stage(stage);
  return {std::move(messages), opts.temperature, opts.max_tokens, stage};
}

std::string StageClient::text(Stage stage, std::vector<ChatMessage> messages) {
  return backend_->complete(make_request(stage, std::move(messages)));
}

JsonCompletion StageClient::json(Stage stage, std::vector<ChatMessage> messages, std::string_view schema_id) {
  return complete_json(*backend_, make_request(stage, std::move(messages)), schema_id, settings_.max_reasks);
}

}  // namespace cop::llm
