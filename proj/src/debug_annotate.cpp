// SPDX-License-Identifier: Apache-2.0
#include "cop/debug_annotate.hpp"

#include <algorithm>
#include <array>

#include "cop/errors.hpp"
#include "cop/prompts.hpp"
#include "cop/text.hpp"

namespace cop::debug {

namespace {

using llm::ChatMessage;
using llm::Role;

struct LanguageComment {
  std::string_view language;
  std::string_view token;
};

constexpr std::array<LanguageComment, 4> kCommentTokens = {{
    {"javascript", "//"},
    {"js", "//"},
    {"python", "#"},
    {"r", "#"},
}};

constexpr std::array<std::string_view, 2> kKnownTokens = {"//", "#"};

bool starts_with(std::string_view s, std::string_view prefix) { return s.substr(0, prefix.size()) == prefix; }

// Drops a trailing line comment that is not inside a string literal.
std::string strip_trailing_comment(std::string_view line, std::string_view token) {
  char quote = 0;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quote) {
      if (c == '\\') ++i;
      else if (c == quote) quote = 0;
      continue;
    }
    if (c == '"' || c == '\'' || c == '`') {
      quote = c;
      continue;
    }
    if (line.substr(i, token.size()) == token) return std::string(line.substr(0, i));
  }
  return std::string(line);
}

bool is_foreign_comment(std::string_view trimmed, std::string_view own, std::size_t line_no) {
  if (line_no == 0 && starts_with(trimmed, "#!")) return false;
  for (auto t : kKnownTokens) {
    if (t != own && starts_with(trimmed, t) && !starts_with(own, t)) return true;
  }
  return false;
}

// Executable lines, comment- and whitespace-normalized, sorted.
std::vector<std::string> executable_lines(std::string_view source, std::string_view token) {
  std::vector<std::string> out;
  auto lines = text::split_lines(source);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    auto trimmed = text::trim(lines[i]);
    if (trimmed.empty() || starts_with(trimmed, token) || is_foreign_comment(trimmed, token, i)) continue;
    auto code = text::collapse_whitespace(strip_trailing_comment(trimmed, token));
    if (!code.empty()) out.push_back(std::move(code));
  }
  std::sort(out.begin(), out.end());
  return out;
}

enum class HeaderKey { None, Created, Platform, Summary };

HeaderKey header_key(std::string_view comment_body, std::string* value) {
  auto colon = comment_body.find(':');
  if (colon == std::string_view::npos) return HeaderKey::None;
  auto key = text::to_lower(text::trim(comment_body.substr(0, colon)));
  *value = text::trim(comment_body.substr(colon + 1));
  for (auto k : {"created", "creation time", "created at", "created on", "creation date", "date"}) {
    if (key == k) return HeaderKey::Created;
  }
  for (auto k : {"platform", "applicable platform"}) {
    if (key == k) return HeaderKey::Platform;
  }
  for (auto k : {"description", "summary", "purpose", "functionality"}) {
    if (key == k) return HeaderKey::Summary;
  }
  return HeaderKey::None;
}

std::string_view require_token(std::string_view language) {
  auto token = comment_token(language);
  if (!token) throw Error(ErrorCode::UnknownLanguage, "no comment syntax registered for language: " + std::string(language),
                          {{"language", std::string(language)}});
  return *token;
}

std::string render_feedback(const DebugFeedback& fb) {
  if (!fb.executable) return "Executable: N\nConsole error:\n" + fb.error_text.value_or("");
  if (!fb.correct) return "Executable: Y\nResult correct: N\nObserved output:\n" + fb.observed_output.value_or("");
  return "Executable: Y\nResult correct: Y";
}

std::vector<prompts::Section> context_sections(const code::PromptContext& ctx) {
  std::vector<prompts::Section> s;
  if (ctx.ablation.pool) {
    s.push_back({std::string(prompts::kTarget),
                 "Platform: " + ctx.platform() + "\nProgramming language: " + ctx.language()});
    s.push_back({std::string(prompts::kRequirementsDocument), ctx.requirements.to_json().dump(2)});
    s.push_back({std::string(prompts::kAlgorithmDesign), ctx.design.to_json().dump(2)});
  }
  return s;
}

}  // namespace

void DebugFeedback::validate() const {
  if (!executable && (!error_text || text::trim(*error_text).empty())) {
    throw Error(ErrorCode::InvalidFeedback, "non-executable feedback needs the console error text");
  }
  if (executable && !correct && (!observed_output || text::trim(*observed_output).empty())) {
    throw Error(ErrorCode::InvalidFeedback, "incorrect-result feedback needs the observed output");
  }
}

Json DebugFeedback::to_json() const {
  Json j = {{"executable", executable}, {"correct", executable && correct}};
  if (error_text) j["error_text"] = *error_text;
  if (observed_output) j["observed_output"] = *observed_output;
  return j;
}

DebugFeedback DebugFeedback::from_json(const Json& j) {
  if (!j.is_object() || !j.contains("executable") || !j["executable"].is_boolean()) {
    throw Error(ErrorCode::InvalidFeedback, "feedback needs a boolean 'executable'");
  }
  DebugFeedback fb;
  fb.executable = j["executable"].get<bool>();
  if (auto c = j.find("correct"); c != j.end()) {
    if (!c->is_boolean()) throw Error(ErrorCode::InvalidFeedback, "'correct' must be boolean");
    fb.correct = c->get<bool>();
  } else if (fb.executable) {
    throw Error(ErrorCode::InvalidFeedback, "executable feedback needs a boolean 'correct'");
  }
  for (auto [key, slot] : {std::pair{"error_text", &fb.error_text}, std::pair{"observed_output", &fb.observed_output}}) {
    if (auto it = j.find(key); it != j.end() && !it->is_null()) {
      if (!it->is_string()) throw Error(ErrorCode::InvalidFeedback, std::string(key) + " must be a string");
      *slot = it->get<std::string>();
    }
  }
  if (!fb.executable) fb.correct = false;
  return fb;
}

std::string_view to_string(DebugState s) {
  switch (s) {
    case DebugState::AwaitingFeedback: return "AwaitingFeedback";
    case DebugState::Repairing: return "Repairing";
    case DebugState::Annotating: return "Annotating";
    case DebugState::Done: return "Done";
  }
  return "Unknown";
}

Json DebugSession::to_json() const {
  return {{"iteration", iteration}, {"max_iterations", max_iterations},
          {"state", std::string(to_string(state))}, {"exhausted", exhausted}};
}

DebugSession next_transition(const DebugSession& session, const DebugFeedback& fb) {
  if (session.state != DebugState::AwaitingFeedback) {
    throw Error(ErrorCode::WrongState, "feedback is only accepted while awaiting feedback",
                {{"state", std::string(to_string(session.state))}});
  }
  fb.validate();
  DebugSession next = session;
  if (fb.passed()) {
    next.state = DebugState::Annotating;
  } else if (session.iteration < session.max_iterations) {
    next.state = DebugState::Repairing;
    next.iteration = session.iteration + 1;
  } else {
    next.state = DebugState::Annotating;
    next.exhausted = true;
  }
  return next;
}

void append_transcript(InfoPool& pool, Json entry) {
  Json transcript = Json::array();
  if (auto current = pool.get(ArtifactKind::DebugTranscript)) transcript = current->payload;
  transcript.push_back(std::move(entry));
  pool.put(ArtifactKind::DebugTranscript, std::move(transcript));
}

std::vector<ChatMessage> repair_prompt(const code::CodeArtifact& current, const DebugFeedback& fb,
                                       const code::PromptContext& ctx) {
  auto sections = context_sections(ctx);
  if (!ctx.kb_snippets.empty()) {
    sections.push_back({std::string(prompts::kKnowledgeBase), text::join(ctx.kb_snippets, "\n")});
  }
  sections.push_back({std::string(prompts::kCurrentCode), current.source});
  sections.push_back({std::string(prompts::kExecutionFeedback), render_feedback(fb)});
  return {{Role::System, std::string(prompts::code_debugging().system)},
          {Role::User, prompts::render_sections(sections)}};
}

code::CodeArtifact repair(DebugSession& session, const code::CodeArtifact& current, const DebugFeedback& fb,
                          const code::PromptContext& ctx, llm::StageClient& client, InfoPool& pool) {
  if (session.state != DebugState::Repairing) {
    throw Error(ErrorCode::WrongState, "repair requires the Repairing state",
                {{"state", std::string(to_string(session.state))}});
  }
  fb.validate();
  std::string source = text::strip_code_fences(client.text(llm::Stage::CodeDebugging, repair_prompt(current, fb, ctx)));
  if (text::trim(source).empty()) throw Error(ErrorCode::EmptyCode, "repair returned no code");

  const auto& entry = pool.put(ArtifactKind::CodeDraft, source);
  code::CodeArtifact repaired{current.language, current.platform, std::move(source), entry.revision,
                              code::Provenance::Repaired};
  append_transcript(pool, {{"event", "repair"},
                           {"iteration", session.iteration},
                           {"from_revision", current.revision},
                           {"to_revision", repaired.revision}});
  session.state = DebugState::AwaitingFeedback;
  return repaired;
}

std::optional<std::string_view> comment_token(std::string_view language) {
  auto lang = text::to_lower(text::trim(language));
  for (const auto& entry : kCommentTokens) {
    if (lang == entry.language) return entry.token;
  }
  return std::nullopt;
}

Json AnnotatedCode::to_json() const {
  return {{"header", {{"created_at", header.created_at}, {"platform", header.platform}, {"summary", header.summary}}},
          {"comment_token", comment_token},
          {"header_lines", header_lines},
          {"text", text}};
}

AnnotatedCode parse_annotated(std::string_view source, std::string_view language) {
  const auto token = require_token(language);
  AnnotatedCode out;
  out.comment_token = std::string(token);
  out.text = std::string(source);

  auto lines = text::split_lines(source);
  int last_header = -1;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    auto trimmed = text::trim(lines[i]);
    if (trimmed.empty()) continue;
    if (!starts_with(trimmed, token)) break;
    std::string value;
    switch (header_key(trimmed.substr(token.size()), &value)) {
      case HeaderKey::Created: out.header.created_at = value; break;
      case HeaderKey::Platform: out.header.platform = value; break;
      case HeaderKey::Summary: out.header.summary = value; break;
      case HeaderKey::None: continue;
    }
    last_header = static_cast<int>(i);
  }
  out.header_lines = last_header + 1;
  std::vector<std::string> rest(lines.begin() + out.header_lines, lines.end());
  out.body = text::join(rest, "\n");
  return out;
}

std::vector<std::string> check_annotation(const AnnotatedCode& annotated, const AlgorithmDesignDocument& design,
                                          std::string_view language, std::string_view original_code) {
  const auto token = require_token(language);
  std::vector<std::string> violations;

  const auto& h = annotated.header;
  if (h.created_at.empty() && h.platform.empty() && h.summary.empty()) {
    violations.emplace_back("missing header");
  } else {
    if (h.created_at.empty()) violations.emplace_back("incomplete header: missing Created");
    if (h.platform.empty()) violations.emplace_back("incomplete header: missing Platform");
    if (h.summary.empty()) violations.emplace_back("incomplete header: missing Description");
  }

  auto lines = text::split_lines(annotated.text);
  int comments = 0;
  bool foreign = false;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    auto trimmed = text::trim(lines[i]);
    if (trimmed.empty()) continue;
    if (is_foreign_comment(trimmed, token, i)) foreign = true;
    if (static_cast<int>(i) >= annotated.header_lines && starts_with(trimmed, token)) ++comments;
  }
  const int modules = static_cast<int>(design.modules.size());
  if (comments < modules) {
    violations.push_back("comments(" + std::to_string(comments) + ") < modules(" + std::to_string(modules) + ")");
  }
  if (foreign) violations.emplace_back("wrong comment token");

  auto body_lines = executable_lines(annotated.text, token);
  if (body_lines.empty() || body_lines != executable_lines(original_code, token)) {
    violations.emplace_back("body drift");
  }
  return violations;
}

std::vector<ChatMessage> annotation_prompt(const code::CodeArtifact& code, const code::PromptContext& ctx,
                                           std::string_view created_at) {
  std::string metadata = "Created: " + std::string(created_at);
  if (ctx.ablation.pool) {
    metadata += "\nPlatform: " + ctx.platform() + "\nProgramming language: " + ctx.language();
  }
  std::vector<prompts::Section> sections = {{std::string(prompts::kAnnotationMetadata), metadata}};
  if (ctx.ablation.pool) {
    sections.push_back({std::string(prompts::kRequirementsDocument), ctx.requirements.to_json().dump(2)});
    sections.push_back({std::string(prompts::kAlgorithmDesign), ctx.design.to_json().dump(2)});
  }
  sections.push_back({std::string(prompts::kCurrentCode), code.source});
  return {{Role::System, std::string(prompts::code_annotation().system)},
          {Role::User, prompts::render_sections(sections)}};
}

AnnotatedCode annotate(DebugSession& session, const code::CodeArtifact& code, const code::PromptContext& ctx,
                       llm::StageClient& client, InfoPool& pool, const Clock& clock) {
  if (session.state != DebugState::Annotating) {
    throw Error(ErrorCode::WrongState, "annotation requires the Annotating state",
                {{"state", std::string(to_string(session.state))}});
  }
  require_token(code.language);

  auto messages = annotation_prompt(code, ctx, clock.now());
  std::string raw = client.text(llm::Stage::CodeAnnotation, messages);
  auto annotated = parse_annotated(text::strip_code_fences(raw), code.language);
  auto violations = check_annotation(annotated, ctx.design, code.language, code.source);

  if (!violations.empty()) {
    std::string correction = "The annotated code breaks these rules:\n";
    for (const auto& v : violations) correction += "- " + v + "\n";
    correction += "Return the complete annotated code again, fixing only the comments.";
    messages.push_back({Role::Assistant, raw.empty() ? std::string("(empty reply)") : raw});
    messages.push_back({Role::User, prompts::render_sections({{"Correction", correction},
                                                              {std::string(prompts::kCurrentCode), code.source}})});
    raw = client.text(llm::Stage::CodeAnnotation, messages);
    annotated = parse_annotated(text::strip_code_fences(raw), code.language);
    violations = check_annotation(annotated, ctx.design, code.language, code.source);
  }
  if (!violations.empty()) {
    throw Error(ErrorCode::AnnotationInvalid, violations.front(), {{"violations", violations}});
  }
  pool.put(ArtifactKind::AnnotatedCode, annotated.text);
  session.state = DebugState::Done;
  return annotated;
}

}  // namespace cop::debug
