// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cop/clock.hpp"
#include "cop/code_implementation.hpp"
#include "cop/documents.hpp"
#include "cop/info_pool.hpp"
#include "cop/llm_backend.hpp"

namespace cop::debug {

/// User verdict on one code revision.
struct DebugFeedback {
  bool executable = false;
  bool correct = false;  // ignored when not executable
  std::optional<std::string> error_text;
  std::optional<std::string> observed_output;

  static DebugFeedback success() { return {true, true, std::nullopt, std::nullopt}; }
  static DebugFeedback crashed(std::string error) { return {false, false, std::move(error), std::nullopt}; }
  static DebugFeedback wrong_output(std::string observed) { return {true, false, std::nullopt, std::move(observed)}; }

  bool passed() const { return executable && correct; }
  /// Throws Error(InvalidFeedback): a crash needs error_text, a wrong
  /// result needs observed_output.
  void validate() const;

  Json to_json() const;
  static DebugFeedback from_json(const Json& j);
  bool operator==(const DebugFeedback&) const = default;
};

enum class DebugState { AwaitingFeedback, Repairing, Annotating, Done };
std::string_view to_string(DebugState s);

struct DebugSession {
  int iteration = 0;
  int max_iterations = 3;
  DebugState state = DebugState::AwaitingFeedback;
  bool exhausted = false;

  Json to_json() const;
  bool operator==(const DebugSession&) const = default;
};

/// (Y,Y) -> Annotating; otherwise Repairing with iteration + 1 while below
/// the cap, else Annotating with exhausted = true. Pure.
DebugSession next_transition(const DebugSession& session, const DebugFeedback& fb);

/// Appends one object to the pool's DebugTranscript array.
void append_transcript(InfoPool& pool, Json entry);

std::vector<llm::ChatMessage> repair_prompt(const code::CodeArtifact& current, const DebugFeedback& fb,
                                            const code::PromptContext& ctx);

/// Requires state Repairing. Stores the new CodeDraft revision and a
/// transcript entry, then returns the session to AwaitingFeedback.
code::CodeArtifact repair(DebugSession& session, const code::CodeArtifact& current, const DebugFeedback& fb,
                          const code::PromptContext& ctx, llm::StageClient& client, InfoPool& pool);

/// Line-comment token for a language ("//" for JavaScript, "#" for Python
/// and R); nullopt when unknown.
std::optional<std::string_view> comment_token(std::string_view language);

struct AnnotationHeader {
  std::string created_at;
  std::string platform;
  std::string summary;
};

struct AnnotatedCode {
  AnnotationHeader header;
  std::string body;  // everything after the header lines
  std::string comment_token;
  std::string text;  // full annotated source
  int header_lines = 0;

  Json to_json() const;
};

/// Splits off the leading header comment lines. Throws
/// Error(UnknownLanguage).
AnnotatedCode parse_annotated(std::string_view text, std::string_view language);

/// Violations of the annotation rules: missing or incomplete header,
/// fewer comment lines than design modules, wrong comment token, and body
/// drift (executable lines differ from `original_code` as a multiset,
/// ignoring whitespace and comments). Throws Error(UnknownLanguage).
std::vector<std::string> check_annotation(const AnnotatedCode& annotated, const AlgorithmDesignDocument& design,
                                          std::string_view language, std::string_view original_code);

std::vector<llm::ChatMessage> annotation_prompt(const code::CodeArtifact& code, const code::PromptContext& ctx,
                                                std::string_view created_at);

/// Requires state Annotating. One corrective re-ask, then
/// Error(AnnotationInvalid). Stores AnnotatedCode and moves to Done.
AnnotatedCode annotate(DebugSession& session, const code::CodeArtifact& code, const code::PromptContext& ctx,
                       llm::StageClient& client, InfoPool& pool, const Clock& clock);

}  // namespace cop::debug
