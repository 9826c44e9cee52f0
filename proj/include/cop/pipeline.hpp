// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cop/ablation.hpp"
#include "cop/algorithm_design.hpp"
#include "cop/clock.hpp"
#include "cop/code_implementation.hpp"
#include "cop/debug_annotate.hpp"
#include "cop/info_pool.hpp"
#include "cop/knowledge_base.hpp"
#include "cop/llm_backend.hpp"
#include "cop/requirements.hpp"

namespace cop {

inline constexpr int kMaxClarificationRounds = 5;

/// One task driven through the five stages, one step at a time. Owns the
/// task's information pool. Callers sequence the steps; each step checks
/// that its inputs exist and throws Error(WrongState) otherwise.
class TaskRunner {
 public:
  TaskRunner(const kb::KnowledgeBases& kbs, llm::StageClient& client, const Clock& clock, AblationConfig config);

  TaskRunner(const TaskRunner&) = delete;
  TaskRunner& operator=(const TaskRunner&) = delete;

  /// Extraction, conditional-need classification (on the analysis goal
  /// plus the raw text) and completeness. Returns the clarification to
  /// ask, or nullopt when the elements are complete.
  std::optional<requirements::ClarificationRequest> analyze(std::string_view requirement_text);

  /// Merges answers and re-checks. Throws Error(ClarificationExhausted)
  /// once more than kMaxClarificationRounds answer rounds were needed.
  std::optional<requirements::ClarificationRequest> answer(const requirements::Answers& answers);

  const RequirementsDocument& finalize_requirements();
  const AlgorithmDesignDocument& design_algorithm();
  /// Retrieval (when enabled), context assembly and code generation.
  const code::CodeArtifact& generate_code();
  /// Records the feedback in the transcript and applies the transition.
  /// Only valid while awaiting feedback (feedback mechanism enabled).
  const debug::DebugSession& feedback(const debug::DebugFeedback& fb);
  /// Valid after a feedback step moved the session to Repairing.
  const code::CodeArtifact& repair_code();
  /// Valid once the session is Annotating: right after generation when
  /// the debug loop is disabled, otherwise after the final feedback.
  const debug::AnnotatedCode& annotate_code();

  bool clarification_pending() const;
  bool needs_repair() const { return debug_.state == debug::DebugState::Repairing; }
  bool needs_annotation() const { return debug_.state == debug::DebugState::Annotating; }
  bool done() const { return debug_.state == debug::DebugState::Done && annotated_.has_value(); }

  const InfoPool& pool() const { return pool_; }
  const AblationConfig& config() const { return config_; }
  const RawElements& raw_elements() const { return raw_; }
  const requirements::ConditionalFlags& flags() const { return flags_; }
  const requirements::CompletenessReport& completeness() const { return report_; }
  int clarification_rounds() const { return rounds_; }
  const std::optional<RequirementsDocument>& requirements() const { return requirements_; }
  const std::optional<AlgorithmDesignDocument>& design() const { return design_; }
  const std::optional<code::CodeArtifact>& current_code() const { return code_; }
  const std::optional<debug::AnnotatedCode>& annotated() const { return annotated_; }
  const debug::DebugSession& debug_session() const { return debug_; }
  const code::SupportHits& support_hits() const { return hits_; }

  /// Runner state not held in the pool.
  Json state_json() const;
  /// Rebuilds a runner from recorded pool writes and the last state_json();
  /// no backend calls are made.
  void restore(const std::vector<PoolEntry>& writes, const Json& state);

 private:
  code::PromptContext context() const;
  requirements::ConditionalFlags classify();

  const kb::KnowledgeBases* kbs_;
  llm::StageClient* client_;
  const Clock* clock_;
  AblationConfig config_;
  InfoPool pool_;

  std::string requirement_text_;
  RawElements raw_;
  requirements::ConditionalFlags flags_;
  requirements::CompletenessReport report_;
  bool analyzed_ = false;
  int rounds_ = 0;
  std::optional<RequirementsDocument> requirements_;
  std::optional<AlgorithmDesignDocument> design_;
  code::SupportHits hits_;
  std::optional<debug::DebugFeedback> last_feedback_;
  std::optional<code::CodeArtifact> code_;
  debug::DebugSession debug_;
  std::optional<debug::AnnotatedCode> annotated_;
};

}  // namespace cop
