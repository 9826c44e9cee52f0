// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "cop/documents.hpp"
#include "cop/info_pool.hpp"
#include "cop/llm_backend.hpp"

namespace cop::requirements {

struct ConditionalFlags {
  bool spatial_needed = false;
  bool temporal_needed = false;

  Json to_json() const { return {{"spatial_needed", spatial_needed}, {"temporal_needed", temporal_needed}}; }
  static ConditionalFlags from_json(const Json& j);
  bool operator==(const ConditionalFlags&) const = default;
};

enum class ElementStatus { Present, Missing, Inferred, NotApplicable };
std::string_view to_string(ElementStatus s);

enum class Overall { Complete, NeedsClarification };

struct CompletenessReport {
  std::array<ElementStatus, kElementCount> status{};
  Overall overall = Overall::Complete;

  ElementStatus get(Element e) const { return status[static_cast<std::size_t>(e)]; }
  /// Missing elements in canonical order.
  std::vector<Element> missing() const;
  Json to_json() const;
  bool operator==(const CompletenessReport&) const = default;
};

struct ClarificationRequest {
  std::vector<Element> missing;
  std::string prompt;

  std::vector<std::string> names() const;
  Json to_json() const;
};

/// element name (either spelling) -> answer text
using Answers = std::map<std::string, std::string>;

/// Keyword pass of the conditional-need classifier.
struct RuleTableHit {
  bool spatial = false;
  bool temporal = false;
  bool conclusive() const { return spatial || temporal; }
};
RuleTableHit keyword_rules(std::string_view text);

/// One backend call with the extraction template; elements the model
/// leaves blank stay absent.
RawElements extract_elements(std::string_view user_text, llm::StageClient& client);

/// Keyword table first; when it has no hit at all and `fallback` is given,
/// one yes/no backend query decides. Without a fallback an inconclusive
/// table yields {false, false}.
ConditionalFlags classify_conditional_need(std::string_view analysis_goal, llm::StageClient* fallback);

/// Parses "<yes|no>/<yes|no>" (spatial first).
ConditionalFlags parse_yes_no_pair(std::string_view reply);

CompletenessReport check_completeness(const RawElements& raw, ConditionalFlags flags);

/// Throws Error(NothingMissing) on a complete report.
ClarificationRequest build_clarification(const CompletenessReport& report);

/// Throws Error(UnknownElement) / Error(EmptyAnswer); nothing is applied
/// unless every answer is valid.
RawElements merge_answers(RawElements raw, const Answers& answers);

/// Builds and stores the requirements document; infers the methodology
/// with one backend call when absent. Throws Error(IncompleteRequirements)
/// if the elements are not complete under `flags`.
RequirementsDocument finalize(const RawElements& raw, ConditionalFlags flags, llm::StageClient& client,
                              InfoPool& pool);

}  // namespace cop::requirements
