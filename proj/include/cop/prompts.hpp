// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace cop::prompts {

struct PromptTemplate {
  std::string_view id;
  std::string_view system;
  // True when the wording had to be rebuilt from a prose description
  // rather than an available template layout.
  bool reconstructed = false;
};

const PromptTemplate& requirement_extraction();
const PromptTemplate& conditional_need();
const PromptTemplate& methodology_inference();
const PromptTemplate& algorithm_design();
const PromptTemplate& code_implementation();
const PromptTemplate& code_debugging();
const PromptTemplate& code_annotation();

std::vector<const PromptTemplate*> catalog();

// Section titles used in user messages.
inline constexpr std::string_view kUserRequirements = "User Requirements";
inline constexpr std::string_view kRequirementsDocument = "User Requirements Document";
inline constexpr std::string_view kAlgorithmDesign = "Algorithm Design Document";
inline constexpr std::string_view kKnowledgeBase = "Knowledge Base";
inline constexpr std::string_view kCurrentCode = "Current Code";
inline constexpr std::string_view kExecutionFeedback = "Execution Feedback";
inline constexpr std::string_view kAnnotationMetadata = "Annotation Metadata";
inline constexpr std::string_view kTarget = "Target";

struct Section {
  std::string title;
  std::string body;
};

/// "<<< title >>>\n<body>" blocks separated by blank lines.
std::string render_sections(const std::vector<Section>& sections);
/// Inverse of render_sections for prompts this library produced.
std::vector<Section> parse_sections(std::string_view message);

}  // namespace cop::prompts
