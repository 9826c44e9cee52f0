// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cop/ablation.hpp"
#include "cop/documents.hpp"
#include "cop/info_pool.hpp"
#include "cop/knowledge_base.hpp"
#include "cop/llm_backend.hpp"

namespace cop::code {

inline constexpr int kDefaultHitsPerKb = 5;

struct SupportHits {
  std::vector<kb::RetrievalHit> platform;
  std::vector<kb::RetrievalHit> dataset;
  std::vector<kb::RetrievalHit> function;

  Json to_json() const;
};

/// analysis goal, methodology and every module name, space separated.
std::string support_query(const RequirementsDocument& req, const AlgorithmDesignDocument& design);

/// Function and dataset searches are filtered by the document's platform
/// and language; the platform KB is searched by platform name. A missing
/// KB contributes an empty list.
SupportHits retrieve_support(const RequirementsDocument& req, const AlgorithmDesignDocument& design,
                             const kb::KnowledgeBases& kbs, int k_per_kb = kDefaultHitsPerKb);

struct PromptContext {
  RequirementsDocument requirements;
  AlgorithmDesignDocument design;
  std::vector<std::string> kb_snippets;  // empty whenever retrieval is off
  AblationConfig ablation;

  std::string platform() const { return requirements.value_or_empty(Element::Platform); }
  std::string language() const { return requirements.value_or_empty(Element::ProgrammingLanguage); }
};

/// With the pool enabled both documents are read from the pool; with it
/// disabled they must be passed directly. Throws Error(MissingArtifact)
/// when a document is unavailable.
PromptContext assemble_context(const InfoPool& pool, const SupportHits& hits, const AblationConfig& ablation,
                               const RequirementsDocument* pass_requirements = nullptr,
                               const AlgorithmDesignDocument* pass_design = nullptr);

/// Snippet blocks in kind order (platform, dataset, function), each list
/// in score order.
std::vector<std::string> render_snippets(const SupportHits& hits);

enum class Provenance { Generated, Repaired };
std::string_view to_string(Provenance p);

struct CodeArtifact {
  std::string language;
  std::string platform;
  std::string source;
  int revision = 0;
  Provenance provenance = Provenance::Generated;

  Json to_json() const;
};

/// Sections shared by the code, repair and annotation prompts: target and
/// requirements only with the pool on; KB block only with retrieval on.
std::vector<llm::ChatMessage> code_prompt(const PromptContext& ctx);

/// Strips fences, stores CodeDraft, returns the artifact. Throws
/// Error(EmptyCode) for a blank reply.
CodeArtifact generate(const PromptContext& ctx, llm::StageClient& client, InfoPool& pool);

/// ".js", ".py", ".R"; ".txt" for anything else.
std::string_view source_extension(std::string_view language);

}  // namespace cop::code
