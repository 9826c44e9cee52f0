// SPDX-License-Identifier: Apache-2.0
#include "cop/code_implementation.hpp"

#include "cop/errors.hpp"
#include "cop/prompts.hpp"
#include "cop/text.hpp"

namespace cop::code {

namespace {

Json hits_json(const std::vector<kb::RetrievalHit>& hits) {
  Json arr = Json::array();
  for (const auto& h : hits) arr.push_back(h.to_json());
  return arr;
}

std::vector<kb::RetrievalHit> search_or_empty(const std::shared_ptr<const kb::KbIndex>& index,
                                              const std::string& query, const kb::SearchFilters& filters, int k) {
  if (!index) return {};
  return index->search(query, filters, k);
}

}  // namespace

Json SupportHits::to_json() const {
  return {{"platform", hits_json(platform)}, {"dataset", hits_json(dataset)}, {"function", hits_json(function)}};
}

std::string support_query(const RequirementsDocument& req, const AlgorithmDesignDocument& design) {
  std::vector<std::string> parts;
  parts.push_back(req.value_or_empty(Element::AnalysisGoal));
  parts.push_back(req.value_or_empty(Element::AnalysisMethodology));
  for (const auto& m : design.modules) parts.push_back(m.name);
  return text::collapse_whitespace(text::join(parts, " "));
}

SupportHits retrieve_support(const RequirementsDocument& req, const AlgorithmDesignDocument& design,
                             const kb::KnowledgeBases& kbs, int k_per_kb) {
  const std::string query = support_query(req, design);
  kb::SearchFilters filters;
  if (auto p = req.get(Element::Platform)) filters.platform = *p;
  if (auto l = req.get(Element::ProgrammingLanguage)) filters.language = *l;

  SupportHits hits;
  hits.function = search_or_empty(kbs.function, query, filters, k_per_kb);
  hits.dataset = search_or_empty(kbs.dataset, query, filters, k_per_kb);
  hits.platform = search_or_empty(kbs.platform, req.value_or_empty(Element::Platform), {}, k_per_kb);
  return hits;
}

std::vector<std::string> render_snippets(const SupportHits& hits) {
  std::vector<std::string> out;
  for (const auto* list : {&hits.platform, &hits.dataset, &hits.function}) {
    for (const auto& h : *list) out.push_back(h.snippet);
  }
  return out;
}

PromptContext assemble_context(const InfoPool& pool, const SupportHits& hits, const AblationConfig& ablation,
                               const RequirementsDocument* pass_requirements,
                               const AlgorithmDesignDocument* pass_design) {
  PromptContext ctx;
  ctx.ablation = ablation;
  if (ablation.pool) {
    auto req = pool.get(ArtifactKind::RequirementsDoc);
    auto design = pool.get(ArtifactKind::AlgorithmDesign);
    if (!req) throw Error(ErrorCode::MissingArtifact, "pool has no RequirementsDoc", {{"kind", "RequirementsDoc"}});
    if (!design) throw Error(ErrorCode::MissingArtifact, "pool has no AlgorithmDesign", {{"kind", "AlgorithmDesign"}});
    ctx.requirements = RequirementsDocument::from_json(req->payload);
    ctx.design = AlgorithmDesignDocument::from_json(design->payload);
  } else {
    if (pass_requirements == nullptr) {
      throw Error(ErrorCode::MissingArtifact, "no requirements document passed", {{"kind", "RequirementsDoc"}});
    }
    if (pass_design == nullptr) {
      throw Error(ErrorCode::MissingArtifact, "no algorithm design passed", {{"kind", "AlgorithmDesign"}});
    }
    ctx.requirements = *pass_requirements;
    ctx.design = *pass_design;
  }
  if (ablation.retrieval) ctx.kb_snippets = render_snippets(hits);
  return ctx;
}

std::string_view to_string(Provenance p) { return p == Provenance::Generated ? "generated" : "repaired"; }

Json CodeArtifact::to_json() const {
  return {{"language", language}, {"platform", platform}, {"revision", revision},
          {"provenance", std::string(to_string(provenance))}, {"source", source}};
}

std::vector<llm::ChatMessage> code_prompt(const PromptContext& ctx) {
  std::vector<prompts::Section> sections;
  if (ctx.ablation.pool) {
    sections.push_back({std::string(prompts::kTarget),
                        "Platform: " + ctx.platform() + "\nProgramming language: " + ctx.language()});
    sections.push_back({std::string(prompts::kRequirementsDocument), ctx.requirements.to_json().dump(2)});
  }
  sections.push_back({std::string(prompts::kAlgorithmDesign), ctx.design.to_json().dump(2)});
  if (!ctx.kb_snippets.empty()) {
    sections.push_back({std::string(prompts::kKnowledgeBase), text::join(ctx.kb_snippets, "\n")});
  }
  return {{llm::Role::System, std::string(prompts::code_implementation().system)},
          {llm::Role::User, prompts::render_sections(sections)}};
}

CodeArtifact generate(const PromptContext& ctx, llm::StageClient& client, InfoPool& pool) {
  std::string source = text::strip_code_fences(client.text(llm::Stage::CodeImplementation, code_prompt(ctx)));
  if (text::trim(source).empty()) throw Error(ErrorCode::EmptyCode, "code generation returned no code");
  const auto& entry = pool.put(ArtifactKind::CodeDraft, source);
  return {ctx.language(), ctx.platform(), std::move(source), entry.revision, Provenance::Generated};
}

std::string_view source_extension(std::string_view language) {
  if (text::iequals(language, "javascript") || text::iequals(language, "js")) return ".js";
  if (text::iequals(language, "python")) return ".py";
  if (text::iequals(language, "r")) return ".R";
  return ".txt";
}

}  // namespace cop::code
