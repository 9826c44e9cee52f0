// SPDX-License-Identifier: Apache-2.0
#include "cop/algorithm_design.hpp"

#include "cop/errors.hpp"
#include "cop/prompts.hpp"
#include "cop/text.hpp"

namespace cop::design {

std::vector<DesignViolation> validate_design(const AlgorithmDesignDocument& doc, int max_modules) {
  std::vector<DesignViolation> out;
  const int n = static_cast<int>(doc.modules.size());
  if (n == 0) {
    out.push_back({0, "", "empty design"});
    return out;
  }
  if (n > max_modules) out.push_back({0, "", "module count > " + std::to_string(max_modules)});

  bool sequence_reported = false;
  for (int i = 0; i < n; ++i) {
    const auto& m = doc.modules[static_cast<std::size_t>(i)];
    const int pos = i + 1;
    if (m.sequence != pos && !sequence_reported) {
      out.push_back({pos, "sequence", "non-consecutive sequence"});
      sequence_reported = true;
    }
    const std::pair<const char*, const std::string*> fields[] = {{"name", &m.name},
                                                                 {"description", &m.description},
                                                                 {"input", &m.input},
                                                                 {"output", &m.output},
                                                                 {"implementation_details", &m.implementation_details}};
    for (const auto& [field, value] : fields) {
      if (text::trim(*value).empty()) out.push_back({pos, field, std::string("empty ") + field});
    }
  }
  return out;
}

std::vector<llm::ChatMessage> design_prompt(const RequirementsDocument& req) {
  return {{llm::Role::System, std::string(prompts::algorithm_design().system)},
          {llm::Role::User,
           prompts::render_sections({{std::string(prompts::kRequirementsDocument), req.to_json().dump(2)}})}};
}

AlgorithmDesignDocument design(const RequirementsDocument& req, llm::StageClient& client, InfoPool& pool,
                               int max_modules) {
  auto stored = pool.get(ArtifactKind::RequirementsDoc);
  if (!stored || stored->payload != req.to_json()) {
    throw Error(ErrorCode::MissingArtifact, "requirements document is not the pool's current RequirementsDoc");
  }

  auto result = client.json(llm::Stage::AlgorithmDesign, design_prompt(req), kSchemaAlgorithmDesign);
  auto doc = AlgorithmDesignDocument::from_json(result.document);
  auto violations = validate_design(doc, max_modules);
  if (!violations.empty()) {
    Json list = Json::array();
    for (const auto& v : violations) list.push_back(v.to_json());
    throw Error(ErrorCode::DesignInvalid, violations.front().message, {{"violations", list}});
  }
  pool.put(ArtifactKind::AlgorithmDesign, doc.to_json());
  return doc;
}

}  // namespace cop::design
