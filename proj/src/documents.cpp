// SPDX-License-Identifier: Apache-2.0
#include "cop/documents.hpp"

#include <cctype>

#include "cop/errors.hpp"
#include "cop/text.hpp"

namespace cop {

namespace {

struct ElementInfo {
  std::string_view name;
  std::string_view key;
  ElementClass cls;
};

constexpr std::array<ElementInfo, kElementCount> kElementInfo = {{
    {"platform", "Platform", ElementClass::Required},
    {"programming_language", "Programming_Language", ElementClass::Required},
    {"analysis_goal", "Analysis_Goal", ElementClass::Required},
    {"spatial_extent", "Spatial_Extent", ElementClass::Conditional},
    {"temporal_extent", "Temporal_Extent", ElementClass::Conditional},
    {"data_source_and_format", "Data_Source_and_Format", ElementClass::Required},
    {"analysis_methodology", "Analysis_Methodology", ElementClass::Optional},
    {"output_format", "Output_Format", ElementClass::Required},
}};

const ElementInfo& info(Element e) { return kElementInfo[static_cast<std::size_t>(e)]; }

std::string squash(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (std::isalnum(static_cast<unsigned char>(c))) out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

const Json* find_requirements_object(const Json& j) {
  if (!j.is_object()) return nullptr;
  if (auto it = j.find("requirements"); it != j.end()) return it->is_object() ? &*it : nullptr;
  return &j;
}

const std::array<std::string_view, 6> kModuleKeys = {"Module_Sequence", "Module_Name", "Module_Description",
                                                     "Input", "Output", "Implementation_Details"};

}  // namespace

ElementClass element_class(Element e) { return info(e).cls; }
std::string_view element_name(Element e) { return info(e).name; }
std::string_view element_key(Element e) { return info(e).key; }

std::optional<Element> element_from_name(std::string_view name) {
  const std::string wanted = squash(name);
  if (wanted.empty()) return std::nullopt;
  for (Element e : kAllElements) {
    if (squash(info(e).name) == wanted) return e;
  }
  return std::nullopt;
}

Json RawElements::to_json() const {
  Json out = Json::object();
  for (Element e : kAllElements) {
    if (has(e)) out[std::string(element_name(e))] = *get(e);
  }
  return out;
}

RawElements RawElements::from_json(const Json& j) {
  RawElements raw;
  const Json* obj = find_requirements_object(j);
  if (obj == nullptr) return raw;
  for (auto it = obj->begin(); it != obj->end(); ++it) {
    auto e = element_from_name(it.key());
    if (!e || !it->is_string()) continue;
    std::string v = text::trim(it->get<std::string>());
    if (!v.empty()) raw.get(*e) = std::move(v);
  }
  return raw;
}

Json RequirementsDocument::to_json() const {
  Json reqs = Json::object();
  for (Element e : kAllElements) {
    if (get(e)) reqs[std::string(element_key(e))] = *get(e);
  }
  Json doc = {{"document_type", std::string(kRequirementsDocumentType)}, {"requirements", std::move(reqs)}};
  if (methodology_inferred) doc["provenance"] = {{"Analysis_Methodology", "Inferred"}};
  return doc;
}

RequirementsDocument RequirementsDocument::from_json(const Json& j) {
  auto violations = validate_schema(kSchemaRequirementsDoc, j);
  if (!violations.empty()) {
    throw Error(ErrorCode::SchemaViolation, "requirements document: " + violations.front(),
                {{"violations", violations}});
  }
  RequirementsDocument doc;
  const Json& reqs = j.at("requirements");
  for (auto it = reqs.begin(); it != reqs.end(); ++it) {
    doc.get(*element_from_name(it.key())) = it->get<std::string>();
  }
  if (auto p = j.find("provenance"); p != j.end()) {
    auto m = p->find("Analysis_Methodology");
    doc.methodology_inferred = m != p->end() && m->is_string() && text::iequals(m->get<std::string>(), "Inferred");
  }
  return doc;
}

Json AlgorithmDesignDocument::to_json() const {
  Json arr = Json::array();
  for (const auto& m : modules) {
    arr.push_back({{"Module_Sequence", m.sequence},
                   {"Module_Name", m.name},
                   {"Module_Description", m.description},
                   {"Input", m.input},
                   {"Output", m.output},
                   {"Implementation_Details", m.implementation_details}});
  }
  return {{"Document_Type", std::string(kAlgorithmDesignDocumentType)}, {"Algorithm", std::move(arr)}};
}

AlgorithmDesignDocument AlgorithmDesignDocument::from_json(const Json& j) {
  auto violations = validate_schema(kSchemaAlgorithmDesign, j);
  if (!violations.empty()) {
    throw Error(ErrorCode::SchemaViolation, "algorithm design document: " + violations.front(),
                {{"violations", violations}});
  }
  AlgorithmDesignDocument doc;
  for (const auto& item : j.at("Algorithm")) {
    doc.modules.push_back({item.at("Module_Sequence").get<int>(), item.at("Module_Name").get<std::string>(),
                           item.at("Module_Description").get<std::string>(), item.at("Input").get<std::string>(),
                           item.at("Output").get<std::string>(),
                           item.at("Implementation_Details").get<std::string>()});
  }
  return doc;
}

namespace {

std::vector<std::string> validate_requirements_doc(const Json& j) {
  std::vector<std::string> v;
  if (!j.is_object()) return {"document is not a JSON object"};
  auto type = j.find("document_type");
  if (type == j.end() || !type->is_string()) {
    v.emplace_back("missing field: document_type");
  } else if (!text::iequals(type->get<std::string>(), kRequirementsDocumentType)) {
    v.emplace_back("document_type must be \"" + std::string(kRequirementsDocumentType) + "\"");
  }
  auto reqs = j.find("requirements");
  if (reqs == j.end() || !reqs->is_object()) {
    v.emplace_back("missing field: requirements (object)");
    return v;
  }
  std::array<bool, kElementCount> seen{};
  for (auto it = reqs->begin(); it != reqs->end(); ++it) {
    auto e = element_from_name(it.key());
    if (!e || it.key() != element_key(*e)) {
      v.emplace_back("unknown requirements field: " + it.key());
      continue;
    }
    seen[static_cast<std::size_t>(*e)] = true;
    if (!it->is_string() || text::trim(it->get<std::string>()).empty()) {
      v.emplace_back("field must be a non-empty string: " + it.key());
    }
  }
  for (Element e : kAllElements) {
    if (element_class(e) == ElementClass::Required && !seen[static_cast<std::size_t>(e)]) {
      v.emplace_back("missing required field: " + std::string(element_key(e)));
    }
  }
  if (auto p = j.find("provenance"); p != j.end() && !p->is_object()) {
    v.emplace_back("provenance must be an object");
  }
  return v;
}

std::vector<std::string> validate_extraction(const Json& j) {
  std::vector<std::string> v;
  if (!j.is_object()) return {"response is not a JSON object"};
  if (auto r = j.find("requirements"); r != j.end() && !r->is_object()) {
    return {"requirements must be an object"};
  }
  const Json* obj = find_requirements_object(j);
  for (auto it = obj->begin(); it != obj->end(); ++it) {
    if (obj == &j && (it.key() == "document_type" || it.key() == "provenance")) continue;
    if (!element_from_name(it.key())) {
      v.emplace_back("unknown requirements field: " + it.key());
    } else if (!it->is_string() && !it->is_null()) {
      v.emplace_back("field must be a string or null: " + it.key());
    }
  }
  return v;
}

std::vector<std::string> validate_algorithm_design(const Json& j) {
  std::vector<std::string> v;
  if (!j.is_object()) return {"document is not a JSON object"};
  auto type = j.find("Document_Type");
  if (type == j.end() || !type->is_string()) {
    v.emplace_back("missing field: Document_Type");
  } else if (!text::iequals(type->get<std::string>(), kAlgorithmDesignDocumentType)) {
    v.emplace_back("Document_Type must be \"" + std::string(kAlgorithmDesignDocumentType) + "\"");
  }
  auto algo = j.find("Algorithm");
  if (algo == j.end() || !algo->is_array()) {
    v.emplace_back("missing field: Algorithm (array)");
    return v;
  }
  for (std::size_t i = 0; i < algo->size(); ++i) {
    const Json& item = (*algo)[i];
    const std::string where = "Algorithm[" + std::to_string(i) + "]";
    if (!item.is_object()) {
      v.emplace_back(where + " is not an object");
      continue;
    }
    for (auto key : kModuleKeys) {
      auto f = item.find(std::string(key));
      if (f == item.end()) {
        v.emplace_back(where + " missing field: " + std::string(key));
      } else if (key == "Module_Sequence" ? !f->is_number_integer() : !f->is_string()) {
        v.emplace_back(where + " wrong type for field: " + std::string(key));
      }
    }
  }
  return v;
}

}  // namespace

bool schema_registered(std::string_view id) {
  return id == kSchemaRequirementsDoc || id == kSchemaRequirementsExtraction || id == kSchemaAlgorithmDesign;
}

std::vector<std::string> validate_schema(std::string_view id, const Json& doc) {
  if (id == kSchemaRequirementsDoc) return validate_requirements_doc(doc);
  if (id == kSchemaRequirementsExtraction) return validate_extraction(doc);
  if (id == kSchemaAlgorithmDesign) return validate_algorithm_design(doc);
  throw Error(ErrorCode::Validation, "unregistered schema: " + std::string(id));
}

}  // namespace cop
