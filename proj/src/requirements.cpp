// SPDX-License-Identifier: Apache-2.0
#include "cop/requirements.hpp"

#include <regex>
#include <set>

#include "cop/errors.hpp"
#include "cop/prompts.hpp"
#include "cop/text.hpp"

namespace cop::requirements {

namespace {

using llm::ChatMessage;
using llm::Role;
using llm::Stage;

const std::regex& spatial_keywords() {
  static const std::regex re(
      R"(\b(regions?|areas?|city|cities|countr(y|ies)|provinces?|states?|count(y|ies)|districts?|boundar(y|ies)|extent|around|within|cent(er|re)(ed)?|latitude|longitude|coordinates?|bbox|bounding box|maps?|watersheds?|basins?|catchments?|neighbou?rhoods?|global|globe|continents?|islands?|territor(y|ies)|locations?|sites?)\b)",
      std::regex::icase);
  return re;
}

const std::regex& temporal_keywords() {
  static const std::regex re(
      R"(\b(dates?|daily|weekly|monthly|annual(ly)?|yearly|years?|seasons?|seasonal|time[- ]series|trends?|periods?|decades?|temporal|centur(y|ies)|months?|days?|historical|january|february|march|april|june|july|august|september|october|november|december|spring|summer|autumn|winter)\b)",
      std::regex::icase);
  return re;
}

const std::regex& year_pattern() {
  static const std::regex re(R"(\b(1[89]\d{2}|20\d{2})\b)");
  return re;
}

// "in Brazil", "of the Amazon", "for Alaska": a capitalised word after a
// locative preposition, minus tool and data product names.
bool has_place_phrase(std::string_view s) {
  static const std::regex re(R"(\b(in|of|for|over|across|around|near|within|on)\s+(the\s+)?([A-Z][A-Za-z\-]+))");
  static const std::set<std::string> not_places = {
      "python", "javascript", "java",   "r",        "google",  "gee",       "arcgis",  "gdal",    "qgis",
      "pie",    "folium",     "geopandas", "landsat", "sentinel", "modis",  "csv",     "geotiff", "shapefile",
      "html",   "json",       "earth",  "api",      "engine",  "matplotlib", "osmnx", "raster",  "the"};
  std::string str(s);
  for (auto it = std::sregex_iterator(str.begin(), str.end(), re); it != std::sregex_iterator(); ++it) {
    if (!not_places.count(text::to_lower((*it)[3].str()))) return true;
  }
  return false;
}

std::string requirements_json_for_prompt(const RawElements& raw) {
  RequirementsDocument doc;
  doc.values = raw.values;
  return doc.to_json().dump(2);
}

}  // namespace

std::string_view to_string(ElementStatus s) {
  switch (s) {
    case ElementStatus::Present: return "Present";
    case ElementStatus::Missing: return "Missing";
    case ElementStatus::Inferred: return "Inferred";
    case ElementStatus::NotApplicable: return "NotApplicable";
  }
  return "Unknown";
}

ConditionalFlags ConditionalFlags::from_json(const Json& j) {
  return {j.value("spatial_needed", false), j.value("temporal_needed", false)};
}

std::vector<Element> CompletenessReport::missing() const {
  std::vector<Element> out;
  for (Element e : kAllElements) {
    if (get(e) == ElementStatus::Missing) out.push_back(e);
  }
  return out;
}

Json CompletenessReport::to_json() const {
  Json per = Json::object();
  for (Element e : kAllElements) per[std::string(element_name(e))] = std::string(to_string(get(e)));
  return {{"overall", overall == Overall::Complete ? "Complete" : "NeedsClarification"}, {"elements", per}};
}

std::vector<std::string> ClarificationRequest::names() const {
  std::vector<std::string> out;
  for (Element e : missing) out.emplace_back(element_name(e));
  return out;
}

Json ClarificationRequest::to_json() const { return {{"missing", names()}, {"prompt", prompt}}; }

RuleTableHit keyword_rules(std::string_view s) {
  const std::string str(s);
  RuleTableHit hit;
  hit.spatial = std::regex_search(str, spatial_keywords()) || has_place_phrase(s);
  hit.temporal = std::regex_search(str, temporal_keywords()) || std::regex_search(str, year_pattern());
  return hit;
}

RawElements extract_elements(std::string_view user_text, llm::StageClient& client) {
  if (text::trim(user_text).empty()) throw Error(ErrorCode::Validation, "user requirement text is empty");
  std::vector<ChatMessage> messages = {
      {Role::System, std::string(prompts::requirement_extraction().system)},
      {Role::User, prompts::render_sections({{std::string(prompts::kUserRequirements), text::trim(user_text)}})}};
  auto result = client.json(Stage::RequirementAnalysis, std::move(messages), kSchemaRequirementsExtraction);
  return RawElements::from_json(result.document);
}

ConditionalFlags parse_yes_no_pair(std::string_view reply) {
  static const std::regex re(R"((yes|no)\s*/\s*(yes|no))", std::regex::icase);
  std::smatch m;
  std::string s(reply);
  if (!std::regex_search(s, m, re)) {
    throw Error(ErrorCode::StructuredOutputFailure, "expected a yes/no pair, got: " + s.substr(0, 80));
  }
  return {text::iequals(m[1].str(), "yes"), text::iequals(m[2].str(), "yes")};
}

ConditionalFlags classify_conditional_need(std::string_view analysis_goal, llm::StageClient* fallback) {
  if (text::trim(analysis_goal).empty()) throw Error(ErrorCode::Validation, "analysis goal is empty");
  auto hit = keyword_rules(analysis_goal);
  if (hit.conclusive() || fallback == nullptr) return {hit.spatial, hit.temporal};
  std::vector<ChatMessage> messages = {
      {Role::System, std::string(prompts::conditional_need().system)},
      {Role::User, prompts::render_sections({{"Analysis Goal", text::trim(analysis_goal)}})}};
  return parse_yes_no_pair(fallback->text(Stage::RequirementAnalysis, std::move(messages)));
}

CompletenessReport check_completeness(const RawElements& raw, ConditionalFlags flags) {
  CompletenessReport report;
  for (Element e : kAllElements) {
    const bool present = raw.has(e);
    ElementStatus st = ElementStatus::Present;
    switch (element_class(e)) {
      case ElementClass::Required:
        st = present ? ElementStatus::Present : ElementStatus::Missing;
        break;
      case ElementClass::Conditional: {
        const bool needed = e == Element::SpatialExtent ? flags.spatial_needed : flags.temporal_needed;
        if (!needed) st = ElementStatus::NotApplicable;
        else st = present ? ElementStatus::Present : ElementStatus::Missing;
        break;
      }
      case ElementClass::Optional:
        st = present ? ElementStatus::Present : ElementStatus::Inferred;
        break;
    }
    report.status[static_cast<std::size_t>(e)] = st;
  }
  report.overall = report.missing().empty() ? Overall::Complete : Overall::NeedsClarification;
  return report;
}

ClarificationRequest build_clarification(const CompletenessReport& report) {
  auto missing = report.missing();
  if (missing.empty()) throw Error(ErrorCode::NothingMissing, "requirements are already complete");
  std::string prompt = "Based on your input, the following information is still needed:\n";
  for (Element e : missing) {
    prompt += "\n";
    prompt += element_key(e);
    prompt += ":";
  }
  return {std::move(missing), std::move(prompt)};
}

RawElements merge_answers(RawElements raw, const Answers& answers) {
  std::vector<std::pair<Element, std::string>> updates;
  for (const auto& [key, value] : answers) {
    auto e = element_from_name(key);
    if (!e) throw Error(ErrorCode::UnknownElement, "unknown requirement element: " + key, {{"element", key}});
    auto v = text::trim(value);
    if (v.empty()) throw Error(ErrorCode::EmptyAnswer, "empty answer for " + key, {{"element", key}});
    updates.emplace_back(*e, std::move(v));
  }
  for (auto& [e, v] : updates) raw.get(e) = std::move(v);
  return raw;
}

RequirementsDocument finalize(const RawElements& raw, ConditionalFlags flags, llm::StageClient& client,
                              InfoPool& pool) {
  auto report = check_completeness(raw, flags);
  if (report.overall != Overall::Complete) {
    Json missing = Json::array();
    for (Element e : report.missing()) missing.push_back(std::string(element_name(e)));
    throw Error(ErrorCode::IncompleteRequirements, "requirements are incomplete", {{"missing", missing}});
  }

  RequirementsDocument doc;
  for (Element e : kAllElements) {
    if (report.get(e) == ElementStatus::Present) doc.get(e) = raw.get(e);
  }
  if (!doc.get(Element::AnalysisMethodology)) {
    std::vector<ChatMessage> messages = {
        {Role::System, std::string(prompts::methodology_inference().system)},
        {Role::User, prompts::render_sections(
                         {{std::string(prompts::kRequirementsDocument), requirements_json_for_prompt(raw)}})}};
    std::string inferred = text::trim(client.text(Stage::RequirementAnalysis, std::move(messages)));
    // Models like to quote the phrase.
    while (inferred.size() >= 2 && (inferred.front() == '"' || inferred.front() == '\'') &&
           inferred.back() == inferred.front()) {
      inferred = text::trim(inferred.substr(1, inferred.size() - 2));
    }
    if (!inferred.empty()) {
      doc.get(Element::AnalysisMethodology) = std::move(inferred);
      doc.methodology_inferred = true;
    }
  }
  pool.put(ArtifactKind::RequirementsDoc, doc.to_json());
  return doc;
}

}  // namespace cop::requirements
