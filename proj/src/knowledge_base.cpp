// SPDX-License-Identifier: Apache-2.0
#include "cop/knowledge_base.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "cop/errors.hpp"
#include "cop/text.hpp"

namespace cop::kb {

namespace {

const std::vector<std::string_view> kPlatformFields = {
    "Platform_id",        "Name",              "Description",
    "Platform_type",      "Task_suitability",  "Data_source_interfaces",
    "Access_permissions", "Technical_support", "Cross_platform_compatibility"};

const std::vector<std::string_view> kFunctionFields = {"Operator_id", "Full_name",   "Short_name", "Library_name",
                                                       "Language",    "Platform",    "Description", "Usage",
                                                       "Parameters",  "Output_type"};

const std::vector<std::string_view> kDatasetFields = {"Dataset_id",  "Name", "Provider", "Snippet",
                                                      "Tags",        "Description", "DOI", "Website"};

// Fields that must be non-empty on top of being present.
const std::vector<std::string_view>& non_empty_fields(KbKind kind) {
  static const std::vector<std::string_view> platform = {"Platform_id", "Name"};
  static const std::vector<std::string_view> function = {"Operator_id", "Full_name", "Short_name", "Platform",
                                                         "Language"};
  static const std::vector<std::string_view> dataset = {"Dataset_id", "Snippet"};
  switch (kind) {
    case KbKind::Platform: return platform;
    case KbKind::Function: return function;
    case KbKind::Dataset: return dataset;
  }
  return platform;
}

std::string str(const Json& rec, std::string_view key) {
  auto it = rec.find(std::string(key));
  return it != rec.end() && it->is_string() ? it->get<std::string>() : std::string();
}

std::string one_line(std::string_view s) { return text::collapse_whitespace(s); }

bool is_token_byte(unsigned char c) { return std::isalnum(c) || c >= 0x80; }
bool is_upper(unsigned char c) { return c >= 'A' && c <= 'Z'; }
bool is_lower(unsigned char c) { return c >= 'a' && c <= 'z'; }

// Violations for one record; empty when well-formed.
std::vector<std::string> check_record(const Json& rec, KbKind kind) {
  if (!rec.is_object()) return {"record is not an object"};
  std::vector<std::string> missing;
  for (auto field : required_fields(kind)) {
    auto it = rec.find(std::string(field));
    if (it == rec.end()) {
      missing.emplace_back(field);
      continue;
    }
    bool ok = field == "Tags" ? it->is_array() && std::all_of(it->begin(), it->end(), [](const Json& t) {
      return t.is_string();
    })
                              : it->is_string();
    if (!ok) missing.emplace_back(field);
  }
  for (auto field : non_empty_fields(kind)) {
    if (std::find(missing.begin(), missing.end(), field) != missing.end()) continue;
    if (text::trim(str(rec, field)).empty()) missing.emplace_back(field);
  }
  if (kind == KbKind::Dataset) {
    if (auto it = rec.find("Platform"); it != rec.end() && !it->is_string()) missing.emplace_back("Platform");
  }
  return missing;
}

KbRecord parse_record(const Json& rec, KbKind kind) {
  switch (kind) {
    case KbKind::Platform:
      return PlatformRecord{str(rec, "Platform_id"),        str(rec, "Name"),
                            str(rec, "Description"),        str(rec, "Platform_type"),
                            str(rec, "Task_suitability"),   str(rec, "Data_source_interfaces"),
                            str(rec, "Access_permissions"), str(rec, "Technical_support"),
                            str(rec, "Cross_platform_compatibility")};
    case KbKind::Function:
      return FunctionRecord{str(rec, "Operator_id"), str(rec, "Full_name"),   str(rec, "Short_name"),
                            str(rec, "Library_name"), str(rec, "Language"),   str(rec, "Platform"),
                            str(rec, "Description"), str(rec, "Usage"),       str(rec, "Parameters"),
                            str(rec, "Output_type")};
    case KbKind::Dataset: {
      DatasetRecord d{str(rec, "Dataset_id"), str(rec, "Name"), str(rec, "Provider"), str(rec, "Snippet"),
                      {},                     str(rec, "Description"), str(rec, "DOI"), str(rec, "Website"),
                      str(rec, "Platform")};
      for (const auto& t : rec.at("Tags")) d.tags.push_back(t.get<std::string>());
      return d;
    }
  }
  throw Error(ErrorCode::Validation, "unknown knowledge base kind");
}

}  // namespace

std::string_view to_string(KbKind kind) {
  switch (kind) {
    case KbKind::Platform: return "platform";
    case KbKind::Function: return "function";
    case KbKind::Dataset: return "dataset";
  }
  return "unknown";
}

std::optional<KbKind> kind_from_string(std::string_view s) {
  for (auto k : {KbKind::Platform, KbKind::Function, KbKind::Dataset}) {
    if (text::iequals(to_string(k), s)) return k;
  }
  return std::nullopt;
}

const std::vector<std::string_view>& required_fields(KbKind kind) {
  switch (kind) {
    case KbKind::Platform: return kPlatformFields;
    case KbKind::Function: return kFunctionFields;
    case KbKind::Dataset: return kDatasetFields;
  }
  return kFunctionFields;
}

const std::string& record_id(const KbRecord& r) {
  struct V {
    const std::string& operator()(const PlatformRecord& p) const { return p.platform_id; }
    const std::string& operator()(const FunctionRecord& f) const { return f.operator_id; }
    const std::string& operator()(const DatasetRecord& d) const { return d.dataset_id; }
  };
  return std::visit(V{}, r);
}

std::optional<std::string_view> record_platform(const KbRecord& r) {
  if (auto* f = std::get_if<FunctionRecord>(&r)) return f->platform;
  if (auto* d = std::get_if<DatasetRecord>(&r)) return d->platform;
  return std::nullopt;
}

std::optional<std::string_view> record_language(const KbRecord& r) {
  if (auto* f = std::get_if<FunctionRecord>(&r)) return f->language;
  return std::nullopt;
}

std::string record_index_text(const KbRecord& r) {
  struct V {
    std::string operator()(const PlatformRecord& p) const { return p.name + " " + p.description; }
    std::string operator()(const FunctionRecord& f) const {
      return f.full_name + " " + f.short_name + " " + f.description + " " + f.usage;
    }
    std::string operator()(const DatasetRecord& d) const {
      return d.name + " " + d.description + " " + text::join(d.tags, " ");
    }
  };
  return std::visit(V{}, r);
}

Json record_to_json(const KbRecord& r) {
  struct V {
    Json operator()(const PlatformRecord& p) const {
      return {{"Platform_id", p.platform_id},
              {"Name", p.name},
              {"Description", p.description},
              {"Platform_type", p.platform_type},
              {"Task_suitability", p.task_suitability},
              {"Data_source_interfaces", p.data_source_interfaces},
              {"Access_permissions", p.access_permissions},
              {"Technical_support", p.technical_support},
              {"Cross_platform_compatibility", p.cross_platform_compatibility}};
    }
    Json operator()(const FunctionRecord& f) const {
      return {{"Operator_id", f.operator_id}, {"Full_name", f.full_name},     {"Short_name", f.short_name},
              {"Library_name", f.library_name}, {"Language", f.language},     {"Platform", f.platform},
              {"Description", f.description}, {"Usage", f.usage},             {"Parameters", f.parameters},
              {"Output_type", f.output_type}};
    }
    Json operator()(const DatasetRecord& d) const {
      Json j = {{"Dataset_id", d.dataset_id}, {"Name", d.name}, {"Provider", d.provider},
                {"Snippet", d.snippet},       {"Tags", d.tags}, {"Description", d.description},
                {"DOI", d.doi},               {"Website", d.website}};
      if (!d.platform.empty()) j["Platform"] = d.platform;
      return j;
    }
  };
  return std::visit(V{}, r);
}

std::string render_snippet(const KbRecord& r) {
  struct V {
    std::string operator()(const PlatformRecord& p) const {
      return std::string(kSnippetMarker) + " PLATFORM " + one_line(p.name) + " | type=" + one_line(p.platform_type) +
             " | " + one_line(p.description);
    }
    std::string operator()(const FunctionRecord& f) const {
      return std::string(kSnippetMarker) + " FUNCTION " + one_line(f.full_name) + " | platform=" +
             one_line(f.platform) + " | usage: " + one_line(f.usage);
    }
    std::string operator()(const DatasetRecord& d) const {
      return std::string(kSnippetMarker) + " DATASET " + one_line(d.name) + " | snippet=" + one_line(d.snippet) +
             " | provider=" + one_line(d.provider);
    }
  };
  return std::visit(V{}, r);
}

std::vector<std::string> tokenize(std::string_view s) {
  std::vector<std::string> tokens;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) tokens.push_back(text::to_lower(cur));
    cur.clear();
  };
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto c = static_cast<unsigned char>(s[i]);
    if (!is_token_byte(c)) {
      flush();
      continue;
    }
    if (!cur.empty() && is_upper(c)) {
      const auto prev = static_cast<unsigned char>(cur.back());
      const bool next_lower = i + 1 < s.size() && is_lower(static_cast<unsigned char>(s[i + 1]));
      // fooBar -> foo|Bar ; HTMLParser -> HTML|Parser
      if (is_lower(prev) || (is_upper(prev) && next_lower)) flush();
    }
    cur.push_back(static_cast<char>(c));
  }
  flush();
  return tokens;
}

Json RetrievalHit::to_json() const {
  return {{"record_id", record_id}, {"score", score}, {"kind", std::string(to_string(kind))}, {"snippet", snippet}};
}

KbIndex KbIndex::load(const std::filesystem::path& path, KbKind kind) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open knowledge base file: " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  Json records;
  try {
    records = Json::parse(buf.str());
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
  return from_json(records, kind);
}

KbIndex KbIndex::from_json(const Json& records, KbKind kind) {
  if (!records.is_array()) throw Error(ErrorCode::ParseError, "knowledge base file must hold a JSON array");

  Json violations = Json::array();
  for (std::size_t i = 0; i < records.size(); ++i) {
    for (auto& field : check_record(records[i], kind)) {
      violations.push_back({{"record_index", i}, {"field", field}});
    }
  }
  if (!violations.empty()) {
    const auto& first = violations.front();
    throw Error(ErrorCode::SchemaViolation,
                "record " + std::to_string(first["record_index"].get<std::size_t>()) +
                    ": missing or invalid field " + first["field"].get<std::string>(),
                {{"violations", violations}});
  }

  KbIndex index;
  index.kind_ = kind;
  index.records_.reserve(records.size());
  std::uint64_t total = 0;
  for (const auto& rec : records) {
    KbRecord parsed = parse_record(rec, kind);
    const std::string& id = record_id(parsed);
    if (index.by_id_.count(id)) throw Error(ErrorCode::DuplicateId, "duplicate id: " + id, {{"id", id}});
    const auto doc = static_cast<std::uint32_t>(index.records_.size());
    index.by_id_.emplace(id, doc);

    std::map<std::string, std::uint32_t> tf;
    auto tokens = tokenize(record_index_text(parsed));
    for (auto& t : tokens) ++tf[t];
    for (auto& [term, n] : tf) index.postings_[term].push_back({doc, n});
    index.lengths_.push_back(static_cast<std::uint32_t>(tokens.size()));
    total += tokens.size();
    index.records_.push_back(std::move(parsed));
  }
  index.avg_length_ = index.records_.empty() ? 0.0 : static_cast<double>(total) / index.records_.size();
  return index;
}

const KbRecord* KbIndex::get_by_id(std::string_view id) const {
  auto it = by_id_.find(std::string(id));
  return it == by_id_.end() ? nullptr : &records_[it->second];
}

bool KbIndex::passes(const KbRecord& r, const SearchFilters& f) const {
  if (f.platform) {
    if (auto p = record_platform(r); p && !text::iequals(*p, *f.platform)) return false;
  }
  if (f.language) {
    if (auto l = record_language(r); l && !text::iequals(*l, *f.language)) return false;
  }
  return true;
}

std::vector<RetrievalHit> KbIndex::search(std::string_view query, const SearchFilters& filters, int k) const {
  if (k < 1) throw Error(ErrorCode::Validation, "k must be >= 1");
  auto tokens = tokenize(query);
  std::set<std::string> terms(tokens.begin(), tokens.end());
  if (terms.empty() || records_.empty()) return {};

  const double n = static_cast<double>(records_.size());
  std::vector<double> scores(records_.size(), 0.0);
  std::vector<signed char> eligible(records_.size(), -1);

  // Terms are visited in sorted order so every document accumulates its
  // per-term contributions in a fixed sequence.
  for (const auto& term : terms) {
    auto it = postings_.find(term);
    if (it == postings_.end()) continue;
    const double df = static_cast<double>(it->second.size());
    const double idf = std::log(1.0 + (n - df + 0.5) / (df + 0.5));
    for (const auto& p : it->second) {
      if (eligible[p.doc] < 0) eligible[p.doc] = passes(records_[p.doc], filters) ? 1 : 0;
      if (!eligible[p.doc]) continue;
      const double tf = p.tf;
      const double dl = lengths_[p.doc];
      scores[p.doc] += idf * (tf * (kBm25K1 + 1.0)) / (tf + kBm25K1 * (1.0 - kBm25B + kBm25B * dl / avg_length_));
    }
  }

  std::vector<std::uint32_t> hits;
  for (std::uint32_t d = 0; d < scores.size(); ++d) {
    if (scores[d] > 0.0) hits.push_back(d);
  }
  auto better = [&](std::uint32_t a, std::uint32_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return record_id(records_[a]) < record_id(records_[b]);
  };
  const auto take = std::min<std::size_t>(hits.size(), static_cast<std::size_t>(k));
  std::partial_sort(hits.begin(), hits.begin() + static_cast<std::ptrdiff_t>(take), hits.end(), better);

  std::vector<RetrievalHit> out;
  out.reserve(take);
  for (std::size_t i = 0; i < take; ++i) {
    const auto& rec = records_[hits[i]];
    out.push_back({record_id(rec), scores[hits[i]], kind_, render_snippet(rec)});
  }
  return out;
}

std::shared_ptr<const KbIndex> KnowledgeBases::get(KbKind kind) const {
  switch (kind) {
    case KbKind::Platform: return platform;
    case KbKind::Function: return function;
    case KbKind::Dataset: return dataset;
  }
  return nullptr;
}

KnowledgeBases KnowledgeBases::load_dir(const std::filesystem::path& dir) {
  KnowledgeBases kbs;
  auto load = [&](KbKind kind) -> std::shared_ptr<const KbIndex> {
    auto path = dir / (std::string(to_string(kind)) + ".json");
    if (!std::filesystem::exists(path)) return nullptr;
    return std::make_shared<const KbIndex>(KbIndex::load(path, kind));
  };
  kbs.platform = load(KbKind::Platform);
  kbs.function = load(KbKind::Function);
  kbs.dataset = load(KbKind::Dataset);
  return kbs;
}

}  // namespace cop::kb
