// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "cop/json.hpp"

namespace cop::kb {

enum class KbKind { Platform, Function, Dataset };

std::string_view to_string(KbKind kind);
std::optional<KbKind> kind_from_string(std::string_view s);

struct PlatformRecord {
  std::string platform_id;
  std::string name;
  std::string description;
  std::string platform_type;
  std::string task_suitability;
  std::string data_source_interfaces;
  std::string access_permissions;
  std::string technical_support;
  std::string cross_platform_compatibility;
};

struct FunctionRecord {
  std::string operator_id;
  std::string full_name;
  std::string short_name;
  std::string library_name;
  std::string language;
  std::string platform;
  std::string description;
  std::string usage;
  std::string parameters;
  std::string output_type;
};

struct DatasetRecord {
  std::string dataset_id;
  std::string name;
  std::string provider;
  std::string snippet;
  std::vector<std::string> tags;
  std::string description;
  std::string doi;
  std::string website;
  std::string platform;  // optional in files; empty when not given
};

using KbRecord = std::variant<PlatformRecord, FunctionRecord, DatasetRecord>;

const std::string& record_id(const KbRecord& r);
/// Field values the platform/language filters compare against; nullopt
/// when the record kind has no such field.
std::optional<std::string_view> record_platform(const KbRecord& r);
std::optional<std::string_view> record_language(const KbRecord& r);
/// Text the index is built over.
std::string record_index_text(const KbRecord& r);
Json record_to_json(const KbRecord& r);

/// Field names a record of `kind` must carry, in file spelling.
const std::vector<std::string_view>& required_fields(KbKind kind);

/// Every rendered snippet line starts with this marker.
inline constexpr std::string_view kSnippetMarker = "<<KB>>";
std::string render_snippet(const KbRecord& r);

/// Lowercase, split on non-alphanumerics and on camelCase boundaries,
/// no stemming. Bytes >= 0x80 are kept inside tokens.
std::vector<std::string> tokenize(std::string_view text);

struct SearchFilters {
  std::optional<std::string> platform;
  std::optional<std::string> language;
};

struct RetrievalHit {
  std::string record_id;
  double score = 0.0;
  KbKind kind = KbKind::Function;
  std::string snippet;

  Json to_json() const;
};

inline constexpr double kBm25K1 = 1.2;
inline constexpr double kBm25B = 0.75;

/// Immutable BM25 index over one knowledge base file.
class KbIndex {
 public:
  /// Errors: IoFailure, ParseError, SchemaViolation, DuplicateId.
  static KbIndex load(const std::filesystem::path& path, KbKind kind);
  static KbIndex from_json(const Json& records, KbKind kind);

  KbKind kind() const { return kind_; }
  std::size_t size() const { return records_.size(); }
  const std::vector<KbRecord>& records() const { return records_; }
  double average_length() const { return avg_length_; }

  const KbRecord* get_by_id(std::string_view id) const;

  /// Top-k hits, score descending then record_id ascending. Filters are
  /// case-insensitive equality on fields the kind defines. Throws
  /// Error(Validation) if k < 1.
  std::vector<RetrievalHit> search(std::string_view query, const SearchFilters& filters, int k) const;

 private:
  struct Posting {
    std::uint32_t doc;
    std::uint32_t tf;
  };

  KbIndex() = default;
  bool passes(const KbRecord& r, const SearchFilters& f) const;

  KbKind kind_ = KbKind::Function;
  std::vector<KbRecord> records_;
  std::unordered_map<std::string, std::size_t> by_id_;
  std::unordered_map<std::string, std::vector<Posting>> postings_;
  std::vector<std::uint32_t> lengths_;
  double avg_length_ = 0.0;
};

/// The three knowledge bases; any may be missing.
struct KnowledgeBases {
  std::shared_ptr<const KbIndex> platform;
  std::shared_ptr<const KbIndex> function;
  std::shared_ptr<const KbIndex> dataset;

  std::shared_ptr<const KbIndex> get(KbKind kind) const;

  /// Loads <dir>/platform.json, function.json, dataset.json where present.
  static KnowledgeBases load_dir(const std::filesystem::path& dir);
};

}  // namespace cop::kb
