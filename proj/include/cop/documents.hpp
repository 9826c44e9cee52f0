// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cop/json.hpp"

namespace cop {

/// The eight requirement elements, in canonical order.
enum class Element {
  Platform,
  ProgrammingLanguage,
  AnalysisGoal,
  SpatialExtent,
  TemporalExtent,
  DataSourceAndFormat,
  AnalysisMethodology,
  OutputFormat,
};

inline constexpr std::size_t kElementCount = 8;
inline constexpr std::array<Element, kElementCount> kAllElements = {
    Element::Platform,       Element::ProgrammingLanguage, Element::AnalysisGoal,
    Element::SpatialExtent,  Element::TemporalExtent,      Element::DataSourceAndFormat,
    Element::AnalysisMethodology, Element::OutputFormat,
};

enum class ElementClass { Required, Conditional, Optional };

ElementClass element_class(Element e);
/// snake_case name used by the API ("spatial_extent").
std::string_view element_name(Element e);
/// Document key spelling ("Spatial_Extent").
std::string_view element_key(Element e);
/// Accepts either spelling, case-insensitively, ignoring spaces/underscores.
std::optional<Element> element_from_name(std::string_view name);

using ElementValues = std::array<std::optional<std::string>, kElementCount>;

/// Elements extracted from free text; absent means not yet known.
struct RawElements {
  ElementValues values{};

  const std::optional<std::string>& get(Element e) const { return values[static_cast<std::size_t>(e)]; }
  std::optional<std::string>& get(Element e) { return values[static_cast<std::size_t>(e)]; }
  bool has(Element e) const { return get(e).has_value(); }

  Json to_json() const;
  static RawElements from_json(const Json& j);

  bool operator==(const RawElements&) const = default;
};

inline constexpr std::string_view kRequirementsDocumentType = "User Requirements Document";
inline constexpr std::string_view kAlgorithmDesignDocumentType = "Algorithm Design Document";

struct RequirementsDocument {
  ElementValues values{};
  bool methodology_inferred = false;

  const std::optional<std::string>& get(Element e) const { return values[static_cast<std::size_t>(e)]; }
  std::optional<std::string>& get(Element e) { return values[static_cast<std::size_t>(e)]; }
  std::string value_or_empty(Element e) const { return get(e).value_or(""); }

  /// {"document_type": ..., "requirements": {...}} with absent elements
  /// omitted; "provenance" is added only when methodology was inferred.
  Json to_json() const;
  /// Throws Error(SchemaViolation) listing every violation.
  static RequirementsDocument from_json(const Json& j);

  bool operator==(const RequirementsDocument&) const = default;
};

struct AlgorithmModule {
  int sequence = 0;
  std::string name;
  std::string description;
  std::string input;
  std::string output;
  std::string implementation_details;

  bool operator==(const AlgorithmModule&) const = default;
};

struct AlgorithmDesignDocument {
  std::vector<AlgorithmModule> modules;

  Json to_json() const;
  static AlgorithmDesignDocument from_json(const Json& j);

  bool operator==(const AlgorithmDesignDocument&) const = default;
};

// Schema registry. Structural checks only; semantic rules (sequence runs,
// completeness) live with the owning stage.
inline constexpr std::string_view kSchemaRequirementsDoc = "requirements-doc";
inline constexpr std::string_view kSchemaRequirementsExtraction = "requirements-extraction";
inline constexpr std::string_view kSchemaAlgorithmDesign = "algorithm-design";

bool schema_registered(std::string_view schema_id);
std::vector<std::string> validate_schema(std::string_view schema_id, const Json& doc);

}  // namespace cop
