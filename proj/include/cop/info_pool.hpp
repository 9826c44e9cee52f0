// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cop/clock.hpp"
#include "cop/json.hpp"

namespace cop {

/// Artifact kinds, declared in snapshot order.
enum class ArtifactKind { RequirementsDoc, AlgorithmDesign, CodeDraft, DebugTranscript, AnnotatedCode };

inline constexpr std::array<ArtifactKind, 5> kAllArtifactKinds = {
    ArtifactKind::RequirementsDoc, ArtifactKind::AlgorithmDesign, ArtifactKind::CodeDraft,
    ArtifactKind::DebugTranscript, ArtifactKind::AnnotatedCode};

std::string_view to_string(ArtifactKind kind);
std::optional<ArtifactKind> artifact_kind_from_string(std::string_view s);

struct PoolEntry {
  ArtifactKind kind = ArtifactKind::RequirementsDoc;
  Json payload;
  int revision = 0;
  std::string created_at;

  Json to_json() const;
  bool operator==(const PoolEntry&) const = default;
};

/// Per-task short-term memory shared by the pipeline stages. Holds the
/// current entry per kind; CodeDraft additionally keeps its revision
/// history. Payloads are checked against the kind's schema on every put.
///
/// Not thread-safe: the owning session serializes access.
class InfoPool {
 public:
  explicit InfoPool(const Clock& clock) : clock_(&clock) {}

  /// Throws Error(SchemaViolation) if `payload` does not fit `kind`.
  const PoolEntry& put(ArtifactKind kind, Json payload);
  /// Same as put() with a caller-supplied timestamp (log replay).
  const PoolEntry& put_at(ArtifactKind kind, Json payload, std::string created_at);

  std::optional<PoolEntry> get(ArtifactKind kind) const;
  bool has(ArtifactKind kind) const { return current_[index(kind)].has_value(); }

  void clear();

  /// Current entries in kind order; CodeDraft contributes its full history
  /// in ascending revision order.
  std::vector<PoolEntry> snapshot() const;
  Json snapshot_json() const;

  const std::vector<PoolEntry>& code_history() const { return code_history_; }
  /// Every accepted write in order; replaying it with put_at() rebuilds
  /// an identical pool.
  const std::vector<PoolEntry>& journal() const { return journal_; }

 private:
  static std::size_t index(ArtifactKind k) { return static_cast<std::size_t>(k); }

  const Clock* clock_;
  std::array<std::optional<PoolEntry>, 5> current_{};
  std::vector<PoolEntry> code_history_;
  std::vector<PoolEntry> journal_;
};

std::vector<std::string> validate_pool_payload(ArtifactKind kind, const Json& payload);

}  // namespace cop
