// SPDX-License-Identifier: Apache-2.0
#include "cop/info_pool.hpp"

#include "cop/documents.hpp"
#include "cop/errors.hpp"

namespace cop {

std::string_view to_string(ArtifactKind kind) {
  switch (kind) {
    case ArtifactKind::RequirementsDoc: return "RequirementsDoc";
    case ArtifactKind::AlgorithmDesign: return "AlgorithmDesign";
    case ArtifactKind::CodeDraft: return "CodeDraft";
    case ArtifactKind::DebugTranscript: return "DebugTranscript";
    case ArtifactKind::AnnotatedCode: return "AnnotatedCode";
  }
  return "Unknown";
}

std::optional<ArtifactKind> artifact_kind_from_string(std::string_view s) {
  for (auto k : kAllArtifactKinds) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

Json PoolEntry::to_json() const {
  return {{"kind", std::string(to_string(kind))}, {"revision", revision}, {"created_at", created_at},
          {"payload", payload}};
}

std::vector<std::string> validate_pool_payload(ArtifactKind kind, const Json& payload) {
  switch (kind) {
    case ArtifactKind::RequirementsDoc: return validate_schema(kSchemaRequirementsDoc, payload);
    case ArtifactKind::AlgorithmDesign: return validate_schema(kSchemaAlgorithmDesign, payload);
    case ArtifactKind::CodeDraft:
    case ArtifactKind::AnnotatedCode:
      if (!payload.is_string()) return {std::string(to_string(kind)) + " payload must be text"};
      return {};
    case ArtifactKind::DebugTranscript:
      if (!payload.is_array()) return {"DebugTranscript payload must be an array of entries"};
      for (const auto& e : payload) {
        if (!e.is_object()) return {"DebugTranscript entries must be objects"};
      }
      return {};
  }
  return {"unknown artifact kind"};
}

const PoolEntry& InfoPool::put(ArtifactKind kind, Json payload) {
  return put_at(kind, std::move(payload), clock_->now());
}

const PoolEntry& InfoPool::put_at(ArtifactKind kind, Json payload, std::string created_at) {
  auto violations = validate_pool_payload(kind, payload);
  if (!violations.empty()) {
    throw Error(ErrorCode::SchemaViolation,
                std::string(to_string(kind)) + " payload rejected: " + violations.front(),
                {{"kind", std::string(to_string(kind))}, {"violations", violations}});
  }
  PoolEntry entry{kind, std::move(payload), 0, std::move(created_at)};
  if (kind == ArtifactKind::CodeDraft) {
    entry.revision = static_cast<int>(code_history_.size());
    code_history_.push_back(entry);
  }
  journal_.push_back(entry);
  current_[index(kind)] = std::move(entry);
  return *current_[index(kind)];
}

std::optional<PoolEntry> InfoPool::get(ArtifactKind kind) const { return current_[index(kind)]; }

void InfoPool::clear() {
  for (auto& slot : current_) slot.reset();
  code_history_.clear();
  journal_.clear();
}

std::vector<PoolEntry> InfoPool::snapshot() const {
  std::vector<PoolEntry> out;
  for (auto k : kAllArtifactKinds) {
    if (k == ArtifactKind::CodeDraft) {
      out.insert(out.end(), code_history_.begin(), code_history_.end());
    } else if (current_[index(k)]) {
      out.push_back(*current_[index(k)]);
    }
  }
  return out;
}

Json InfoPool::snapshot_json() const {
  Json arr = Json::array();
  for (const auto& e : snapshot()) arr.push_back(e.to_json());
  return arr;
}

}  // namespace cop
