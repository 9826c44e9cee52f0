// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "cop/documents.hpp"
#include "cop/info_pool.hpp"
#include "cop/llm_backend.hpp"

namespace cop::design {

inline constexpr int kDefaultMaxModules = 20;

struct DesignViolation {
  int module = 0;     // 1-based module position; 0 for document-level problems
  std::string field;  // empty for document-level problems
  std::string message;

  Json to_json() const { return {{"module", module}, {"field", field}, {"message", message}}; }
  bool operator==(const DesignViolation&) const = default;
};

/// Structural rules only: 1..max_modules modules, sequences exactly 1..N
/// in order, every text field non-empty.
std::vector<DesignViolation> validate_design(const AlgorithmDesignDocument& doc,
                                             int max_modules = kDefaultMaxModules);

std::vector<llm::ChatMessage> design_prompt(const RequirementsDocument& req);

/// Requires `req` to be the pool's current RequirementsDoc. Stores the
/// design on success; throws Error(DesignInvalid) with the violation list
/// otherwise (nothing is stored).
AlgorithmDesignDocument design(const RequirementsDocument& req, llm::StageClient& client, InfoPool& pool,
                               int max_modules = kDefaultMaxModules);

}  // namespace cop::design
