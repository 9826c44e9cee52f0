// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "cop/json.hpp"

namespace cop {

inline constexpr int kDefaultMaxDebugIterations = 3;

/// Mechanism toggles for one pipeline run.
struct AblationConfig {
  bool pool = true;
  bool retrieval = true;
  bool feedback = true;  // false: no debug loop, code goes straight to annotation
  int max_debug_iterations = kDefaultMaxDebugIterations;

  Json to_json() const {
    return {{"pool", pool}, {"retrieval", retrieval}, {"feedback", feedback},
            {"max_debug_iterations", max_debug_iterations}};
  }
  /// Missing keys keep their defaults; throws Error(Validation) on a
  /// negative iteration cap.
  static AblationConfig from_json(const Json& j);

  /// "pool=Y retrieval=N feedback=Y max=3"
  std::string label() const;

  bool operator==(const AblationConfig&) const = default;
};

}  // namespace cop
