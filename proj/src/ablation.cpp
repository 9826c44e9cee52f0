// SPDX-License-Identifier: Apache-2.0
#include "cop/ablation.hpp"

#include "cop/errors.hpp"

namespace cop {

AblationConfig AblationConfig::from_json(const Json& j) {
  if (!j.is_object()) throw Error(ErrorCode::Validation, "ablation config must be an object");
  AblationConfig c;
  c.pool = j.value("pool", c.pool);
  c.retrieval = j.value("retrieval", c.retrieval);
  c.feedback = j.value("feedback", c.feedback);
  c.max_debug_iterations = j.value("max_debug_iterations", c.max_debug_iterations);
  if (c.max_debug_iterations < 0) throw Error(ErrorCode::Validation, "max_debug_iterations must be >= 0");
  return c;
}

std::string AblationConfig::label() const {
  auto yn = [](bool b) { return b ? "Y" : "N"; };
  return std::string("pool=") + yn(pool) + " retrieval=" + yn(retrieval) + " feedback=" + yn(feedback) +
         " max=" + std::to_string(max_debug_iterations);
}

}  // namespace cop
