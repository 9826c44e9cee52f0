// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <nlohmann/json.hpp>

namespace cop {

// Insertion-ordered so serialized documents keep their field order and
// snapshots are byte-stable.
using Json = nlohmann::ordered_json;

}  // namespace cop
