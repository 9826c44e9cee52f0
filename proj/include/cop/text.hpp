// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace cop::text {

std::string trim(std::string_view s);
std::string to_lower(std::string_view s);
bool iequals(std::string_view a, std::string_view b);
bool contains_ci(std::string_view haystack, std::string_view needle);

/// Trim and collapse internal runs of whitespace to one space.
std::string collapse_whitespace(std::string_view s);

/// Matching key used for entity comparison: case-folded, trimmed,
/// whitespace-collapsed, trailing punctuation removed.
std::string normalize_entity(std::string_view s);

std::vector<std::string> split_lines(std::string_view s);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

/// Removes a surrounding markdown code fence (```lang ... ```) if the text
/// contains one; otherwise returns the trimmed input. When several fenced
/// blocks are present the first one wins.
std::string strip_code_fences(std::string_view s);

}  // namespace cop::text
