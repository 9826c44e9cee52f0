// SPDX-License-Identifier: Apache-2.0
#include "cop/text.hpp"

#include <algorithm>
#include <cctype>

namespace cop::text {

namespace {
bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
char lower(char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); }
}  // namespace

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return std::string(s.substr(b, e - b));
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), lower);
  return out;
}

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) { return lower(x) == lower(y); });
}

bool contains_ci(std::string_view haystack, std::string_view needle) {
  if (needle.empty()) return true;
  auto it = std::search(haystack.begin(), haystack.end(), needle.begin(), needle.end(),
                        [](char x, char y) { return lower(x) == lower(y); });
  return it != haystack.end();
}

std::string collapse_whitespace(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (char c : s) {
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

std::string normalize_entity(std::string_view s) {
  std::string out = to_lower(collapse_whitespace(s));
  static constexpr std::string_view kTrailing = ".,;:!?";
  while (!out.empty() && kTrailing.find(out.back()) != std::string_view::npos) out.pop_back();
  return trim(out);
}

std::vector<std::string> split_lines(std::string_view s) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= s.size()) {
    auto nl = s.find('\n', start);
    if (nl == std::string_view::npos) {
      if (start < s.size()) lines.emplace_back(s.substr(start));
      break;
    }
    std::string line(s.substr(start, nl - start));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    start = nl + 1;
  }
  return lines;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out.append(sep);
    out.append(parts[i]);
  }
  return out;
}

std::string strip_code_fences(std::string_view s) {
  auto open = s.find("```");
  if (open == std::string_view::npos) return trim(s);
  auto body_start = s.find('\n', open);
  if (body_start == std::string_view::npos) return trim(s);
  ++body_start;
  auto close = s.find("```", body_start);
  if (close == std::string_view::npos) return trim(s.substr(body_start));
  // Keep the body's own trailing newline out of the result.
  std::string body(s.substr(body_start, close - body_start));
  while (!body.empty() && (body.back() == '\n' || body.back() == '\r')) body.pop_back();
  // Leading blank lines are noise; indentation of the first code line is not.
  std::size_t lead = 0;
  while (lead < body.size() && body[lead] == '\n') ++lead;
  return body.substr(lead);
}

}  // namespace cop::text
