// SPDX-License-Identifier: Apache-2.0
#include "cop/clock.hpp"

#include <chrono>
#include <ctime>

namespace cop {

std::string format_utc(std::int64_t epoch_seconds) {
  std::time_t t = static_cast<std::time_t>(epoch_seconds);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string SystemClock::now() const {
  auto secs = std::chrono::duration_cast<std::chrono::seconds>(
                  std::chrono::system_clock::now().time_since_epoch())
                  .count();
  return format_utc(secs);
}

std::string ManualClock::now() const { return format_utc(next_.fetch_add(step_)); }

}  // namespace cop
