// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <atomic>
#include <cstdint>
#include <string>

namespace cop {

/// Source of ISO-8601 UTC timestamps ("2025-01-01T00:00:00Z").
class Clock {
 public:
  virtual ~Clock() = default;
  virtual std::string now() const = 0;
};

class SystemClock final : public Clock {
 public:
  std::string now() const override;
};

/// Deterministic clock: starts at `epoch_seconds` and advances by
/// `step_seconds` on every call.
class ManualClock final : public Clock {
 public:
  explicit ManualClock(std::int64_t epoch_seconds = 1735689600, std::int64_t step_seconds = 1)
      : next_(epoch_seconds), step_(step_seconds) {}

  std::string now() const override;
  void reset(std::int64_t epoch_seconds) { next_.store(epoch_seconds); }

 private:
  mutable std::atomic<std::int64_t> next_;
  std::int64_t step_;
};

std::string format_utc(std::int64_t epoch_seconds);

}  // namespace cop
