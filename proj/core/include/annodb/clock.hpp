#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>

namespace annodb {

// Source of ISO-8601 UTC timestamps ("YYYY-MM-DDTHH:MM:SSZ"). A pinned clock
// starts at a fixed instant and advances one second per reading, which keeps
// scripted runs reproducible.
class Clock {
 public:
  Clock() = default;
  static Clock pinned(std::chrono::sys_seconds start);
  // Accepts "YYYY-MM-DDTHH:MM:SSZ"; nullopt on malformed text.
  static std::optional<Clock> pinned(const std::string& iso);

  std::string now();
  bool is_pinned() const { return pinned_.has_value(); }

 private:
  std::optional<std::chrono::sys_seconds> pinned_;
};

std::string format_iso8601(std::chrono::sys_seconds t);
std::optional<std::chrono::sys_seconds> parse_iso8601(const std::string& text);

}  // namespace annodb
