#include "annodb/clock.hpp"

#include <cstdio>
#include <ctime>

namespace annodb {

Clock Clock::pinned(std::chrono::sys_seconds start) {
  Clock c;
  c.pinned_ = start;
  return c;
}

std::optional<Clock> Clock::pinned(const std::string& iso) {
  auto t = parse_iso8601(iso);
  if (!t) return std::nullopt;
  return pinned(*t);
}

std::string Clock::now() {
  if (pinned_) {
    std::string out = format_iso8601(*pinned_);
    *pinned_ += std::chrono::seconds(1);
    return out;
  }
  return format_iso8601(std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now()));
}

std::string format_iso8601(std::chrono::sys_seconds t) {
  std::time_t tt = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::optional<std::chrono::sys_seconds> parse_iso8601(const std::string& text) {
  int y, mo, d, h, mi, s;
  char z = 0;
  if (text.size() != 20 ||
      std::sscanf(text.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d%c", &y, &mo, &d, &h, &mi, &s, &z) != 7 ||
      z != 'Z') {
    return std::nullopt;
  }
  using namespace std::chrono;
  year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || s > 59 || h < 0 || mi < 0 || s < 0) return std::nullopt;
  return sys_days{ymd} + hours{h} + minutes{mi} + seconds{s};
}

}  // namespace annodb
