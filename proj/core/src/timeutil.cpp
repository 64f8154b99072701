#include "tagtrace/timeutil.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>

namespace tagtrace {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

std::optional<int> fixed_int(std::string_view s) {
  if (!all_digits(s)) return std::nullopt;
  int value = 0;
  for (char c : s) value = value * 10 + (c - '0');
  return value;
}

// Parses `+HH`, `+HHMM`, `+HH:MM` (or '-') into signed seconds east of UTC.
std::optional<Timestamp> parse_offset(std::string_view s) {
  if (s.empty()) return 0;
  if (s == "Z" || s == "z") return 0;
  const char sign = s.front();
  if (sign != '+' && sign != '-') return std::nullopt;
  s.remove_prefix(1);
  std::optional<int> hours;
  std::optional<int> minutes = 0;
  if (s.size() == 2) {
    hours = fixed_int(s);
  } else if (s.size() == 4) {
    hours = fixed_int(s.substr(0, 2));
    minutes = fixed_int(s.substr(2, 2));
  } else if (s.size() == 5 && s[2] == ':') {
    hours = fixed_int(s.substr(0, 2));
    minutes = fixed_int(s.substr(3, 2));
  } else {
    return std::nullopt;
  }
  if (!hours || !minutes || *hours > 23 || *minutes > 59) return std::nullopt;
  const Timestamp offset = *hours * 3600 + *minutes * 60;
  return sign == '+' ? offset : -offset;
}

}  // namespace

std::optional<Timestamp> parse_epoch_seconds(std::string_view text) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return std::nullopt;
  Timestamp value = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) return std::nullopt;
  return value;
}

std::optional<Timestamp> parse_iso8601(std::string_view text) {
  using namespace std::chrono;
  if (text.size() < 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  const auto y = fixed_int(text.substr(0, 4));
  const auto m = fixed_int(text.substr(5, 2));
  const auto d = fixed_int(text.substr(8, 2));
  if (!y || !m || !d) return std::nullopt;
  const year_month_day ymd{year{*y}, month{static_cast<unsigned>(*m)},
                           day{static_cast<unsigned>(*d)}};
  if (!ymd.ok()) return std::nullopt;
  Timestamp seconds = sys_days{ymd}.time_since_epoch().count() * kSecondsPerDay;

  std::string_view rest = text.substr(10);
  if (rest.empty()) return seconds;
  if (rest.front() != 'T' && rest.front() != 't' && rest.front() != ' ') return std::nullopt;
  rest.remove_prefix(1);
  if (rest.size() < 5 || rest[2] != ':') return std::nullopt;
  const auto hh = fixed_int(rest.substr(0, 2));
  const auto mm = fixed_int(rest.substr(3, 2));
  if (!hh || !mm || *hh > 23 || *mm > 59) return std::nullopt;
  int ss = 0;
  rest.remove_prefix(5);
  if (!rest.empty() && rest.front() == ':') {
    if (rest.size() < 3) return std::nullopt;
    const auto sec = fixed_int(rest.substr(1, 2));
    if (!sec || *sec > 60) return std::nullopt;
    ss = *sec;
    rest.remove_prefix(3);
    if (!rest.empty() && rest.front() == '.') {
      rest.remove_prefix(1);
      std::size_t digits = 0;
      while (digits < rest.size() && rest[digits] >= '0' && rest[digits] <= '9') ++digits;
      if (digits == 0) return std::nullopt;
      rest.remove_prefix(digits);
    }
  }
  const auto offset = parse_offset(rest);
  if (!offset) return std::nullopt;
  seconds += *hh * 3600 + *mm * 60 + ss;
  return seconds - *offset;
}

std::optional<Timestamp> parse_timestamp(std::string_view text, TimestampStyle style) {
  return style == TimestampStyle::epoch_seconds ? parse_epoch_seconds(text)
                                                : parse_iso8601(text);
}

std::optional<TimestampStyle> detect_timestamp_style(std::string_view text) {
  if (parse_epoch_seconds(text)) return TimestampStyle::epoch_seconds;
  if (parse_iso8601(text)) return TimestampStyle::iso8601;
  return std::nullopt;
}

DayIndex utc_day(Timestamp ts) {
  DayIndex day = ts / kSecondsPerDay;
  if (ts % kSecondsPerDay < 0) --day;
  return day;
}

Timestamp day_start(DayIndex day) { return day * kSecondsPerDay; }

std::string format_date(DayIndex day) {
  using namespace std::chrono;
  const year_month_day ymd{sys_days{days{day}}};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

}  // namespace tagtrace
