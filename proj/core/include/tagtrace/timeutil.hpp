#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace tagtrace {

/// Seconds since the Unix epoch, UTC.
using Timestamp = std::int64_t;

/// Days since 1970-01-01 (UTC calendar day).
using DayIndex = std::int64_t;

inline constexpr Timestamp kSecondsPerDay = 86400;

enum class TimestampStyle { epoch_seconds, iso8601 };

/// Decimal integer seconds, optional leading '+' or '-'.
std::optional<Timestamp> parse_epoch_seconds(std::string_view text);

/// Accepts `YYYY-MM-DD`, optionally followed by `T` or a space and
/// `HH:MM[:SS[.fraction]]`, optionally followed by `Z`, `+HH`, `+HHMM` or
/// `+HH:MM` (and the `-` forms). Fractions are truncated. Missing offset means UTC.
std::optional<Timestamp> parse_iso8601(std::string_view text);

std::optional<Timestamp> parse_timestamp(std::string_view text, TimestampStyle style);

/// Guesses the style of a timestamp field: all digits -> epoch seconds.
std::optional<TimestampStyle> detect_timestamp_style(std::string_view text);

DayIndex utc_day(Timestamp ts);
Timestamp day_start(DayIndex day);

/// `YYYY-MM-DD`.
std::string format_date(DayIndex day);

}  // namespace tagtrace
