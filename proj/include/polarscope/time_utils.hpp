#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace polarscope {

// Seconds since the Unix epoch, always UTC.
using Timestamp = std::int64_t;

// Accepts "2020-01-07T06:00:00Z", an explicit "+HH:MM"/"-HH:MM" offset
// (normalized to UTC), and fractional seconds (truncated).
std::optional<Timestamp> parse_iso8601(std::string_view s);

// "2020-01-07T06:00:00Z"
std::string format_iso8601(Timestamp t);

// Legacy API timestamps: "Tue Jan 07 06:03:00 +0000 2020".
std::optional<Timestamp> parse_twitter_time(std::string_view s);

// "90", "90s", "15m", "15min", "13h", "2d", "1w"; also "1h30m".
std::optional<std::int64_t> parse_duration_seconds(std::string_view s);

// "2020-01-07"
std::string format_utc_date(Timestamp t);

// Day index relative to the epoch; floor division so pre-1970 times bucket correctly.
inline std::int64_t epoch_day(Timestamp t) {
    return t >= 0 ? t / 86400 : (t - 86399) / 86400;
}

}  // namespace polarscope
