#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace vews {

/// UTC timestamps are carried as seconds since the Unix epoch.
using Timestamp = std::int64_t;

/// Parses "YYYY-MM-DDTHH:MM:SS" with an optional trailing "Z".
/// Returns nullopt on anything else.
std::optional<Timestamp> parse_iso8601_utc(const std::string& text);

/// Formats as "YYYY-MM-DDTHH:MM:SSZ".
std::string format_iso8601_utc(Timestamp ts);

/// Calendar month of a timestamp as a single comparable integer
/// (year * 12 + month - 1), UTC.
int month_index(Timestamp ts);

/// "YYYY-MM" for report keys.
std::string format_month(int month_idx);

/// Parses "YYYY-MM" into a month index; nullopt on malformed input.
std::optional<int> parse_month(const std::string& text);

/// Timestamp of the first second of a calendar month.
Timestamp month_start(int month_idx);

}  // namespace vews
