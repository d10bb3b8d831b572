#include "vews/timeutil.hpp"

#include <cctype>
#include <cstdio>

namespace vews {

namespace {

// Civil-calendar conversions (proleptic Gregorian), Hinnant's algorithms.
std::int64_t days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
  m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
  y = static_cast<int>(yy + (m <= 2));
}

bool all_digits(const std::string& s, std::size_t from, std::size_t count) {
  if (from + count > s.size()) return false;
  for (std::size_t i = from; i < from + count; ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

int to_int(const std::string& s, std::size_t from, std::size_t count) {
  int v = 0;
  for (std::size_t i = from; i < from + count; ++i) v = v * 10 + (s[i] - '0');
  return v;
}

}  // namespace

std::optional<Timestamp> parse_iso8601_utc(const std::string& text) {
  // YYYY-MM-DDTHH:MM:SS[Z]
  if (text.size() != 19 && text.size() != 20) return std::nullopt;
  if (text.size() == 20 && text[19] != 'Z') return std::nullopt;
  if (text[4] != '-' || text[7] != '-' || (text[10] != 'T' && text[10] != ' ') ||
      text[13] != ':' || text[16] != ':') {
    return std::nullopt;
  }
  if (!all_digits(text, 0, 4) || !all_digits(text, 5, 2) || !all_digits(text, 8, 2) ||
      !all_digits(text, 11, 2) || !all_digits(text, 14, 2) || !all_digits(text, 17, 2)) {
    return std::nullopt;
  }
  const int y = to_int(text, 0, 4), mo = to_int(text, 5, 2), d = to_int(text, 8, 2);
  const int h = to_int(text, 11, 2), mi = to_int(text, 14, 2), s = to_int(text, 17, 2);
  if (mo < 1 || mo > 12 || d < 1 || d > 31 || h > 23 || mi > 59 || s > 60) return std::nullopt;
  return days_from_civil(y, mo, d) * 86400 + h * 3600 + mi * 60 + s;
}

std::string format_iso8601_utc(Timestamp ts) {
  std::int64_t days = ts / 86400;
  std::int64_t rem = ts % 86400;
  if (rem < 0) {
    rem += 86400;
    days -= 1;
  }
  int y, m, d;
  civil_from_days(days, y, m, d);
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", y, m, d,
                static_cast<int>(rem / 3600), static_cast<int>(rem % 3600 / 60),
                static_cast<int>(rem % 60));
  return buf;
}

int month_index(Timestamp ts) {
  std::int64_t days = ts / 86400;
  if (ts % 86400 < 0) days -= 1;
  int y, m, d;
  civil_from_days(days, y, m, d);
  return y * 12 + (m - 1);
}

std::string format_month(int month_idx) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d", month_idx / 12, month_idx % 12 + 1);
  return buf;
}

std::optional<int> parse_month(const std::string& text) {
  if (text.size() != 7 || text[4] != '-' || !all_digits(text, 0, 4) || !all_digits(text, 5, 2)) {
    return std::nullopt;
  }
  const int y = to_int(text, 0, 4), m = to_int(text, 5, 2);
  if (m < 1 || m > 12) return std::nullopt;
  return y * 12 + (m - 1);
}

Timestamp month_start(int month_idx) {
  return days_from_civil(month_idx / 12, month_idx % 12 + 1, 1) * 86400;
}

}  // namespace vews
