#include "pulsemine/timeutil.hpp"

#include <cstdio>

#include "pulsemine/error.hpp"

namespace pulsemine {
namespace {

// Howard Hinnant's civil-date algorithms.
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const auto yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, std::int64_t& y, unsigned& m, unsigned& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const auto doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp < 10 ? mp + 3 : mp - 9;
  y += m <= 2;
}

bool leap(std::int64_t y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

unsigned days_in_month(std::int64_t y, unsigned m) {
  static constexpr unsigned kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  return m == 2 && leap(y) ? 29 : kDays[m - 1];
}

bool digits(std::string_view s, std::size_t pos, std::size_t n, unsigned& out) {
  out = 0;
  for (std::size_t i = pos; i < pos + n; ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
    out = out * 10 + static_cast<unsigned>(s[i] - '0');
  }
  return true;
}

Instant parse_date_part(std::string_view text, std::string_view full) {
  unsigned y = 0, mo = 0, d = 0;
  if (!digits(text, 0, 4, y) || text[4] != '-' || !digits(text, 5, 2, mo) ||
      text[7] != '-' || !digits(text, 8, 2, d) || mo < 1 || mo > 12 || d < 1 ||
      d > days_in_month(y, mo)) {
    throw ParseError("invalid date: '" + std::string(full) + "'");
  }
  return Instant{days_from_civil(y, mo, d) * kSecondsPerDay};
}

}  // namespace

Instant parse_iso8601(std::string_view text) {
  if (text.size() != 20 || text[10] != 'T' || text[13] != ':' || text[16] != ':' ||
      text[19] != 'Z') {
    throw ParseError("invalid timestamp (expected YYYY-MM-DDThh:mm:ssZ): '" +
                     std::string(text) + "'");
  }
  const Instant day = parse_date_part(text.substr(0, 10), text);
  unsigned h = 0, mi = 0, s = 0;
  if (!digits(text, 11, 2, h) || !digits(text, 14, 2, mi) || !digits(text, 17, 2, s) ||
      h > 23 || mi > 59 || s > 59) {
    throw ParseError("invalid time of day: '" + std::string(text) + "'");
  }
  return Instant{day.seconds + h * 3600 + mi * 60 + s};
}

Instant parse_instant_or_date(std::string_view text) {
  if (text.size() == 10) return parse_date_part(text, text);
  return parse_iso8601(text);
}

std::string format_iso8601(Instant t) {
  std::int64_t days = t.seconds / kSecondsPerDay;
  std::int64_t rem = t.seconds % kSecondsPerDay;
  if (rem < 0) {
    rem += kSecondsPerDay;
    --days;
  }
  std::int64_t y = 0;
  unsigned m = 0, d = 0;
  civil_from_days(days, y, m, d);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04lld-%02u-%02uT%02lld:%02lld:%02lldZ",
                static_cast<long long>(y), m, d, static_cast<long long>(rem / 3600),
                static_cast<long long>(rem % 3600 / 60), static_cast<long long>(rem % 60));
  return buf;
}

Bucket parse_bucket(std::string_view name) {
  if (name == "day") return Bucket::day;
  if (name == "hour") return Bucket::hour;
  throw ConfigError("unknown bucket '" + std::string(name) + "' (expected hour or day)");
}

std::string_view bucket_name(Bucket b) { return b == Bucket::day ? "day" : "hour"; }

Instant bucket_start(Instant t, Bucket b) {
  const std::int64_t width = b == Bucket::day ? kSecondsPerDay : 3600;
  std::int64_t q = t.seconds / width;
  if (t.seconds % width < 0) --q;
  return Instant{q * width};
}

}  // namespace pulsemine
