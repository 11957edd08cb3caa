#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace pulsemine {

// Seconds since 1970-01-01T00:00:00Z.
struct Instant {
  std::int64_t seconds = 0;

  friend constexpr auto operator<=>(const Instant&, const Instant&) = default;
};

// Parses "YYYY-MM-DDThh:mm:ssZ". Throws ParseError on anything else,
// including out-of-range calendar fields.
Instant parse_iso8601(std::string_view text);

// Parses either a full timestamp or a bare "YYYY-MM-DD" (midnight UTC).
Instant parse_instant_or_date(std::string_view text);

std::string format_iso8601(Instant t);

enum class Bucket { hour, day };

Bucket parse_bucket(std::string_view name);
std::string_view bucket_name(Bucket b);

// Start of the UTC calendar bucket containing t.
Instant bucket_start(Instant t, Bucket b);

inline constexpr std::int64_t kSecondsPerDay = 86400;

}  // namespace pulsemine
