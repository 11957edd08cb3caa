#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "pulsemine/timeutil.hpp"

namespace pulsemine {

struct GeoPoint {
  double lat = 0.0;
  double lon = 0.0;

  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

// One social-media post.
struct Document {
  std::string id;
  std::string text;
  std::string author;
  Instant timestamp;
  std::optional<GeoPoint> geo;
  std::string source;
  std::optional<std::string> lang;

  friend bool operator==(const Document&, const Document&) = default;
};

// Throws ParseError if id is empty or geo is out of range.
void validate(const Document& doc);

// One JSONL record. Field order is fixed so that output is byte-stable.
std::string to_json_line(const Document& doc);

// Parses and validates one JSONL record. Throws ParseError.
Document parse_document(std::string_view line);

}  // namespace pulsemine
