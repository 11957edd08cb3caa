#include "pulsemine/document.hpp"

#include <cmath>

#include "json.hpp"
#include "pulsemine/error.hpp"

namespace pulsemine {

using nlohmann::json;
using nlohmann::ordered_json;

void validate(const Document& doc) {
  if (doc.id.empty()) throw ParseError("document id is empty");
  if (doc.geo) {
    const auto [lat, lon] = *doc.geo;
    if (!std::isfinite(lat) || lat < -90.0 || lat > 90.0 || !std::isfinite(lon) ||
        lon < -180.0 || lon > 180.0) {
      throw ParseError("document '" + doc.id + "' has geo outside [-90,90]x[-180,180]");
    }
  }
}

std::string to_json_line(const Document& doc) {
  ordered_json j;
  j["id"] = doc.id;
  j["text"] = doc.text;
  j["author"] = doc.author;
  j["timestamp"] = format_iso8601(doc.timestamp);
  if (doc.geo) j["geo"] = {{"lat", doc.geo->lat}, {"lon", doc.geo->lon}};
  j["source"] = doc.source;
  if (doc.lang) j["lang"] = *doc.lang;
  return j.dump(-1, ' ', false, json::error_handler_t::replace);
}

namespace {

std::string required_string(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(std::string("missing field '") + key + "'");
  if (!it->is_string()) throw ParseError(std::string("field '") + key + "' is not a string");
  return it->get<std::string>();
}

double required_number(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_number()) {
    throw ParseError(std::string("geo field '") + key + "' missing or not a number");
  }
  return it->get<double>();
}

}  // namespace

Document parse_document(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("record is not a JSON object");

  Document doc;
  doc.id = required_string(j, "id");
  doc.text = required_string(j, "text");
  doc.author = required_string(j, "author");
  doc.timestamp = parse_iso8601(required_string(j, "timestamp"));
  doc.source = required_string(j, "source");
  if (auto it = j.find("geo"); it != j.end() && !it->is_null()) {
    if (!it->is_object()) throw ParseError("field 'geo' is not an object");
    doc.geo = GeoPoint{required_number(*it, "lat"), required_number(*it, "lon")};
  }
  if (auto it = j.find("lang"); it != j.end() && !it->is_null()) {
    if (!it->is_string()) throw ParseError("field 'lang' is not a string");
    doc.lang = it->get<std::string>();
  }
  validate(doc);
  return doc;
}

}  // namespace pulsemine
