#include "pulsemine/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "pulsemine/textnorm.hpp"

namespace pulsemine {

VolumeSeries volume_series(std::span<const Document> docs, std::span<const std::uint8_t> relevant,
                           std::string entity_id, Bucket bucket) {
  if (docs.size() != relevant.size()) {
    throw ConfigError("volume_series: relevance flags do not match documents");
  }
  std::map<Instant, std::uint64_t> counts;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    if (relevant[i]) ++counts[bucket_start(docs[i].timestamp, bucket)];
  }
  VolumeSeries s{std::move(entity_id), bucket, {}};
  for (const auto& [start, n] : counts) s.points.push_back({start, n});
  return s;
}

PolarityShare polarity_share(std::span<const SentimentAnnotation> annotations, Window window) {
  if (annotations.empty()) {
    throw EmptyWindow("no annotated documents in [" + format_iso8601(window.from) + ", " +
                      format_iso8601(window.to) + ")");
  }
  PolarityShare s;
  s.window = window;
  for (const auto& a : annotations) ++s.counts[label_index(a.label)];
  s.total = annotations.size();
  for (std::size_t k = 0; k < kNumLabels; ++k) {
    s.pct[k] = 100.0 * static_cast<double>(s.counts[k]) / static_cast<double>(s.total);
  }
  return s;
}

std::vector<SentimentAnnotation> annotations_in_window(
    std::span<const Document> docs, std::span<const SentimentAnnotation> annotations,
    Window window) {
  std::unordered_map<std::string_view, Instant> when;
  for (const auto& d : docs) when.emplace(d.id, d.timestamp);
  std::vector<SentimentAnnotation> out;
  for (const auto& a : annotations) {
    auto it = when.find(a.doc_id);
    if (it != when.end() && it->second >= window.from && it->second < window.to) out.push_back(a);
  }
  return out;
}

ShareTable shares_by_bucket(std::span<const Document> docs,
                            std::span<const SentimentAnnotation> annotations, Bucket bucket) {
  std::unordered_map<std::string_view, Instant> when;
  for (const auto& d : docs) when.emplace(d.id, d.timestamp);
  std::map<Instant, std::vector<SentimentAnnotation>> groups;
  for (const auto& a : annotations) {
    auto it = when.find(a.doc_id);
    if (it != when.end()) groups[bucket_start(it->second, bucket)].push_back(a);
  }
  const std::int64_t width = bucket == Bucket::day ? kSecondsPerDay : 3600;
  ShareTable table;
  for (const auto& [start, group] : groups) {
    table.rows.push_back(polarity_share(group, Window{start, Instant{start.seconds + width}}));
  }
  return table;
}

DeltaReport share_delta(const PolarityShare& before, const PolarityShare& after) {
  DeltaReport d;
  for (std::size_t k = 0; k < kNumLabels; ++k) {
    d.exact[k] = after.pct[k] - before.pct[k];
    d.rounded[k] = std::llround(d.exact[k]);  // half away from zero
  }
  return d;
}

AspectReport aspect_report(std::span<const std::vector<std::string>> doc_tokens,
                           std::span<const SentimentAnnotation> annotations,
                           std::span<const std::string> aspect_terms) {
  if (doc_tokens.size() != annotations.size()) {
    throw ConfigError("aspect_report: token lists do not match annotations");
  }
  AspectReport report;
  for (const auto& raw : aspect_terms) {
    const auto needle = normalize_surfaces(raw);
    if (needle.empty()) throw ConfigError("aspect term '" + raw + "' is empty after normalization");
    AspectRow row;
    row.term = raw;
    for (std::size_t i = 0; i < doc_tokens.size(); ++i) {
      const auto& hay = doc_tokens[i];
      if (std::search(hay.begin(), hay.end(), needle.begin(), needle.end()) != hay.end()) {
        ++row.mentions;
        ++row.by_polarity[label_index(annotations[i].label)];
      }
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

Format parse_format(std::string_view name) {
  if (name == "csv") return Format::csv;
  if (name == "json") return Format::json;
  if (name == "svg") return Format::svg;
  throw ConfigError("unknown format '" + std::string(name) + "' (expected csv, json or svg)");
}

}  // namespace pulsemine
