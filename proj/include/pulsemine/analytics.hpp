#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "pulsemine/document.hpp"
#include "pulsemine/error.hpp"
#include "pulsemine/sentiment.hpp"
#include "pulsemine/timeutil.hpp"

namespace pulsemine {

struct VolumePoint {
  Instant bucket_start;
  std::uint64_t count = 0;

  friend bool operator==(const VolumePoint&, const VolumePoint&) = default;
};

struct VolumeSeries {
  std::string entity_id;
  Bucket bucket = Bucket::day;
  std::vector<VolumePoint> points;  // strictly increasing, zero buckets omitted
};

// Half-open [from, to).
struct Window {
  Instant from;
  Instant to;
};

using LabelCounts = std::array<std::uint64_t, kNumLabels>;

struct PolarityShare {
  Window window;
  std::uint64_t total = 0;
  LabelCounts counts{};
  std::array<double, kNumLabels> pct{};  // positive, negative, neutral
};

struct ShareTable {
  std::vector<PolarityShare> rows;
};

struct DeltaReport {
  std::array<double, kNumLabels> exact{};  // percentage points, after - before
  std::array<long long, kNumLabels> rounded{};
};

struct AspectRow {
  std::string term;
  std::uint64_t mentions = 0;
  LabelCounts by_polarity{};
};

struct AspectReport {
  std::vector<AspectRow> rows;
};

class EmptyWindow : public Error {
 public:
  using Error::Error;
};

// Counts relevant documents per UTC calendar bucket. relevant.size() must
// equal docs.size().
VolumeSeries volume_series(std::span<const Document> docs, std::span<const std::uint8_t> relevant,
                           std::string entity_id, Bucket bucket);

// Throws EmptyWindow when there are no annotations.
PolarityShare polarity_share(std::span<const SentimentAnnotation> annotations, Window window);

// One share row per nonempty bucket; annotations are joined to docs by id and
// annotations without a matching document are ignored.
ShareTable shares_by_bucket(std::span<const Document> docs,
                            std::span<const SentimentAnnotation> annotations, Bucket bucket);

// Annotations whose document timestamp falls in window.
std::vector<SentimentAnnotation> annotations_in_window(
    std::span<const Document> docs, std::span<const SentimentAnnotation> annotations,
    Window window);

DeltaReport share_delta(const PolarityShare& before, const PolarityShare& after);

// doc_tokens[i] is annotated by annotations[i]. Each term is normalized and
// matched as a contiguous token run; a document counts once per term.
AspectReport aspect_report(std::span<const std::vector<std::string>> doc_tokens,
                           std::span<const SentimentAnnotation> annotations,
                           std::span<const std::string> aspect_terms);

using Report = std::variant<VolumeSeries, PolarityShare, ShareTable, DeltaReport, AspectReport>;

enum class Format { csv, json, svg };
Format parse_format(std::string_view name);

// Deterministic bytes for a given report. Throws ConfigError for
// combinations without a renderer (delta and aspect reports have no SVG).
std::string render_report(const Report& report, Format format);

}  // namespace pulsemine
