#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <set>
#include <span>
#include <string>
#include <unordered_set>
#include <variant>
#include <vector>

#include "pulsemine/document.hpp"
#include "pulsemine/error.hpp"

namespace pulsemine {

// Extraction heuristics. A document is collected if it passes any of them.
struct SearchTerm {
  std::string term;
};

struct UserPool {
  std::set<std::string> usernames;  // stored lowercase
};

struct GeoBox {
  double min_lat = -90.0;
  double max_lat = 90.0;
  double min_lon = -180.0;
  double max_lon = 180.0;
};

using ExtractionHeuristic = std::variant<SearchTerm, UserPool, GeoBox>;

SearchTerm make_search_term(std::string term);
UserPool make_user_pool(const std::vector<std::string>& usernames);
GeoBox make_geo_box(double min_lat, double max_lat, double min_lon, double max_lon);

bool apply_heuristic(const Document& doc, const ExtractionHeuristic& h);

// {"search": [...], "users": [...], "geo": {...}}. Every present key becomes
// heuristics; at least one is required.
std::vector<ExtractionHeuristic> parse_heuristics(std::string_view json_text);
std::vector<ExtractionHeuristic> load_heuristics(const std::filesystem::path& path);

struct IngestStats {
  std::uint64_t read = 0;
  std::uint64_t accepted = 0;
  std::uint64_t duplicates = 0;
  std::uint64_t rejected = 0;

  friend bool operator==(const IngestStats&, const IngestStats&) = default;
};

// Raised when the store cannot be written; stats cover records up to the failure.
class IngestAborted : public IoError {
 public:
  IngestAborted(const std::string& what, IngestStats stats) : IoError(what), stats_(stats) {}
  const IngestStats& stats() const { return stats_; }

 private:
  IngestStats stats_;
};

// Append-only JSONL document store living in a directory:
//   documents.jsonl  one record per line, the source of truth
//   ids.idx          "id<TAB>offset<TAB>timestamp", rebuilt on every open
// Each record is appended with a single write(); a torn trailing line left by
// a crash is discarded when the store is next opened for writing.
class DocumentStore {
 public:
  static DocumentStore open(const std::filesystem::path& dir);
  static DocumentStore open_readonly(const std::filesystem::path& dir);

  DocumentStore(DocumentStore&& other) noexcept;
  DocumentStore& operator=(DocumentStore&& other) noexcept;
  DocumentStore(const DocumentStore&) = delete;
  DocumentStore& operator=(const DocumentStore&) = delete;
  ~DocumentStore();

  bool contains(const std::string& id) const { return ids_.contains(id); }
  std::size_t size() const { return ids_.size(); }
  const std::filesystem::path& directory() const { return dir_; }

  // Throws ConfigError for a duplicate id or a read-only store, IoError on
  // write failure.
  void append(const Document& doc);

  // Documents with from <= timestamp < to, ordered by (timestamp, id), read
  // from the snapshot taken at open (plus this handle's own appends).
  // Throws RangeError if from > to.
  std::vector<Document> scan(Instant from, Instant to) const;
  std::vector<Document> scan_all() const;

  void flush();

 private:
  DocumentStore() = default;
  void load(bool writable);
  void close() noexcept;

  std::filesystem::path dir_;
  int fd_ = -1;
  int index_fd_ = -1;
  std::uint64_t end_offset_ = 0;
  std::unordered_set<std::string> ids_;
};

// Reads JSONL records from source. Malformed and non-matching records count as
// rejected and are reported on diagnostics (when non-null); ingestion goes on.
IngestStats ingest(std::istream& source, std::span<const ExtractionHeuristic> heuristics,
                   DocumentStore& store, std::ostream* diagnostics = nullptr);

}  // namespace pulsemine
