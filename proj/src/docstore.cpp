#include "pulsemine/docstore.hpp"

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "pulsemine/textnorm.hpp"

namespace pulsemine {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kDocumentsFile = "documents.jsonl";
constexpr const char* kIndexFile = "ids.idx";

std::string lowercase(std::string_view s) {
  std::u32string cps = utf8::decode(s);
  for (char32_t& c : cps) c = utf8::to_lower(c);
  return utf8::encode(cps);
}

std::string errno_text() { return std::strerror(errno); }

bool write_all(int fd, std::string_view data) {
  while (!data.empty()) {
    const ssize_t n = ::write(fd, data.data(), data.size());
    if (n < 0) {
      if (errno == EINTR) continue;
      return false;
    }
    data.remove_prefix(static_cast<std::size_t>(n));
  }
  return true;
}

std::string read_prefix(const fs::path& path, std::uint64_t length) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::string data(length, '\0');
  in.read(data.data(), static_cast<std::streamsize>(length));
  if (static_cast<std::uint64_t>(in.gcount()) != length) {
    throw IoError("short read on " + path.string());
  }
  return data;
}

}  // namespace

SearchTerm make_search_term(std::string term) {
  if (normalize(term).empty()) throw ConfigError("search term is empty after normalization");
  return SearchTerm{std::move(term)};
}

UserPool make_user_pool(const std::vector<std::string>& usernames) {
  UserPool pool;
  for (const auto& u : usernames) {
    if (u.empty()) throw ConfigError("empty username in user pool");
    pool.usernames.insert(lowercase(u));
  }
  if (pool.usernames.empty()) throw ConfigError("user pool is empty");
  return pool;
}

GeoBox make_geo_box(double min_lat, double max_lat, double min_lon, double max_lon) {
  if (!(min_lat <= max_lat) || !(min_lon <= max_lon)) {
    throw ConfigError("geo box requires min_lat <= max_lat and min_lon <= max_lon");
  }
  return GeoBox{min_lat, max_lat, min_lon, max_lon};
}

bool apply_heuristic(const Document& doc, const ExtractionHeuristic& h) {
  struct Visitor {
    const Document& doc;

    bool operator()(const SearchTerm& s) const {
      const auto needle = normalize_surfaces(s.term);
      if (needle.empty()) return false;
      const auto hay = normalize_surfaces(doc.text);
      return std::search(hay.begin(), hay.end(), needle.begin(), needle.end()) != hay.end();
    }
    bool operator()(const UserPool& p) const {
      return p.usernames.contains(lowercase(doc.author));
    }
    bool operator()(const GeoBox& b) const {
      if (!doc.geo) return false;
      return doc.geo->lat >= b.min_lat && doc.geo->lat <= b.max_lat &&
             doc.geo->lon >= b.min_lon && doc.geo->lon <= b.max_lon;
    }
  };
  return std::visit(Visitor{doc}, h);
}

std::vector<ExtractionHeuristic> parse_heuristics(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("heuristics: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("heuristics: expected a JSON object");

  std::vector<ExtractionHeuristic> out;
  try {
    if (j.contains("search")) {
      for (const auto& t : j.at("search")) out.push_back(make_search_term(t.get<std::string>()));
    }
    if (j.contains("users")) {
      auto users = j.at("users").get<std::vector<std::string>>();
      if (!users.empty()) out.push_back(make_user_pool(users));
    }
    if (j.contains("geo") && !j.at("geo").is_null()) {
      const auto& g = j.at("geo");
      out.push_back(make_geo_box(g.at("min_lat").get<double>(), g.at("max_lat").get<double>(),
                                 g.at("min_lon").get<double>(), g.at("max_lon").get<double>()));
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("heuristics: ") + e.what());
  }
  if (out.empty()) throw ConfigError("heuristics: at least one heuristic is required");
  return out;
}

std::vector<ExtractionHeuristic> load_heuristics(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open heuristics file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_heuristics(ss.str());
}

// --- DocumentStore ---------------------------------------------------------

DocumentStore DocumentStore::open(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create store directory " + dir.string() + ": " + ec.message());
  DocumentStore store;
  store.dir_ = dir;
  store.load(true);
  return store;
}

DocumentStore DocumentStore::open_readonly(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IoError("store directory does not exist: " + dir.string());
  DocumentStore store;
  store.dir_ = dir;
  store.load(false);
  return store;
}

DocumentStore::DocumentStore(DocumentStore&& other) noexcept
    : dir_(std::move(other.dir_)),
      fd_(std::exchange(other.fd_, -1)),
      index_fd_(std::exchange(other.index_fd_, -1)),
      end_offset_(other.end_offset_),
      ids_(std::move(other.ids_)) {}

DocumentStore& DocumentStore::operator=(DocumentStore&& other) noexcept {
  if (this != &other) {
    close();
    dir_ = std::move(other.dir_);
    fd_ = std::exchange(other.fd_, -1);
    index_fd_ = std::exchange(other.index_fd_, -1);
    end_offset_ = other.end_offset_;
    ids_ = std::move(other.ids_);
  }
  return *this;
}

DocumentStore::~DocumentStore() { close(); }

void DocumentStore::close() noexcept {
  if (fd_ >= 0) {
    ::fdatasync(fd_);
    ::close(fd_);
    fd_ = -1;
  }
  if (index_fd_ >= 0) {
    ::close(index_fd_);
    index_fd_ = -1;
  }
}

void DocumentStore::flush() {
  if (fd_ >= 0 && ::fdatasync(fd_) != 0) throw IoError("fdatasync failed: " + errno_text());
}

void DocumentStore::load(bool writable) {
  const fs::path docs = dir_ / kDocumentsFile;
  if (writable) {
    fd_ = ::open(docs.c_str(), O_RDWR | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
    if (fd_ < 0) throw IoError("cannot open " + docs.string() + ": " + errno_text());
  }

  std::uint64_t size = 0;
  if (fs::exists(docs)) size = fs::file_size(docs);
  std::string data = size > 0 ? read_prefix(docs, size) : std::string();

  // Only complete lines are part of the store.
  const auto last_newline = data.rfind('\n');
  const std::uint64_t complete = last_newline == std::string::npos ? 0 : last_newline + 1;
  if (complete < size && writable) {
    if (::ftruncate(fd_, static_cast<off_t>(complete)) != 0) {
      throw IoError("cannot discard torn record in " + docs.string() + ": " + errno_text());
    }
  }
  data.resize(complete);
  end_offset_ = complete;

  std::string index;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < data.size()) {
    const std::size_t nl = data.find('\n', pos);
    const std::string_view line(data.data() + pos, nl - pos);
    ++line_no;
    if (!line.empty()) {
      Document doc;
      try {
        doc = parse_document(line);
      } catch (const ParseError& e) {
        throw ParseError(docs.string() + ":" + std::to_string(line_no) + ": " + e.what());
      }
      if (!ids_.insert(doc.id).second) {
        throw IoError(docs.string() + ":" + std::to_string(line_no) + ": duplicate id '" +
                      doc.id + "' in store");
      }
      index += doc.id + '\t' + std::to_string(pos) + '\t' + format_iso8601(doc.timestamp) + '\n';
    }
    pos = nl + 1;
  }

  if (writable) {
    const fs::path idx = dir_ / kIndexFile;
    index_fd_ = ::open(idx.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_APPEND | O_CLOEXEC, 0644);
    if (index_fd_ < 0 || !write_all(index_fd_, index)) {
      throw IoError("cannot write index " + idx.string() + ": " + errno_text());
    }
  }
}

void DocumentStore::append(const Document& doc) {
  if (fd_ < 0) throw ConfigError("store " + dir_.string() + " is open read-only");
  validate(doc);
  if (contains(doc.id)) throw ConfigError("duplicate document id '" + doc.id + "'");
  const std::string line = to_json_line(doc) + '\n';
  const ssize_t n = ::write(fd_, line.data(), line.size());
  if (n != static_cast<ssize_t>(line.size())) {
    const std::string why = n < 0 ? errno_text() : "short write";
    // Roll back a partial record so the file stays line-complete.
    if (n > 0) (void)!::ftruncate(fd_, static_cast<off_t>(end_offset_));
    throw IoError("cannot append to store: " + why);
  }
  const std::string entry =
      doc.id + '\t' + std::to_string(end_offset_) + '\t' + format_iso8601(doc.timestamp) + '\n';
  end_offset_ += line.size();
  ids_.insert(doc.id);
  if (!write_all(index_fd_, entry)) throw IoError("cannot append to index: " + errno_text());
}

std::vector<Document> DocumentStore::scan(Instant from, Instant to) const {
  if (from > to) {
    throw RangeError("scan range is inverted: " + format_iso8601(from) + " > " +
                     format_iso8601(to));
  }
  std::vector<Document> out;
  if (end_offset_ == 0) return out;
  const std::string data = read_prefix(dir_ / kDocumentsFile, end_offset_);
  std::size_t pos = 0;
  while (pos < data.size()) {
    const std::size_t nl = data.find('\n', pos);
    const std::string_view line(data.data() + pos, nl - pos);
    if (!line.empty()) {
      Document doc = parse_document(line);
      if (doc.timestamp >= from && doc.timestamp < to) out.push_back(std::move(doc));
    }
    pos = nl + 1;
  }
  std::sort(out.begin(), out.end(), [](const Document& a, const Document& b) {
    return std::tie(a.timestamp, a.id) < std::tie(b.timestamp, b.id);
  });
  return out;
}

std::vector<Document> DocumentStore::scan_all() const {
  return scan(Instant{std::numeric_limits<std::int64_t>::min()},
              Instant{std::numeric_limits<std::int64_t>::max()});
}

// --- ingest ------------------------------------------------------------------

IngestStats ingest(std::istream& source, std::span<const ExtractionHeuristic> heuristics,
                   DocumentStore& store, std::ostream* diagnostics) {
  if (heuristics.empty()) throw ConfigError("ingest requires at least one heuristic");
  IngestStats stats;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(source, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    ++stats.read;
    Document doc;
    try {
      doc = parse_document(line);
    } catch (const Error& e) {
      ++stats.rejected;
      if (diagnostics) *diagnostics << "line " << line_no << ": malformed: " << e.what() << '\n';
      continue;
    }
    const bool match = std::any_of(heuristics.begin(), heuristics.end(),
                                   [&](const auto& h) { return apply_heuristic(doc, h); });
    if (!match) {
      ++stats.rejected;
      if (diagnostics) {
        *diagnostics << "line " << line_no << ": no heuristic matched '" << doc.id << "'\n";
      }
      continue;
    }
    if (store.contains(doc.id)) {
      ++stats.duplicates;
      continue;
    }
    try {
      store.append(doc);
    } catch (const IoError& e) {
      --stats.read;
      throw IngestAborted(e.what(), stats);
    }
    ++stats.accepted;
  }
  return stats;
}

}  // namespace pulsemine
