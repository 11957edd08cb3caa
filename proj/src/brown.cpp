#include "pulsemine/brown.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "pulsemine/error.hpp"

namespace pulsemine {

CorpusStats corpus_stats(const Corpus& corpus) {
  CorpusStats stats;
  for (const auto& sentence : corpus) {
    for (std::size_t i = 0; i < sentence.size(); ++i) {
      ++stats.unigrams[sentence[i]];
      ++stats.total;
      if (i + 1 < sentence.size()) ++stats.bigrams[{sentence[i], sentence[i + 1]}];
    }
  }
  return stats;
}

namespace {

struct Tree {
  struct Node {
    int left = -1;
    int right = -1;
    std::string word;  // leaves only
  };
  std::vector<Node> nodes;

  void assign_paths(int node, std::string& prefix, std::map<std::string, std::string>& out) const {
    const Node& n = nodes[static_cast<std::size_t>(node)];
    if (n.left < 0) {
      out[n.word] = prefix;
      return;
    }
    prefix.push_back('0');
    assign_paths(n.left, prefix, out);
    prefix.back() = '1';
    assign_paths(n.right, prefix, out);
    prefix.pop_back();
  }
};

class BrownState {
 public:
  explicit BrownState(const CorpusStats& stats) {
    for (const auto& [word, count] : stats.unigrams) {
      slot_of_.emplace(word, words_.size());
      words_.push_back(word);
    }
    size_ = words_.size();
    counts_.assign(size_ * size_, 0.0);
    left_.assign(size_, 0.0);
    right_.assign(size_, 0.0);
    involvement_.assign(size_, 0.0);
    for (const auto& [pair, n] : stats.bigrams) {
      const std::size_t a = slot_of_.at(pair.first), b = slot_of_.at(pair.second);
      counts_[a * size_ + b] += static_cast<double>(n);
      left_[a] += static_cast<double>(n);
      right_[b] += static_cast<double>(n);
      total_ += static_cast<double>(n);
    }
    for (std::size_t i = 0; i < size_; ++i) {
      active_.push_back(static_cast<std::uint32_t>(i));
      min_word_.push_back(words_[i]);
      node_.push_back(static_cast<int>(i));
      tree_.nodes.push_back({-1, -1, words_[i]});
    }
  }

  std::size_t active_count() const { return active_.size(); }

  double q(std::size_t a, std::size_t b) const {
    return kernels::mi_term(counts_[a * size_ + b], left_[a], right_[b], total_);
  }

  double mutual_information() const {
    double mi = 0.0;
    for (auto a : active_)
      for (auto b : active_) mi += q(a, b);
    return mi;
  }

  void refresh_involvement() {
    for (auto a : active_) {
      double s = -q(a, a);
      for (auto c : active_) s += q(a, c) + q(c, a);
      involvement_[a] = s;
    }
  }

  kernels::ClassBigramView view() const {
    return {counts_, left_, right_, involvement_, active_, size_, total_};
  }

  // Merges active_[j] into active_[i], i < j.
  BrownMerge merge(std::size_t i, std::size_t j) {
    const std::size_t a = active_[i], b = active_[j];
    for (std::size_t c = 0; c < size_; ++c) counts_[a * size_ + c] += counts_[b * size_ + c];
    for (std::size_t c = 0; c < size_; ++c) counts_[c * size_ + a] += counts_[c * size_ + b];
    for (std::size_t c = 0; c < size_; ++c) {
      counts_[b * size_ + c] = 0.0;
      counts_[c * size_ + b] = 0.0;
    }
    left_[a] += left_[b];
    right_[a] += right_[b];
    left_[b] = right_[b] = 0.0;

    BrownMerge m{min_word_[a], min_word_[b], 0.0};
    tree_.nodes.push_back({node_[a], node_[b], {}});
    node_[a] = static_cast<int>(tree_.nodes.size() - 1);
    active_.erase(active_.begin() + static_cast<std::ptrdiff_t>(j));
    m.ami_after = mutual_information();
    return m;
  }

  std::map<std::string, std::string> clusters() const {
    std::map<std::string, std::string> out;
    for (auto a : active_) collect(node_[a], min_word_[a], out);
    return out;
  }

  std::map<std::string, std::string> paths() const {
    std::map<std::string, std::string> out;
    std::string prefix;
    tree_.assign_paths(node_[active_.front()], prefix, out);
    return out;
  }

 private:
  void collect(int node, const std::string& rep, std::map<std::string, std::string>& out) const {
    const auto& n = tree_.nodes[static_cast<std::size_t>(node)];
    if (n.left < 0) {
      out[n.word] = rep;
      return;
    }
    collect(n.left, rep, out);
    collect(n.right, rep, out);
  }

  std::vector<std::string> words_;
  std::map<std::string, std::size_t> slot_of_;
  std::size_t size_ = 0;
  std::vector<double> counts_, left_, right_, involvement_;
  double total_ = 0.0;
  std::vector<std::uint32_t> active_;  // kept sorted by min_word_
  std::vector<std::string> min_word_;
  std::vector<int> node_;
  Tree tree_;
};

// Highest delta wins; near-ties go to the first pair in (smallest word,
// second smallest word) order, which is pair-index order because active slots
// are sorted by their smallest word.
std::pair<std::size_t, std::size_t> select_merge(std::span<const double> deltas, std::size_t k) {
  double best = deltas[0];
  for (double d : deltas) best = std::max(best, d);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      if (deltas[kernels::pair_index(i, j, k)] >= best - kBrownTieTolerance) return {i, j};
    }
  }
  return {0, 1};
}

}  // namespace

BrownHierarchy brown_cluster(const Corpus& corpus, std::size_t final_clusters, Exec exec) {
  const CorpusStats stats = corpus_stats(corpus);
  if (stats.total == 0) throw ConfigError("brown clustering needs a nonempty corpus");
  if (final_clusters < 1) throw ConfigError("brown clustering needs at least one cluster");
  if (stats.unigrams.size() < final_clusters) {
    throw ConfigError("vocabulary of " + std::to_string(stats.unigrams.size()) +
                      " words is smaller than the requested " + std::to_string(final_clusters) +
                      " clusters");
  }

  BrownState state(stats);
  BrownHierarchy h;
  h.counts = stats.unigrams;
  if (state.active_count() == final_clusters) h.cluster_of = state.clusters();

  std::vector<double> deltas;
  while (state.active_count() > 1) {
    const std::size_t k = state.active_count();
    state.refresh_involvement();
    deltas.assign(kernels::pair_count(k), 0.0);
    kernels::brown_merge_deltas(state.view(), deltas, exec);
    const auto [i, j] = select_merge(deltas, k);
    BrownMerge m = state.merge(i, j);
    if (k > final_clusters) h.merge_log.push_back(m);
    h.tree_merges.push_back(std::move(m));
    if (state.active_count() == final_clusters) h.cluster_of = state.clusters();
  }
  h.paths = state.paths();
  return h;
}

std::vector<std::string> brown_features(const std::string& word, const BrownHierarchy& h,
                                        const std::vector<std::size_t>& prefix_lengths) {
  std::vector<std::string> out;
  auto it = h.paths.find(word);
  if (it == h.paths.end()) return out;
  const std::string& path = it->second;
  out.reserve(prefix_lengths.size());
  for (std::size_t len : prefix_lengths) {
    out.push_back("brown:" + std::to_string(len) + ":" + path.substr(0, std::min(len, path.size())));
  }
  return out;
}

std::string brown_to_string(const BrownHierarchy& h) {
  std::vector<std::pair<std::string, std::string>> rows;
  for (const auto& [word, path] : h.paths) rows.emplace_back(path, word);
  std::sort(rows.begin(), rows.end());
  std::string out;
  for (const auto& [path, word] : rows) {
    auto c = h.counts.find(word);
    out += word + '\t' + path + '\t' + std::to_string(c == h.counts.end() ? 0 : c->second) + '\n';
  }
  return out;
}

void save_brown(const BrownHierarchy& h, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << brown_to_string(h);
  if (!out) throw IoError("write failed: " + path.string());
}

BrownHierarchy load_brown(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open brown file " + path.string());
  BrownHierarchy h;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto where = path.string() + ":" + std::to_string(line_no);
    const auto t1 = line.find('\t');
    const auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string::npos) throw ParseError(where + ": expected word<TAB>path<TAB>count");
    std::string word = line.substr(0, t1);
    std::string bits = line.substr(t1 + 1, t2 - t1 - 1);
    const std::string count_text = line.substr(t2 + 1);
    std::uint64_t count = 0;
    auto [ptr, ec] = std::from_chars(count_text.data(), count_text.data() + count_text.size(), count);
    if (word.empty() || ec != std::errc() || ptr != count_text.data() + count_text.size() ||
        bits.find_first_not_of("01") != std::string::npos) {
      throw ParseError(where + ": malformed brown entry");
    }
    if (!h.paths.emplace(word, std::move(bits)).second) {
      throw ParseError(where + ": duplicate word '" + word + "'");
    }
    h.counts[word] = count;
  }
  return h;
}

}  // namespace pulsemine
