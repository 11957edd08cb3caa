#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "pulsemine/kernels.hpp"

namespace pulsemine {

using Corpus = std::vector<std::vector<std::string>>;

struct CorpusStats {
  std::map<std::string, std::uint64_t> unigrams;
  std::map<std::pair<std::string, std::string>, std::uint64_t> bigrams;  // adjacent, within a sentence
  std::uint64_t total = 0;
};

CorpusStats corpus_stats(const Corpus& corpus);

// A merge names each cluster by its lexicographically smallest word; `left`
// is always the cluster whose smallest word sorts first.
struct BrownMerge {
  std::string left;
  std::string right;
  double ami_after = 0.0;

  friend bool operator==(const BrownMerge& a, const BrownMerge& b) {
    return a.left == b.left && a.right == b.right;
  }
};

struct BrownHierarchy {
  std::map<std::string, std::string> paths;  // word -> bit string, root to leaf
  std::map<std::string, std::uint64_t> counts;
  std::vector<BrownMerge> merge_log;       // merges down to the requested cluster count
  std::vector<BrownMerge> tree_merges;     // every merge, down to a single root
  std::map<std::string, std::string> cluster_of;  // word -> representative at that count
};

// Scores within this distance of the best are treated as tied and resolved by
// the smallest-word order.
inline constexpr double kBrownTieTolerance = 1e-10;

// Exact greedy agglomerative clustering maximizing the average mutual
// information of the class-bigram distribution. Throws ConfigError if the
// corpus is empty or has fewer distinct words than final_clusters.
BrownHierarchy brown_cluster(const Corpus& corpus, std::size_t final_clusters,
                             Exec exec = Exec::parallel);

// "brown:L:<prefix>" for each L; empty for words the hierarchy doesn't know.
std::vector<std::string> brown_features(const std::string& word, const BrownHierarchy& h,
                                        const std::vector<std::size_t>& prefix_lengths);

inline const std::vector<std::size_t> kDefaultBrownPrefixes = {2, 4, 6, 8};

// "word<TAB>bitpath<TAB>count", sorted by (path, word).
void save_brown(const BrownHierarchy& h, const std::filesystem::path& path);
std::string brown_to_string(const BrownHierarchy& h);
BrownHierarchy load_brown(const std::filesystem::path& path);

}  // namespace pulsemine
