#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "pulsemine/brown.hpp"

namespace pulsemine {

inline constexpr const char* kUnknownWord = "<unk>";

struct EmbeddingTable {
  std::size_t dim = 0;
  std::map<std::string, std::vector<double>> vectors;  // includes "<unk>"

  // The word's vector, or the "<unk>" vector for unknown words.
  const std::vector<double>& lookup(const std::string& word) const;
};

struct SkipGramParams {
  std::size_t dim = 25;
  std::size_t window = 5;
  std::size_t negatives = 5;
  std::size_t epochs = 5;
  double learning_rate = 0.025;
  double min_learning_rate = 0.0001;
  std::uint64_t seed = 1;
};

// Skip-gram with negative sampling (unigram^0.75 noise), no subsampling.
// Single-threaded and bit-reproducible for a given seed.
EmbeddingTable train_skipgram(const Corpus& corpus, const SkipGramParams& params);

// Standard cosine; 0 when either norm is 0. Throws ConfigError on dim mismatch.
double cosine(std::span<const double> u, std::span<const double> v);

// "dim N" header then "word v1 ... vN", 9 significant digits, sorted by word.
std::string embeddings_to_string(const EmbeddingTable& table);
void save_embeddings(const EmbeddingTable& table, const std::filesystem::path& path);
EmbeddingTable load_embeddings(const std::filesystem::path& path);

}  // namespace pulsemine
