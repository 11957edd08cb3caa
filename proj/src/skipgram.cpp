#include "pulsemine/skipgram.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "pulsemine/error.hpp"

namespace pulsemine {

const std::vector<double>& EmbeddingTable::lookup(const std::string& word) const {
  auto it = vectors.find(word);
  if (it != vectors.end()) return it->second;
  auto unk = vectors.find(kUnknownWord);
  if (unk == vectors.end()) throw ConfigError("embedding table has no <unk> vector");
  return unk->second;
}

double cosine(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) {
    throw ConfigError("cosine of vectors with different dims (" + std::to_string(u.size()) +
                      " vs " + std::to_string(v.size()) + ")");
  }
  double dot = 0.0, nu = 0.0, nv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * v[i];
    nu += u[i] * u[i];
    nv += v[i] * v[i];
  }
  if (nu == 0.0 || nv == 0.0) return 0.0;
  return std::clamp(dot / (std::sqrt(nu) * std::sqrt(nv)), -1.0, 1.0);
}

namespace {

// Portable uniform in [0, 1) from the engine's raw 64-bit output.
double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1p-53; }

double sigmoid(double x) {
  if (x > 30.0) return 1.0;
  if (x < -30.0) return 0.0;
  return 1.0 / (1.0 + std::exp(-x));
}

}  // namespace

EmbeddingTable train_skipgram(const Corpus& corpus, const SkipGramParams& params) {
  if (params.dim == 0) throw ConfigError("embedding dim must be >= 1");
  const CorpusStats stats = corpus_stats(corpus);
  if (stats.total == 0) throw ConfigError("skip-gram training needs a nonempty corpus");

  std::vector<std::string> vocab;
  std::map<std::string, std::uint32_t> index;
  for (const auto& [w, c] : stats.unigrams) {
    index.emplace(w, static_cast<std::uint32_t>(vocab.size()));
    vocab.push_back(w);
  }
  const std::size_t V = vocab.size();
  const std::size_t D = params.dim;

  std::vector<double> noise_cdf(V);
  double acc = 0.0;
  for (std::size_t i = 0; i < V; ++i) {
    acc += std::pow(static_cast<double>(stats.unigrams.at(vocab[i])), 0.75);
    noise_cdf[i] = acc;
  }

  std::mt19937_64 rng(params.seed);
  std::vector<double> in(V * D), out(V * D, 0.0);
  for (double& x : in) x = (uniform01(rng) - 0.5) / static_cast<double>(D);

  auto sample_noise = [&]() -> std::uint32_t {
    const double r = uniform01(rng) * acc;
    auto it = std::upper_bound(noise_cdf.begin(), noise_cdf.end(), r);
    return static_cast<std::uint32_t>(std::min<std::size_t>(it - noise_cdf.begin(), V - 1));
  };

  std::vector<std::vector<std::uint32_t>> ids;
  ids.reserve(corpus.size());
  for (const auto& s : corpus) {
    auto& row = ids.emplace_back();
    for (const auto& w : s) row.push_back(index.at(w));
  }

  const double total_steps = static_cast<double>(params.epochs) * static_cast<double>(stats.total);
  double processed = 0.0;
  std::vector<double> grad_in(D);

  for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
    for (const auto& sentence : ids) {
      for (std::size_t pos = 0; pos < sentence.size(); ++pos) {
        const double progress = total_steps > 0 ? processed / total_steps : 0.0;
        const double lr = params.learning_rate +
                          (params.min_learning_rate - params.learning_rate) * progress;
        processed += 1.0;

        double* center = &in[sentence[pos] * D];
        const std::size_t lo = pos >= params.window ? pos - params.window : 0;
        const std::size_t hi = std::min(sentence.size() - 1, pos + params.window);
        for (std::size_t c = lo; c <= hi; ++c) {
          if (c == pos) continue;
          const std::uint32_t context = sentence[c];
          std::fill(grad_in.begin(), grad_in.end(), 0.0);
          for (std::size_t k = 0; k <= params.negatives; ++k) {
            std::uint32_t target = context;
            double label = 1.0;
            if (k > 0) {
              target = sample_noise();
              if (target == context) continue;
              label = 0.0;
            }
            double* target_vec = &out[target * D];
            double dot = 0.0;
            for (std::size_t d = 0; d < D; ++d) dot += center[d] * target_vec[d];
            const double g = (label - sigmoid(dot)) * lr;
            for (std::size_t d = 0; d < D; ++d) {
              grad_in[d] += g * target_vec[d];
              target_vec[d] += g * center[d];
            }
          }
          for (std::size_t d = 0; d < D; ++d) center[d] += grad_in[d];
        }
      }
    }
  }

  EmbeddingTable table;
  table.dim = D;
  std::vector<double> mean(D, 0.0);
  for (std::size_t i = 0; i < V; ++i) {
    std::vector<double> v(in.begin() + static_cast<std::ptrdiff_t>(i * D),
                          in.begin() + static_cast<std::ptrdiff_t>((i + 1) * D));
    for (std::size_t d = 0; d < D; ++d) mean[d] += v[d];
    table.vectors.emplace(vocab[i], std::move(v));
  }
  for (double& x : mean) x /= static_cast<double>(V);
  table.vectors[kUnknownWord] = std::move(mean);
  return table;
}

std::string embeddings_to_string(const EmbeddingTable& table) {
  std::string out = "dim " + std::to_string(table.dim) + "\n";
  char buf[40];
  for (const auto& [word, vec] : table.vectors) {
    out += word;
    for (double x : vec) {
      std::snprintf(buf, sizeof buf, " %.9g", x);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

void save_embeddings(const EmbeddingTable& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << embeddings_to_string(table);
  if (!out) throw IoError("write failed: " + path.string());
}

EmbeddingTable load_embeddings(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open embedding file " + path.string());
  EmbeddingTable table;
  std::string line;
  if (!std::getline(in, line) || line.rfind("dim ", 0) != 0) {
    throw ParseError(path.string() + ":1: expected 'dim N' header");
  }
  try {
    table.dim = std::stoul(line.substr(4));
  } catch (const std::exception&) {
    throw ParseError(path.string() + ":1: bad dim");
  }
  if (table.dim == 0) throw ParseError(path.string() + ":1: dim must be positive");
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string word;
    ss >> word;
    std::vector<double> v;
    std::string num;
    while (ss >> num) {
      char* end = nullptr;
      const double x = std::strtod(num.c_str(), &end);
      if (*end != '\0' || !std::isfinite(x)) {
        throw ParseError(path.string() + ":" + std::to_string(line_no) + ": bad component");
      }
      v.push_back(x);
    }
    if (v.size() != table.dim) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                       std::to_string(table.dim) + " components");
    }
    table.vectors[word] = std::move(v);
  }
  if (!table.vectors.contains(kUnknownWord)) {
    throw ParseError(path.string() + ": missing <unk> vector");
  }
  return table;
}

}  // namespace pulsemine
