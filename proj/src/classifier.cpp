#include "pulsemine/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include "pulsemine/error.hpp"
#include "pulsemine/textnorm.hpp"

namespace pulsemine {

namespace {

constexpr const char* kModelMagic = "pulsemine-linear-model v1";

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fnv1a_hex(const std::set<std::string>& words) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const auto& w : words) {
    for (unsigned char c : w) {
      h ^= c;
      h *= 1099511628211ULL;
    }
    h ^= '\n';
    h *= 1099511628211ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace

FeatureVector featurize(std::span<const std::string> tokens, const FeatureSpace& space) {
  std::map<std::string, double> feats;

  std::map<std::string_view, double> counts;
  for (const auto& t : tokens) {
    if (space.vocab.contains(t)) counts[t] += 1.0;
  }
  double norm = 0.0;
  for (const auto& [t, c] : counts) norm += c * c;
  norm = std::sqrt(norm);
  for (const auto& [t, c] : counts) feats["bow:" + std::string(t)] = c / norm;

  if (space.brown != nullptr) {
    for (const auto& t : tokens) {
      if (!space.vocab.contains(t)) continue;
      for (auto& f : brown_features(t, *space.brown, space.brown_prefixes)) feats[f] = 1.0;
    }
  }

  if (space.embeddings != nullptr) {
    const std::size_t dim = space.embeddings->dim;
    std::vector<double> mean(dim, 0.0);
    for (const auto& t : tokens) {
      const auto& v = space.embeddings->lookup(t);
      for (std::size_t d = 0; d < dim; ++d) mean[d] += v[d];
    }
    if (!tokens.empty()) {
      for (double& x : mean) x /= static_cast<double>(tokens.size());
    }
    for (std::size_t d = 0; d < dim; ++d) feats["emb:" + std::to_string(d)] = mean[d];
  }

  return FeatureVector(feats.begin(), feats.end());
}

std::set<std::string> LinearModel::vocabulary() const {
  std::set<std::string> out;
  for (const auto& f : features) {
    if (f.rfind("bow:", 0) == 0) out.insert(f.substr(4));
  }
  return out;
}

std::optional<std::size_t> LinearModel::index_of(const std::string& feature) const {
  auto it = std::lower_bound(features.begin(), features.end(), feature);
  if (it == features.end() || *it != feature) return std::nullopt;
  return static_cast<std::size_t>(it - features.begin());
}

Probs softmax(const Probs& scores) {
  const double m = *std::max_element(scores.begin(), scores.end());
  Probs p{};
  double z = 0.0;
  for (std::size_t k = 0; k < kNumLabels; ++k) {
    p[k] = std::exp(scores[k] - m);
    z += p[k];
  }
  for (double& x : p) x /= z;
  return p;
}

SentimentLabel argmax_label(const Probs& probs) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < kNumLabels; ++k) {
    if (probs[k] > probs[best]) best = k;
  }
  return static_cast<SentimentLabel>(best);
}

Prediction predict(const LinearModel& model, const FeatureVector& fv) {
  Probs scores = model.bias;
  for (const auto& [id, value] : fv) {
    if (auto idx = model.index_of(id)) {
      for (std::size_t k = 0; k < kNumLabels; ++k) scores[k] += model.weights[*idx][k] * value;
    }
  }
  Prediction p;
  p.probs = softmax(scores);
  p.label = argmax_label(p.probs);
  return p;
}

double objective_and_gradient(std::span<const SparseRow> rows, const ModelParameters& params,
                              double l2, ModelParameters* grad) {
  if (grad != nullptr) {
    grad->weights.assign(params.weights.size(), 0.0);
    grad->bias = {};
  }
  const double inv_n = 1.0 / static_cast<double>(rows.size());
  double loss = 0.0;
  for (const SparseRow& row : rows) {
    Probs scores = params.bias;
    for (const auto& [f, x] : row.entries) {
      for (std::size_t k = 0; k < kNumLabels; ++k) scores[k] += params.weights[f * kNumLabels + k] * x;
    }
    const double m = *std::max_element(scores.begin(), scores.end());
    double z = 0.0;
    for (double s : scores) z += std::exp(s - m);
    const double log_z = m + std::log(z);
    loss += log_z - scores[row.label];
    if (grad == nullptr) continue;
    for (std::size_t k = 0; k < kNumLabels; ++k) {
      const double residual = (std::exp(scores[k] - log_z) - (k == row.label ? 1.0 : 0.0)) * inv_n;
      grad->bias[k] += residual;
      for (const auto& [f, x] : row.entries) grad->weights[f * kNumLabels + k] += residual * x;
    }
  }
  loss *= inv_n;
  double sq = 0.0;
  for (double w : params.weights) sq += w * w;
  loss += 0.5 * l2 * sq;
  if (grad != nullptr && l2 != 0.0) {
    for (std::size_t i = 0; i < params.weights.size(); ++i) grad->weights[i] += l2 * params.weights[i];
  }
  return loss;
}

TrainingResult train_classifier(std::span<const LabeledExample> dataset,
                                const TrainingParams& params, const BrownHierarchy* brown,
                                const EmbeddingTable* embeddings,
                                const std::vector<std::size_t>& brown_prefixes) {
  if (dataset.empty()) throw ConfigError("cannot train a classifier on an empty dataset");

  FeatureSpace space;
  for (const auto& ex : dataset) space.vocab.insert(ex.tokens.begin(), ex.tokens.end());
  space.brown = brown;
  space.brown_prefixes = brown_prefixes;
  space.embeddings = embeddings;

  std::vector<FeatureVector> fvs;
  fvs.reserve(dataset.size());
  std::set<std::string> names;
  for (const auto& ex : dataset) {
    fvs.push_back(featurize(ex.tokens, space));
    for (const auto& [id, v] : fvs.back()) names.insert(id);
  }

  TrainingResult result;
  LinearModel& model = result.model;
  model.features.assign(names.begin(), names.end());
  model.params = params;
  if (brown != nullptr) model.brown_prefixes = brown_prefixes;
  model.emb_dim = embeddings != nullptr ? embeddings->dim : 0;
  model.vocab_hash = fnv1a_hex(space.vocab);

  std::vector<SparseRow> rows;
  rows.reserve(dataset.size());
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    SparseRow row;
    row.label = label_index(dataset[i].label);
    for (const auto& [id, v] : fvs[i]) {
      row.entries.emplace_back(static_cast<std::uint32_t>(*model.index_of(id)), v);
    }
    rows.push_back(std::move(row));
  }

  ModelParameters theta;
  theta.weights.assign(model.features.size() * kNumLabels, 0.0);
  ModelParameters grad;

  auto check = [&](double loss, std::size_t epoch) {
    if (!std::isfinite(loss)) {
      throw TrainingError("training diverged: non-finite loss at epoch " + std::to_string(epoch));
    }
    result.loss_history.push_back(loss);
  };

  std::mt19937_64 rng(params.seed);
  std::vector<std::size_t> order(rows.size());
  std::iota(order.begin(), order.end(), 0);

  for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
    if (params.mode == TrainMode::full_batch) {
      check(objective_and_gradient(rows, theta, params.l2, &grad), epoch);
      for (std::size_t i = 0; i < theta.weights.size(); ++i) {
        theta.weights[i] -= params.learning_rate * grad.weights[i];
      }
      for (std::size_t k = 0; k < kNumLabels; ++k) theta.bias[k] -= params.learning_rate * grad.bias[k];
      continue;
    }
    check(objective_and_gradient(rows, theta, params.l2, nullptr), epoch);
    // Fisher-Yates with a portable index draw.
    for (std::size_t i = order.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(rng() % i);
      std::swap(order[i - 1], order[j]);
    }
    for (std::size_t idx : order) {
      objective_and_gradient(std::span<const SparseRow>(&rows[idx], 1), theta, params.l2, &grad);
      for (std::size_t i = 0; i < theta.weights.size(); ++i) {
        theta.weights[i] -= params.learning_rate * grad.weights[i];
      }
      for (std::size_t k = 0; k < kNumLabels; ++k) theta.bias[k] -= params.learning_rate * grad.bias[k];
    }
  }
  check(objective_and_gradient(rows, theta, params.l2, nullptr), params.epochs);

  model.weights.resize(model.features.size());
  for (std::size_t f = 0; f < model.features.size(); ++f) {
    for (std::size_t k = 0; k < kNumLabels; ++k) model.weights[f][k] = theta.weights[f * kNumLabels + k];
  }
  model.bias = theta.bias;
  return result;
}

FeatureSpace feature_space(const LinearModel& model, const BrownHierarchy* brown,
                           const EmbeddingTable* embeddings) {
  FeatureSpace space;
  space.vocab = model.vocabulary();
  if (!model.brown_prefixes.empty()) {
    space.brown = brown;
    space.brown_prefixes = model.brown_prefixes;
  }
  if (model.emb_dim > 0) space.embeddings = embeddings;
  return space;
}

// --- model file ----------------------------------------------------------------

std::string model_to_string(const LinearModel& model) {
  std::string out = std::string(kModelMagic) + "\n";
  out += "seed " + std::to_string(model.params.seed) + "\n";
  out += std::string("mode ") + (model.params.mode == TrainMode::full_batch ? "full_batch" : "sgd") + "\n";
  out += "l2 " + fmt17(model.params.l2) + "\n";
  out += "epochs " + std::to_string(model.params.epochs) + "\n";
  out += "learning_rate " + fmt17(model.params.learning_rate) + "\n";
  out += "brown_prefixes ";
  if (model.brown_prefixes.empty()) out += "-";
  for (std::size_t i = 0; i < model.brown_prefixes.size(); ++i) {
    if (i > 0) out += ",";
    out += std::to_string(model.brown_prefixes[i]);
  }
  out += "\nemb_dim " + std::to_string(model.emb_dim) + "\n";
  out += "vocab_hash " + model.vocab_hash + "\n";
  out += "features " + std::to_string(model.features.size()) + "\n";
  out += "bias " + fmt17(model.bias[0]) + " " + fmt17(model.bias[1]) + " " + fmt17(model.bias[2]) + "\n";
  for (std::size_t f = 0; f < model.features.size(); ++f) {
    out += model.features[f];
    for (double w : model.weights[f]) out += " " + fmt17(w);
    out += "\n";
  }
  return out;
}

namespace {

class HeaderReader {
 public:
  explicit HeaderReader(std::istringstream& in) : in_(in) {}

  std::string field(const std::string& key) {
    std::string line;
    ++line_;
    if (!std::getline(in_, line)) fail("missing '" + key + "'");
    if (line.rfind(key + " ", 0) != 0) fail("expected '" + key + "'");
    return line.substr(key.size() + 1);
  }

  double number(const std::string& key) {
    const std::string v = field(key);
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (v.empty() || *end != '\0') fail("bad number for '" + key + "'");
    return x;
  }

  std::uint64_t integer(const std::string& key) {
    const std::string v = field(key);
    try {
      std::size_t used = 0;
      const auto x = std::stoull(v, &used);
      if (used != v.size()) fail("bad integer for '" + key + "'");
      return x;
    } catch (const std::logic_error&) {
      fail("bad integer for '" + key + "'");
    }
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("model line " + std::to_string(line_) + ": " + what);
  }

  std::size_t& line() { return line_; }

 private:
  std::istringstream& in_;
  std::size_t line_ = 1;
};

}  // namespace

LinearModel parse_model(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != kModelMagic) {
    throw ParseError("not a pulsemine model (bad header)");
  }
  HeaderReader r(in);
  LinearModel m;
  m.params.seed = r.integer("seed");
  const std::string mode = r.field("mode");
  if (mode == "full_batch") {
    m.params.mode = TrainMode::full_batch;
  } else if (mode == "sgd") {
    m.params.mode = TrainMode::sgd;
  } else {
    r.fail("unknown mode '" + mode + "'");
  }
  m.params.l2 = r.number("l2");
  m.params.epochs = r.integer("epochs");
  m.params.learning_rate = r.number("learning_rate");
  const std::string prefixes = r.field("brown_prefixes");
  if (prefixes != "-") {
    std::istringstream ps(prefixes);
    std::string item;
    while (std::getline(ps, item, ',')) {
      try {
        m.brown_prefixes.push_back(std::stoul(item));
      } catch (const std::logic_error&) {
        r.fail("bad brown prefix list");
      }
    }
  }
  m.emb_dim = r.integer("emb_dim");
  m.vocab_hash = r.field("vocab_hash");
  const std::uint64_t n = r.integer("features");
  std::istringstream bias(r.field("bias"));
  for (double& b : m.bias) {
    if (!(bias >> b)) r.fail("bad bias");
  }
  m.features.reserve(n);
  m.weights.reserve(n);
  while (std::getline(in, line)) {
    ++r.line();
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string name;
    Probs w{};
    if (!(ls >> name >> w[0] >> w[1] >> w[2])) r.fail("bad feature row");
    if (!m.features.empty() && !(m.features.back() < name)) r.fail("features not sorted/unique");
    m.features.push_back(std::move(name));
    m.weights.push_back(w);
  }
  if (m.features.size() != n) {
    throw ParseError("model declares " + std::to_string(n) + " features but has " +
                     std::to_string(m.features.size()));
  }
  return m;
}

void save_model(const LinearModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << model_to_string(model);
  if (!out) throw IoError("write failed: " + path.string());
}

LinearModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open model " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_model(ss.str());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::vector<LabeledExample> parse_labeled_dataset(std::string_view tsv, std::string_view origin) {
  std::vector<LabeledExample> out;
  std::istringstream in{std::string(tsv)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw ParseError(std::string(origin) + ":" + std::to_string(line_no) +
                       ": expected label<TAB>text");
    }
    try {
      out.push_back({normalize_surfaces(line.substr(tab + 1)), parse_label(line.substr(0, tab))});
    } catch (const ParseError& e) {
      throw ParseError(std::string(origin) + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::vector<LabeledExample> load_labeled_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open dataset " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_labeled_dataset(ss.str(), path.string());
}

// --- classify -----------------------------------------------------------------------

void validate(const ClassifierConfig& config) {
  if (config.method == Method::lexicon) {
    if (config.lexicon == nullptr) throw ConfigError("lexicon method needs a lexicon");
    return;
  }
  if (config.model == nullptr) throw ConfigError("classifier method needs a model");
  if (!config.model->brown_prefixes.empty() && config.brown == nullptr) {
    throw ConfigError("model was trained with brown features; a brown file is required");
  }
  if (config.model->emb_dim > 0) {
    if (config.embeddings == nullptr) {
      throw ConfigError("model was trained with embeddings; an embedding file is required");
    }
    if (config.embeddings->dim != config.model->emb_dim) {
      throw ConfigError("embedding dim " + std::to_string(config.embeddings->dim) +
                        " does not match model dim " + std::to_string(config.model->emb_dim));
    }
  }
}

SentimentAnnotation classify_document(const Document& doc, const ClassifierConfig& config) {
  validate(config);
  const auto tokens = normalize_surfaces(doc.text);
  SentimentAnnotation a;
  a.doc_id = doc.id;
  a.method = config.method;
  if (config.method == Method::lexicon) {
    a.label = lexicon_score(tokens, *config.lexicon).label;
    a.probs = {};
    a.probs[label_index(a.label)] = 1.0;
    return a;
  }
  const auto space = feature_space(*config.model, config.brown, config.embeddings);
  const Prediction p = predict(*config.model, featurize(tokens, space));
  a.label = p.label;
  a.probs = p.probs;
  return a;
}

}  // namespace pulsemine
