#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pulsemine/brown.hpp"
#include "pulsemine/document.hpp"
#include "pulsemine/error.hpp"
#include "pulsemine/sentiment.hpp"
#include "pulsemine/skipgram.hpp"

namespace pulsemine {

// Sparse features sorted by id, ids unique. Namespaces: "bow:", "brown:", "emb:".
using FeatureVector = std::vector<std::pair<std::string, double>>;

struct FeatureSpace {
  std::set<std::string> vocab;
  const BrownHierarchy* brown = nullptr;
  std::vector<std::size_t> brown_prefixes = kDefaultBrownPrefixes;
  const EmbeddingTable* embeddings = nullptr;
};

// bow: L2-normalized counts of in-vocab tokens.
// brown: binary indicators of the prefixes of every token the hierarchy knows.
// emb: componentwise mean of token vectors, "<unk>" standing in for unknown
//      words; zeros for an empty token list.
FeatureVector featurize(std::span<const std::string> tokens, const FeatureSpace& space);

enum class TrainMode { full_batch, sgd };

struct TrainingParams {
  double l2 = 0.0;
  std::size_t epochs = 200;
  double learning_rate = 0.1;
  TrainMode mode = TrainMode::full_batch;
  std::uint64_t seed = 1;
};

struct LinearModel {
  std::vector<std::string> features;  // sorted
  std::vector<Probs> weights;         // per feature: (positive, negative, neutral)
  Probs bias{};

  TrainingParams params;
  std::vector<std::size_t> brown_prefixes;  // empty: no brown features
  std::size_t emb_dim = 0;                  // 0: no embedding features
  std::string vocab_hash;

  // Bow vocabulary recovered from the "bow:" features.
  std::set<std::string> vocabulary() const;
  // Index of a feature in `features`, if present.
  std::optional<std::size_t> index_of(const std::string& feature) const;
};

struct Prediction {
  SentimentLabel label = SentimentLabel::positive;
  Probs probs{};
};

// Softmax over per-label scores; argmax ties go to the earlier label.
// Features the model doesn't know contribute nothing.
Prediction predict(const LinearModel& model, const FeatureVector& fv);
Probs softmax(const Probs& scores);
SentimentLabel argmax_label(const Probs& probs);

// Dense-parameter view of the training problem, exposed for gradient checks.
struct SparseRow {
  std::vector<std::pair<std::uint32_t, double>> entries;
  std::size_t label = 0;
};

struct ModelParameters {
  std::vector<double> weights;  // feature-major, kNumLabels per feature
  Probs bias{};
};

// Mean cross-entropy + (l2/2)*|W|^2 (bias unregularized). Fills grad when
// non-null.
double objective_and_gradient(std::span<const SparseRow> rows, const ModelParameters& params,
                              double l2, ModelParameters* grad);

struct LabeledExample {
  std::vector<std::string> tokens;
  SentimentLabel label = SentimentLabel::neutral;
};

struct TrainingResult {
  LinearModel model;
  std::vector<double> loss_history;  // objective before each epoch's update, then final
};

class TrainingError : public Error {
 public:
  using Error::Error;
};

// Multinomial logistic regression. The bow vocabulary is every token in the
// dataset. Throws ConfigError on an empty dataset and TrainingError when the
// loss goes non-finite.
TrainingResult train_classifier(std::span<const LabeledExample> dataset,
                                const TrainingParams& params,
                                const BrownHierarchy* brown = nullptr,
                                const EmbeddingTable* embeddings = nullptr,
                                const std::vector<std::size_t>& brown_prefixes =
                                    kDefaultBrownPrefixes);

// Feature space a model was trained with.
FeatureSpace feature_space(const LinearModel& model, const BrownHierarchy* brown,
                           const EmbeddingTable* embeddings);

std::string model_to_string(const LinearModel& model);
LinearModel parse_model(std::string_view text);
void save_model(const LinearModel& model, const std::filesystem::path& path);
LinearModel load_model(const std::filesystem::path& path);

// "label<TAB>text" lines; text goes through textnorm.
std::vector<LabeledExample> load_labeled_dataset(const std::filesystem::path& path);
std::vector<LabeledExample> parse_labeled_dataset(std::string_view tsv,
                                                  std::string_view origin = "<dataset>");

struct ClassifierConfig {
  Method method = Method::lexicon;
  const Lexicon* lexicon = nullptr;
  const LinearModel* model = nullptr;
  const BrownHierarchy* brown = nullptr;
  const EmbeddingTable* embeddings = nullptr;
};

// Throws ConfigError when the config lacks what its method needs.
void validate(const ClassifierConfig& config);

// Lexicon mode encodes probs one-hot on the chosen label.
SentimentAnnotation classify_document(const Document& doc, const ClassifierConfig& config);

}  // namespace pulsemine
