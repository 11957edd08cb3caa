#include "pulsemine/kernels.hpp"

#include <omp.h>

#include <cmath>

#include "pulsemine/classifier.hpp"
#include "pulsemine/entitykb.hpp"

namespace pulsemine::kernels {

double mi_term(double joint, double left, double right, double total) {
  if (joint <= 0.0) return 0.0;
  return joint / total * std::log(joint * total / (left * right));
}

namespace {

double merge_delta(const ClassBigramView& v, std::size_t i, std::size_t j) {
  const std::size_t S = v.size;
  const std::size_t a = v.active[i], b = v.active[j];
  const double left_m = v.left[a] + v.left[b];
  const double right_m = v.right[a] + v.right[b];
  double gained = 0.0;
  for (const std::uint32_t c : v.active) {
    if (c == a || c == b) continue;
    gained += mi_term(v.counts[a * S + c] + v.counts[b * S + c], left_m, v.right[c], v.total);
    gained += mi_term(v.counts[c * S + a] + v.counts[c * S + b], v.left[c], right_m, v.total);
  }
  const double self = v.counts[a * S + a] + v.counts[a * S + b] + v.counts[b * S + a] +
                      v.counts[b * S + b];
  gained += mi_term(self, left_m, right_m, v.total);
  const double lost = v.involvement[a] + v.involvement[b] -
                      mi_term(v.counts[a * S + b], v.left[a], v.right[b], v.total) -
                      mi_term(v.counts[b * S + a], v.left[b], v.right[a], v.total);
  return gained - lost;
}

}  // namespace

void brown_merge_deltas_serial(const ClassBigramView& view, std::span<double> out) {
  const std::size_t k = view.active.size();
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) out[pair_index(i, j, k)] = merge_delta(view, i, j);
  }
}

void brown_merge_deltas_omp(const ClassBigramView& view, std::span<double> out) {
  const auto k = static_cast<std::ptrdiff_t>(view.active.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < k; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    for (std::size_t j = ui + 1; j < static_cast<std::size_t>(k); ++j) {
      out[pair_index(ui, j, static_cast<std::size_t>(k))] = merge_delta(view, ui, j);
    }
  }
}

void brown_merge_deltas(const ClassBigramView& view, std::span<double> out, Exec exec) {
  if (exec == Exec::parallel) {
    brown_merge_deltas_omp(view, out);
  } else {
    brown_merge_deltas_serial(view, out);
  }
}

std::vector<std::uint8_t> relevance_serial(std::span<const Document> docs,
                                           std::string_view entity_id, const KnowledgeBase& kb,
                                           const SurfaceFormMatcher& matcher) {
  std::vector<std::uint8_t> out(docs.size(), 0);
  for (std::size_t i = 0; i < docs.size(); ++i) {
    out[i] = filter_relevant(docs[i], entity_id, kb, matcher) ? 1 : 0;
  }
  return out;
}

std::vector<std::uint8_t> relevance_omp(std::span<const Document> docs,
                                        std::string_view entity_id, const KnowledgeBase& kb,
                                        const SurfaceFormMatcher& matcher) {
  if (kb.find(entity_id) == nullptr) {
    throw ConfigError("unknown entity '" + std::string(entity_id) + "'");
  }
  std::vector<std::uint8_t> out(docs.size(), 0);
  const auto n = static_cast<std::ptrdiff_t>(docs.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] =
        filter_relevant(docs[static_cast<std::size_t>(i)], entity_id, kb, matcher) ? 1 : 0;
  }
  return out;
}

std::vector<std::uint8_t> relevance(std::span<const Document> docs, std::string_view entity_id,
                                    const KnowledgeBase& kb, const SurfaceFormMatcher& matcher,
                                    Exec exec) {
  return exec == Exec::parallel ? relevance_omp(docs, entity_id, kb, matcher)
                                : relevance_serial(docs, entity_id, kb, matcher);
}

std::vector<SentimentAnnotation> classify_serial(std::span<const Document> docs,
                                                 const ClassifierConfig& config) {
  validate(config);
  std::vector<SentimentAnnotation> out;
  out.reserve(docs.size());
  for (const auto& d : docs) out.push_back(classify_document(d, config));
  return out;
}

std::vector<SentimentAnnotation> classify_omp(std::span<const Document> docs,
                                              const ClassifierConfig& config) {
  validate(config);
  std::vector<SentimentAnnotation> out(docs.size());
  const auto n = static_cast<std::ptrdiff_t>(docs.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = classify_document(docs[static_cast<std::size_t>(i)], config);
  }
  return out;
}

std::vector<SentimentAnnotation> classify(std::span<const Document> docs,
                                          const ClassifierConfig& config, Exec exec) {
  return exec == Exec::parallel ? classify_omp(docs, config) : classify_serial(docs, config);
}

}  // namespace pulsemine::kernels
