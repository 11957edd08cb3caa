#pragma once

// Data-parallel kernels. Every kernel has a serial reference and an OpenMP
// version; both produce identical results (each output slot is computed by
// the same arithmetic regardless of which thread runs it).

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace pulsemine {

struct Document;
class KnowledgeBase;
class SurfaceFormMatcher;
struct SentimentAnnotation;
struct ClassifierConfig;

enum class Exec { serial, parallel };

namespace kernels {

// Dense class-bigram statistics over `size` slots, of which `active` are live.
// q(a,b) is the mutual-information term of cell (a,b); involvement[a] is the
// sum of every q term in row a and column a.
struct ClassBigramView {
  std::span<const double> counts;  // size * size, row = left class
  std::span<const double> left;    // row sums
  std::span<const double> right;   // column sums
  std::span<const double> involvement;
  std::span<const std::uint32_t> active;
  std::size_t size = 0;
  double total = 0.0;
};

double mi_term(double joint, double left, double right, double total);

// Change in average mutual information for merging active[i] with active[j],
// written to out[pair_index(i, j)] for every i < j.
void brown_merge_deltas_serial(const ClassBigramView& view, std::span<double> out);
void brown_merge_deltas_omp(const ClassBigramView& view, std::span<double> out);
void brown_merge_deltas(const ClassBigramView& view, std::span<double> out, Exec exec);

inline std::size_t pair_count(std::size_t k) { return k * (k - 1) / 2; }
// Row-major index of (i, j), i < j, in the strict upper triangle of a k x k matrix.
inline std::size_t pair_index(std::size_t i, std::size_t j, std::size_t k) {
  return i * (2 * k - i - 1) / 2 + (j - i - 1);
}

// One flag per document: does it resolve to entity_id?
std::vector<std::uint8_t> relevance_serial(std::span<const Document> docs,
                                           std::string_view entity_id, const KnowledgeBase& kb,
                                           const SurfaceFormMatcher& matcher);
std::vector<std::uint8_t> relevance_omp(std::span<const Document> docs,
                                        std::string_view entity_id, const KnowledgeBase& kb,
                                        const SurfaceFormMatcher& matcher);
std::vector<std::uint8_t> relevance(std::span<const Document> docs, std::string_view entity_id,
                                    const KnowledgeBase& kb, const SurfaceFormMatcher& matcher,
                                    Exec exec);

std::vector<SentimentAnnotation> classify_serial(std::span<const Document> docs,
                                                 const ClassifierConfig& config);
std::vector<SentimentAnnotation> classify_omp(std::span<const Document> docs,
                                              const ClassifierConfig& config);
std::vector<SentimentAnnotation> classify(std::span<const Document> docs,
                                          const ClassifierConfig& config, Exec exec);

}  // namespace kernels
}  // namespace pulsemine
