// Serial reference vs OpenMP for the three hot kernels.
// Run: ./build/bench/bench_kernels [--benchmark_filter=...]

#include <benchmark/benchmark.h>

#include <random>

#include "pulsemine/classifier.hpp"
#include "pulsemine/entitykb.hpp"
#include "pulsemine/kernels.hpp"

using namespace pulsemine;

namespace {

struct BigramFixture {
  std::vector<double> counts, left, right, involvement;
  std::vector<std::uint32_t> active;
  std::size_t size;
  double total = 0;

  explicit BigramFixture(std::size_t k) : size(k) {
    std::mt19937_64 rng(1);
    counts.assign(k * k, 0.0);
    left.assign(k, 0.0);
    right.assign(k, 0.0);
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = 0; b < k; ++b) {
        if (rng() % 4 != 0) continue;
        const double n = static_cast<double>(1 + rng() % 20);
        counts[a * k + b] = n;
        left[a] += n;
        right[b] += n;
        total += n;
      }
    }
    for (std::size_t a = 0; a < k; ++a) {
      double inv = 0;
      for (std::size_t c = 0; c < k; ++c) {
        inv += kernels::mi_term(counts[a * k + c], left[a], right[c], total);
        if (c != a) inv += kernels::mi_term(counts[c * k + a], left[c], right[a], total);
      }
      involvement.push_back(inv);
      active.push_back(static_cast<std::uint32_t>(a));
    }
  }

  kernels::ClassBigramView view() const { return {counts, left, right, involvement, active, size, total}; }
};

void BM_BrownDeltas(benchmark::State& state, Exec exec) {
  const BigramFixture f(static_cast<std::size_t>(state.range(0)));
  std::vector<double> out(kernels::pair_count(f.size));
  for (auto _ : state) {
    kernels::brown_merge_deltas(f.view(), out, exec);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(out.size()));
}

std::vector<Document> synthetic_docs(std::size_t n) {
  static const char* words[] = {"uber", "taxi", "apple", "pie", "bom", "mau", "lisboa", "app", "motorista",
                                "não", "gosto", "excelente", "preço", "viagem", "hoje", "#uber", ":)"};
  std::mt19937_64 rng(2);
  std::vector<Document> docs;
  for (std::size_t i = 0; i < n; ++i) {
    std::string text;
    for (int w = 0; w < 14; ++w) text += std::string(words[rng() % 16]) + " ";
    docs.push_back({"d" + std::to_string(i), text, "a", Instant{static_cast<std::int64_t>(i)}, std::nullopt, "t",
                    std::nullopt});
  }
  return docs;
}

KnowledgeBase bench_kb() {
  return KnowledgeBase({make_entity("uber", "Uber", {"uber", "uber app"}, {{"taxi", 1}, {"app", 1}}),
                        make_entity("apple_inc", "Apple", {"apple"}, {{"app", 1}}),
                        make_entity("apple_fruit", "apple", {"apple"}, {{"pie", 1}})});
}

void BM_Relevance(benchmark::State& state, Exec exec) {
  const auto docs = synthetic_docs(static_cast<std::size_t>(state.range(0)));
  const auto kb = bench_kb();
  const SurfaceFormMatcher matcher(kb);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::relevance(docs, "uber", kb, matcher, exec));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_Classify(benchmark::State& state, Exec exec) {
  const auto docs = synthetic_docs(static_cast<std::size_t>(state.range(0)));
  std::vector<LabeledExample> data;
  for (std::size_t i = 0; i < 60; ++i) {
    data.push_back({normalize_surfaces(docs[i].text), kAllLabels[i % 3]});
  }
  TrainingParams p;
  p.epochs = 20;
  const auto model = train_classifier(data, p).model;
  ClassifierConfig cfg;
  cfg.method = Method::classifier;
  cfg.model = &model;
  for (auto _ : state) benchmark::DoNotOptimize(kernels::classify(docs, cfg, exec));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK_CAPTURE(BM_BrownDeltas, serial, Exec::serial)->Arg(64)->Arg(256)->Arg(512);
BENCHMARK_CAPTURE(BM_BrownDeltas, omp, Exec::parallel)->Arg(64)->Arg(256)->Arg(512);
BENCHMARK_CAPTURE(BM_Relevance, serial, Exec::serial)->Arg(1000)->Arg(20000);
BENCHMARK_CAPTURE(BM_Relevance, omp, Exec::parallel)->Arg(1000)->Arg(20000);
BENCHMARK_CAPTURE(BM_Classify, serial, Exec::serial)->Arg(1000)->Arg(20000);
BENCHMARK_CAPTURE(BM_Classify, omp, Exec::parallel)->Arg(1000)->Arg(20000);

BENCHMARK_MAIN();
