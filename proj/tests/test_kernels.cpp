#include <fstream>

#include "doctest.h"
#include "generators.hpp"
#include "pulsemine/classifier.hpp"
#include "pulsemine/docstore.hpp"
#include "pulsemine/entitykb.hpp"
#include "pulsemine/kernels.hpp"
#include "support.hpp"

using namespace pulsemine;

TEST_CASE("pair indexing enumerates the upper triangle in order") {
  for (std::size_t k = 2; k < 12; ++k) {
    std::size_t expect = 0;
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = i + 1; j < k; ++j) CHECK(kernels::pair_index(i, j, k) == expect++);
    }
    CHECK(kernels::pair_count(k) == expect);
  }
}

TEST_CASE("brown deltas: serial and parallel agree exactly") {
  testsupport::Gen gen(41);
  for (int iter = 0; iter < 30; ++iter) {
    const std::size_t size = gen.range(2, 60);
    std::vector<double> counts(size * size), left(size, 0), right(size, 0), inv(size);
    double total = 0;
    for (std::size_t a = 0; a < size; ++a) {
      for (std::size_t b = 0; b < size; ++b) {
        const double n = gen.chance(0.3) ? static_cast<double>(gen.range(1, 9)) : 0.0;
        counts[a * size + b] = n;
        left[a] += n;
        right[b] += n;
        total += n;
      }
    }
    if (total == 0) continue;
    for (auto& x : inv) x = gen.real(0, 0.1);
    std::vector<std::uint32_t> active;
    for (std::uint32_t a = 0; a < size; ++a) {
      if (gen.chance(0.8)) active.push_back(a);
    }
    if (active.size() < 2) continue;
    const kernels::ClassBigramView view{counts, left, right, inv, active, size, total};
    std::vector<double> s(kernels::pair_count(active.size())), p(s.size());
    kernels::brown_merge_deltas_serial(view, s);
    kernels::brown_merge_deltas_omp(view, p);
    CHECK(s == p);
  }
}

TEST_CASE("relevance and classification: serial and parallel agree exactly") {
  testsupport::TempDir dir;
  auto store = DocumentStore::open(dir.path());
  std::ifstream in(testsupport::fixture("uber_tweets.jsonl"));
  ingest(in, std::vector<ExtractionHeuristic>{make_geo_box(-90, 90, -180, 180), make_search_term("uber")}, store);
  const auto docs = store.scan_all();
  const auto kb = KnowledgeBase::load(testsupport::fixture("kb.json"));
  const SurfaceFormMatcher matcher(kb);
  for (const char* entity : {"uber", "cabify", "apple_inc"}) {
    CHECK(kernels::relevance_serial(docs, entity, kb, matcher) ==
          kernels::relevance_omp(docs, entity, kb, matcher));
  }
  CHECK_THROWS_AS(kernels::relevance_omp(docs, "nobody", kb, matcher), ConfigError);

  const auto lex = load_lexicon(testsupport::fixture("lexicon.tsv"));
  const auto model = train_classifier(load_labeled_dataset(testsupport::fixture("labeled.tsv")), TrainingParams{}).model;
  ClassifierConfig lc;
  lc.lexicon = &lex;
  ClassifierConfig mc;
  mc.method = Method::classifier;
  mc.model = &model;
  for (const auto* cfg : {&lc, &mc}) {
    const auto s = kernels::classify_serial(docs, *cfg);
    const auto p = kernels::classify_omp(docs, *cfg);
    REQUIRE(s.size() == p.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      CHECK(s[i].doc_id == p[i].doc_id);
      CHECK(s[i].label == p[i].label);
      CHECK(s[i].probs == p[i].probs);
    }
  }
}
