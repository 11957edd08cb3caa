#include <cmath>
#include <numeric>

#include "doctest.h"
#include "oracles.hpp"
#include "pulsemine/classifier.hpp"
#include "pulsemine/error.hpp"
#include "pulsemine/textnorm.hpp"
#include "support.hpp"

using namespace pulsemine;
using V = std::vector<std::string>;

namespace {

std::vector<LabeledExample> toy_set() { return load_labeled_dataset(testsupport::fixture("labeled.tsv")); }

double accuracy(const TrainingResult& r, const std::vector<LabeledExample>& data) {
  const FeatureSpace space = feature_space(r.model, nullptr, nullptr);
  std::size_t right = 0;
  for (const auto& ex : data) right += predict(r.model, featurize(ex.tokens, space)).label == ex.label;
  return static_cast<double>(right) / static_cast<double>(data.size());
}

Document text_doc(std::string text) {
  return Document{"d1", std::move(text), "a", Instant{0}, std::nullopt, "t", std::nullopt};
}

}  // namespace

TEST_CASE("featurize examples") {
  FeatureSpace space;
  space.vocab = {"good"};
  CHECK(featurize(V{"good"}, space) == FeatureVector{{"bow:good", 1.0}});
  CHECK(featurize(V{"good", "good"}, space) == FeatureVector{{"bow:good", 1.0}});
  CHECK(featurize(V{"meh", "bad"}, space).empty());
}

TEST_CASE("featurize brown and embedding blocks") {
  BrownHierarchy h;
  h.paths = {{"good", "0110"}, {"meh", "11"}};
  EmbeddingTable emb;
  emb.dim = 2;
  emb.vectors = {{"good", {1.0, 3.0}}, {kUnknownWord, {0.0, -1.0}}};
  FeatureSpace space;
  space.vocab = {"good"};
  space.brown = &h;
  space.brown_prefixes = {2, 4};
  space.embeddings = &emb;
  const auto fv = featurize(V{"good", "meh"}, space);
  const FeatureVector want = {{"bow:good", 1.0}, {"brown:2:01", 1.0}, {"brown:4:0110", 1.0},
                              {"emb:0", 0.5},    {"emb:1", 1.0}};
  CHECK(fv == want);
}

TEST_CASE("property: bow block has unit norm") {
  testsupport::Gen gen(4);
  const V words = {"a", "b", "c", "d", "e"};
  for (int iter = 0; iter < 1000; ++iter) {
    FeatureSpace space;
    for (const auto& w : words) {
      if (gen.chance(0.5)) space.vocab.insert(w);
    }
    V toks;
    for (std::size_t n = gen.range(0, 10); n > 0; --n) toks.push_back(gen.pick(words));
    const auto fv = featurize(toks, space);
    double sq = 0;
    for (const auto& [id, v] : fv) sq += v * v;
    const bool any = std::any_of(toks.begin(), toks.end(), [&](const auto& t) { return space.vocab.contains(t); });
    if (any) {
      CHECK(sq == doctest::Approx(1.0).epsilon(1e-12));
    } else {
      CHECK(fv.empty());
    }
  }
}

TEST_CASE("softmax and argmax") {
  const Probs p = softmax({10, 0, 0});
  CHECK(p[0] == doctest::Approx(0.99990920).epsilon(1e-7));
  CHECK(p[1] == doctest::Approx(4.5395807e-5).epsilon(1e-6));
  CHECK(p[2] == doctest::Approx(4.5395807e-5).epsilon(1e-6));
  CHECK(argmax_label({1.0 / 3, 1.0 / 3, 1.0 / 3}) == SentimentLabel::positive);
  CHECK(argmax_label({0.2, 0.4, 0.4}) == SentimentLabel::negative);
  const Probs big = softmax({1000, -1000, 999});
  CHECK(std::isfinite(big[0]));
  CHECK(big[0] + big[1] + big[2] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("zero model predicts uniform; bias model predicts positive") {
  TrainingParams p;
  p.epochs = 0;
  const auto data = toy_set();
  const auto r = train_classifier(data, p);
  const auto space = feature_space(r.model, nullptr, nullptr);
  for (const auto& ex : data) {
    const auto pred = predict(r.model, featurize(ex.tokens, space));
    CHECK(pred.label == SentimentLabel::positive);
    for (double x : pred.probs) CHECK(x == doctest::Approx(1.0 / 3).epsilon(1e-15));
  }
  LinearModel m;
  m.bias = {10, 0, 0};
  const auto pred = predict(m, {{"bow:anything", 1.0}});
  CHECK(pred.label == SentimentLabel::positive);
  CHECK(pred.probs[0] > 0.99);
  CHECK(pred.probs[0] == doctest::Approx(0.99991).epsilon(1e-5));
  CHECK(pred.probs[1] == doctest::Approx(4.5e-5).epsilon(0.01));
}

TEST_CASE("property: analytic gradient matches central differences") {
  testsupport::Gen gen(29);
  for (int iter = 0; iter < 50; ++iter) {
    const auto prob = oracle::random_problem(gen);
    std::vector<SparseRow> rows;
    for (const auto& r : prob.rows) {
      SparseRow s;
      s.label = r.label;
      for (const auto& [f, v] : r.x) s.entries.emplace_back(static_cast<std::uint32_t>(f), v);
      rows.push_back(s);
    }
    ModelParameters theta;
    theta.weights = prob.w;
    theta.bias = {prob.b[0], prob.b[1], prob.b[2]};
    ModelParameters grad;
    const double loss = objective_and_gradient(rows, theta, prob.l2, &grad);
    CHECK(loss == doctest::Approx(oracle::reference_loss(prob.rows, prob.w, prob.b, prob.l2)).epsilon(1e-12));
    std::vector<double> analytic = grad.weights;
    analytic.insert(analytic.end(), grad.bias.begin(), grad.bias.end());
    CHECK(oracle::relative_error(analytic, oracle::finite_difference_gradient(prob, 1e-6)) < 1e-5);
  }
}

TEST_CASE("separable toy set: full accuracy, monotone loss") {
  const auto data = toy_set();
  REQUIRE(data.size() == 30);
  TrainingParams p;
  p.learning_rate = 0.1;
  p.l2 = 0;
  p.epochs = 200;
  const auto r = train_classifier(data, p);
  CHECK(accuracy(r, data) == 1.0);
  REQUIRE(r.loss_history.size() == 201);
  for (std::size_t i = 1; i < r.loss_history.size(); ++i) CHECK(r.loss_history[i] <= r.loss_history[i - 1]);
}

TEST_CASE("sgd mode trains and depends on the seed only") {
  const auto data = toy_set();
  TrainingParams p;
  p.mode = TrainMode::sgd;
  p.epochs = 30;
  p.seed = 5;
  const auto a = train_classifier(data, p);
  CHECK(accuracy(a, data) == 1.0);
  CHECK(model_to_string(a.model) == model_to_string(train_classifier(data, p).model));
  p.seed = 6;
  CHECK(model_to_string(a.model) != model_to_string(train_classifier(data, p).model));
}

TEST_CASE("training errors") {
  CHECK_THROWS_AS(train_classifier(std::vector<LabeledExample>{}, TrainingParams{}), ConfigError);
  TrainingParams p;
  p.learning_rate = 1e308;
  p.epochs = 5;
  CHECK_THROWS_WITH_AS(train_classifier(toy_set(), p), doctest::Contains("epoch"), TrainingError);
}

TEST_CASE("model round trip is exact") {
  const auto data = toy_set();
  TrainingParams p;
  p.l2 = 0.01;
  p.epochs = 50;
  const auto m = train_classifier(data, p).model;
  const auto text = model_to_string(m);
  const auto back = parse_model(text);
  CHECK(back.features == m.features);
  CHECK(back.weights == m.weights);
  CHECK(back.bias == m.bias);
  CHECK(back.vocab_hash == m.vocab_hash);
  CHECK(back.params.l2 == m.params.l2);
  CHECK(model_to_string(back) == text);
  testsupport::TempDir dir;
  save_model(m, dir / "m.txt");
  CHECK(testsupport::slurp(dir / "m.txt") == text);
  CHECK(model_to_string(load_model(dir / "m.txt")) == text);
  CHECK_THROWS_AS(parse_model("garbage\n"), ParseError);
  CHECK_THROWS_AS(parse_model(text.substr(0, text.size() / 2)), ParseError);
}

TEST_CASE("model with brown and embedding features") {
  const auto data = toy_set();
  BrownHierarchy h;
  for (const auto& ex : data) {
    for (const auto& t : ex.tokens) h.paths.emplace(t, t.size() % 2 ? "01" : "1");
  }
  EmbeddingTable emb;
  emb.dim = 3;
  emb.vectors = {{kUnknownWord, {0.1, 0.2, 0.3}}, {"uber", {1, 0, 0}}};
  TrainingParams p;
  p.epochs = 20;
  const auto m = train_classifier(data, p, &h, &emb, {2, 4}).model;
  CHECK(m.emb_dim == 3);
  CHECK(m.brown_prefixes == std::vector<std::size_t>{2, 4});
  CHECK(m.index_of("emb:2").has_value());
  CHECK(m.index_of("brown:2:01").has_value());
  const auto back = parse_model(model_to_string(m));
  CHECK(back.emb_dim == 3);
  CHECK(back.brown_prefixes == m.brown_prefixes);

  ClassifierConfig cfg;
  cfg.method = Method::classifier;
  cfg.model = &m;
  CHECK_THROWS_AS(validate(cfg), ConfigError);
  cfg.brown = &h;
  CHECK_THROWS_AS(validate(cfg), ConfigError);
  EmbeddingTable wrong = emb;
  wrong.dim = 2;
  cfg.embeddings = &wrong;
  CHECK_THROWS_AS(validate(cfg), ConfigError);
  cfg.embeddings = &emb;
  CHECK_NOTHROW(validate(cfg));
}

TEST_CASE("classify_document") {
  Lexicon lex;
  lex.scores = {{"excelente", 2.0}};
  ClassifierConfig cfg;
  cfg.lexicon = &lex;
  auto a = classify_document(text_doc("serviço excelente"), cfg);
  CHECK(a.doc_id == "d1");
  CHECK(a.label == SentimentLabel::positive);
  CHECK(a.method == Method::lexicon);
  CHECK(a.probs == Probs{1.0, 0.0, 0.0});
  a = classify_document(text_doc("serviço normal"), cfg);
  CHECK(a.label == SentimentLabel::neutral);
  CHECK(a.probs == Probs{0.0, 0.0, 1.0});

  ClassifierConfig none;
  none.method = Method::classifier;
  CHECK_THROWS_AS(validate(none), ConfigError);
  CHECK_THROWS_AS(classify_document(text_doc("x"), none), ConfigError);
  ClassifierConfig lex_missing;
  CHECK_THROWS_AS(validate(lex_missing), ConfigError);

  const auto m = train_classifier(toy_set(), TrainingParams{}).model;
  ClassifierConfig cc;
  cc.method = Method::classifier;
  cc.model = &m;
  for (const char* text : {"Uber adoro recomendo", "UBER péssimo", "uber chega", "nada a ver"}) {
    const auto got = classify_document(text_doc(text), cc);
    const auto want = predict(m, featurize(normalize_surfaces(text), feature_space(m, nullptr, nullptr)));
    CHECK(got.label == want.label);
    CHECK(got.probs == want.probs);
    CHECK(got.method == Method::classifier);
    CHECK(got.probs[0] + got.probs[1] + got.probs[2] == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("dataset parsing") {
  const auto d = parse_labeled_dataset("positive\tÓtimo serviço\n\nnegative\tmau\n");
  REQUIRE(d.size() == 2);
  CHECK(d[0].tokens == V{"ótimo", "serviço"});
  CHECK(d[1].label == SentimentLabel::negative);
  CHECK_THROWS_AS(parse_labeled_dataset("mixed\tx\n"), ParseError);
  CHECK_THROWS_AS(parse_labeled_dataset("no tab here\n"), ParseError);
}
