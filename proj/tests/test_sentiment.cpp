#include "doctest.h"
#include "generators.hpp"
#include "pulsemine/error.hpp"
#include "pulsemine/sentiment.hpp"
#include "pulsemine/textnorm.hpp"
#include "support.hpp"

using namespace pulsemine;
using V = std::vector<std::string>;

TEST_CASE("label encoding") {
  CHECK(label_index(SentimentLabel::positive) == 0);
  CHECK(label_index(SentimentLabel::negative) == 1);
  CHECK(label_index(SentimentLabel::neutral) == 2);
  for (auto l : kAllLabels) CHECK(parse_label(label_name(l)) == l);
  CHECK_THROWS_AS(parse_label("mixed"), ParseError);
  CHECK(parse_method("classifier") == Method::classifier);
  CHECK_THROWS_AS(parse_method("svm"), ConfigError);
}

TEST_CASE("scoring examples") {
  Lexicon lex;
  lex.scores = {{"good", 1.0}};
  lex.negations = {"not"};
  auto s = lexicon_score(V{"good"}, lex);
  CHECK(s.score == 1.0);
  CHECK(s.label == SentimentLabel::positive);
  s = lexicon_score(V{"not", "good"}, lex);
  CHECK(s.score == -1.0);
  CHECK(s.label == SentimentLabel::negative);
  s = lexicon_score(V{}, lex);
  CHECK(s.score == 0.0);
  CHECK(s.label == SentimentLabel::neutral);
}

TEST_CASE("negation window") {
  Lexicon lex;
  lex.scores = {{"good", 1.0}, {"bad", -1.0}};
  lex.negations = {"not", "never"};
  CHECK(lexicon_score(V{"not", "a", "b", "good"}, lex).score == -1.0);
  CHECK(lexicon_score(V{"not", "a", "b", "c", "good"}, lex).score == 1.0);
  CHECK(lexicon_score(V{"good", "not"}, lex).score == 1.0);
  // overlapping windows flip once, not twice
  CHECK(lexicon_score(V{"not", "never", "good"}, lex).score == -1.0);
  CHECK(lexicon_score(V{"good", "bad"}, lex).label == SentimentLabel::neutral);
}

TEST_CASE("lexicon file") {
  const auto lex = parse_lexicon("# comment\nÓtimo\t2\nmau\t-1.5\nnão\tNEG\n\n");
  CHECK(lex.scores.at("ótimo") == 2.0);
  CHECK(lex.scores.at("mau") == -1.5);
  CHECK(lex.negations.contains("não"));
  CHECK_THROWS_AS(parse_lexicon("two words\t1\n"), ParseError);
  CHECK_THROWS_AS(parse_lexicon("bom 1\n"), ParseError);
  CHECK_THROWS_AS(parse_lexicon("bom\tnan\n"), ParseError);
  CHECK_THROWS_AS(parse_lexicon("bom\tx\n"), ParseError);
  CHECK_THROWS_AS(load_lexicon("/nonexistent.tsv"), ConfigError);
  const auto fixture = load_lexicon(testsupport::fixture("lexicon.tsv"));
  CHECK(fixture.negations.contains("não"));
  const auto demo = load_lexicon(testsupport::data_dir() / "lexicon_demo.tsv");
  CHECK(demo.scores.size() >= 40);
}

TEST_CASE("fixture sentences") {
  const auto lex = load_lexicon(testsupport::fixture("lexicon.tsv"));
  CHECK(lexicon_score(normalize_surfaces("A Uber não é má, é ótima"), lex).label == SentimentLabel::positive);
  CHECK(lexicon_score(normalize_surfaces("Não gosto da Uber"), lex).label == SentimentLabel::negative);
  CHECK(lexicon_score(normalize_surfaces("Uber chega a Faro"), lex).label == SentimentLabel::neutral);
}

TEST_CASE("property: negating every score mirrors the label") {
  testsupport::Gen gen(13);
  const V words = {"good", "bad", "ok", "not", "never", "meh", "great", "awful", "x"};
  for (int iter = 0; iter < 2000; ++iter) {
    Lexicon lex, neg;
    for (const auto& w : {"good", "bad", "great", "awful", "meh"}) {
      if (gen.chance(0.8)) {
        const double v = gen.chance(0.2) ? 0.0 : gen.real(-3, 3);
        lex.scores[w] = v;
        neg.scores[w] = -v;
      }
    }
    lex.negations = neg.negations = {"not", "never"};
    V toks;
    for (std::size_t n = gen.range(0, 12); n > 0; --n) toks.push_back(gen.pick(words));
    const auto a = lexicon_score(toks, lex);
    const auto b = lexicon_score(toks, neg);
    CHECK(b.score == -a.score);
    if (a.label == SentimentLabel::positive) CHECK(b.label == SentimentLabel::negative);
    if (a.label == SentimentLabel::negative) CHECK(b.label == SentimentLabel::positive);
    if (a.label == SentimentLabel::neutral) CHECK(b.label == SentimentLabel::neutral);
  }
}
