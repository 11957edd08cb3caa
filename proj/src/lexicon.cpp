#include "pulsemine/sentiment.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "pulsemine/error.hpp"
#include "pulsemine/textnorm.hpp"

namespace pulsemine {

std::string_view label_name(SentimentLabel label) {
  switch (label) {
    case SentimentLabel::positive: return "positive";
    case SentimentLabel::negative: return "negative";
    case SentimentLabel::neutral: return "neutral";
  }
  return "neutral";
}

SentimentLabel parse_label(std::string_view name) {
  if (name == "positive") return SentimentLabel::positive;
  if (name == "negative") return SentimentLabel::negative;
  if (name == "neutral") return SentimentLabel::neutral;
  throw ParseError("unknown sentiment label '" + std::string(name) + "'");
}

std::string_view method_name(Method m) { return m == Method::lexicon ? "lexicon" : "classifier"; }

Method parse_method(std::string_view name) {
  if (name == "lexicon") return Method::lexicon;
  if (name == "classifier") return Method::classifier;
  throw ConfigError("unknown method '" + std::string(name) + "' (expected lexicon or classifier)");
}

Lexicon parse_lexicon(std::string_view tsv, std::string_view origin) {
  Lexicon lex;
  std::istringstream in{std::string(tsv)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto where = std::string(origin) + ":" + std::to_string(line_no) + ": ";
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw ParseError(where + "expected term<TAB>score");
    const auto toks = normalize_surfaces(line.substr(0, tab));
    if (toks.size() != 1) throw ParseError(where + "term must normalize to a single token");
    const std::string value = line.substr(tab + 1);
    if (value == "NEG") {
      lex.negations.insert(toks.front());
      continue;
    }
    char* end = nullptr;
    const double score = std::strtod(value.c_str(), &end);
    if (value.empty() || *end != '\0' || !std::isfinite(score)) {
      throw ParseError(where + "bad score '" + value + "'");
    }
    lex.scores[toks.front()] = score;
  }
  return lex;
}

Lexicon load_lexicon(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open lexicon " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_lexicon(ss.str(), path.string());
}

LexiconScore lexicon_score(std::span<const std::string> tokens, const Lexicon& lexicon) {
  double score = 0.0;
  std::size_t negated_until = 0;  // tokens at positions < negated_until are flipped
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (auto it = lexicon.scores.find(tokens[i]); it != lexicon.scores.end()) {
      score += i < negated_until ? -it->second : it->second;
    }
    if (lexicon.negations.contains(tokens[i])) negated_until = i + 1 + kNegationWindow;
  }
  SentimentLabel label = SentimentLabel::neutral;
  if (score > 0.0) label = SentimentLabel::positive;
  if (score < 0.0) label = SentimentLabel::negative;
  return {score, label};
}

}  // namespace pulsemine
