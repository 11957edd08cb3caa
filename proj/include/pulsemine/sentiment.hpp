#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pulsemine {

// Canonical encoding; also the argmax tie-break order.
enum class SentimentLabel : int { positive = 0, negative = 1, neutral = 2 };

inline constexpr std::size_t kNumLabels = 3;
inline constexpr std::array<SentimentLabel, kNumLabels> kAllLabels = {
    SentimentLabel::positive, SentimentLabel::negative, SentimentLabel::neutral};

std::string_view label_name(SentimentLabel label);
SentimentLabel parse_label(std::string_view name);  // throws ParseError
inline std::size_t label_index(SentimentLabel l) { return static_cast<std::size_t>(l); }

using Probs = std::array<double, kNumLabels>;

enum class Method { lexicon, classifier };
std::string_view method_name(Method m);
Method parse_method(std::string_view name);

struct SentimentAnnotation {
  std::string doc_id;
  SentimentLabel label = SentimentLabel::neutral;
  Probs probs{};
  Method method = Method::lexicon;
};

// term -> signed strength, plus the words that flip the next three tokens.
struct Lexicon {
  std::map<std::string, double> scores;
  std::set<std::string> negations;
};

// TSV "term<TAB>score", '#' comments, score "NEG" marks a negation word.
// Terms go through textnorm and must come out as a single token.
Lexicon parse_lexicon(std::string_view tsv, std::string_view origin = "<lexicon>");
Lexicon load_lexicon(const std::filesystem::path& path);

inline constexpr std::size_t kNegationWindow = 3;

struct LexiconScore {
  double score = 0.0;
  SentimentLabel label = SentimentLabel::neutral;
};

// Sum of term scores; a token within kNegationWindow positions after a
// negation word counts with flipped sign (once, however many negations cover it).
LexiconScore lexicon_score(std::span<const std::string> tokens, const Lexicon& lexicon);

}  // namespace pulsemine
