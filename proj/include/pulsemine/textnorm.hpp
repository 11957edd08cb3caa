#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace pulsemine {

enum class TokenKind { word, url_placeholder, user_placeholder, hashtag_word, emoticon, punct };

std::string_view token_kind_name(TokenKind kind);

struct Token {
  std::string surface;
  TokenKind kind = TokenKind::word;

  friend bool operator==(const Token&, const Token&) = default;
};

inline constexpr std::string_view kUrlPlaceholder = "<url>";
inline constexpr std::string_view kUserPlaceholder = "<user>";

// Canonical microblog normalization, in order:
//   1. "http://" / "https://" (any case) at a token boundary, up to the next
//      whitespace, becomes "<url>"
//   2. "@handle" at a token boundary becomes "<user>"
//   3. a leading "#" is stripped from hashtags; the word is tagged hashtag_word
//   4. simple Unicode lowercase
//   5. runs of >= 3 identical code points collapse to exactly 3
//   6. split on whitespace
//   7. punctuation is detached; a punctuation run becomes one token holding
//      its first character. Emoticons :) :( :D ;) :/ <3 and the two
//      placeholders stay whole.
// Invalid UTF-8 decodes to U+FFFD, which is punctuation.
std::vector<Token> normalize(std::string_view raw);

// Surfaces joined by single spaces. Hashtag words are written back with their
// "#" so that normalize(canonical_join(normalize(s))) == normalize(s) holds
// for kinds as well as surfaces.
std::string canonical_join(const std::vector<Token>& tokens);

std::vector<std::string> surfaces(const std::vector<Token>& tokens);

// Convenience: surfaces of normalize(raw).
std::vector<std::string> normalize_surfaces(std::string_view raw);

namespace utf8 {

std::u32string decode(std::string_view bytes);
std::string encode(std::u32string_view cps);
void append(std::string& out, char32_t cp);
char32_t to_lower(char32_t cp);
bool is_space(char32_t cp);
// Letters, digits, and non-ASCII code points outside the symbol and emoji blocks.
bool is_word(char32_t cp);

}  // namespace utf8

}  // namespace pulsemine
