#include "pulsemine/textnorm.hpp"

#include <array>
#include <optional>

namespace pulsemine {

std::string_view token_kind_name(TokenKind kind) {
  switch (kind) {
    case TokenKind::word: return "word";
    case TokenKind::url_placeholder: return "url";
    case TokenKind::user_placeholder: return "user";
    case TokenKind::hashtag_word: return "hashtag";
    case TokenKind::emoticon: return "emoticon";
    case TokenKind::punct: return "punct";
  }
  return "word";
}

namespace utf8 {

std::u32string decode(std::string_view bytes) {
  std::u32string out;
  out.reserve(bytes.size());
  std::size_t i = 0;
  const std::size_t n = bytes.size();
  while (i < n) {
    const auto b0 = static_cast<unsigned char>(bytes[i]);
    int len = 0;
    char32_t cp = 0;
    if (b0 < 0x80) {
      out.push_back(b0);
      ++i;
      continue;
    } else if ((b0 & 0xE0) == 0xC0) {
      len = 2;
      cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
      len = 3;
      cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
      len = 4;
      cp = b0 & 0x07;
    } else {
      out.push_back(0xFFFD);
      ++i;
      continue;
    }
    if (i + len > n) {
      out.push_back(0xFFFD);
      ++i;
      continue;
    }
    bool ok = true;
    for (int k = 1; k < len; ++k) {
      const auto b = static_cast<unsigned char>(bytes[i + k]);
      if ((b & 0xC0) != 0x80) {
        ok = false;
        break;
      }
      cp = (cp << 6) | (b & 0x3F);
    }
    // Reject overlong forms, surrogates and out-of-range values.
    static constexpr std::array<char32_t, 5> kMin = {0, 0, 0x80, 0x800, 0x10000};
    if (!ok || cp < kMin[len] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
      out.push_back(0xFFFD);
      ++i;
      continue;
    }
    out.push_back(cp);
    i += len;
  }
  return out;
}

void append(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::string encode(std::u32string_view cps) {
  std::string out;
  out.reserve(cps.size());
  for (char32_t cp : cps) append(out, cp);
  return out;
}

// Simple (1:1) lowercase mapping for Latin, Greek and Cyrillic.
char32_t to_lower(char32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + 32;
  if (cp < 0xC0) return cp;
  if (cp <= 0xDE) return cp == 0xD7 ? cp : cp + 32;
  if (cp == 0x130) return 'i';
  if (cp >= 0x100 && cp <= 0x137) return cp | 1;
  if (cp >= 0x139 && cp <= 0x148) return (cp & 1) ? cp + 1 : cp;
  if (cp >= 0x14A && cp <= 0x177) return cp | 1;
  if (cp == 0x178) return 0xFF;
  if (cp >= 0x179 && cp <= 0x17E) return (cp & 1) ? cp + 1 : cp;
  if (cp >= 0x391 && cp <= 0x3AB && cp != 0x3A2) return cp + 32;
  if (cp >= 0x400 && cp <= 0x40F) return cp + 80;
  if (cp >= 0x410 && cp <= 0x42F) return cp + 32;
  if (cp >= 0x460 && cp <= 0x481) return cp | 1;
  if (cp >= 0x48A && cp <= 0x4BF) return cp | 1;
  return cp;
}

bool is_space(char32_t cp) {
  return cp <= 0x20 || cp == 0x7F || cp == 0x85 || cp == 0xA0 || cp == 0x1680 ||
         (cp >= 0x2000 && cp <= 0x200A) || cp == 0x2028 || cp == 0x2029 || cp == 0x202F ||
         cp == 0x205F || cp == 0x3000;
}

bool is_word(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z') || (cp >= '0' && cp <= '9');
  }
  if (is_space(cp)) return false;
  if (cp < 0xC0) return cp == 0xAA || cp == 0xB5 || cp == 0xBA;
  if (cp == 0xD7 || cp == 0xF7) return false;
  if (cp >= 0x2000 && cp <= 0x2BFF) return false;  // punctuation, symbols, arrows
  if (cp >= 0x3000 && cp <= 0x303F) return false;
  if (cp >= 0xE000 && cp <= 0xF8FF) return false;  // private use
  if (cp >= 0xFE00 && cp <= 0xFE0F) return false;  // variation selectors
  if (cp >= 0xFFF0 && cp <= 0xFFFF) return false;
  if (cp >= 0x1F000 && cp <= 0x1FAFF) return false;  // emoji
  return true;
}

}  // namespace utf8

namespace {

using utf8::is_space;
using utf8::is_word;

// Stands in for a stripped '#' between steps 3 and 7. Raw occurrences are
// remapped to U+FFFD on decode, so the marker is unambiguous.
constexpr char32_t kHashMark = 0xE000;

bool boundary_before(const std::u32string& s, std::size_t i) {
  return i == 0 || !is_word(s[i - 1]);
}

bool starts_with_ci(const std::u32string& s, std::size_t i, std::u32string_view prefix) {
  if (i + prefix.size() > s.size()) return false;
  for (std::size_t k = 0; k < prefix.size(); ++k) {
    if (utf8::to_lower(s[i + k]) != prefix[k]) return false;
  }
  return true;
}

bool handle_char(char32_t cp) { return is_word(cp) || cp == U'_'; }

// Steps 1 and 2.
std::u32string replace_urls_and_handles(const std::u32string& s) {
  std::u32string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    if (boundary_before(s, i) &&
        (starts_with_ci(s, i, U"http://") || starts_with_ci(s, i, U"https://"))) {
      while (i < s.size() && !is_space(s[i])) ++i;
      out.append(U"<url>");
      continue;
    }
    if (s[i] == U'@' && boundary_before(s, i) && i + 1 < s.size() && handle_char(s[i + 1])) {
      ++i;
      while (i < s.size() && handle_char(s[i])) ++i;
      out.append(U"<user>");
      continue;
    }
    out.push_back(s[i]);
    ++i;
  }
  return out;
}

// Step 3.
void mark_hashtags(std::u32string& s) {
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    if (s[i] == U'#' && is_word(s[i + 1]) && (i == 0 || !is_word(s[i - 1]))) {
      s[i] = kHashMark;
    }
  }
}

// Step 5.
std::u32string collapse_elongations(const std::u32string& s) {
  std::u32string out;
  out.reserve(s.size());
  std::size_t run = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    run = (i > 0 && s[i] == s[i - 1]) ? run + 1 : 1;
    if (run <= 3) out.push_back(s[i]);
  }
  return out;
}

struct Special {
  std::u32string_view text;
  TokenKind kind;
};

constexpr std::array<Special, 8> kSpecials = {{
    {U"<user>", TokenKind::user_placeholder},
    {U"<url>", TokenKind::url_placeholder},
    {U":)", TokenKind::emoticon},
    {U":(", TokenKind::emoticon},
    {U":d", TokenKind::emoticon},
    {U";)", TokenKind::emoticon},
    {U":/", TokenKind::emoticon},
    {U"<3", TokenKind::emoticon},
}};

std::optional<Special> special_at(std::u32string_view chunk, std::size_t i) {
  for (const Special& sp : kSpecials) {
    if (chunk.substr(i, sp.text.size()) != sp.text) continue;
    if (sp.kind == TokenKind::emoticon) {
      const std::size_t after = i + sp.text.size();
      if (after < chunk.size() && is_word(chunk[after])) continue;
    }
    return sp;
  }
  return std::nullopt;
}

// Step 7 for one whitespace-delimited chunk.
void split_chunk(std::u32string_view chunk, std::vector<Token>& out) {
  std::size_t i = 0;
  while (i < chunk.size()) {
    if (auto sp = special_at(chunk, i)) {
      out.push_back({utf8::encode(sp->text), sp->kind});
      i += sp->text.size();
      continue;
    }
    const bool hashtag = chunk[i] == kHashMark;
    const std::size_t start = hashtag ? i + 1 : i;
    if (start < chunk.size() && is_word(chunk[start])) {
      std::size_t end = start;
      while (end < chunk.size() && is_word(chunk[end])) ++end;
      out.push_back({utf8::encode(chunk.substr(start, end - start)),
                     hashtag ? TokenKind::hashtag_word : TokenKind::word});
      i = end;
      continue;
    }
    // Punctuation run, reduced to its first character.
    const char32_t first = chunk[i];
    ++i;
    while (i < chunk.size() && !is_word(chunk[i]) && chunk[i] != kHashMark &&
           !special_at(chunk, i)) {
      ++i;
    }
    std::string surface;
    utf8::append(surface, first == kHashMark ? U'#' : first);
    out.push_back({std::move(surface), TokenKind::punct});
  }
}

}  // namespace

std::vector<Token> normalize(std::string_view raw) {
  std::u32string s = utf8::decode(raw);
  for (char32_t& cp : s) {
    if (cp == kHashMark) cp = 0xFFFD;
  }
  s = replace_urls_and_handles(s);
  mark_hashtags(s);
  for (char32_t& cp : s) cp = utf8::to_lower(cp);
  s = collapse_elongations(s);

  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_space(s[i])) ++i;
    std::size_t end = i;
    while (end < s.size() && !is_space(s[end])) ++end;
    if (end > i) split_chunk(std::u32string_view(s).substr(i, end - i), tokens);
    i = end;
  }
  return tokens;
}

std::string canonical_join(const std::vector<Token>& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) out.push_back(' ');
    if (tokens[i].kind == TokenKind::hashtag_word) out.push_back('#');
    out += tokens[i].surface;
  }
  return out;
}

std::vector<std::string> surfaces(const std::vector<Token>& tokens) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const Token& t : tokens) out.push_back(t.surface);
  return out;
}

std::vector<std::string> normalize_surfaces(std::string_view raw) {
  return surfaces(normalize(raw));
}

}  // namespace pulsemine
