#pragma once

// Hand-rolled generators for property tests. All draws go through one seeded
// mt19937_64 so every failure is reproducible from the seed.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace testsupport {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  std::uint64_t below(std::uint64_t n) { return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(rng_); }
  std::size_t range(std::size_t lo, std::size_t hi) { return lo + below(hi - lo + 1); }
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  bool chance(double p) { return real(0.0, 1.0) < p; }

  template <class T>
  const T& pick(const std::vector<T>& v) { return v[below(v.size())]; }

  std::mt19937_64& engine() { return rng_; }

  // Tweet-like text: URLs in odd cases, handles, hashtags, elongations,
  // emoticons, placeholders typed by hand, accented and non-Latin letters,
  // emoji, control whitespace and stray invalid UTF-8 bytes.
  std::string messy_text() {
    static const std::vector<std::string> pieces = {
        "http://t.co/abc", "HTTPS://Example.COM/x?y=1", "https://", "xhttp://no", "@john",
        "@", "@_x", "a@b", "#Uber", "#", "##tag", "#1", "soooooo", "!!!!!", "....", ":)", ":(",
        ":D", ";)", ":/", "<3", ":)x", "<url>", "<USER>", "<user>x", "É", "ção", "ÉÉÉÉ", "Ωμέγα",
        "ПРИВЕТ", "İ", "ß", "😀", "😀😀😀😀", "\xEE\x80\x80", "\xff", "\xc3", "\t", "\n", "  ",
        "\xc2\xa0", "_", "-", "'", "\"", "Uber", "UBER", "uber", "app", "taxi", "a", "b", "c", "1",
        "100%", "x:)", ":", "<", "3", "http://t.co/a!!!", "(", ")", "..."};
    std::string out;
    const std::size_t n = range(0, 12);
    for (std::size_t i = 0; i < n; ++i) {
      if (chance(0.2)) {
        out.push_back(static_cast<char>(range(0x20, 0x7e)));
      } else {
        out += pick(pieces);
      }
      if (chance(0.6)) out += chance(0.9) ? " " : "\t";
    }
    return out;
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace testsupport
