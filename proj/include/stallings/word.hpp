#pragma once

// Elements of the free group F_r: letters of the involutive alphabet and
// freely reduced words over it.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stallings/error.hpp"

namespace stallings {

// A generator a_i or its formal inverse. Encoded as 2*i + (inverse ? 1 : 0)
// so that inversion is a single bit flip and codes index transition tables.
class Letter {
 public:
  constexpr Letter() = default;
  constexpr Letter(std::size_t index, int sign)
      : code_(static_cast<std::uint32_t>(2 * index + (sign < 0 ? 1 : 0))) {}

  static constexpr Letter from_code(std::size_t code) {
    Letter l;
    l.code_ = static_cast<std::uint32_t>(code);
    return l;
  }
  static constexpr Letter positive(std::size_t index) { return {index, +1}; }
  static constexpr Letter negative(std::size_t index) { return {index, -1}; }

  constexpr std::size_t index() const noexcept { return code_ >> 1; }
  constexpr int sign() const noexcept { return (code_ & 1u) ? -1 : +1; }
  constexpr bool is_positive() const noexcept { return (code_ & 1u) == 0; }
  constexpr std::size_t code() const noexcept { return code_; }
  constexpr Letter inverse() const noexcept { return from_code(code_ ^ 1u); }

  constexpr auto operator<=>(Letter const&) const = default;

 private:
  std::uint32_t code_ = 0;
};

// Number of signed letters for an alphabet of rank r.
constexpr std::size_t code_count(std::size_t rank) { return 2 * rank; }

// A freely reduced word; the empty word is the identity.
class Word {
 public:
  using const_iterator = std::vector<Letter>::const_iterator;

  Word() = default;
  // Reduces the given letters.
  explicit Word(std::span<Letter const> letters) { append(letters); }
  Word(std::initializer_list<Letter> letters)
      : Word(std::span<Letter const>(letters.begin(), letters.size())) {}

  static Word generator(std::size_t index) { return Word{Letter::positive(index)}; }

  std::size_t size() const noexcept { return letters_.size(); }
  bool empty() const noexcept { return letters_.empty(); }
  bool is_identity() const noexcept { return letters_.empty(); }
  Letter operator[](std::size_t i) const { return letters_[i]; }
  Letter front() const { return letters_.front(); }
  Letter back() const { return letters_.back(); }
  const_iterator begin() const noexcept { return letters_.begin(); }
  const_iterator end() const noexcept { return letters_.end(); }
  std::span<Letter const> letters() const noexcept { return letters_; }

  // Largest generator index used plus one (0 for the identity).
  std::size_t min_rank() const noexcept {
    std::size_t r = 0;
    for (Letter l : letters_) r = std::max(r, l.index() + 1);
    return r;
  }

  // Appends and reduces: the stack discipline cancels against the tail.
  Word& append(std::span<Letter const> letters) {
    for (Letter l : letters) push(l);
    return *this;
  }
  Word& append(Word const& w) { return append(w.letters()); }
  Word& push(Letter l) {
    if (!letters_.empty() && letters_.back() == l.inverse()) {
      letters_.pop_back();
    } else {
      letters_.push_back(l);
    }
    return *this;
  }

  friend bool operator==(Word const&, Word const&) = default;
  // Shortlex order: shorter words first, then by letter code.
  friend std::strong_ordering operator<=>(Word const& u, Word const& v) {
    if (auto c = u.size() <=> v.size(); c != 0) return c;
    return std::lexicographical_compare_three_way(
        u.letters_.begin(), u.letters_.end(), v.letters_.begin(),
        v.letters_.end());
  }

 private:
  std::vector<Letter> letters_;
};

inline Word reduce(std::span<Letter const> raw) { return Word(raw); }

inline Word multiply(Word const& u, Word const& v) {
  Word w = u;
  w.append(v);
  return w;
}

inline Word invert(Word const& u) {
  std::vector<Letter> out;
  out.reserve(u.size());
  for (auto it = u.letters().rbegin(); it != u.letters().rend(); ++it) {
    out.push_back(it->inverse());
  }
  return Word(out);
}

inline Word power(Word const& u, long n) {
  Word base = n < 0 ? invert(u) : u;
  Word w;
  for (long i = 0; i < (n < 0 ? -n : n); ++i) w.append(base);
  return w;
}

// Conjugate g^{-1} u g.
inline Word conjugate(Word const& u, Word const& g) {
  return multiply(multiply(invert(g), u), g);
}

// Strips the longest prefix/suffix pair u = s v s^{-1}, returning v.
inline Word cyclic_reduction(Word const& u) {
  std::size_t i = 0;
  std::size_t j = u.size();
  while (j - i >= 2 && u[i] == u[j - 1].inverse()) {
    ++i;
    --j;
  }
  return Word(u.letters().subspan(i, j - i));
}

////////////////////////////////////////////////////////////////////////
// Text syntax: 'a'..'z' are generators 0..25, 'A'..'Z' their inverses, '1'
// is the identity; whitespace is ignored.
////////////////////////////////////////////////////////////////////////

inline constexpr std::size_t kMaxTextRank = 26;

inline char letter_char(Letter l) {
  char base = l.is_positive() ? 'a' : 'A';
  return static_cast<char>(base + static_cast<int>(l.index()));
}

inline std::string to_string(Word const& w) {
  if (w.empty()) return "1";
  std::string s;
  s.reserve(w.size());
  for (Letter l : w) s.push_back(letter_char(l));
  return s;
}

// Parses a word over an alphabet of the given rank. `line` is reported in
// errors so callers reading multi-line input can point at the culprit.
inline Word parse_word(std::string_view text, std::size_t rank,
                       std::size_t line = 1) {
  std::vector<Letter> raw;
  bool saw_one = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    std::size_t column = i + 1;
    if (c == ' ' || c == '\t') continue;
    if (c == '1') {
      saw_one = true;
      continue;
    }
    std::size_t index;
    int sign;
    if (c >= 'a' && c <= 'z') {
      index = static_cast<std::size_t>(c - 'a');
      sign = +1;
    } else if (c >= 'A' && c <= 'Z') {
      index = static_cast<std::size_t>(c - 'A');
      sign = -1;
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", line,
                       column);
    }
    if (index >= rank) {
      throw ParseError(std::string("letter '") + c +
                           "' outside alphabet of rank " + std::to_string(rank),
                       line, column);
    }
    raw.emplace_back(index, sign);
  }
  if (saw_one && !raw.empty()) {
    throw ParseError("'1' may only appear alone", line, 1);
  }
  if (!saw_one && raw.empty()) {
    throw ParseError("empty word (write 1 for the identity)", line, 1);
  }
  return Word(raw);
}

inline std::vector<Word> parse_words(std::span<std::string const> texts,
                                     std::size_t rank) {
  std::vector<Word> out;
  out.reserve(texts.size());
  for (std::size_t i = 0; i < texts.size(); ++i) {
    out.push_back(parse_word(texts[i], rank, i + 1));
  }
  return out;
}

}  // namespace stallings
