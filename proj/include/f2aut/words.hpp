#pragma once

// Reduced and cyclic words in the free group F2 = <a, b>.
//
// Letters are stored as one byte each inside a std::string: a=0, a^-1=1,
// b=2, b^-1=3. The numeric order is the fixed letter order a < a^-1 < b < b^-1
// used for canonical rotations and shortlex enumeration, inversion is `code ^ 1`
// and the generator index is `code >> 1`.

#include <algorithm>
#include <cassert>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "f2aut/errors.hpp"

namespace f2aut {

enum class Letter : std::uint8_t { a = 0, a_inv = 1, b = 2, b_inv = 3 };

inline constexpr Letter all_letters[] = {Letter::a, Letter::a_inv, Letter::b, Letter::b_inv};

constexpr Letter inverse(Letter x) noexcept {
  return static_cast<Letter>(static_cast<std::uint8_t>(x) ^ 1U);
}
/// 0 for a^{+-1}, 1 for b^{+-1}.
constexpr int generator_index(Letter x) noexcept { return static_cast<int>(x) >> 1; }
constexpr bool is_positive(Letter x) noexcept { return (static_cast<int>(x) & 1) == 0; }
constexpr int sign(Letter x) noexcept { return is_positive(x) ? 1 : -1; }
constexpr char to_char(Letter x) noexcept { return "aAbB"[static_cast<int>(x)]; }

namespace detail {

constexpr char code(Letter x) noexcept { return static_cast<char>(x); }
constexpr Letter letter(char c) noexcept { return static_cast<Letter>(c); }
constexpr char inv_code(char c) noexcept { return static_cast<char>(c ^ 1); }

/// Appends one letter to an already reduced buffer, cancelling against the tail.
inline void push_reduced(std::string& out, char c) {
  if (!out.empty() && out.back() == inv_code(c)) {
    out.pop_back();
  } else {
    out.push_back(c);
  }
}

inline void append_reduced(std::string& out, std::string_view letters) {
  for (char c : letters) push_reduced(out, c);
}

inline void append_inverse_reduced(std::string& out, std::string_view letters) {
  for (auto it = letters.rbegin(); it != letters.rend(); ++it) push_reduced(out, inv_code(*it));
}

inline bool is_reduced(std::string_view s) {
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (s[i] == inv_code(s[i - 1])) return false;
  }
  return true;
}

/// Number of letters peeled from each end to reach the cyclically reduced core.
inline std::size_t cyclic_peel(std::string_view reduced) {
  std::size_t lo = 0;
  std::size_t hi = reduced.size();
  while (hi - lo >= 2 && reduced[lo] == inv_code(reduced[hi - 1])) {
    ++lo;
    --hi;
  }
  return lo;
}

/// Start index of the lexicographically least rotation (two-pointer method, O(n)).
inline std::size_t least_rotation(std::string_view s) {
  const std::size_t n = s.size();
  std::size_t i = 0;
  std::size_t j = 1;
  std::size_t k = 0;
  while (i < n && j < n && k < n) {
    const char x = s[(i + k) % n];
    const char y = s[(j + k) % n];
    if (x == y) {
      ++k;
      continue;
    }
    if (x > y) {
      i += k + 1;
    } else {
      j += k + 1;
    }
    if (i == j) ++j;
    k = 0;
  }
  return n == 0 ? 0 : std::min(i, j);
}

inline std::string rotate_left(std::string_view s, std::size_t r) {
  std::string out;
  out.reserve(s.size());
  out.append(s.substr(r));
  out.append(s.substr(0, r));
  return out;
}

}  // namespace detail

/// A freely reduced word. Immutable; the empty word is the identity.
class Word {
 public:
  Word() = default;

  /// Wraps letters already known to be freely reduced.
  static Word from_reduced_codes(std::string codes) {
    assert(detail::is_reduced(codes));
    Word w;
    w.codes_ = std::move(codes);
    return w;
  }

  static Word from_letters(std::span<const Letter> letters) {
    std::string out;
    out.reserve(letters.size());
    for (Letter x : letters) detail::push_reduced(out, detail::code(x));
    return from_reduced_codes(std::move(out));
  }

  static Word from_letter(Letter x) { return from_reduced_codes(std::string(1, detail::code(x))); }

  std::size_t size() const noexcept { return codes_.size(); }
  bool empty() const noexcept { return codes_.empty(); }
  Letter operator[](std::size_t i) const { return detail::letter(codes_[i]); }
  Letter front() const { return detail::letter(codes_.front()); }
  Letter back() const { return detail::letter(codes_.back()); }

  std::vector<Letter> letters() const {
    std::vector<Letter> out;
    out.reserve(codes_.size());
    for (char c : codes_) out.push_back(detail::letter(c));
    return out;
  }

  /// Raw letter codes, for hashing and hot loops.
  const std::string& codes() const noexcept { return codes_; }

  Word inverse() const {
    std::string out;
    out.reserve(codes_.size());
    for (auto it = codes_.rbegin(); it != codes_.rend(); ++it) out.push_back(detail::inv_code(*it));
    return from_reduced_codes(std::move(out));
  }

  /// Compact text form: "aAbB" letters, "1" for the identity.
  std::string str() const {
    if (codes_.empty()) return "1";
    std::string out;
    out.reserve(codes_.size());
    for (char c : codes_) out.push_back(to_char(detail::letter(c)));
    return out;
  }

  friend Word operator*(const Word& lhs, const Word& rhs) {
    std::string out;
    out.reserve(lhs.size() + rhs.size());
    out = lhs.codes_;
    detail::append_reduced(out, rhs.codes_);
    return from_reduced_codes(std::move(out));
  }

  friend bool operator==(const Word&, const Word&) = default;
  /// Plain lexicographic order on letter codes (not shortlex).
  friend std::strong_ordering operator<=>(const Word& lhs, const Word& rhs) {
    return lhs.codes_ <=> rhs.codes_;
  }

 private:
  std::string codes_;
};

inline std::ostream& operator<<(std::ostream& os, const Word& w) { return os << w.str(); }

/// Conjugacy-class representative: the least rotation of the cyclically reduced core.
class CyclicWord {
 public:
  CyclicWord() = default;

  explicit CyclicWord(const Word& w) : CyclicWord(std::string_view(w.codes()), reduced_tag{}) {}

  /// Canonicalizes a freely reduced buffer that may still need cyclic reduction.
  static CyclicWord from_reduced_codes(std::string_view codes) {
    return CyclicWord(codes, reduced_tag{});
  }

  std::size_t length() const noexcept { return codes_.size(); }
  bool empty() const noexcept { return codes_.empty(); }
  Letter operator[](std::size_t i) const { return detail::letter(codes_[i]); }
  const std::string& codes() const noexcept { return codes_; }

  /// The canonical rotation as an ordinary word.
  Word as_word() const { return Word::from_reduced_codes(codes_); }
  std::string str() const { return as_word().str(); }

  friend bool operator==(const CyclicWord&, const CyclicWord&) = default;
  friend std::strong_ordering operator<=>(const CyclicWord& lhs, const CyclicWord& rhs) {
    return lhs.codes_ <=> rhs.codes_;
  }

 private:
  struct reduced_tag {};
  CyclicWord(std::string_view reduced, reduced_tag) {
    const std::size_t peel = detail::cyclic_peel(reduced);
    const std::string_view core = reduced.substr(peel, reduced.size() - 2 * peel);
    codes_ = detail::rotate_left(core, detail::least_rotation(core));
  }

  std::string codes_;
};

inline std::ostream& operator<<(std::ostream& os, const CyclicWord& w) {
  return os << '[' << w.str() << ']';
}

struct AbelianImage {
  long exp_a = 0;
  long exp_b = 0;

  friend AbelianImage operator+(AbelianImage x, AbelianImage y) {
    return {x.exp_a + y.exp_a, x.exp_b + y.exp_b};
  }
  friend AbelianImage operator-(AbelianImage x) { return {-x.exp_a, -x.exp_b}; }
  friend bool operator==(const AbelianImage&, const AbelianImage&) = default;
};

struct CyclicReduction {
  CyclicWord core;
  Word conjugator;
};

/// Parses "aAbB" text. Whitespace is ignored; a lone "1" denotes the identity.
inline Word parse_word(std::string_view text) {
  std::string out;
  bool saw_one = false;
  bool saw_letter = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    switch (c) {
      case 'a': detail::push_reduced(out, detail::code(Letter::a)); break;
      case 'A': detail::push_reduced(out, detail::code(Letter::a_inv)); break;
      case 'b': detail::push_reduced(out, detail::code(Letter::b)); break;
      case 'B': detail::push_reduced(out, detail::code(Letter::b_inv)); break;
      case ' ': case '\t': case '\n': case '\r': continue;
      case '1':
        if (saw_one || saw_letter) {
          throw ParseError("'1' must be the only symbol of the identity word at index " +
                               std::to_string(i),
                           i);
        }
        saw_one = true;
        continue;
      default:
        throw ParseError("invalid character '" + std::string(1, c) + "' at index " +
                             std::to_string(i),
                         i);
    }
    if (saw_one) {
      throw ParseError("'1' cannot be combined with letters (index " + std::to_string(i) + ")", i);
    }
    saw_letter = true;
  }
  return Word::from_reduced_codes(std::move(out));
}

inline Word free_reduce(std::span<const Letter> letters) { return Word::from_letters(letters); }

inline CyclicReduction cyclic_reduce(const Word& w) {
  const std::string_view s = w.codes();
  const std::size_t peel = detail::cyclic_peel(s);
  const std::string_view core = s.substr(peel, s.size() - 2 * peel);
  const std::size_t r = detail::least_rotation(core);
  // core = x y with x = core[0, r); x y = x (y x) x^-1, so the conjugator absorbs x.
  std::string conj(s.substr(0, peel));
  detail::append_reduced(conj, core.substr(0, r));
  return {CyclicWord::from_reduced_codes(core), Word::from_reduced_codes(std::move(conj))};
}

inline std::size_t cyclic_length(const Word& w) {
  const std::size_t peel = detail::cyclic_peel(w.codes());
  return w.size() - 2 * peel;
}

/// Occurrences of x and x^-1.
inline std::size_t count_letter(const CyclicWord& w, Letter x) {
  std::size_t n = 0;
  for (char c : w.codes()) n += generator_index(detail::letter(c)) == generator_index(x);
  return n;
}

/// Raw occurrences of the cyclic subword x y.
inline std::size_t count_adjacent(const CyclicWord& w, Letter x, Letter y) {
  const std::string& s = w.codes();
  const std::size_t n = s.size();
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    count += s[i] == detail::code(x) && s[(i + 1) % n] == detail::code(y);
  }
  return count;
}

/// Occurrences of x y and y^-1 x^-1.
inline std::size_t count_pair(const CyclicWord& w, Letter x, Letter y) {
  if (x == inverse(y)) return 0;
  return count_adjacent(w, x, y) + count_adjacent(w, inverse(y), inverse(x));
}

inline bool is_positive(const CyclicWord& w) {
  for (char c : w.codes()) {
    if (!is_positive(detail::letter(c))) return false;
  }
  return true;
}

inline AbelianImage abelianize(const Word& w) {
  AbelianImage img;
  for (char c : w.codes()) {
    const Letter x = detail::letter(c);
    (generator_index(x) == 0 ? img.exp_a : img.exp_b) += sign(x);
  }
  return img;
}

/// Freely reduced c w c^-1.
inline Word conjugate(const Word& w, const Word& c) { return c * w * c.inverse(); }

struct CancellationCounts {
  std::size_t trivial = 0;
  std::size_t proper = 0;
  friend bool operator==(const CancellationCounts&, const CancellationCounts&) = default;
};

/// Classifies the cancellations that occur when the Whitehead map m -> m x is applied
/// to the cyclic word `w` (m a positive generator, x a letter of the other generator).
/// A cancellation inside a subword m y^r m^-1 (r != 0) is trivial, every other one proper.
inline CancellationCounts detect_cancellation(const CyclicWord& w, Letter moved, Letter multiplier) {
  assert(is_positive(moved) && generator_index(moved) != generator_index(multiplier));
  CancellationCounts out;
  const std::string& s = w.codes();
  const std::size_t n = s.size();
  std::vector<std::size_t> pos;
  for (std::size_t i = 0; i < n; ++i) {
    if (generator_index(detail::letter(s[i])) == generator_index(moved)) pos.push_back(i);
  }
  const char m = detail::code(moved);
  const char mi = detail::inv_code(m);
  const char x = detail::code(multiplier);
  const char xi = detail::inv_code(x);
  for (std::size_t j = 0; j < pos.size(); ++j) {
    const std::size_t left = pos[j];
    const std::size_t right = pos[(j + 1) % pos.size()];
    const std::size_t gap = (right + n - left - 1) % n;  // letters strictly between
    if (gap == 0) continue;
    const char run = s[(left + 1) % n];  // the run is a power of a single letter
    const bool cancels_left = s[left] == m && run == xi;
    const bool cancels_right = s[right] == mi && run == x;
    if (!cancels_left && !cancels_right) continue;
    if (s[left] == m && s[right] == mi && left != right) {
      ++out.trivial;
    } else {
      ++out.proper;
    }
  }
  return out;
}

/// All reduced words of length <= max_len in shortlex order (a < a^-1 < b < b^-1).
inline std::vector<Word> all_reduced_words(std::size_t max_len) {
  std::vector<Word> out{Word{}};
  std::size_t level_begin = 0;
  for (std::size_t len = 1; len <= max_len; ++len) {
    const std::size_t level_end = out.size();
    for (std::size_t i = level_begin; i < level_end; ++i) {
      for (char c = 0; c < 4; ++c) {
        const std::string& codes = out[i].codes();
        if (!codes.empty() && codes.back() == detail::inv_code(c)) continue;
        out.push_back(Word::from_reduced_codes(codes + c));
      }
    }
    level_begin = level_end;
  }
  return out;
}

}  // namespace f2aut

template <>
struct std::hash<f2aut::Word> {
  std::size_t operator()(const f2aut::Word& w) const noexcept {
    return std::hash<std::string>{}(w.codes());
  }
};

template <>
struct std::hash<f2aut::CyclicWord> {
  std::size_t operator()(const f2aut::CyclicWord& w) const noexcept {
    return std::hash<std::string>{}(w.codes());
  }
};
