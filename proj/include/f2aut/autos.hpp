#pragma once

// Automorphisms of F2, stored extensionally by the images of a and b.

#include <algorithm>
#include <array>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "f2aut/errors.hpp"
#include "f2aut/words.hpp"

namespace f2aut {

enum class Named { sigma, tau, sigma_inv, tau_inv, delta1, delta2, delta3, delta4, pi, pi_inv };

/// A single chain step. sigma = ({a}, b), tau = ({b}, a).
enum class Step : std::uint8_t { sigma = 0, tau = 1, sigma_inv = 2, tau_inv = 3 };

inline constexpr char step_char(Step s) noexcept { return "stST"[static_cast<int>(s)]; }

class Automorphism {
 public:
  Automorphism() : Automorphism(Word::from_letter(Letter::a), Word::from_letter(Letter::b)) {}

  static Automorphism identity() { return {}; }

  /// Validated construction: throws InvalidAutomorphism unless the images form a basis.
  static Automorphism from_images(Word image_a, Word image_b);

  /// Construction from images already known to form a basis (products of automorphisms).
  static Automorphism trusted(Word image_a, Word image_b) {
    return Automorphism(std::move(image_a), std::move(image_b));
  }

  const Word& image_of_a() const noexcept { return image_a_; }
  const Word& image_of_b() const noexcept { return image_b_; }

  /// Image of a single letter as raw codes.
  const std::string& letter_image(Letter x) const noexcept {
    return letter_images_[static_cast<int>(x)];
  }

  /// Substitutes images into `in` and appends the freely reduced result to `out`.
  void apply_codes(std::string_view in, std::string& out) const {
    for (char c : in) detail::append_reduced(out, letter_images_[static_cast<unsigned char>(c)]);
  }

  Word apply(const Word& w) const {
    std::string out;
    out.reserve(w.size() * 2);
    apply_codes(w.codes(), out);
    return Word::from_reduced_codes(std::move(out));
  }

  CyclicWord apply_cyclic(const CyclicWord& w) const {
    std::string out;
    out.reserve(w.length() * 2);
    apply_codes(w.codes(), out);
    return CyclicWord::from_reduced_codes(out);
  }

  Word operator()(const Word& w) const { return apply(w); }

  /// "a -> <word>; b -> <word>"
  std::string str() const { return "a -> " + image_a_.str() + "; b -> " + image_b_.str(); }

  friend bool operator==(const Automorphism& f, const Automorphism& g) {
    return f.image_a_ == g.image_a_ && f.image_b_ == g.image_b_;
  }

 private:
  Automorphism(Word image_a, Word image_b)
      : image_a_(std::move(image_a)), image_b_(std::move(image_b)) {
    letter_images_[0] = image_a_.codes();
    letter_images_[1] = image_a_.inverse().codes();
    letter_images_[2] = image_b_.codes();
    letter_images_[3] = image_b_.inverse().codes();
  }

  Word image_a_;
  Word image_b_;
  std::array<std::string, 4> letter_images_;
};

inline std::ostream& operator<<(std::ostream& os, const Automorphism& f) { return os << f.str(); }

/// f o g, i.e. (f o g)(w) = f(g(w)).
inline Automorphism compose(const Automorphism& f, const Automorphism& g) {
  return Automorphism::trusted(f.apply(g.image_of_a()), f.apply(g.image_of_b()));
}

/// Right-to-left product f1 o f2 o ... o fn.
inline Automorphism compose_all(std::initializer_list<Automorphism> fs) {
  Automorphism out;
  for (const Automorphism& f : fs) out = compose(out, f);
  return out;
}

inline Word apply(const Automorphism& f, const Word& w) { return f.apply(w); }
inline CyclicWord apply_cyclic(const Automorphism& f, const CyclicWord& w) {
  return f.apply_cyclic(w);
}

/// Signed permutation of the generators: a type (W1) Whitehead automorphism.
struct WhiteheadW1 {
  Letter image_of_a;
  Letter image_of_b;

  Automorphism to_automorphism() const {
    if (generator_index(image_of_a) == generator_index(image_of_b)) {
      throw InvalidAutomorphism("W1 images must use both generators");
    }
    return Automorphism::trusted(Word::from_letter(image_of_a), Word::from_letter(image_of_b));
  }
};

/// Type (W2) Whitehead automorphism (S, x). `set_s` holds letters of the other generator.
struct WhiteheadW2 {
  Letter multiplier;
  std::vector<Letter> set_s;

  bool contains(Letter c) const { return std::find(set_s.begin(), set_s.end(), c) != set_s.end(); }

  Automorphism to_automorphism() const {
    const Letter x = multiplier;
    for (Letter c : set_s) {
      if (generator_index(c) == generator_index(x)) {
        throw InvalidAutomorphism("W2 set S must not contain the multiplier or its inverse");
      }
    }
    auto image = [&](Letter g) {
      const bool in = contains(g);
      const bool inv_in = contains(inverse(g));
      std::vector<Letter> out;
      if (inv_in) out.push_back(inverse(x));
      out.push_back(g);
      if (in) out.push_back(x);
      return Word::from_letters(out);
    };
    return Automorphism::trusted(image(Letter::a), image(Letter::b));
  }
};

namespace detail {

inline Word w(std::string_view text) { return parse_word(text); }

}  // namespace detail

inline Automorphism named(Named n) {
  using detail::w;
  switch (n) {
    case Named::sigma: return Automorphism::trusted(w("ab"), w("b"));
    case Named::tau: return Automorphism::trusted(w("a"), w("ba"));
    case Named::sigma_inv: return Automorphism::trusted(w("aB"), w("b"));
    case Named::tau_inv: return Automorphism::trusted(w("a"), w("bA"));
    case Named::delta1: return Automorphism::trusted(w("Bab"), w("b"));
    case Named::delta2: return Automorphism::trusted(w("baB"), w("b"));
    case Named::delta3: return Automorphism::trusted(w("a"), w("Aba"));
    case Named::delta4: return Automorphism::trusted(w("a"), w("abA"));
    case Named::pi: return Automorphism::trusted(w("b"), w("A"));
    case Named::pi_inv: return Automorphism::trusted(w("B"), w("a"));
  }
  throw ContractViolation("unknown named automorphism");
}

inline std::optional<Named> parse_named(std::string_view name) {
  static constexpr std::pair<std::string_view, Named> table[] = {
      {"sigma", Named::sigma},         {"tau", Named::tau},       {"sigma_inv", Named::sigma_inv},
      {"tau_inv", Named::tau_inv},     {"delta1", Named::delta1}, {"delta2", Named::delta2},
      {"delta3", Named::delta3},       {"delta4", Named::delta4}, {"pi", Named::pi},
      {"pi_inv", Named::pi_inv},
  };
  for (const auto& [key, value] : table) {
    if (key == name) return value;
  }
  return std::nullopt;
}

inline const Automorphism& step_automorphism(Step s) {
  static const std::array<Automorphism, 4> table = {
      named(Named::sigma), named(Named::tau), named(Named::sigma_inv), named(Named::tau_inv)};
  return table[static_cast<int>(s)];
}

/// The eight signed generator permutations, identity first, then ordered by
/// (image of a, image of b) over a < a^-1 < b < b^-1.
inline const std::vector<Automorphism>& all_w1() {
  static const std::vector<Automorphism> maps = [] {
    std::vector<Automorphism> out;
    for (Letter ia : all_letters) {
      for (Letter ib : all_letters) {
        if (generator_index(ia) == generator_index(ib)) continue;
        out.push_back(WhiteheadW1{ia, ib}.to_automorphism());
      }
    }
    return out;
  }();
  return maps;
}

namespace detail {

struct NielsenState {
  std::string x;
  std::string y;
  std::size_t total() const { return x.size() + y.size(); }
  bool operator==(const NielsenState&) const = default;
};

struct NielsenStateHash {
  std::size_t operator()(const NielsenState& s) const noexcept {
    return std::hash<std::string>{}(s.x) * 31 + std::hash<std::string>{}(s.y);
  }
};

/// The eight elementary Nielsen moves as automorphisms nu; the state (x, y) = (g(a), g(b))
/// becomes (g(nu(a)), g(nu(b))).
inline const std::array<Automorphism, 8>& nielsen_moves() {
  static const std::array<Automorphism, 8> moves = {
      Automorphism::trusted(w("ab"), w("b")), Automorphism::trusted(w("aB"), w("b")),
      Automorphism::trusted(w("ba"), w("b")), Automorphism::trusted(w("Ba"), w("b")),
      Automorphism::trusted(w("a"), w("ba")), Automorphism::trusted(w("a"), w("bA")),
      Automorphism::trusted(w("a"), w("ab")), Automorphism::trusted(w("a"), w("Ab")),
  };
  return moves;
}

inline NielsenState nielsen_step(const NielsenState& s, int move) {
  const Automorphism& nu = nielsen_moves()[move];
  // g(nu(a)) where g sends a -> x, b -> y.
  auto eval = [&](const Word& image) {
    std::string out;
    for (char c : image.codes()) {
      const Letter l = letter(c);
      const std::string& base = generator_index(l) == 0 ? s.x : s.y;
      if (is_positive(l)) {
        append_reduced(out, base);
      } else {
        append_inverse_reduced(out, base);
      }
    }
    return out;
  };
  return {eval(nu.image_of_a()), eval(nu.image_of_b())};
}

struct NielsenResult {
  bool is_basis = false;
  Automorphism inverse;
};

/// Reduces the pair (image_a, image_b) to a pair of letters by length-decreasing
/// Nielsen moves, allowing equal-length detours when no move shortens the pair.
/// The accumulated moves give the inverse automorphism.
inline NielsenResult nielsen_reduce(const Word& image_a, const Word& image_b) {
  NielsenState state{image_a.codes(), image_b.codes()};
  Automorphism acc;  // phi o acc maps a -> state.x, b -> state.y
  const std::size_t cap = 4 * (image_a.size() + image_b.size()) + 4;
  std::size_t moves_used = 0;

  auto is_letter_pair = [](const NielsenState& s) {
    return s.x.size() == 1 && s.y.size() == 1 &&
           generator_index(letter(s.x[0])) != generator_index(letter(s.y[0]));
  };

  while (!is_letter_pair(state)) {
    if (state.x.empty() || state.y.empty()) return {false, {}};
    if (moves_used >= cap) return {false, {}};
    // Breadth-first over moves that never increase the total length, until the
    // total strictly drops. Most steps resolve at depth one.
    struct Node {
      NielsenState s;
      int parent;
      int move;
    };
    std::vector<Node> nodes{{state, -1, -1}};
    std::unordered_set<NielsenState, NielsenStateHash> seen{state};
    std::size_t head = 0;
    int found = -1;
    const std::size_t bound = state.total();
    while (head < nodes.size() && found < 0) {
      // Each level is scanned completely so the shortest strict drop wins, with the
      // smallest resulting total preferred inside a level.
      const std::size_t level_end = nodes.size();
      std::size_t best_total = bound;
      for (; head < level_end; ++head) {
        for (int m = 0; m < 8; ++m) {
          NielsenState next = nielsen_step(nodes[head].s, m);
          const std::size_t t = next.total();
          if (t > bound || next.x.empty() || next.y.empty()) continue;
          if (!seen.insert(next).second) continue;
          nodes.push_back({std::move(next), static_cast<int>(head), m});
          if (t < best_total) {
            best_total = t;
            found = static_cast<int>(nodes.size()) - 1;
          }
        }
      }
      if (nodes.size() > 64 * (bound + 1)) break;
    }
    if (found < 0) return {false, {}};
    std::vector<int> path;
    for (int i = found; nodes[i].parent >= 0; i = nodes[i].parent) path.push_back(nodes[i].move);
    std::reverse(path.begin(), path.end());
    for (int m : path) acc = compose(acc, nielsen_moves()[m]);
    moves_used += path.size();
    state = std::move(nodes[found].s);
  }
  // phi o acc = beta (a letter permutation) so phi^-1 = acc o beta^-1.
  const Automorphism beta = Automorphism::trusted(Word::from_reduced_codes(state.x),
                                                  Word::from_reduced_codes(state.y));
  Automorphism beta_inv;
  for (const Automorphism& cand : all_w1()) {
    if (compose(beta, cand) == Automorphism::identity()) beta_inv = cand;
  }
  return {true, compose(acc, beta_inv)};
}

}  // namespace detail

inline Automorphism Automorphism::from_images(Word image_a, Word image_b) {
  if (!detail::nielsen_reduce(image_a, image_b).is_basis) {
    throw InvalidAutomorphism("images " + image_a.str() + ", " + image_b.str() +
                              " do not form a basis of F2");
  }
  return Automorphism(std::move(image_a), std::move(image_b));
}

inline Automorphism inverse(const Automorphism& f) {
  auto r = detail::nielsen_reduce(f.image_of_a(), f.image_of_b());
  if (!r.is_basis) throw InvalidAutomorphism("not an automorphism: " + f.str());
  return r.inverse;
}

/// max(1, |f(psi(w))| - |psi(w)|) given both cyclic images.
inline long delta_norm(const Automorphism& f, const CyclicWord& psi_image,
                       const CyclicWord& w_image_after_f) {
  assert(f.apply_cyclic(psi_image) == w_image_after_f);
  (void)f;
  const long diff = static_cast<long>(w_image_after_f.length()) -
                    static_cast<long>(psi_image.length());
  return std::max(1L, diff);
}

inline long delta_norm(const Automorphism& f, const CyclicWord& psi_image) {
  return delta_norm(f, psi_image, f.apply_cyclic(psi_image));
}

/// Length change predicted from letter and pair counts, exact when no proper
/// cancellation occurs.
inline long predicted_length_delta(const CyclicWord& w, Step which) {
  const auto n = [&](Letter x) { return static_cast<long>(count_letter(w, x)); };
  const auto pair = [&](Letter x, Letter y) { return static_cast<long>(count_pair(w, x, y)); };
  switch (which) {
    case Step::sigma: return n(Letter::a) - 2 * pair(Letter::a, Letter::b_inv);
    case Step::tau: return n(Letter::b) - 2 * pair(Letter::b, Letter::a_inv);
    case Step::sigma_inv: return n(Letter::a) - 2 * pair(Letter::a, Letter::b);
    case Step::tau_inv: return n(Letter::b) - 2 * pair(Letter::b, Letter::a);
  }
  return 0;
}

/// The (moved, multiplier) pair of the W2 map behind a step.
inline std::pair<Letter, Letter> step_whitehead_pair(Step s) {
  switch (s) {
    case Step::sigma: return {Letter::a, Letter::b};
    case Step::tau: return {Letter::b, Letter::a};
    case Step::sigma_inv: return {Letter::a, Letter::b_inv};
    case Step::tau_inv: return {Letter::b, Letter::a_inv};
  }
  return {Letter::a, Letter::b};
}

/// Parses "a -> <word>; b -> <word>" and validates invertibility.
inline Automorphism parse_automorphism(std::string_view text) {
  const auto semi = text.find(';');
  if (semi == std::string_view::npos) throw ParseError("automorphism needs ';'", text.size());
  auto side = [&](std::string_view part, char gen, std::size_t offset) {
    const auto arrow = part.find("->");
    if (arrow == std::string_view::npos) throw ParseError("automorphism needs '->'", offset);
    std::string_view lhs = part.substr(0, arrow);
    while (!lhs.empty() && lhs.front() == ' ') lhs.remove_prefix(1);
    while (!lhs.empty() && lhs.back() == ' ') lhs.remove_suffix(1);
    if (lhs.size() != 1 || lhs[0] != gen) {
      throw ParseError(std::string("expected '") + gen + " ->'", offset);
    }
    return parse_word(part.substr(arrow + 2));
  };
  Word ia = side(text.substr(0, semi), 'a', 0);
  Word ib = side(text.substr(semi + 1), 'b', semi + 1);
  return Automorphism::from_images(std::move(ia), std::move(ib));
}

}  // namespace f2aut

template <>
struct std::hash<f2aut::Automorphism> {
  std::size_t operator()(const f2aut::Automorphism& f) const noexcept {
    const std::size_t h1 = std::hash<f2aut::Word>{}(f.image_of_a());
    const std::size_t h2 = std::hash<f2aut::Word>{}(f.image_of_b());
    return h1 ^ (h2 + 0x9e3779b97f4a7c15ULL + (h1 << 6) + (h1 >> 2));
  }
};
