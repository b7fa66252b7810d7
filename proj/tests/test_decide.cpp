#include <catch_amalgamated.hpp>

#include <random>

#include "f2aut/decide.hpp"
#include "f2aut/oracle.hpp"
#include "naive.hpp"

using namespace f2aut;

namespace {

Word w(const char* s) { return parse_word(s); }

ExactRational r(long long p, long long q = 1) { return {p, q}; }

}  // namespace

TEST_CASE("positivity examples", "[decide][positivity]") {
  auto rep = potentially_positive(w("ab"));
  CHECK(rep.answer);
  REQUIRE(rep.witness);
  CHECK(rep.witness->chain.steps.empty());
  CHECK(rep.witness->w1_map == Automorphism::identity());
  CHECK(rep.chains_examined == 1);

  rep = potentially_positive(w("AB"));
  CHECK(rep.answer);
  REQUIRE(rep.witness);
  CHECK(rep.witness->w1_map == Automorphism::trusted(w("A"), w("B")));

  rep = potentially_positive(w("abAB"));
  CHECK_FALSE(rep.answer);
  CHECK_FALSE(rep.witness);
  CHECK(rep.max_chain_len == 11);
  CHECK(rep.chains_examined == chain_count(ChainSpace::both, 11));

  rep = potentially_positive(Word{});
  CHECK(rep.answer);
  REQUIRE(rep.witness);
  CHECK(rep.witness->positive_image.empty());
}

TEST_CASE("positivity witnesses replay", "[decide][positivity]") {
  for (const Word& u : all_reduced_words(3)) {
    const auto rep = potentially_positive(u);
    if (!rep.answer) continue;
    REQUIRE(rep.witness);
    const Automorphism phi = compose(rep.witness->w1_map, rep.witness->chain.automorphism());
    CHECK(phi.apply_cyclic(CyclicWord(u)) == rep.witness->positive_image);
    CHECK(is_positive(rep.witness->positive_image));
  }
}

TEST_CASE("positivity is invariant under W1 maps and inversion", "[decide][positivity]") {
  for (const Word& u : all_reduced_words(3)) {
    const bool base = potentially_positive(u).answer;
    CHECK(potentially_positive(u.inverse()).answer == base);
    for (const Automorphism& beta : all_w1()) CHECK(potentially_positive(beta(u)).answer == base);
  }
}

TEST_CASE("positivity answers do not depend on workers", "[decide][positivity]") {
  SearchOptions many;
  many.workers = 4;
  for (const char* s : {"aBab", "abAB", "aaBab", "Ab"}) {
    const auto one = potentially_positive(w(s));
    const auto four = potentially_positive(w(s), many);
    CHECK(one.answer == four.answer);
    CHECK(one.chains_examined == four.chains_examined);
    if (one.witness) {
      REQUIRE(four.witness);
      CHECK(one.witness->chain == four.witness->chain);
      CHECK(one.witness->w1_map == four.witness->w1_map);
    }
  }
}

TEST_CASE("bte negative example reports the sigma-power counterexample", "[decide][bte]") {
  const auto rep = bounded_translation_equivalent(w("a"), w("b"));
  CHECK_FALSE(rep.answer);
  CHECK_FALSE(rep.bounds);
  REQUIRE(rep.failing_condition);
  const BteFailure& f = *rep.failing_condition;
  CHECK(f.chain.steps.empty());
  CHECK(f.step == Step::sigma);
  CHECK(f.k == 2);
  CHECK(f.u_lengths == std::array<std::size_t, 2>{3, 4});
  CHECK(f.v_lengths == std::array<std::size_t, 2>{1, 1});

  // Swapped arguments report lengths in the caller's orientation.
  const auto swapped = bounded_translation_equivalent(w("b"), w("a"));
  REQUIRE(swapped.failing_condition);
  CHECK(swapped.failing_condition->u_lengths == std::array<std::size_t, 2>{1, 1});
  CHECK(swapped.failing_condition->v_lengths == std::array<std::size_t, 2>{3, 4});
}

TEST_CASE("bte of a word with itself and its inverse", "[decide][bte]") {
  std::mt19937 rng(31);
  for (int i = 0; i < 6; ++i) {
    const Word u = parse_word(naive::random_word(rng, 3, 1));
    if (cyclic_length(u) == 0) continue;
    for (const Word& v : {u, u.inverse()}) {
      const auto rep = bounded_translation_equivalent(u, v);
      CHECK(rep.answer);
      REQUIRE(rep.bounds);
      CHECK(rep.bounds->first == r(1));
      CHECK(rep.bounds->second == r(1));
    }
  }
  CHECK(compute_delta_bounds(w("aab"), w("BAA")) == std::pair{r(1), r(1)});
}

TEST_CASE("bte errors", "[decide][bte]") {
  CHECK_THROWS_AS(bounded_translation_equivalent(Word{}, w("a")), InvalidInput);
  CHECK_THROWS_AS(bounded_translation_equivalent(w("abAB"), w("aA")), InvalidInput);
  CHECK_THROWS_AS(compute_delta_bounds(w("a"), w("b")), ContractViolation);
}

TEST_CASE("bte is symmetric, reflexive and transitive on short words", "[decide][bte]") {
  std::vector<Word> words;
  for (const Word& u : all_reduced_words(2)) {
    if (cyclic_length(u) > 0) words.push_back(u);
  }
  std::map<std::pair<std::size_t, std::size_t>, BteReport> table;
  for (std::size_t i = 0; i < words.size(); ++i) {
    for (std::size_t j = 0; j < words.size(); ++j) table[{i, j}] = bounded_translation_equivalent(words[i], words[j]);
  }
  for (std::size_t i = 0; i < words.size(); ++i) {
    CHECK(table[{i, i}].answer);
    for (std::size_t j = 0; j < words.size(); ++j) {
      const auto& x = table[{i, j}];
      const auto& y = table[{j, i}];
      CHECK(x.answer == y.answer);
      if (x.answer) {
        CHECK(x.bounds->first == 1 / y.bounds->second);
        CHECK(x.bounds->second == 1 / y.bounds->first);
      }
      for (std::size_t k = 0; k < words.size(); ++k) {
        if (x.answer && table[{j, k}].answer) CHECK(table[{i, k}].answer);
      }
    }
  }
}

TEST_CASE("bte bounds contain oracle ratios", "[decide][bte]") {
  const AutoCatalog catalog = AutoCatalog::build(5);
  std::size_t positive_pairs = 0;
  const auto words = all_reduced_words(3);
  for (std::size_t i = 0; i < words.size(); i += 7) {
    for (std::size_t j = i; j < words.size(); j += 11) {
      if (cyclic_length(words[i]) == 0 || cyclic_length(words[j]) == 0) continue;
      const auto rep = bounded_translation_equivalent(words[i], words[j]);
      if (!rep.answer) continue;
      ++positive_pairs;
      for (const ExactRational& q : sample_ratios(words[i], words[j], catalog)) {
        CHECK(rep.bounds->first <= q);
        CHECK(q <= rep.bounds->second);
      }
    }
  }
  CHECK(positive_pairs > 0);
}

TEST_CASE("fixed-point examples", "[decide][fixgroup]") {
  auto rep = fixed_point_group(parse_subgroup("a,b"));
  CHECK(rep.answer == FixAnswer::yes);
  REQUIRE(rep.witness);
  CHECK(rep.witness->automorphism() == Automorphism::identity());

  rep = fixed_point_group(parse_subgroup("a"));
  CHECK(rep.answer == FixAnswer::yes);
  REQUIRE(rep.witness);
  CHECK(rep.witness->w1_map == Automorphism::trusted(w("a"), w("B")));
  CHECK(rep.witness->delta_composition.empty());
  CHECK(rep.witness->chain.steps.empty());
  CHECK(rep.verification_depth == 8);
  CHECK_FALSE(rep.escaped_fixed_word);

  rep = fixed_point_group(parse_subgroup("aa"));
  CHECK(rep.answer == FixAnswer::no);
  REQUIRE(rep.escaped_fixed_word);
  CHECK(rep.escaped_fixed_word->str() == "a");
}

TEST_CASE("fixed-point witnesses fix generators and pass verification", "[decide][fixgroup]") {
  for (const char* gens : {"ab", "a,b", "a", "ab,ba", "aB"}) {
    const Subgroup h = parse_subgroup(gens);
    const auto rep = fixed_point_group(h);
    if (rep.answer != FixAnswer::yes) continue;
    const Automorphism psi = rep.witness->automorphism();
    for (const Word& u : h.generators()) CHECK(psi(u) == u);
    for (const Word& x : all_reduced_words(rep.verification_depth)) {
      if (psi(x) == x) CHECK(h.contains(x));
    }
  }
}

TEST_CASE("delta caps make the answer inconclusive", "[decide][fixgroup]") {
  FixOptions opts;
  opts.delta_step_cap = 2;
  auto rep = fixed_point_group(parse_subgroup("ab"), opts);
  CHECK(rep.answer == FixAnswer::inconclusive);
  REQUIRE(rep.truncated_at);
  CHECK(rep.truncated_at->steps.empty());

  opts = {};
  opts.word_length_cap = 1;
  rep = fixed_point_group(parse_subgroup("ab"), opts);
  CHECK(rep.answer == FixAnswer::inconclusive);
}

TEST_CASE("trivial subgroup is flagged", "[decide][fixgroup]") {
  const auto rep = fixed_point_group(parse_subgroup("1"));
  CHECK(rep.trivial_subgroup);
  CHECK(rep.delta_step_cap == 0);
}

TEST_CASE("fixed-point answers do not depend on workers", "[decide][fixgroup]") {
  FixOptions many;
  many.search.workers = 3;
  for (const char* gens : {"aa", "ab", "a"}) {
    const auto one = fixed_point_group(parse_subgroup(gens));
    const auto three = fixed_point_group(parse_subgroup(gens), many);
    CHECK(one.answer == three.answer);
    CHECK(one.chains_examined == three.chains_examined);
    CHECK(one.candidates == three.candidates);
    CHECK(one.escaped_fixed_word == three.escaped_fixed_word);
    if (one.witness) CHECK(one.witness->automorphism() == three.witness->automorphism());
  }
}
