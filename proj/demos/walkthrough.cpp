// Tour of the library: words, maps, chains, and the three decision procedures.

#include <iostream>

#include "f2aut/f2aut.hpp"

using namespace f2aut;

int main() {
  const Word u = parse_word("aabAB");
  std::cout << "u = " << u << ", cyclic length " << cyclic_length(u) << ", abelianization ("
            << abelianize(u).exp_a << ", " << abelianize(u).exp_b << ")\n";

  const Automorphism sigma = named(Named::sigma);
  const Automorphism tau = named(Named::tau);
  std::cout << "sigma = " << sigma << "\nsigma(u) = " << sigma(u) << "\n";
  std::cout << "tau o sigma = " << compose(tau, sigma) << "\n";

  const Chain chain = parse_chain("sst");
  std::cout << "chain " << chain.steps_str() << " maps [u] to " << apply_chain(chain, CyclicWord(u)) << "\n\n";

  for (const char* text : {"aBab", "abAB"}) {
    const PositivityReport r = potentially_positive(parse_word(text));
    std::cout << text << " potentially positive: " << (r.answer ? "yes" : "no");
    if (r.witness) std::cout << " via chain '" << r.witness->chain.steps_str() << "' and " << r.witness->w1_map;
    std::cout << " (" << r.chains_examined << " chains)\n";
  }

  const BteReport bte = bounded_translation_equivalent(parse_word("ab"), parse_word("aB"));
  std::cout << "\nab ~ aB: " << (bte.answer ? "bounded" : "unbounded");
  if (bte.bounds) std::cout << ", ratios in [" << to_string(bte.bounds->first) << ", " << to_string(bte.bounds->second) << "]";
  std::cout << "\n";
  const BteReport neg = bounded_translation_equivalent(parse_word("a"), parse_word("b"));
  if (neg.failing_condition) {
    std::cout << "a ~ b fails: step " << step_char(neg.failing_condition->step) << ", k = " << neg.failing_condition->k
              << "\n";
  }

  for (const char* gens : {"a", "aa", "ab"}) {
    const FixReport r = fixed_point_group(parse_subgroup(gens));
    std::cout << "\n<" << gens << "> is a fixed-point group: " << fix_answer_name(r.answer);
    if (r.witness) std::cout << ", witness " << r.witness->automorphism();
    if (r.escaped_fixed_word) std::cout << ", every candidate also fixes " << *r.escaped_fixed_word;
  }
  std::cout << "\n";
}
