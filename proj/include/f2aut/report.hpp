#pragma once

// JSON rendering of decision reports. Field order is fixed so that equal reports
// serialize to identical bytes.

#include <json.hpp>

#include <algorithm>
#include <string>
#include <vector>

#include "f2aut/decide.hpp"
#include "f2aut/oracle.hpp"

namespace f2aut::report {

using Json = nlohmann::ordered_json;

inline Json chain_json(const Chain& c) {
  return Json{{"polarity", polarity_name(c.polarity)}, {"steps", c.steps_str()}};
}

inline const char* named_name(Named n) {
  switch (n) {
    case Named::sigma: return "sigma";
    case Named::tau: return "tau";
    case Named::sigma_inv: return "sigma_inv";
    case Named::tau_inv: return "tau_inv";
    case Named::delta1: return "delta1";
    case Named::delta2: return "delta2";
    case Named::delta3: return "delta3";
    case Named::delta4: return "delta4";
    case Named::pi: return "pi";
    case Named::pi_inv: return "pi_inv";
  }
  return "?";
}

inline Json positivity_json(const Word& u, const PositivityReport& r) {
  Json j;
  j["command"] = "positivity";
  j["input"] = Json{{"word", u.str()}};
  j["answer"] = r.answer;
  if (r.witness) {
    j["witness"] = Json{{"chain", chain_json(r.witness->chain)},
                        {"w1_map", r.witness->w1_map.str()},
                        {"positive_image", r.witness->positive_image.str()}};
  }
  j["stats"] = Json{{"chains_examined", r.chains_examined}, {"max_chain_len", r.max_chain_len}};
  return j;
}

inline Json bte_json(const Word& u, const Word& v, const BteReport& r) {
  Json j;
  j["command"] = "bte";
  j["input"] = Json{{"u", u.str()}, {"v", v.str()}};
  j["answer"] = r.answer;
  if (r.failing_condition) {
    const BteFailure& f = *r.failing_condition;
    j["failing_condition"] = Json{{"chain", chain_json(f.chain)},
                        {"step", std::string(1, step_char(f.step))},
                        {"k", f.k},
                        {"u_lengths", f.u_lengths},
                        {"v_lengths", f.v_lengths}};
  }
  if (r.bounds) {
    j["bounds"] = Json{{"min", to_string(r.bounds->first)}, {"max", to_string(r.bounds->second)}};
    j["delta_set_size"] = r.delta_set_size;
  }
  j["stats"] = Json{{"chains_examined", r.chains_examined}, {"max_chain_len", r.max_chain_len}};
  return j;
}

inline Json fix_json(const Subgroup& h, const FixReport& r) {
  Json j;
  j["command"] = "fixgroup";
  Json gens = Json::array();
  for (const Word& g : h.generators()) gens.push_back(g.str());
  j["input"] = Json{{"generators", gens}};
  j["answer"] = fix_answer_name(r.answer);
  if (r.witness) {
    Json deltas = Json::array();
    for (Named n : r.witness->delta_composition) deltas.push_back(named_name(n));
    j["witness"] = Json{{"w1_map", r.witness->w1_map.str()},
                        {"delta_composition", deltas},
                        {"chain", chain_json(r.witness->chain)},
                        {"automorphism", r.witness->automorphism().str()}};
  }
  if (r.escaped_fixed_word) j["escaped_fixed_word"] = r.escaped_fixed_word->str();
  if (r.truncated_at) j["truncated_at"] = chain_json(*r.truncated_at);
  j["verification_depth"] = r.verification_depth;
  if (r.trivial_subgroup) j["trivial_subgroup"] = true;
  j["stats"] = Json{{"chains_examined", r.chains_examined},
                    {"max_chain_len", r.max_chain_len},
                    {"candidates", r.candidates},
                    {"delta_step_cap", r.delta_step_cap},
                    {"word_length_cap", r.word_length_cap}};
  return j;
}

inline Json positivity_verify_json(const Word& u, const PositivityReport& r, const AutoCatalog& catalog) {
  const OraclePositivity o = oracle_potentially_positive(u, catalog);
  const bool obstruction = abelian_obstruction(u);
  Json j;
  j["depth"] = catalog.depth();
  j["catalog_size"] = catalog.size();
  j["oracle"] = o.yes ? "yes" : "no_within_depth";
  if (o.witness) j["oracle_witness"] = o.witness->str();
  j["abelian_obstruction"] = obstruction;
  // A "no" is confirmed by the obstruction or by the oracle finding nothing up to its depth.
  j["consistent"] = !o.yes || r.answer;
  return j;
}

inline Json bte_verify_json(const Word& u, const Word& v, const BteReport& r, const AutoCatalog& catalog) {
  const std::vector<ExactRational> ratios = sample_ratios(u, v, catalog);
  const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
  Json j;
  j["depth"] = catalog.depth();
  j["samples"] = ratios.size();
  j["min"] = to_string(*lo);
  j["max"] = to_string(*hi);
  if (r.bounds) j["within_bounds"] = r.bounds->first <= *lo && *hi <= r.bounds->second;
  return j;
}

}  // namespace f2aut::report
