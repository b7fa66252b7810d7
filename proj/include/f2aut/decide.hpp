#pragma once

// Decision procedures: potential positivity, bounded translation equivalence and
// fixed-point groups.

#include <algorithm>
#include <array>
#include <cassert>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "f2aut/autos.hpp"
#include "f2aut/chains.hpp"
#include "f2aut/errors.hpp"
#include "f2aut/rational.hpp"
#include "f2aut/subgroups.hpp"
#include "f2aut/words.hpp"

namespace f2aut {

struct SearchOptions {
  /// Overrides the default chain-length bound.
  std::optional<std::size_t> max_chain_len;
  unsigned workers = 1;
  std::optional<std::size_t> image_length_cap;
};

namespace detail {

inline CollectOptions collect_options(const SearchOptions& o) {
  CollectOptions c;
  c.workers = o.workers;
  c.enumerate.image_length_cap = o.image_length_cap;
  return c;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Positivity

struct PositivityWitness {
  Chain chain;
  Automorphism w1_map;
  CyclicWord positive_image;
};

struct PositivityReport {
  bool answer = false;
  std::optional<PositivityWitness> witness;
  std::size_t chains_examined = 0;
  std::size_t max_chain_len = 0;
};

/// First W1 map (in all_w1 order) that turns `w` positive, if any.
inline std::optional<std::size_t> positivizing_w1(const CyclicWord& w) {
  int sign_a = 0;
  int sign_b = 0;
  for (char c : w.codes()) {
    int& slot = (c >> 1) == 0 ? sign_a : sign_b;
    const int s = (c & 1) == 0 ? 1 : -1;
    if (slot == 0) {
      slot = s;
    } else if (slot != s) {
      return std::nullopt;
    }
  }
  const auto& maps = all_w1();
  for (std::size_t i = 0; i < maps.size(); ++i) {
    if (is_positive(maps[i].apply_cyclic(w))) return i;
  }
  return std::nullopt;
}

inline PositivityReport potentially_positive(const Word& u, const SearchOptions& opts = {}) {
  const CyclicWord cu(u);
  PositivityReport report;
  report.max_chain_len = opts.max_chain_len.value_or(2 * cu.length() + 3);
  const std::array<CyclicWord, 1> inputs{cu};
  auto found = collect<std::size_t, CyclicWord>(
      ChainSpace::both, report.max_chain_len, std::span<const CyclicWord>(inputs),
      [](const ChainVisit<CyclicWord>& v) { return positivizing_w1(v.images[0]); },
      [](std::size_t) { return true; }, detail::collect_options(opts));
  if (found.results.empty()) {
    report.chains_examined = chain_count(ChainSpace::both, report.max_chain_len);
    return report;
  }
  const auto& [chain, beta_index] = found.results.front();
  const Automorphism& beta = all_w1()[beta_index];
  report.answer = true;
  report.chains_examined = canonical_position(ChainSpace::both, chain);
  report.witness = PositivityWitness{chain, beta, beta.apply_cyclic(apply_chain(chain, cu))};
  return report;
}

// ---------------------------------------------------------------------------
// Bounded translation equivalence

/// A chain psi and step alpha where ||alpha^{k+1} psi(w)|| = ||alpha^k psi(w)|| holds
/// for exactly one of the two words. Lengths are listed as (k, k+1).
struct BteFailure {
  Chain chain;
  Step step = Step::sigma;
  std::size_t k = 0;
  std::array<std::size_t, 2> u_lengths{};
  std::array<std::size_t, 2> v_lengths{};
};

struct BteReport {
  bool answer = false;
  std::optional<BteFailure> failing_condition;
  std::optional<std::pair<ExactRational, ExactRational>> bounds;
  std::size_t delta_set_size = 0;
  std::size_t chains_examined = 0;
  std::size_t max_chain_len = 0;
};

namespace detail {

struct BteChainResult {
  std::optional<BteFailure> failure;
  std::vector<ExactRational> ratios;
};

inline std::vector<Step> bte_steps(const Chain& c) {
  if (c.steps.empty()) return {Step::sigma, Step::tau, Step::sigma_inv, Step::tau_inv};
  const auto [s, t] = polarity_steps(c.polarity);
  return {s, t};
}

inline ExactRational length_ratio(std::size_t num, std::size_t den) {
  return {static_cast<long long>(num), static_cast<long long>(den)};
}

}  // namespace detail

/// Both words must have nonzero cyclic length.
inline BteReport bounded_translation_equivalent(const Word& u, const Word& v,
                                                const SearchOptions& opts = {}) {
  CyclicWord cu(u);
  CyclicWord cv(v);
  if (cu.empty() || cv.empty()) {
    throw InvalidInput("bounded translation equivalence needs words of nonzero cyclic length");
  }
  const bool swapped = cu.length() < cv.length();
  if (swapped) std::swap(cu, cv);

  BteReport report;
  const std::size_t k = cu.length() + 1;
  report.max_chain_len = opts.max_chain_len.value_or(2 * cu.length() + 5);
  const std::array<CyclicWord, 2> inputs{cu, cv};

  auto eval = [k](const ChainVisit<CyclicWord>& visit) -> std::optional<detail::BteChainResult> {
    detail::BteChainResult r;
    const CyclicWord& pu = visit.images[0];
    const CyclicWord& pv = visit.images[1];
    r.ratios.push_back(detail::length_ratio(pu.length(), pv.length()));
    for (Step s : detail::bte_steps(visit.chain)) {
      const auto lu = power_lengths(pu, s, k + 1);
      const auto lv = power_lengths(pv, s, k + 1);
      const bool stable_u = lu[k + 1] == lu[k];
      const bool stable_v = lv[k + 1] == lv[k];
      if (stable_u != stable_v && !r.failure) {
        r.failure = BteFailure{visit.chain, s, k, {lu[k], lu[k + 1]}, {lv[k], lv[k + 1]}};
      }
      const auto norm = [](const std::vector<std::size_t>& l) {
        return std::max<long long>(1, static_cast<long long>(l[1]) - static_cast<long long>(l[0]));
      };
      r.ratios.emplace_back(norm(lu), norm(lv));
    }
    return r;
  };
  auto found = collect<detail::BteChainResult, CyclicWord>(
      ChainSpace::both, report.max_chain_len, std::span<const CyclicWord>(inputs), eval,
      [](const detail::BteChainResult& r) { return r.failure.has_value(); },
      detail::collect_options(opts));

  if (found.stopped) {
    for (auto& [chain, r] : found.results) {
      if (!r.failure) continue;
      BteFailure f = std::move(*r.failure);
      if (swapped) std::swap(f.u_lengths, f.v_lengths);
      report.chains_examined = canonical_position(ChainSpace::both, f.chain);
      report.failing_condition = std::move(f);
      return report;
    }
  }

  std::set<ExactRational> delta;
  for (const auto& [chain, r] : found.results) delta.insert(r.ratios.begin(), r.ratios.end());
  report.answer = true;
  report.chains_examined = chain_count(ChainSpace::both, report.max_chain_len);
  report.delta_set_size = delta.size();
  ExactRational lo = *delta.begin();
  ExactRational hi = *delta.rbegin();
  if (swapped) {
    std::tie(lo, hi) = std::pair{1 / hi, 1 / lo};
  }
  report.bounds = std::pair{lo, hi};
  return report;
}

/// (min Delta, max Delta) for a pair already known to be boundedly translation equivalent.
inline std::pair<ExactRational, ExactRational> compute_delta_bounds(const Word& u, const Word& v,
                                                                    const SearchOptions& opts = {}) {
  const BteReport r = bounded_translation_equivalent(u, v, opts);
  if (!r.answer) throw ContractViolation("delta bounds requested for a pair that is not boundedly translation equivalent");
  return *r.bounds;
}

// ---------------------------------------------------------------------------
// Fixed-point groups

enum class FixAnswer { yes, no, inconclusive };

inline const char* fix_answer_name(FixAnswer a) {
  switch (a) {
    case FixAnswer::yes: return "yes";
    case FixAnswer::no: return "no";
    case FixAnswer::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

struct FixOptions {
  std::size_t verification_depth = 8;
  /// Defaults to 64, and never exceeds the theoretical bound (2^{4|H|+4}+1)|H|.
  std::optional<std::size_t> delta_step_cap;
  /// Defaults to 4(|H|+4).
  std::optional<std::size_t> word_length_cap;
  SearchOptions search;
};

/// psi = w1_map o delta' o chain, where delta' applies delta_composition[0] first.
struct FixWitness {
  Automorphism w1_map;
  std::vector<Named> delta_composition;
  Chain chain;

  Automorphism automorphism() const {
    Automorphism d;
    for (Named n : delta_composition) d = compose(named(n), d);
    return compose(w1_map, compose(d, chain.automorphism()));
  }
};

struct FixReport {
  FixAnswer answer = FixAnswer::inconclusive;
  std::optional<FixWitness> witness;
  std::size_t verification_depth = 0;
  std::optional<Word> escaped_fixed_word;
  bool trivial_subgroup = false;
  std::size_t chains_examined = 0;
  std::size_t max_chain_len = 0;
  std::size_t candidates = 0;
  std::size_t delta_step_cap = 0;
  std::size_t word_length_cap = 0;
  /// Set when a delta search hit a cap; the chain that did so decides the answer.
  std::optional<Chain> truncated_at;
};

namespace detail {

using Tuple = std::vector<std::string>;

struct TupleHash {
  std::size_t operator()(const Tuple& t) const noexcept {
    std::size_t h = 0;
    for (const auto& s : t) h = h * 1000003U ^ std::hash<std::string>{}(s);
    return h;
  }
};

inline Tuple apply_tuple(const Automorphism& f, const Tuple& t) {
  Tuple out(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) f.apply_codes(t[i], out[i]);
  return out;
}

/// Outcome of a breadth-first closure over delta moves from one start tuple.
struct DeltaSearch {
  bool truncated = false;
  /// Per target index, the delta sequence (first applied first) of the first path found.
  std::vector<std::optional<std::vector<Named>>> paths;
};

inline constexpr std::array<Named, 4> delta_moves{Named::delta1, Named::delta2, Named::delta3,
                                                  Named::delta4};

/// Explores every tuple reachable from `start` by at most `step_cap` delta moves whose
/// components all stay within `length_cap`, then looks up each target.
inline DeltaSearch delta_search(const Tuple& start, const std::vector<Tuple>& targets,
                                std::size_t step_cap, std::size_t length_cap) {
  DeltaSearch out;
  out.paths.resize(targets.size());
  const auto within = [&](const Tuple& t) {
    return std::all_of(t.begin(), t.end(), [&](const std::string& s) { return s.size() <= length_cap; });
  };
  if (!within(start)) {
    out.truncated = true;
    return out;
  }
  static const std::array<Automorphism, 4> moves = {named(Named::delta1), named(Named::delta2),
                                                    named(Named::delta3), named(Named::delta4)};
  std::vector<Tuple> states{start};
  std::vector<std::int32_t> parent{-1};
  std::vector<std::uint8_t> move{0};
  std::unordered_map<Tuple, std::int32_t, TupleHash> index{{start, 0}};
  std::size_t level_begin = 0;
  for (std::size_t depth = 0; level_begin < states.size(); ++depth) {
    const std::size_t level_end = states.size();
    for (std::size_t i = level_begin; i < level_end; ++i) {
      for (std::uint8_t m = 0; m < 4; ++m) {
        Tuple next = apply_tuple(moves[m], states[i]);
        if (!within(next) || index.count(next) != 0) continue;
        if (depth == step_cap) {
          out.truncated = true;
          break;
        }
        index.emplace(next, static_cast<std::int32_t>(states.size()));
        states.push_back(std::move(next));
        parent.push_back(static_cast<std::int32_t>(i));
        move.push_back(m);
      }
      if (out.truncated) break;
    }
    if (out.truncated) break;
    level_begin = level_end;
  }
  for (std::size_t t = 0; t < targets.size(); ++t) {
    auto it = index.find(targets[t]);
    if (it == index.end()) continue;
    std::vector<Named> path;
    for (std::int32_t s = it->second; parent[s] >= 0; s = parent[s]) path.push_back(delta_moves[move[s]]);
    std::reverse(path.begin(), path.end());
    out.paths[t] = std::move(path);
  }
  return out;
}

/// Shared state for one fixed_point_group call.
class FixSearch {
 public:
  FixSearch(const Subgroup& h, std::size_t step_cap, std::size_t length_cap, std::size_t depth)
      : h_(h), step_cap_(step_cap), length_cap_(length_cap), words_(all_reduced_words(depth)) {
    for (const Automorphism& beta : all_w1()) {
      const Automorphism beta_inv = inverse(beta);
      Tuple t;
      std::vector<CyclicWord> ct;
      for (const Word& u : h.generators()) {
        Word img = beta_inv.apply(u);
        ct.emplace_back(img);
        t.push_back(img.codes());
      }
      targets_.push_back(std::move(t));
      cyclic_targets_.push_back(std::move(ct));
    }
  }

  struct Candidate {
    FixWitness witness;
    std::optional<Word> escape;  // empty when verified
  };

  struct ChainResult {
    bool truncated = false;
    std::vector<Candidate> candidates;
    bool verified() const {
      return !candidates.empty() && !candidates.back().escape.has_value();
    }
  };

  std::optional<ChainResult> evaluate(const Chain& chain, std::span<const Word> images) {
    std::vector<std::size_t> live;
    for (std::size_t b = 0; b < targets_.size(); ++b) {
      bool ok = true;
      for (std::size_t i = 0; ok && i < images.size(); ++i) ok = CyclicWord(images[i]) == cyclic_targets_[b][i];
      if (ok) live.push_back(b);
    }
    if (live.empty()) return std::nullopt;

    Tuple start;
    for (const Word& w : images) start.push_back(w.codes());
    const std::shared_ptr<const DeltaSearch> search = cached_search(start);
    ChainResult r;
    if (search->truncated) {
      r.truncated = true;
      return r;
    }
    for (std::size_t b : live) {
      if (!search->paths[b]) continue;
      FixWitness w{all_w1()[b], *search->paths[b], chain};
      const Automorphism psi = w.automorphism();
      for (const Word& u : h_.generators()) {
        if (psi.apply(u) != u) throw ContractViolation("candidate does not fix a generator");
      }
      Candidate c{std::move(w), escape_word(psi)};
      const bool done = !c.escape;
      r.candidates.push_back(std::move(c));
      if (done) break;
    }
    if (r.candidates.empty()) return std::nullopt;
    return r;
  }

  /// First word (shortlex, within the verification depth) fixed by `psi` and not in H.
  std::optional<Word> escape_word(const Automorphism& psi) const {
    for (const Word& w : words_) {
      if (!h_.contains(w) && psi.apply(w) == w) return w;
    }
    return std::nullopt;
  }

  /// Shortlex-least word fixed by all of `psis` and not in H.
  std::optional<Word> common_escape(const std::vector<Automorphism>& psis) const {
    for (const Word& w : words_) {
      if (h_.contains(w)) continue;
      if (std::all_of(psis.begin(), psis.end(), [&](const Automorphism& p) { return p.apply(w) == w; })) {
        return w;
      }
    }
    return std::nullopt;
  }

 private:
  std::shared_ptr<const DeltaSearch> cached_search(const Tuple& start) {
    {
      std::lock_guard lock(mutex_);
      auto it = cache_.find(start);
      if (it != cache_.end()) return it->second;
    }
    auto result = std::make_shared<const DeltaSearch>(delta_search(start, targets_, step_cap_, length_cap_));
    std::lock_guard lock(mutex_);
    return cache_.emplace(start, std::move(result)).first->second;
  }

  const Subgroup& h_;
  std::size_t step_cap_;
  std::size_t length_cap_;
  std::vector<Word> words_;
  std::vector<Tuple> targets_;
  std::vector<std::vector<CyclicWord>> cyclic_targets_;
  std::mutex mutex_;
  std::unordered_map<Tuple, std::shared_ptr<const DeltaSearch>, TupleHash> cache_;
};

/// (2^{4n+4}+1) n, saturating.
inline std::size_t theoretical_delta_bound(std::size_t norm) {
  constexpr std::size_t max = std::numeric_limits<std::size_t>::max();
  const std::size_t e = 4 * norm + 4;
  if (e >= 63) return norm == 0 ? 0 : max;
  const std::size_t base = (std::size_t{1} << e) + 1;
  return norm > max / base ? max : base * norm;
}

}  // namespace detail

inline FixReport fixed_point_group(const Subgroup& h, const FixOptions& opts = {}) {
  const std::size_t norm = subgroup_norm(h);
  FixReport report;
  report.trivial_subgroup = h.is_trivial();
  report.verification_depth = opts.verification_depth;
  report.max_chain_len = opts.search.max_chain_len.value_or(4 * norm + 4);
  report.delta_step_cap = std::min(detail::theoretical_delta_bound(norm), opts.delta_step_cap.value_or(64));
  report.word_length_cap = opts.word_length_cap.value_or(4 * (norm + 4));

  detail::FixSearch search(h, report.delta_step_cap, report.word_length_cap, opts.verification_depth);
  using Result = detail::FixSearch::ChainResult;
  auto found = collect<Result, Word>(
      ChainSpace::both, report.max_chain_len, std::span<const Word>(h.generators()),
      [&](const ChainVisit<Word>& v) { return search.evaluate(v.chain, v.images); },
      [](const Result& r) { return r.truncated || r.verified(); },
      detail::collect_options(opts.search));

  std::vector<Automorphism> refuted;
  for (const auto& [chain, r] : found.results) {
    report.candidates += r.candidates.size();
    if (r.truncated) {
      report.answer = FixAnswer::inconclusive;
      report.truncated_at = chain;
      report.chains_examined = canonical_position(ChainSpace::both, chain);
      return report;
    }
    if (r.verified()) {
      report.answer = FixAnswer::yes;
      report.witness = r.candidates.back().witness;
      report.chains_examined = canonical_position(ChainSpace::both, chain);
      return report;
    }
    for (const auto& c : r.candidates) refuted.push_back(c.witness.automorphism());
  }
  report.answer = FixAnswer::no;
  report.chains_examined = chain_count(ChainSpace::both, report.max_chain_len);
  if (!refuted.empty()) report.escaped_fixed_word = search.common_escape(refuted);
  return report;
}

}  // namespace f2aut
