#pragma once

// Chains of sigma/tau steps and their bounded enumeration.
//
// A chain of polarity C1 is a sequence over {sigma, tau}; a C2 chain is a sequence
// over {sigma^-1, tau^-1}. steps[0] is applied first. Chains are visited in
// canonical order: ascending length, then C1 before C2, then lexicographically
// with sigma < tau. The empty chain is visited once, tagged C1.
//
// Each length is traversed by a depth-first pass with an explicit stack that holds
// one image set per level, so memory stays O(depth x image size). Internal nodes of
// earlier lengths are recomputed on every pass (iterative deepening), which at most
// doubles the number of automorphism applications.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <unordered_set>
#include <utility>
#include <vector>

#include "f2aut/autos.hpp"
#include "f2aut/errors.hpp"
#include "f2aut/words.hpp"

namespace f2aut {

enum class Polarity : std::uint8_t { c1, c2 };
enum class ChainSpace : std::uint8_t { c1, c2, both };

inline const char* polarity_name(Polarity p) { return p == Polarity::c1 ? "C1" : "C2"; }

/// The two steps available to a polarity, in enumeration order.
inline std::pair<Step, Step> polarity_steps(Polarity p) {
  return p == Polarity::c1 ? std::pair{Step::sigma, Step::tau}
                           : std::pair{Step::sigma_inv, Step::tau_inv};
}

struct Chain {
  Polarity polarity = Polarity::c1;
  std::vector<Step> steps;

  std::size_t length() const noexcept { return steps.size(); }

  /// "s"/"t" for sigma/tau, "S"/"T" for the inverses.
  std::string steps_str() const {
    std::string out;
    for (Step s : steps) out.push_back(step_char(s));
    return out;
  }

  /// The composite automorphism, steps[0] innermost.
  Automorphism automorphism() const {
    Automorphism out;
    for (Step s : steps) out = compose(step_automorphism(s), out);
    return out;
  }

  std::size_t count(Step s) const { return static_cast<std::size_t>(std::count(steps.begin(), steps.end(), s)); }

  /// Exponent runs in application order, e.g. "ssts" -> {(s,2),(t,1),(s,1)}.
  std::vector<std::pair<Step, std::size_t>> runs() const {
    std::vector<std::pair<Step, std::size_t>> out;
    for (Step s : steps) {
      if (!out.empty() && out.back().first == s) {
        ++out.back().second;
      } else {
        out.emplace_back(s, 1);
      }
    }
    return out;
  }

  friend bool operator==(const Chain& x, const Chain& y) {
    return x.steps == y.steps && (x.steps.empty() || x.polarity == y.polarity);
  }
};

/// Builds a chain from its step string. Mixed-polarity strings are rejected.
inline Chain parse_chain(std::string_view steps) {
  Chain c;
  bool seen_c1 = false;
  bool seen_c2 = false;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    switch (steps[i]) {
      case 's': c.steps.push_back(Step::sigma); seen_c1 = true; break;
      case 't': c.steps.push_back(Step::tau); seen_c1 = true; break;
      case 'S': c.steps.push_back(Step::sigma_inv); seen_c2 = true; break;
      case 'T': c.steps.push_back(Step::tau_inv); seen_c2 = true; break;
      default: throw ParseError("invalid chain step '" + std::string(1, steps[i]) + "'", i);
    }
  }
  if (seen_c1 && seen_c2) throw ParseError("chain mixes C1 and C2 steps", 0);
  c.polarity = seen_c2 ? Polarity::c2 : Polarity::c1;
  return c;
}

inline Word apply_chain(const Chain& c, const Word& w) {
  Word out = w;
  for (Step s : c.steps) out = step_automorphism(s).apply(out);
  return out;
}

inline CyclicWord apply_chain(const Chain& c, const CyclicWord& w) {
  CyclicWord out = w;
  for (Step s : c.steps) out = step_automorphism(s).apply_cyclic(out);
  return out;
}

/// [w, step(w), ..., step^count(w)].
inline std::vector<CyclicWord> chain_powers(const CyclicWord& w, Step step, std::size_t count) {
  std::vector<CyclicWord> out{w};
  out.reserve(count + 1);
  const Automorphism& f = step_automorphism(step);
  for (std::size_t i = 0; i < count; ++i) out.push_back(f.apply_cyclic(out.back()));
  return out;
}

/// Cyclic lengths of chain_powers(w, step, count) without canonical rotation.
inline std::vector<std::size_t> power_lengths(const CyclicWord& w, Step step, std::size_t count) {
  std::vector<std::size_t> out{w.length()};
  out.reserve(count + 1);
  const Automorphism& f = step_automorphism(step);
  std::string cur = w.codes();
  std::string next;
  for (std::size_t i = 0; i < count; ++i) {
    next.clear();
    f.apply_codes(cur, next);
    const std::size_t peel = detail::cyclic_peel(next);
    cur.assign(next, peel, next.size() - 2 * peel);
    out.push_back(cur.size());
  }
  return out;
}

template <class Image>
struct ChainVisit {
  const Chain& chain;
  std::span<const Image> images;
};

enum class VisitAction { proceed, prune, stop };

struct TraversalSummary {
  std::size_t visited = 0;
  bool stopped = false;
  /// Largest number of image sets alive at once during any depth-first pass.
  std::size_t peak_image_sets = 0;
  std::size_t applications = 0;
};

struct EnumerateOptions {
  /// Abort with ResourceError when an intermediate image exceeds this length.
  std::optional<std::size_t> image_length_cap;
};

/// Number of chains of length <= max_len in a chain space.
inline std::size_t chain_count(ChainSpace space, std::size_t max_len) {
  const std::size_t per = (std::size_t{1} << (max_len + 1)) - 1;
  return space == ChainSpace::both ? 2 * per - 1 : per;
}

/// One-based position of `c` in the canonical order of `space`.
inline std::size_t canonical_position(ChainSpace space, const Chain& c) {
  const std::size_t len = c.length();
  std::size_t before = len == 0 ? 0 : chain_count(space, len - 1);
  std::size_t bits = 0;
  for (Step s : c.steps) bits = (bits << 1) | (s == Step::tau || s == Step::tau_inv ? 1U : 0U);
  if (space == ChainSpace::both && len > 0 && c.polarity == Polarity::c2) {
    before += std::size_t{1} << len;
  }
  return before + bits + 1;
}

namespace detail {

inline CyclicWord advance(Step s, const CyclicWord& w) { return step_automorphism(s).apply_cyclic(w); }
inline Word advance(Step s, const Word& w) { return step_automorphism(s).apply(w); }
inline std::size_t image_size(const CyclicWord& w) { return w.length(); }
inline std::size_t image_size(const Word& w) { return w.size(); }

inline std::uint64_t prefix_key(const std::vector<Step>& steps) {
  std::uint64_t key = 1;
  for (Step s : steps) key = (key << 1) | (s == Step::tau || s == Step::tau_inv ? 1U : 0U);
  return key;
}

struct PruneSets {
  std::unordered_set<std::uint64_t> c1;
  std::unordered_set<std::uint64_t> c2;
  const std::unordered_set<std::uint64_t>& of(Polarity p) const { return p == Polarity::c1 ? c1 : c2; }
  std::unordered_set<std::uint64_t>& of(Polarity p) { return p == Polarity::c1 ? c1 : c2; }
};

template <class Image>
std::vector<Image> advance_all(Step s, std::span<const Image> images, const EnumerateOptions& opts,
                               TraversalSummary& summary) {
  std::vector<Image> out;
  out.reserve(images.size());
  for (const Image& img : images) {
    out.push_back(advance(s, img));
    ++summary.applications;
    if (opts.image_length_cap && image_size(out.back()) > *opts.image_length_cap) {
      throw ResourceError("intermediate image length " + std::to_string(image_size(out.back())) +
                          " exceeds cap " + std::to_string(*opts.image_length_cap));
    }
  }
  return out;
}

/// Visits every chain of exactly `depth` steps extending `start` (whose images are
/// `start_images`) in lexicographic order. Returns false when the visitor stopped.
template <class Image, class Fn>
bool dfs_level(Polarity polarity, const std::vector<Step>& start, std::vector<Image> start_images,
               std::size_t depth, Fn&& fn, const PruneSets* pruned, const EnumerateOptions& opts,
               TraversalSummary& summary) {
  struct Frame {
    std::vector<Image> images;
    int next_child = 0;
  };
  const auto [first, second] = polarity_steps(polarity);
  Chain chain{polarity, start};
  std::vector<Frame> stack;
  stack.push_back({std::move(start_images), 0});
  const std::size_t base = start.size();
  summary.peak_image_sets = std::max(summary.peak_image_sets, stack.size());

  while (!stack.empty()) {
    Frame& top = stack.back();
    const std::size_t level = base + stack.size() - 1;
    if (level == depth) {
      ++summary.visited;
      const VisitAction action = fn(ChainVisit<Image>{chain, top.images});
      if (action == VisitAction::stop) return false;
      stack.pop_back();
      if (chain.steps.size() > base) chain.steps.pop_back();
      continue;
    }
    if (top.next_child == 2) {
      stack.pop_back();
      if (chain.steps.size() > base) chain.steps.pop_back();
      continue;
    }
    const Step s = top.next_child++ == 0 ? first : second;
    chain.steps.push_back(s);
    if (pruned != nullptr && pruned->of(polarity).count(prefix_key(chain.steps)) != 0) {
      chain.steps.pop_back();
      continue;
    }
    std::vector<Image> child = advance_all<Image>(s, top.images, opts, summary);
    stack.push_back({std::move(child), 0});
    summary.peak_image_sets = std::max(summary.peak_image_sets, stack.size());
  }
  return true;
}

/// The (length, polarity) blocks of a chain space in canonical order.
inline std::vector<std::pair<std::size_t, Polarity>> blocks(ChainSpace space, std::size_t max_len) {
  std::vector<std::pair<std::size_t, Polarity>> out;
  for (std::size_t len = 0; len <= max_len; ++len) {
    if (space != ChainSpace::c2) out.emplace_back(len, Polarity::c1);
    if (space == ChainSpace::c2 || (space == ChainSpace::both && len > 0)) {
      out.emplace_back(len, Polarity::c2);
    }
  }
  return out;
}

}  // namespace detail

/// Visits every chain of `space` with length <= max_len in canonical order. The
/// visitor receives a ChainVisit<Image> and may prune the subtree below the visited
/// chain or stop the traversal.
template <class Image, class Visitor>
TraversalSummary enumerate_images(ChainSpace space, std::size_t max_len, std::span<const Image> inputs,
                                  Visitor&& visit, const EnumerateOptions& opts = {}) {
  if (max_len > 60) throw ResourceError("max chain length above 60 is not enumerable");
  TraversalSummary summary;
  detail::PruneSets pruned;
  const std::vector<Image> roots(inputs.begin(), inputs.end());
  for (const auto& [len, polarity] : detail::blocks(space, max_len)) {
    auto fn = [&](const ChainVisit<Image>& v) {
      const VisitAction action = visit(v);
      if (action == VisitAction::prune) {
        pruned.of(v.chain.steps.empty() ? Polarity::c1 : v.chain.polarity)
            .insert(detail::prefix_key(v.chain.steps));
        if (v.chain.steps.empty()) pruned.c2.insert(detail::prefix_key(v.chain.steps));
      }
      return action;
    };
    // A pruned empty chain removes everything below it.
    if (len > 0 && pruned.of(polarity).count(detail::prefix_key({})) != 0) continue;
    if (!detail::dfs_level<Image>(polarity, {}, roots, len, fn,
                                  pruned.c1.empty() && pruned.c2.empty() ? nullptr : &pruned, opts,
                                  summary)) {
      summary.stopped = true;
      break;
    }
  }
  return summary;
}

/// Cyclic-word enumeration: images are the cyclic images of the inputs under the chain.
template <class Visitor>
TraversalSummary enumerate(ChainSpace space, std::size_t max_len, std::span<const CyclicWord> inputs,
                           Visitor&& visit, const EnumerateOptions& opts = {}) {
  return enumerate_images<CyclicWord>(space, max_len, inputs, std::forward<Visitor>(visit), opts);
}

struct CollectOptions {
  unsigned workers = 1;
  EnumerateOptions enumerate;
};

template <class R>
struct Collected {
  std::vector<std::pair<Chain, R>> results;
  /// Chains evaluated, counting whole (length, polarity) blocks up to the stopping block.
  std::size_t evaluated = 0;
  bool stopped = false;
};

/// Evaluates `eval` on every chain of `space` with length <= max_len and returns the
/// non-empty results in canonical order. After each (length, polarity) block, stops
/// if some result satisfies `is_final`. With several workers each block is split into
/// prefix subtrees evaluated concurrently; the output does not depend on the worker
/// count. `eval` must be safe to call concurrently.
template <class R, class Image, class Eval, class IsFinal>
Collected<R> collect(ChainSpace space, std::size_t max_len, std::span<const Image> inputs, Eval&& eval,
                     IsFinal&& is_final, const CollectOptions& opts = {}) {
  if (max_len > 60) throw ResourceError("max chain length above 60 is not enumerable");
  Collected<R> out;
  const std::vector<Image> roots(inputs.begin(), inputs.end());
  const unsigned workers = std::max(1U, opts.workers);
  std::size_t prefix_bits = 0;
  while ((std::size_t{1} << prefix_bits) < 4 * static_cast<std::size_t>(workers) && workers > 1) {
    ++prefix_bits;
  }

  for (const auto& [len, polarity] : detail::blocks(space, max_len)) {
    const std::size_t p = std::min(len, prefix_bits);
    const std::size_t tasks = std::size_t{1} << p;
    std::vector<std::vector<std::pair<Chain, R>>> task_results(tasks);
    std::vector<std::exception_ptr> errors(tasks);
    const auto [first, second] = polarity_steps(polarity);

    auto run_task = [&](std::size_t t) {
      try {
        std::vector<Step> prefix;
        for (std::size_t i = 0; i < p; ++i) {
          prefix.push_back(((t >> (p - 1 - i)) & 1U) != 0 ? second : first);
        }
        TraversalSummary local;
        std::vector<Image> images = roots;
        for (Step s : prefix) images = detail::advance_all<Image>(s, images, opts.enumerate, local);
        auto fn = [&](const ChainVisit<Image>& v) {
          std::optional<R> r = eval(v);
          if (r) task_results[t].emplace_back(v.chain, std::move(*r));
          return VisitAction::proceed;
        };
        detail::dfs_level<Image>(polarity, prefix, std::move(images), len, fn, nullptr,
                                 opts.enumerate, local);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    };

    if (workers == 1 || tasks == 1) {
      for (std::size_t t = 0; t < tasks; ++t) run_task(t);
    } else {
      std::atomic<std::size_t> next{0};
      std::vector<std::thread> pool;
      const std::size_t n_threads = std::min<std::size_t>(workers, tasks);
      for (std::size_t i = 0; i < n_threads; ++i) {
        pool.emplace_back([&] {
          for (std::size_t t = next++; t < tasks; t = next++) run_task(t);
        });
      }
      for (auto& th : pool) th.join();
    }
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }

    out.evaluated += std::size_t{1} << len;
    bool final_seen = false;
    for (auto& tr : task_results) {
      for (auto& item : tr) {
        final_seen = final_seen || is_final(item.second);
        out.results.push_back(std::move(item));
      }
    }
    if (final_seen) {
      out.stopped = true;
      break;
    }
  }
  return out;
}

}  // namespace f2aut
