#pragma once

// Finitely generated subgroups of F2 via folded Stallings core graphs.

#include <algorithm>
#include <array>
#include <cstddef>
#include <map>
#include <numeric>
#include <queue>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "f2aut/errors.hpp"
#include "f2aut/words.hpp"

namespace f2aut {

/// Folded core graph with base vertex 0. Vertices are numbered in breadth-first
/// order from the base (letters tried in the order a, a^-1, b, b^-1), so two
/// isomorphic based graphs have identical tables.
class StallingsGraph {
 public:
  static constexpr int none = -1;

  std::size_t vertex_count() const noexcept { return next_.size(); }
  std::size_t edge_count() const {
    std::size_t n = 0;
    for (const auto& row : next_) n += (row[0] != none) + (row[2] != none);
    return n;
  }
  static constexpr int base() noexcept { return 0; }

  /// Endpoint of the edge leaving `v` with label `x` (x^-1 follows an edge backwards).
  int target(int v, Letter x) const { return next_[v][static_cast<int>(x)]; }

  bool accepts(const Word& w) const {
    int v = base();
    for (char c : w.codes()) {
      v = next_[v][static_cast<unsigned char>(c)];
      if (v == none) return false;
    }
    return v == base();
  }

  const std::vector<std::array<int, 4>>& table() const noexcept { return next_; }

  friend bool operator==(const StallingsGraph&, const StallingsGraph&) = default;

  static StallingsGraph fold(const std::vector<Word>& generators);

 private:
  std::vector<std::array<int, 4>> next_;
};

namespace detail {

struct Edge {
  int from;
  int gen;  // 0 = a, 1 = b
  int to;
};

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  int find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  /// Merges two classes; the smaller creation index becomes the representative.
  bool unite(int x, int y) {
    x = find(x);
    y = find(y);
    if (x == y) return false;
    if (y < x) std::swap(x, y);
    parent_[y] = x;
    return true;
  }

 private:
  std::vector<int> parent_;
};

}  // namespace detail

inline StallingsGraph StallingsGraph::fold(const std::vector<Word>& generators) {
  using detail::Edge;
  int vertices = 1;
  std::vector<Edge> edges;
  for (const Word& g : generators) {
    int cur = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const int nxt = i + 1 == g.size() ? 0 : vertices++;
      const Letter x = g[i];
      if (is_positive(x)) {
        edges.push_back({cur, generator_index(x), nxt});
      } else {
        edges.push_back({nxt, generator_index(x), cur});
      }
      cur = nxt;
    }
  }

  // Merge until no vertex has two equally labelled edges in the same direction.
  detail::UnionFind uf(static_cast<std::size_t>(vertices));
  for (bool changed = true; changed;) {
    changed = false;
    std::map<std::pair<int, int>, int> out;
    std::map<std::pair<int, int>, int> in;
    for (const Edge& e : edges) {
      const int f = uf.find(e.from);
      const int t = uf.find(e.to);
      auto [it_out, fresh_out] = out.emplace(std::pair{f, e.gen}, t);
      if (!fresh_out && uf.find(it_out->second) != t) changed |= uf.unite(it_out->second, t);
      auto [it_in, fresh_in] = in.emplace(std::pair{uf.find(t), e.gen}, uf.find(f));
      if (!fresh_in && uf.find(it_in->second) != uf.find(f)) changed |= uf.unite(it_in->second, f);
    }
  }

  // Deduplicate edges on representatives.
  std::vector<Edge> folded;
  {
    std::map<std::tuple<int, int, int>, bool> seen;
    for (const Edge& e : edges) {
      Edge r{uf.find(e.from), e.gen, uf.find(e.to)};
      if (seen.emplace(std::tuple{r.from, r.gen, r.to}, true).second) folded.push_back(r);
    }
  }

  // Trim hanging trees: drop non-base vertices of degree <= 1 until none remain.
  std::vector<int> degree(static_cast<std::size_t>(vertices), 0);
  std::vector<bool> alive_edge(folded.size(), true);
  for (const Edge& e : folded) {
    ++degree[e.from];
    ++degree[e.to];
  }
  for (bool trimmed = true; trimmed;) {
    trimmed = false;
    for (std::size_t i = 0; i < folded.size(); ++i) {
      if (!alive_edge[i]) continue;
      const Edge& e = folded[i];
      const bool leaf_from = e.from != 0 && degree[e.from] == 1;
      const bool leaf_to = e.to != 0 && degree[e.to] == 1;
      if (leaf_from || leaf_to) {
        alive_edge[i] = false;
        --degree[e.from];
        --degree[e.to];
        trimmed = true;
      }
    }
  }

  std::map<int, std::array<int, 4>> adjacency;
  const std::array<int, 4> empty_row{none, none, none, none};
  adjacency.emplace(0, empty_row);
  for (std::size_t i = 0; i < folded.size(); ++i) {
    if (!alive_edge[i]) continue;
    adjacency.emplace(folded[i].from, empty_row);
    adjacency.emplace(folded[i].to, empty_row);
  }
  for (std::size_t i = 0; i < folded.size(); ++i) {
    if (!alive_edge[i]) continue;
    const Edge& e = folded[i];
    adjacency[e.from][2 * e.gen] = e.to;
    adjacency[e.to][2 * e.gen + 1] = e.from;
  }

  // Renumber breadth-first from the base.
  std::map<int, int> order;
  std::queue<int> queue;
  order[0] = 0;
  queue.push(0);
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop();
    for (int x = 0; x < 4; ++x) {
      const int t = adjacency[v][x];
      if (t != none && order.emplace(t, static_cast<int>(order.size())).second) queue.push(t);
    }
  }
  StallingsGraph g;
  g.next_.assign(order.size(), {none, none, none, none});
  for (const auto& [old, fresh] : order) {
    for (int x = 0; x < 4; ++x) {
      const int t = adjacency[old][x];
      g.next_[fresh][x] = t == none ? none : order.at(t);
    }
  }
  return g;
}

/// H = <u_1, ..., u_k>. Immutable after construction.
class Subgroup {
 public:
  /// Requires at least one generator (the identity is allowed).
  static Subgroup build(std::vector<Word> generators) {
    if (generators.empty()) throw InvalidInput("a subgroup needs at least one generator");
    Subgroup h;
    h.graph_ = StallingsGraph::fold(generators);
    h.generators_ = std::move(generators);
    return h;
  }

  const std::vector<Word>& generators() const noexcept { return generators_; }
  const StallingsGraph& graph() const noexcept { return graph_; }

  bool contains(const Word& w) const { return graph_.accepts(w); }

  /// Every generator is the identity.
  bool is_trivial() const {
    return std::all_of(generators_.begin(), generators_.end(), [](const Word& w) { return w.empty(); });
  }

  std::string str() const {
    std::string out;
    for (const Word& g : generators_) {
      if (!out.empty()) out += ",";
      out += g.str();
    }
    return out;
  }

 private:
  std::vector<Word> generators_;
  StallingsGraph graph_;
};

inline Subgroup build(std::vector<Word> generators) { return Subgroup::build(std::move(generators)); }

inline bool contains(const Subgroup& h, const Word& w) { return h.contains(w); }

/// Largest reduced length among the given generators.
inline std::size_t subgroup_norm(const Subgroup& h) {
  std::size_t n = 0;
  for (const Word& g : h.generators()) n = std::max(n, g.size());
  return n;
}

/// Parses "aab,ba" into a subgroup.
inline Subgroup parse_subgroup(std::string_view text) {
  std::vector<Word> gens;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = text.find(',', start);
    const std::string_view part = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    try {
      gens.push_back(parse_word(part));
    } catch (const ParseError& e) {
      throw ParseError(e.what(), start + e.position);
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return Subgroup::build(std::move(gens));
}

}  // namespace f2aut
