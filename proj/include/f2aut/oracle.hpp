#pragma once

// Brute-force ground truth: every product of at most `depth` Whitehead factors,
// deduplicated by the image pair.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "f2aut/autos.hpp"
#include "f2aut/errors.hpp"
#include "f2aut/rational.hpp"
#include "f2aut/words.hpp"

namespace f2aut {

class AutoCatalog {
 public:
  static constexpr std::size_t default_hard_cap = 12;

  /// The 16 factors: the eight W1 maps, sigma, sigma^-1, tau, tau^-1, delta1..delta4.
  static const std::vector<Automorphism>& factors() {
    static const std::vector<Automorphism> gens = [] {
      std::vector<Automorphism> out = all_w1();
      for (Named n : {Named::sigma, Named::sigma_inv, Named::tau, Named::tau_inv, Named::delta1,
                      Named::delta2, Named::delta3, Named::delta4}) {
        out.push_back(named(n));
      }
      return out;
    }();
    return gens;
  }

  static AutoCatalog build(std::size_t depth, std::size_t hard_cap = default_hard_cap) {
    if (depth > hard_cap) {
      throw ResourceError("catalog depth " + std::to_string(depth) + " exceeds the cap of " +
                          std::to_string(hard_cap));
    }
    AutoCatalog cat;
    cat.depth_ = depth;
    cat.push(std::string(1, '\0'), std::string(1, '\2'), -1, 0);
    cat.level_ends_.push_back(1);
    const auto& gens = factors();
    for (std::size_t d = 1; d <= depth; ++d) {
      const std::size_t begin = d == 1 ? 0 : cat.level_ends_[d - 2];
      const std::size_t end = cat.level_ends_[d - 1];
      for (std::size_t i = begin; i < end; ++i) {
        for (std::size_t g = 0; g < gens.size(); ++g) {
          std::string ia;
          std::string ib;
          gens[g].apply_codes(cat.store_->image_a[i], ia);
          gens[g].apply_codes(cat.store_->image_b[i], ib);
          cat.push(std::move(ia), std::move(ib), static_cast<std::int32_t>(i), static_cast<std::uint8_t>(g));
        }
      }
      cat.level_ends_.push_back(cat.store_->image_a.size());
    }
    return cat;
  }

  std::size_t depth() const noexcept { return depth_; }
  std::size_t size() const noexcept { return store_->image_a.size(); }

  /// Number of entries whose shortest factorisation has at most `d` factors.
  std::size_t size_at_depth(std::size_t d) const { return level_ends_.at(d); }

  Automorphism at(std::size_t i) const {
    return Automorphism::trusted(Word::from_reduced_codes(store_->image_a[i]), Word::from_reduced_codes(store_->image_b[i]));
  }

  /// Indices into factors(), first applied first.
  std::vector<std::size_t> factorisation(std::size_t i) const {
    std::vector<std::size_t> out;
    for (auto j = static_cast<std::int32_t>(i); store_->parent[j] >= 0; j = store_->parent[j]) out.push_back(store_->gen[j]);
    return {out.rbegin(), out.rend()};
  }

  bool contains(const Automorphism& f) const {
    return keys_.find(Probe{f.image_of_a().codes(), f.image_of_b().codes()}) != keys_.end();
  }

  /// Image of `w` (reduced codes) under entry `i`, freely reduced.
  void apply_codes(std::size_t i, std::string_view w, std::string& out) const {
    out.clear();
    for (char c : w) {
      const std::string& img = (c >> 1) == 0 ? store_->image_a[i] : store_->image_b[i];
      if ((c & 1) == 0) {
        detail::append_reduced(out, img);
      } else {
        detail::append_inverse_reduced(out, img);
      }
    }
  }

 private:
  struct Store;

  struct Probe {
    std::string_view a;
    std::string_view b;
  };

  // Transparent hashing lets lookups use a Probe without inserting an entry.
  struct KeyHash {
    using is_transparent = void;
    const Store* store;
    std::size_t operator()(std::uint32_t i) const noexcept { return (*this)(probe(*store, i)); }
    std::size_t operator()(const Probe& p) const noexcept {
      const std::size_t h = std::hash<std::string_view>{}(p.a);
      return h ^ (std::hash<std::string_view>{}(p.b) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
    }
  };
  struct KeyEq {
    using is_transparent = void;
    const Store* store;
    static bool same(const Probe& x, const Probe& y) noexcept { return x.a == y.a && x.b == y.b; }
    bool operator()(std::uint32_t x, std::uint32_t y) const noexcept { return same(probe(*store, x), probe(*store, y)); }
    bool operator()(const Probe& x, std::uint32_t y) const noexcept { return same(x, probe(*store, y)); }
    bool operator()(std::uint32_t x, const Probe& y) const noexcept { return same(probe(*store, x), y); }
  };

  static Probe probe(const Store& s, std::uint32_t i) { return {s.image_a[i], s.image_b[i]}; }

  void push(std::string ia, std::string ib, std::int32_t parent, std::uint8_t gen) {
    store_->image_a.push_back(std::move(ia));
    store_->image_b.push_back(std::move(ib));
    store_->parent.push_back(parent);
    store_->gen.push_back(gen);
    if (!keys_.insert(static_cast<std::uint32_t>(store_->image_a.size() - 1)).second) {
      store_->image_a.pop_back();
      store_->image_b.pop_back();
      store_->parent.pop_back();
      store_->gen.pop_back();
    }
  }

  // Entries live behind a pointer so the hash functors stay valid when the catalog moves.
  struct Store {
    std::vector<std::string> image_a;
    std::vector<std::string> image_b;
    std::vector<std::int32_t> parent;
    std::vector<std::uint8_t> gen;
  };

  AutoCatalog()
      : store_(std::make_unique<Store>()), keys_(16, KeyHash{store_.get()}, KeyEq{store_.get()}) {}

  std::size_t depth_ = 0;
  std::unique_ptr<Store> store_;
  std::vector<std::size_t> level_ends_;
  std::unordered_set<std::uint32_t, KeyHash, KeyEq> keys_;
};

inline AutoCatalog enumerate_automorphisms(std::size_t depth,
                                           std::size_t hard_cap = AutoCatalog::default_hard_cap) {
  return AutoCatalog::build(depth, hard_cap);
}

/// A nonempty cyclic word whose exponent sums both vanish can never become positive:
/// the abelianisation of an automorphism is invertible and a positive word has a
/// nonzero exponent vector.
inline bool abelian_obstruction(const Word& u) {
  return cyclic_length(u) > 0 && abelianize(u) == AbelianImage{0, 0};
}

struct OraclePositivity {
  /// False means "no_within_depth", not a proof of non-positivity.
  bool yes = false;
  std::optional<Automorphism> witness;
  std::optional<std::size_t> witness_index;
};

namespace detail {

inline bool cyclically_positive(std::string_view reduced) {
  const std::size_t lo = cyclic_peel(reduced);
  for (std::size_t i = lo; i < reduced.size() - lo; ++i) {
    if ((reduced[i] & 1) != 0) return false;
  }
  return true;
}

}  // namespace detail

inline OraclePositivity oracle_potentially_positive(const Word& u, const AutoCatalog& catalog) {
  OraclePositivity out;
  std::string img;
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    catalog.apply_codes(i, u.codes(), img);
    if (detail::cyclically_positive(img)) {
      out.yes = true;
      out.witness = catalog.at(i);
      out.witness_index = i;
      return out;
    }
  }
  return out;
}

inline OraclePositivity oracle_potentially_positive(const Word& u, std::size_t depth) {
  return oracle_potentially_positive(u, AutoCatalog::build(depth));
}

/// ||phi(u)|| / ||phi(v)|| for every cataloged phi, in catalog order.
inline std::vector<ExactRational> sample_ratios(const Word& u, const Word& v, const AutoCatalog& catalog) {
  if (cyclic_length(u) == 0 || cyclic_length(v) == 0) {
    throw InvalidInput("ratios need words of nonzero cyclic length");
  }
  std::vector<ExactRational> out;
  out.reserve(catalog.size());
  std::string iu;
  std::string iv;
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    catalog.apply_codes(i, u.codes(), iu);
    catalog.apply_codes(i, v.codes(), iv);
    const auto lu = static_cast<long long>(iu.size() - 2 * detail::cyclic_peel(iu));
    const auto lv = static_cast<long long>(iv.size() - 2 * detail::cyclic_peel(iv));
    out.emplace_back(lu, lv);
  }
  return out;
}

inline std::vector<ExactRational> sample_ratios(const Word& u, const Word& v, std::size_t depth) {
  return sample_ratios(u, v, AutoCatalog::build(depth));
}

}  // namespace f2aut
