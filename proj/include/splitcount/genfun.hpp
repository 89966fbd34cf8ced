#pragma once

#include <bit>
#include <unordered_map>
#include <vector>

#include "splitcount/endofunction.hpp"
#include "splitcount/errors.hpp"
#include "splitcount/multipoly.hpp"
#include "splitcount/unipoly.hpp"

namespace splitcount {

namespace detail {

/// g(v) = 1 + t * prod_{children c} g(c), computed over a post-ordered tree.
inline UniPoly tree_invariant_gf(const FunctionalGraph& g, const AttachedTree& tree) {
  std::unordered_map<int, UniPoly> memo;
  memo.reserve(tree.postorder.size());
  const UniPoly t = UniPoly::monomial(1, 1);
  for (int v : tree.postorder) {
    UniPoly prod = UniPoly::one();
    for (int c : g.tree_children[static_cast<size_t>(v)]) {
      auto it = memo.find(c);
      prod = prod * it->second;
      memo.erase(it);
    }
    memo.emplace(v, UniPoly::one() + t * prod);
  }
  return memo.at(tree.root);
}

}  // namespace detail

/// Generating function for T-invariant subsets: the coefficient of t^i is the
/// number of invariant subsets of cardinality i. Computed component-wise as
/// prod_i (1 + t^{r_i} prod_j g_{tree}(t)).
inline UniPoly invariant_gf(const FunctionalGraph& g) {
  UniPoly result = UniPoly::one();
  for (const Component& comp : g.components) {
    UniPoly factor = UniPoly::monomial(1, comp.cycle_len());
    for (const AttachedTree& tree : comp.trees)
      factor = factor * detail::tree_invariant_gf(g, tree);
    result = result * (UniPoly::one() + factor);
  }
  return result;
}

inline UniPoly invariant_gf(const Endofunction& T) { return invariant_gf(decompose(T)); }

namespace detail {

/// Flag generating functions of a rooted tree at every offset: the returned
/// vector maps offset i in [l..d] (index i - l) to the gf of (d-i+1)-flags in
/// the variables t_i..t_d. Uses g(v, i) = t_i * prod_c g(c, i) + g(v, i+1),
/// with children results consumed exactly once.
inline std::vector<MultiPoly> flag_tree_offsets(const FunctionalGraph& g,
                                                const AttachedTree& tree, int l, int d) {
  std::unordered_map<int, std::vector<MultiPoly>> memo;
  memo.reserve(tree.postorder.size());
  for (int v : tree.postorder) {
    const auto& kids = g.tree_children[static_cast<size_t>(v)];
    std::vector<MultiPoly> desc;  // offsets d, d-1, ..., l
    desc.reserve(static_cast<size_t>(d - l + 1));
    for (int i = d; i >= l; --i) {
      MultiPoly shifted(d);
      if (kids.empty()) {
        shifted = MultiPoly::variable(d, i);
      } else {
        const auto& first = memo.at(kids[0])[static_cast<size_t>(i - l)];
        if (kids.size() == 1) {
          shifted = first.scale_shift(i, 1);
        } else {
          MultiPoly prod = first;
          for (size_t k = 1; k < kids.size(); ++k)
            prod = prod * memo.at(kids[k])[static_cast<size_t>(i - l)];
          shifted = prod.scale_shift(i, 1);
        }
      }
      desc.push_back(desc.empty() ? std::move(shifted) : shifted + desc.back());
    }
    for (int c : kids) memo.erase(c);
    std::vector<MultiPoly> asc(desc.rbegin(), desc.rend());
    memo.emplace(v, std::move(asc));
  }
  return std::move(memo.at(tree.root));
}

}  // namespace detail

/// Flag gf of one attached tree under the root-maps-to-itself convention,
/// in the variables t_l..t_d (lower variables absent).
inline MultiPoly flag_gf_tree(const FunctionalGraph& g, const AttachedTree& tree,
                              int l, int d) {
  if (l < 1 || l > d) throw DimensionMismatch("offset l must satisfy 1 <= l <= d");
  return detail::flag_tree_offsets(g, tree, l, d)[0];
}

/// Generating function for d-flags of T-invariant subsets: the coefficient of
/// t^J counts flags with |U_i| = j_1 + ... + j_i. Every term has total degree
/// n. Computed as prod_i ( sum_l t_l^{r_i} prod_j g_tree_j(t_l..t_d) ).
inline MultiPoly flag_gf(const FunctionalGraph& g, int d) {
  if (d < 1) throw InvalidD("d must be >= 1");
  MultiPoly result = MultiPoly::one(d);
  for (const Component& comp : g.components) {
    std::vector<std::vector<MultiPoly>> tree_offsets;
    tree_offsets.reserve(comp.trees.size());
    for (const AttachedTree& tree : comp.trees)
      tree_offsets.push_back(detail::flag_tree_offsets(g, tree, 1, d));
    MultiPoly factor(d);
    for (int l = d; l >= 1; --l) {
      MultiPoly term(d);
      if (comp.trees.empty()) {
        term = MultiPoly::variable(d, l).scale_shift(l, comp.cycle_len() - 1);
      } else {
        term = tree_offsets[0][static_cast<size_t>(l - 1)];
        for (size_t j = 1; j < tree_offsets.size(); ++j)
          term = term * tree_offsets[j][static_cast<size_t>(l - 1)];
        term = term.scale_shift(l, comp.cycle_len());
      }
      factor += term;
    }
    result = result * factor;
  }
  return result;
}

inline MultiPoly flag_gf(const Endofunction& T, int d) { return flag_gf(decompose(T), d); }

/// Oracle: tally all 2^n subsets by invariance and cardinality.
inline UniPoly invariant_subsets_bruteforce(const Endofunction& T, int cap = 20) {
  const int n = T.n();
  if (n > cap)
    throw CapExceeded("invariant-subset brute force capped at n = " + std::to_string(cap));
  std::vector<Int> coeffs(static_cast<size_t>(n) + 1);
  const uint32_t full = (n == 32) ? 0xffffffffu : ((1u << n) - 1);
  for (uint32_t mask = 0;; ++mask) {
    bool invariant = true;
    for (int v = 0; v < n && invariant; ++v)
      if ((mask >> v & 1u) && !(mask >> T(v) & 1u)) invariant = false;
    if (invariant) ++coeffs[static_cast<size_t>(std::popcount(mask))];
    if (mask == full) break;
  }
  return UniPoly(std::move(coeffs));
}

/// Oracle: exact d-flag counts by dynamic programming over the lattice of
/// invariant subsets. f_i(U) = sum over invariant U' <= U of
/// f_{i-1}(U') * t_i^{|U| - |U'|}; the answer is f_d([n]).
inline MultiPoly flag_count_bruteforce(const Endofunction& T, int d, int cap = 12) {
  const int n = T.n();
  if (d < 1) throw InvalidD("d must be >= 1");
  if (n > cap)
    throw CapExceeded("flag brute force capped at n = " + std::to_string(cap));
  const uint32_t full = (1u << n) - 1;

  std::vector<uint32_t> inv_masks;
  std::vector<int> index_of(static_cast<size_t>(full) + 1, -1);
  for (uint32_t mask = 0; mask <= full; ++mask) {
    bool invariant = true;
    for (int v = 0; v < n && invariant; ++v)
      if ((mask >> v & 1u) && !(mask >> T(v) & 1u)) invariant = false;
    if (invariant) {
      index_of[mask] = static_cast<int>(inv_masks.size());
      inv_masks.push_back(mask);
    }
  }

  std::vector<MultiPoly> cur(inv_masks.size(), MultiPoly::zero(d));
  cur[static_cast<size_t>(index_of[0])] = MultiPoly::one(d);
  for (int level = 1; level <= d; ++level) {
    const bool last = (level == d);
    std::vector<MultiPoly> next(inv_masks.size(), MultiPoly::zero(d));
    for (size_t j = 0; j < inv_masks.size(); ++j) {
      const uint32_t m = inv_masks[j];
      if (last && m != full) continue;
      MultiPoly acc(d);
      for (uint32_t s = m;; s = (s - 1) & m) {
        const int si = index_of[s];
        if (si >= 0 && !cur[static_cast<size_t>(si)].is_zero()) {
          const int gap = std::popcount(m) - std::popcount(s);
          acc += cur[static_cast<size_t>(si)].scale_shift(level, gap);
        }
        if (s == 0) break;
      }
      next[j] = std::move(acc);
    }
    cur = std::move(next);
  }
  return cur[static_cast<size_t>(index_of[full])];
}

}  // namespace splitcount
