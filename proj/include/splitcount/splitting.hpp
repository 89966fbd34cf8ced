#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <vector>

#include "splitcount/endofunction.hpp"
#include "splitcount/errors.hpp"
#include "splitcount/unipoly.hpp"

namespace splitcount {

enum class SigmaMethod { BruteForce, LabelDP };

/// Result of counting d-splitting subsets. Witnesses, when collected, are
/// sorted 1-indexed node lists, one per splitting subset.
struct SplittingResult {
  Int sigma = 0;
  std::optional<std::vector<std::vector<int>>> witnesses;
  SigmaMethod method = SigmaMethod::LabelDP;
};

namespace detail {

inline void check_divides(int d, int n) {
  if (d < 1) throw InvalidD("d must be >= 1");
  if (n % d != 0)
    throw InvalidD("d = " + std::to_string(d) + " does not divide n = " + std::to_string(n));
}

/// Dynamic bitset of n bits as 64-bit words.
struct NodeSet {
  explicit NodeSet(int n) : n_bits(n), words(static_cast<size_t>((n + 63) / 64), 0) {}
  int n_bits;
  std::vector<uint64_t> words;

  void set(int v) { words[static_cast<size_t>(v >> 6)] |= uint64_t{1} << (v & 63); }
  bool test(int v) const { return words[static_cast<size_t>(v >> 6)] >> (v & 63) & 1; }
  int count() const {
    int c = 0;
    for (uint64_t w : words) c += std::popcount(w);
    return c;
  }
  void or_with(const NodeSet& o) {
    for (size_t i = 0; i < words.size(); ++i) words[i] |= o.words[i];
  }
  bool is_full() const { return count() == n_bits; }
};

inline NodeSet image_of(const Endofunction& T, const NodeSet& s) {
  NodeSet out(s.n_bits);
  for (size_t w = 0; w < s.words.size(); ++w) {
    uint64_t bits = s.words[w];
    while (bits) {
      const int v = static_cast<int>(w << 6) + std::countr_zero(bits);
      out.set(T(v));
      bits &= bits - 1;
    }
  }
  return out;
}

}  // namespace detail

/// True iff |W| = n/d and W u TW u ... u T^{d-1}W = [n]. Nodes are 1-indexed.
inline bool is_splitting(const Endofunction& T, int d, const std::vector<int>& w_nodes1) {
  const int n = T.n();
  detail::check_divides(d, n);
  detail::NodeSet w(n);
  for (int v : w_nodes1) {
    if (v < 1 || v > n) throw Error("node out of range: " + std::to_string(v));
    w.set(v - 1);
  }
  if (w.count() != n / d) return false;
  detail::NodeSet cover = w;
  detail::NodeSet s = w;
  for (int i = 1; i < d; ++i) {
    s = detail::image_of(T, s);
    cover.or_with(s);
  }
  return cover.is_full();
}

namespace detail {

/// Per-component label propagation. A splitting subset W induces the unique
/// labeling l(v) = j iff v lies in T^j W; conversely a labeling is induced by
/// some W exactly when every node receives at most one "token" l(u)+1 from
/// predecessors u with l(u) <= d-2 and carries that token as its label (or 0
/// with no token). Tree labels are forced bottom-up; each cycle admits at
/// most d labelings, one per trial label of its first node.
struct ComponentLabels {
  long count = 0;                            // 0..d accepted cycle labelings
  std::vector<std::vector<int>> zero_sets;   // per accepted labeling: 0-indexed W-nodes
};

/// Forced labels of all tree nodes of a component; returns false on a token
/// conflict (two predecessors of one node both demand to place it).
inline bool force_tree_labels(const FunctionalGraph& g, const Component& comp, int d,
                              std::vector<int>& label) {
  for (const AttachedTree& tree : comp.trees) {
    for (int v : tree.postorder) {
      int token = -1;
      for (int c : g.tree_children[static_cast<size_t>(v)]) {
        if (label[static_cast<size_t>(c)] <= d - 2) {
          if (token != -1) return false;
          token = label[static_cast<size_t>(c)] + 1;
        }
      }
      label[static_cast<size_t>(v)] = (token == -1) ? 0 : token;
    }
  }
  return true;
}

inline ComponentLabels component_labelings(const FunctionalGraph& g, const Component& comp,
                                           int d, bool collect, std::vector<int>& label) {
  ComponentLabels out;
  if (!force_tree_labels(g, comp, d, label)) return out;

  const int r = comp.cycle_len();
  // Token forced on each cycle node by its attached tree roots.
  std::vector<int> tree_token(static_cast<size_t>(r), -1);
  for (int i = 0; i < r; ++i) {
    const int c = comp.cycle[static_cast<size_t>(i)];
    for (int root : g.tree_children[static_cast<size_t>(c)]) {
      if (label[static_cast<size_t>(root)] <= d - 2) {
        if (tree_token[static_cast<size_t>(i)] != -1) return out;  // conflict
        tree_token[static_cast<size_t>(i)] = label[static_cast<size_t>(root)] + 1;
      }
    }
  }

  std::vector<int> cyc_label(static_cast<size_t>(r));
  for (int g0 = 0; g0 < d; ++g0) {
    cyc_label[0] = g0;
    bool ok = true;
    // combine(previous cycle label, tree token) must determine each node.
    auto step = [&](int prev_label, int tok) -> int {
      const int incoming = (prev_label <= d - 2) ? prev_label + 1 : -1;
      if (incoming != -1 && tok != -1) return -2;  // two tokens
      if (incoming != -1) return incoming;
      if (tok != -1) return tok;
      return 0;
    };
    for (int i = 1; i < r && ok; ++i) {
      const int lbl = step(cyc_label[static_cast<size_t>(i - 1)], tree_token[static_cast<size_t>(i)]);
      if (lbl == -2) ok = false;
      else cyc_label[static_cast<size_t>(i)] = lbl;
    }
    if (!ok) continue;
    if (step(cyc_label[static_cast<size_t>(r - 1)], tree_token[0]) != g0) continue;
    ++out.count;
    if (collect) {
      std::vector<int> zero;
      for (const AttachedTree& tree : comp.trees)
        for (int v : tree.postorder)
          if (label[static_cast<size_t>(v)] == 0) zero.push_back(v);
      for (int i = 0; i < r; ++i)
        if (cyc_label[static_cast<size_t>(i)] == 0)
          zero.push_back(comp.cycle[static_cast<size_t>(i)]);
      std::sort(zero.begin(), zero.end());
      out.zero_sets.push_back(std::move(zero));
    }
  }
  return out;
}

}  // namespace detail

/// Exact sigma(d;T) in O(d*n) via label propagation; witnesses on request.
inline SplittingResult sigma_fast(const FunctionalGraph& g, int d, bool want_witnesses = false) {
  const int n = g.n;
  detail::check_divides(d, n);

  std::vector<int> label(static_cast<size_t>(n), -1);
  std::vector<detail::ComponentLabels> per_comp;
  per_comp.reserve(g.components.size());
  Int sigma = 1;
  for (const Component& comp : g.components) {
    per_comp.push_back(detail::component_labelings(g, comp, d, want_witnesses, label));
    sigma *= per_comp.back().count;
    if (sigma == 0 && !want_witnesses) break;
  }

  SplittingResult result;
  result.method = SigmaMethod::LabelDP;
  result.sigma = sigma;
  if (want_witnesses) {
    if (sigma > 1000000)
      throw CapExceeded("witness collection capped at 10^6 subsets");
    std::vector<std::vector<int>> witnesses;
    if (sigma > 0) {
      std::vector<size_t> pick(per_comp.size(), 0);
      while (true) {
        std::vector<int> w;
        for (size_t k = 0; k < per_comp.size(); ++k)
          for (int v : per_comp[k].zero_sets[pick[k]]) w.push_back(v + 1);
        std::sort(w.begin(), w.end());
        witnesses.push_back(std::move(w));
        size_t k = per_comp.size();
        while (k > 0) {
          --k;
          if (++pick[k] < per_comp[k].zero_sets.size()) break;
          pick[k] = 0;
          if (k == 0) {
            k = SIZE_MAX;
            break;
          }
        }
        if (k == SIZE_MAX) break;
      }
    }
    result.witnesses = std::move(witnesses);
  }
  return result;
}

inline SplittingResult sigma_fast(const Endofunction& T, int d, bool want_witnesses = false) {
  return sigma_fast(decompose(T), d, want_witnesses);
}

namespace detail {

/// C(n, k), clamped to cap + 1 as soon as it exceeds cap.
inline unsigned long long binomial_capped(int n, int k, unsigned long long cap) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 result = 1;
  for (int i = 1; i <= k; ++i) {
    result = result * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
    if (result > cap) return cap + 1;  // partial binomials only grow from here
  }
  return static_cast<unsigned long long>(result);
}

}  // namespace detail

/// Exact sigma(d;T) by iterating every cardinality-(n/d) subset in
/// lexicographic bitmask order. Requires n <= 64 and C(n, n/d) <= cap.
inline SplittingResult sigma_bruteforce(const Endofunction& T, int d,
                                        bool want_witnesses = false,
                                        unsigned long long cap = 100000000ull) {
  const int n = T.n();
  detail::check_divides(d, n);
  if (n > 64) throw CapExceeded("subset brute force supports n <= 64");
  const int k = n / d;
  if (detail::binomial_capped(n, k, cap) > cap)
    throw CapExceeded("C(n, n/d) exceeds the brute-force cap");

  std::vector<int> img(static_cast<size_t>(n));
  for (int v = 0; v < n; ++v) img[static_cast<size_t>(v)] = T(v);
  const uint64_t full = (n == 64) ? ~uint64_t{0} : ((uint64_t{1} << n) - 1);

  SplittingResult result;
  result.method = SigmaMethod::BruteForce;
  if (want_witnesses) result.witnesses.emplace();

  uint64_t mask = (k == 0) ? 0 : ((uint64_t{1} << k) - 1);
  while (true) {
    uint64_t cover = mask;
    uint64_t s = mask;
    for (int i = 1; i < d && cover != full; ++i) {
      uint64_t next = 0;
      uint64_t bits = s;
      while (bits) {
        next |= uint64_t{1} << img[static_cast<size_t>(std::countr_zero(bits))];
        bits &= bits - 1;
      }
      s = next;
      cover |= s;
    }
    if (cover == full) {
      result.sigma += 1;
      if (want_witnesses) {
        std::vector<int> w;
        uint64_t bits = mask;
        while (bits) {
          w.push_back(std::countr_zero(bits) + 1);
          bits &= bits - 1;
        }
        result.witnesses->push_back(std::move(w));
      }
    }
    // Gosper's hack: next k-subset in lexicographic order.
    if (mask == 0) break;
    const uint64_t lowest = mask & (~mask + 1);
    const uint64_t ripple = mask + lowest;
    if (ripple > full || ripple == 0) break;
    mask = ripple | (((mask ^ ripple) >> 2) / lowest);
  }
  return result;
}

/// Whether a standalone rooted tree (given as an attached tree under the
/// root-maps-to-itself convention) has a d-splitting subset.
inline bool tree_has_splitting(const FunctionalGraph& g, const AttachedTree& tree, int d) {
  if (d < 1) throw InvalidD("d must be >= 1");
  if (d == 1) return true;
  if (tree.size % d != 0) return false;
  std::vector<int> label(static_cast<size_t>(g.n), -1);
  for (int v : tree.postorder) {
    int token = -1;
    for (int c : g.tree_children[static_cast<size_t>(v)]) {
      if (label[static_cast<size_t>(c)] <= d - 2) {
        if (token != -1) return false;
        token = label[static_cast<size_t>(c)] + 1;
      }
    }
    label[static_cast<size_t>(v)] = (token == -1) ? 0 : token;
  }
  // As its own component the root is a 1-cycle and must be labeled d-1.
  return label[static_cast<size_t>(tree.root)] == d - 1;
}

/// Whether the tree gains a d-splitting subset when one extra node is
/// appended below its root (the extra node playing the anchor's role).
inline bool has_splitting_with_root(const FunctionalGraph& g, const AttachedTree& tree, int d) {
  if (d < 1) throw InvalidD("d must be >= 1");
  if (d == 1) return true;
  if ((tree.size + 1) % d != 0) return false;
  std::vector<int> label(static_cast<size_t>(g.n), -1);
  for (int v : tree.postorder) {
    int token = -1;
    for (int c : g.tree_children[static_cast<size_t>(v)]) {
      if (label[static_cast<size_t>(c)] <= d - 2) {
        if (token != -1) return false;
        token = label[static_cast<size_t>(c)] + 1;
      }
    }
    label[static_cast<size_t>(v)] = (token == -1) ? 0 : token;
  }
  // The appended node becomes the 1-cycle and must receive token d-1 from
  // the old root, so the old root must carry label d-2.
  return label[static_cast<size_t>(tree.root)] == d - 2;
}

/// The unique d-splitting subset of a paper-sense tree component (cycle of
/// length 1), or nullopt when none exists. Nodes returned 1-indexed.
inline std::optional<std::vector<int>> tree_unique_splitting(const FunctionalGraph& g,
                                                             const Component& comp, int d) {
  if (!comp.is_tree()) throw NotATree("component cycle length exceeds 1");
  if (d < 1) throw InvalidD("d must be >= 1");
  if (comp.size % d != 0) return std::nullopt;
  std::vector<int> label(static_cast<size_t>(g.n), -1);
  detail::ComponentLabels labels = detail::component_labelings(g, comp, d, true, label);
  if (labels.count == 0) return std::nullopt;
  std::vector<int> w;
  for (int v : labels.zero_sets[0]) w.push_back(v + 1);
  return w;
}

}  // namespace splitcount
