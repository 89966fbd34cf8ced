#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "splitcount/errors.hpp"

namespace splitcount {

/// A total map T : [n] -> [n]. Nodes are 1-indexed at every interface;
/// internally images are stored 0-indexed.
class Endofunction {
 public:
  Endofunction() = default;

  /// Construct from 1-indexed images, e.g. {2,3,4,4} for 1->2,2->3,3->4,4->4.
  static Endofunction from_images(const std::vector<int>& images1) {
    if (images1.empty()) throw EmptyInput();
    const int n = static_cast<int>(images1.size());
    Endofunction f;
    f.img_.reserve(images1.size());
    for (int i = 0; i < n; ++i) {
      const int v = images1[static_cast<size_t>(i)];
      if (v < 1 || v > n) throw ImageOutOfRange(i + 1, v);
      f.img_.push_back(v - 1);
    }
    return f;
  }

  int n() const { return static_cast<int>(img_.size()); }

  /// 0-indexed image of a 0-indexed node.
  int operator()(int v) const { return img_[static_cast<size_t>(v)]; }

  /// 1-indexed image of a 1-indexed node.
  int image1(int v) const { return img_[static_cast<size_t>(v - 1)] + 1; }

  const std::vector<int>& raw() const { return img_; }

  std::vector<int> images1() const {
    std::vector<int> out(img_.size());
    for (size_t i = 0; i < img_.size(); ++i) out[i] = img_[i] + 1;
    return out;
  }

  std::string to_string() const {
    std::string s;
    for (size_t i = 0; i < img_.size(); ++i) {
      if (i) s += ' ';
      s += std::to_string(img_[i] + 1);
    }
    return s;
  }

  bool operator==(const Endofunction& other) const = default;

 private:
  friend class EndofunctionCursor;
  std::vector<int> img_;
};

/// Parse whitespace-separated 1-indexed images into an endofunction.
inline Endofunction parse_endofunction(const std::string& text) {
  std::istringstream in(text);
  std::vector<long long> values;
  std::string token;
  while (in >> token) {
    size_t pos = 0;
    long long v = 0;
    try {
      v = std::stoll(token, &pos);
    } catch (const std::exception&) {
      throw NonIntegerToken(token);
    }
    if (pos != token.size()) throw NonIntegerToken(token);
    values.push_back(v);
  }
  if (values.empty()) throw EmptyInput();
  const int n = static_cast<int>(values.size());
  std::vector<int> images1(values.size());
  for (int i = 0; i < n; ++i) {
    const long long v = values[static_cast<size_t>(i)];
    if (v < 1 || v > n) throw ImageOutOfRange(i + 1, v);
    images1[static_cast<size_t>(i)] = static_cast<int>(v);
  }
  return Endofunction::from_images(images1);
}

/// Maximal subtree rooted at a non-cycle node whose image (the anchor) lies
/// on the cycle. Child adjacency lives in FunctionalGraph::tree_children.
struct AttachedTree {
  int root = -1;    // 0-indexed
  int anchor = -1;  // 0-indexed cycle node, anchor == T(root)
  int size = 0;
  /// Tree nodes in post order (children before parents, root last).
  std::vector<int> postorder;
};

/// One connected component: a directed cycle plus its attached trees.
struct Component {
  /// cycle[j+1] == T(cycle[j]), last wraps to first; starts at the minimal
  /// cycle node. A fixed point is a cycle of length 1.
  std::vector<int> cycle;
  std::vector<AttachedTree> trees;
  int size = 0;

  int cycle_len() const { return static_cast<int>(cycle.size()); }
  /// True in the sense used for generating functions: the component is a
  /// rooted tree whose root maps to itself.
  bool is_tree() const { return cycle.size() == 1; }
};

/// Decomposition of an endofunction into components, with per-node adjacency.
struct FunctionalGraph {
  int n = 0;
  std::vector<Component> components;           // sorted by minimal node
  std::vector<int> node_component;             // node -> component index
  std::vector<bool> on_cycle;                  // node -> lies on a cycle
  std::vector<std::vector<int>> tree_children; // node -> sorted non-cycle preimages
};

namespace detail {

inline void fill_postorder(const FunctionalGraph& g, int root,
                           std::vector<int>& out) {
  // Iterative post order: push (node, child cursor).
  std::vector<std::pair<int, size_t>> stack;
  stack.emplace_back(root, 0);
  while (!stack.empty()) {
    auto& [v, cursor] = stack.back();
    const auto& kids = g.tree_children[static_cast<size_t>(v)];
    if (cursor < kids.size()) {
      const int child = kids[cursor];
      ++cursor;
      stack.emplace_back(child, 0);
    } else {
      out.push_back(v);
      stack.pop_back();
    }
  }
}

}  // namespace detail

/// Decompose T into cycles and attached trees. Deterministic: components are
/// ordered by minimal node, cycles start at their minimal node, children
/// lists are sorted.
inline FunctionalGraph decompose(const Endofunction& T) {
  const int n = T.n();
  FunctionalGraph g;
  g.n = n;
  g.on_cycle.assign(static_cast<size_t>(n), false);
  g.node_component.assign(static_cast<size_t>(n), -1);

  // Three-state walk: 0 = unvisited, 1 = on current path, 2 = finished.
  std::vector<uint8_t> state(static_cast<size_t>(n), 0);
  std::vector<int> path;
  for (int start = 0; start < n; ++start) {
    if (state[static_cast<size_t>(start)] != 0) continue;
    path.clear();
    int v = start;
    while (state[static_cast<size_t>(v)] == 0) {
      state[static_cast<size_t>(v)] = 1;
      path.push_back(v);
      v = T(v);
    }
    if (state[static_cast<size_t>(v)] == 1) {
      // Found a new cycle: the tail of the path starting at v.
      auto it = std::find(path.begin(), path.end(), v);
      for (auto c = it; c != path.end(); ++c)
        g.on_cycle[static_cast<size_t>(*c)] = true;
    }
    for (int u : path) state[static_cast<size_t>(u)] = 2;
  }

  g.tree_children.assign(static_cast<size_t>(n), {});
  for (int v = 0; v < n; ++v)
    if (!g.on_cycle[static_cast<size_t>(v)])
      g.tree_children[static_cast<size_t>(T(v))].push_back(v);
  for (auto& kids : g.tree_children) std::sort(kids.begin(), kids.end());

  // Component id = order of the minimal node over all nodes of the component.
  // Every node reaches its cycle, so assign ids by walking from each node.
  std::vector<int> cycle_of(static_cast<size_t>(n), -1);
  // First group cycle nodes into cycles.
  std::vector<std::vector<int>> cycles;
  std::vector<bool> seen(static_cast<size_t>(n), false);
  for (int v = 0; v < n; ++v) {
    if (!g.on_cycle[static_cast<size_t>(v)] || seen[static_cast<size_t>(v)])
      continue;
    // v is the minimal node of this cycle because we scan in ascending order.
    std::vector<int> cyc;
    int c = v;
    do {
      seen[static_cast<size_t>(c)] = true;
      cyc.push_back(c);
      c = T(c);
    } while (c != v);
    for (int u : cyc) cycle_of[static_cast<size_t>(u)] = static_cast<int>(cycles.size());
    cycles.push_back(std::move(cyc));
  }

  // Reach the cycle from every node to find its cycle id, then order
  // components by minimal node.
  std::vector<int> cycle_id_of_node(static_cast<size_t>(n));
  for (int v = 0; v < n; ++v) {
    int c = v;
    while (!g.on_cycle[static_cast<size_t>(c)]) c = T(c);
    cycle_id_of_node[static_cast<size_t>(v)] = cycle_of[static_cast<size_t>(c)];
  }
  std::vector<int> min_node(cycles.size(), n);
  for (int v = 0; v < n; ++v) {
    int& m = min_node[static_cast<size_t>(cycle_id_of_node[static_cast<size_t>(v)])];
    m = std::min(m, v);
  }
  std::vector<int> order(cycles.size());
  for (size_t i = 0; i < cycles.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return min_node[static_cast<size_t>(a)] < min_node[static_cast<size_t>(b)]; });
  std::vector<int> rank(cycles.size());
  for (size_t i = 0; i < order.size(); ++i) rank[static_cast<size_t>(order[i])] = static_cast<int>(i);

  g.components.resize(cycles.size());
  for (int v = 0; v < n; ++v)
    g.node_component[static_cast<size_t>(v)] =
        rank[static_cast<size_t>(cycle_id_of_node[static_cast<size_t>(v)])];

  for (size_t k = 0; k < cycles.size(); ++k) {
    Component& comp = g.components[static_cast<size_t>(rank[k])];
    comp.cycle = std::move(cycles[k]);
    comp.size = comp.cycle_len();
    for (int c : comp.cycle) {
      for (int root : g.tree_children[static_cast<size_t>(c)]) {
        AttachedTree tree;
        tree.root = root;
        tree.anchor = c;
        detail::fill_postorder(g, root, tree.postorder);
        tree.size = static_cast<int>(tree.postorder.size());
        comp.size += tree.size;
        comp.trees.push_back(std::move(tree));
      }
    }
  }
  return g;
}

/// Number of endofunctions on [n], i.e. n^n. Throws OverflowGuard when the
/// count does not fit the 64-bit index space.
inline uint64_t endofunction_count(int n) {
  if (n < 1) throw Error("n must be positive");
  uint64_t result = 1;
  const uint64_t un = static_cast<uint64_t>(n);
  for (int i = 0; i < n; ++i) {
    if (result > UINT64_MAX / un)
      throw OverflowGuard("n^n exceeds the 64-bit enumeration index at n = " +
                          std::to_string(n));
    result *= un;
  }
  return result;
}

/// Endofunction at a given index in lexicographic order of image sequences:
/// index 0 is (1,1,...,1), index n^n-1 is (n,n,...,n).
inline Endofunction endofunction_at(int n, uint64_t index) {
  std::vector<int> images1(static_cast<size_t>(n));
  const uint64_t un = static_cast<uint64_t>(n);
  for (int i = n - 1; i >= 0; --i) {
    images1[static_cast<size_t>(i)] = static_cast<int>(index % un) + 1;
    index /= un;
  }
  return Endofunction::from_images(images1);
}

/// Forward cursor over a contiguous index range of endofunctions; amortized
/// O(1) odometer increments. Ranges shard the full space [0, n^n).
class EndofunctionCursor {
 public:
  EndofunctionCursor(int n, uint64_t begin_index, uint64_t end_index)
      : n_(n), index_(begin_index), end_(end_index) {
    if (begin_index < end_index) current_ = endofunction_at(n, begin_index);
  }

  /// Full enumeration of all n^n maps.
  explicit EndofunctionCursor(int n)
      : EndofunctionCursor(n, 0, endofunction_count(n)) {}

  bool done() const { return index_ >= end_; }
  uint64_t index() const { return index_; }
  const Endofunction& value() const { return current_; }

  void advance() {
    ++index_;
    if (done()) return;
    auto& img = current_.img_;
    for (int i = n_ - 1; i >= 0; --i) {
      if (img[static_cast<size_t>(i)] + 1 < n_) {
        ++img[static_cast<size_t>(i)];
        return;
      }
      img[static_cast<size_t>(i)] = 0;
    }
  }

 private:
  int n_;
  uint64_t index_;
  uint64_t end_;
  Endofunction current_;
};

namespace detail {

/// Unbiased draw from {0, ..., bound-1} by rejection; mt19937_64 output is
/// bit-exact across platforms, so the result is too.
inline uint64_t bounded_uniform(std::mt19937_64& rng, uint64_t bound) {
  const uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

}  // namespace detail

/// Draw the next uniform endofunction from an already-seeded stream.
inline Endofunction random_endofunction_from(std::mt19937_64& rng, int n) {
  std::vector<int> images1(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    images1[static_cast<size_t>(i)] =
        static_cast<int>(detail::bounded_uniform(rng, static_cast<uint64_t>(n))) + 1;
  return Endofunction::from_images(images1);
}

/// Uniform endofunction on [n]; deterministic for fixed (n, seed).
inline Endofunction random_endofunction(int n, uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_endofunction_from(rng, n);
}

}  // namespace splitcount
