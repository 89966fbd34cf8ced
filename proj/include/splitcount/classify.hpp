#pragma once

#include <optional>
#include <string>
#include <vector>

#include "splitcount/endofunction.hpp"
#include "splitcount/splitting.hpp"

namespace splitcount {

enum class StructureTag { Chain, Cycle, Tree, Type1, Type2, ProductOfTypes, Other };

inline const char* to_string(StructureTag tag) {
  switch (tag) {
    case StructureTag::Chain: return "Chain";
    case StructureTag::Cycle: return "Cycle";
    case StructureTag::Tree: return "Tree";
    case StructureTag::Type1: return "Type1";
    case StructureTag::Type2: return "Type2";
    case StructureTag::ProductOfTypes: return "ProductOfTypes";
    case StructureTag::Other: return "Other";
  }
  return "?";
}

/// Per-component structural kind relative to d.
enum class ComponentKind { Type1, Type2, Untyped };

inline const char* to_string(ComponentKind k) {
  switch (k) {
    case ComponentKind::Type1: return "Type1";
    case ComponentKind::Type2: return "Type2";
    case ComponentKind::Untyped: return "Untyped";
  }
  return "?";
}

/// Structural class of an endofunction, always relative to an explicit d.
/// Chain/Cycle/Tree are d-independent shape tags; Type1/Type2 depend on d.
struct StructureClass {
  StructureTag tag = StructureTag::Other;
  int d = 1;
  std::vector<ComponentKind> component_kinds;  // one entry per component
  /// Root of the attached tree that consumes its anchor (connected Type2).
  std::optional<int> type2_tree_root;  // 1-indexed
};

namespace detail {

struct ComponentTyping {
  ComponentKind kind = ComponentKind::Untyped;
  int type2_root = -1;  // 0-indexed
};

/// Type1: cycle length divisible by d and every attached tree splits alone.
/// Type2: cycle length = 1 mod d, exactly one attached tree fails alone but
/// splits with its anchor appended, and all other trees split alone.
inline ComponentTyping type_component(const FunctionalGraph& g, const Component& comp, int d) {
  ComponentTyping out;
  const int r = comp.cycle_len();
  int failing = 0;
  const AttachedTree* failing_tree = nullptr;
  for (const AttachedTree& tree : comp.trees) {
    if (!tree_has_splitting(g, tree, d)) {
      ++failing;
      failing_tree = &tree;
      if (failing > 1) break;
    }
  }
  if (r % d == 0 && failing == 0) {
    out.kind = ComponentKind::Type1;
  } else if (d > 1 && r % d == 1 && failing == 1 &&
             has_splitting_with_root(g, *failing_tree, d)) {
    out.kind = ComponentKind::Type2;
    out.type2_root = failing_tree->root;
  }
  return out;
}

inline bool is_chain_component(const FunctionalGraph& g, const Component& comp) {
  if (!comp.is_tree()) return false;
  if (g.tree_children[static_cast<size_t>(comp.cycle[0])].size() > 1) return false;
  for (const AttachedTree& tree : comp.trees)
    for (int v : tree.postorder)
      if (g.tree_children[static_cast<size_t>(v)].size() > 1) return false;
  return true;
}

}  // namespace detail

/// Most specific applicable tag, in the order Chain, Tree, Type1, Type2,
/// Cycle, ProductOfTypes, Other. A cycle whose length d divides is Type1
/// (empty tree condition); the Cycle tag remains for the rest.
inline StructureClass classify(const FunctionalGraph& g, int d) {
  if (d < 1) throw InvalidD("d must be >= 1");
  StructureClass out;
  out.d = d;
  out.component_kinds.reserve(g.components.size());
  for (const Component& comp : g.components)
    out.component_kinds.push_back(detail::type_component(g, comp, d).kind);

  if (g.components.size() == 1) {
    const Component& comp = g.components.front();
    const detail::ComponentTyping typing = detail::type_component(g, comp, d);
    if (detail::is_chain_component(g, comp)) {
      out.tag = StructureTag::Chain;
    } else if (comp.is_tree()) {
      out.tag = StructureTag::Tree;
    } else if (typing.kind == ComponentKind::Type1) {
      out.tag = StructureTag::Type1;
    } else if (typing.kind == ComponentKind::Type2) {
      out.tag = StructureTag::Type2;
      out.type2_tree_root = typing.type2_root + 1;
    } else if (comp.trees.empty()) {
      out.tag = StructureTag::Cycle;
    } else {
      out.tag = StructureTag::Other;
    }
    return out;
  }

  bool all_typed = true;
  for (ComponentKind k : out.component_kinds)
    if (k == ComponentKind::Untyped) all_typed = false;
  out.tag = all_typed ? StructureTag::ProductOfTypes : StructureTag::Other;
  return out;
}

inline StructureClass classify(const Endofunction& T, int d) {
  return classify(decompose(T), d);
}

}  // namespace splitcount
