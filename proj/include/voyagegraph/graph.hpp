#pragma once

// Visiting order graph: an inclusion forest under a ROOT pseudo-node with
// transition chains restricted to siblings.

#include <algorithm>
#include <array>
#include <charconv>
#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace voyagegraph {

inline constexpr std::string_view kRootId = "ROOT";
inline constexpr std::string_view kEosId = "EOS";

inline bool is_reserved_id(std::string_view id) { return id == kRootId || id == kEosId; }

/// One visit episode of an entity. Single-visit entities use visit_index 0.
struct VisitNode {
  std::string entity_id;
  std::size_t visit_index = 0;

  auto operator<=>(const VisitNode&) const = default;
};

/// "entity" for visit 0, "entity#k" otherwise.
inline std::string to_string(const VisitNode& node) {
  if (node.visit_index == 0) return node.entity_id;
  return node.entity_id + "#" + std::to_string(node.visit_index);
}

/// Accepts "entity" and "entity#k". The suffix is split at the last '#'.
inline std::optional<VisitNode> parse_node_ref(std::string_view ref) {
  if (ref.empty()) return std::nullopt;
  const auto hash = ref.rfind('#');
  if (hash == std::string_view::npos) return VisitNode{std::string(ref), 0};
  const auto digits = ref.substr(hash + 1);
  std::size_t index = 0;
  auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), index);
  if (hash == 0 || digits.empty() || ec != std::errc{} || end != digits.data() + digits.size()) {
    return std::nullopt;
  }
  return VisitNode{std::string(ref.substr(0, hash)), index};
}

/// Parent slot: nullopt is ROOT.
using ParentRef = std::optional<VisitNode>;
/// Successor slot: nullopt is EOS.
using SuccessorRef = std::optional<VisitNode>;

inline std::string parent_to_string(const ParentRef& parent) {
  return parent ? to_string(*parent) : std::string(kRootId);
}

inline std::string successor_to_string(const SuccessorRef& successor) {
  return successor ? to_string(*successor) : std::string(kEosId);
}

enum class ViolationCode {
  CycleInclusion,
  MultiParent,
  TransitionNotSiblings,
  MultiSuccessor,
  MultiPredecessor,
  TransitionCycle,
  FragmentedChain,
  UnknownTimeNode,
  OverlapBothLinked,
  EmptyVisitPartition,
  DanglingReference,
};

inline constexpr std::array kAllViolationCodes = {
    ViolationCode::CycleInclusion,    ViolationCode::MultiParent,
    ViolationCode::TransitionNotSiblings, ViolationCode::MultiSuccessor,
    ViolationCode::MultiPredecessor,  ViolationCode::TransitionCycle,
    ViolationCode::FragmentedChain,   ViolationCode::UnknownTimeNode,
    ViolationCode::OverlapBothLinked, ViolationCode::EmptyVisitPartition,
    ViolationCode::DanglingReference,
};

inline std::string_view violation_name(ViolationCode code) {
  switch (code) {
    case ViolationCode::CycleInclusion: return "CycleInclusion";
    case ViolationCode::MultiParent: return "MultiParent";
    case ViolationCode::TransitionNotSiblings: return "TransitionNotSiblings";
    case ViolationCode::MultiSuccessor: return "MultiSuccessor";
    case ViolationCode::MultiPredecessor: return "MultiPredecessor";
    case ViolationCode::TransitionCycle: return "TransitionCycle";
    case ViolationCode::FragmentedChain: return "FragmentedChain";
    case ViolationCode::UnknownTimeNode: return "UnknownTimeNode";
    case ViolationCode::OverlapBothLinked: return "OverlapBothLinked";
    case ViolationCode::EmptyVisitPartition: return "EmptyVisitPartition";
    case ViolationCode::DanglingReference: return "DanglingReference";
  }
  return "Unknown";
}

struct Violation {
  ViolationCode code;
  std::string node;    // offending node, group parent, or raw reference
  std::string detail;

  auto operator<=>(const Violation&) const = default;
};

inline std::string to_string(const Violation& v) {
  std::string out(violation_name(v.code));
  out += " at ";
  out += v.node;
  if (!v.detail.empty()) out += ": " + v.detail;
  return out;
}

class GraphError : public std::runtime_error {
 public:
  explicit GraphError(std::vector<Violation> violations)
      : std::runtime_error(describe(violations)), violations_(std::move(violations)) {}

  const std::vector<Violation>& violations() const { return violations_; }

 private:
  static std::string describe(const std::vector<Violation>& violations) {
    std::string out = "invalid visiting order graph";
    for (const auto& v : violations) out += "\n  " + to_string(v);
    return out;
  }

  std::vector<Violation> violations_;
};

/// Lenient allows several disjoint chains per sibling group; strict demands one.
enum class ValidationMode { Lenient, Strict };

/// Unchecked edge lists, as loaded from a file or produced by a system.
struct RawGraph {
  std::vector<VisitNode> nodes;
  std::vector<std::pair<ParentRef, VisitNode>> inclusion;  // (parent, child)
  std::vector<std::pair<VisitNode, VisitNode>> transition;  // (from, to)
  std::vector<std::pair<VisitNode, VisitNode>> overlap;
  std::set<std::string> excluded;  // UnknownTime entity ids

  bool operator==(const RawGraph&) const = default;
};

enum class OrderRelation { Before, After, Contains, ContainedBy, Same, Incomparable };

inline std::string_view relation_name(OrderRelation r) {
  switch (r) {
    case OrderRelation::Before: return "Before";
    case OrderRelation::After: return "After";
    case OrderRelation::Contains: return "Contains";
    case OrderRelation::ContainedBy: return "ContainedBy";
    case OrderRelation::Same: return "Same";
    case OrderRelation::Incomparable: return "Incomparable";
  }
  return "Unknown";
}

inline OrderRelation inverse(OrderRelation r) {
  switch (r) {
    case OrderRelation::Before: return OrderRelation::After;
    case OrderRelation::After: return OrderRelation::Before;
    case OrderRelation::Contains: return OrderRelation::ContainedBy;
    case OrderRelation::ContainedBy: return OrderRelation::Contains;
    default: return r;
  }
}

class VisitingOrderGraph;
using BuildResult = std::variant<VisitingOrderGraph, std::vector<Violation>>;
BuildResult build_graph(const RawGraph& raw, ValidationMode mode);

/// Validated, immutable visiting order graph. Obtain one through build_graph.
class VisitingOrderGraph {
 public:
  static constexpr std::ptrdiff_t kNone = -1;

  std::span<const VisitNode> nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }
  bool contains(const VisitNode& node) const { return index_.contains(node); }

  ParentRef parent(const VisitNode& node) const { return lift(parent_[index_of(node)]); }
  SuccessorRef successor(const VisitNode& node) const {
    return lift(successor_[index_of(node)]);
  }
  std::optional<VisitNode> predecessor(const VisitNode& node) const {
    return lift(predecessor_[index_of(node)]);
  }

  /// Children of `parent` (ROOT when nullopt) in node order.
  std::vector<VisitNode> children(const ParentRef& parent) const {
    const std::ptrdiff_t p = parent ? static_cast<std::ptrdiff_t>(index_of(*parent)) : kNone;
    std::vector<VisitNode> out;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      if (parent_[i] == p) out.push_back(nodes_[i]);
    }
    return out;
  }

  /// Nodes sharing `node`'s parent, excluding `node` itself.
  std::vector<VisitNode> siblings(const VisitNode& node) const {
    auto out = children(parent(node));
    std::erase(out, node);
    return out;
  }

  /// Parent steps to ROOT; children of ROOT have depth 1.
  std::size_t depth(const VisitNode& node) const {
    std::size_t d = 1;
    for (auto p = parent_[index_of(node)]; p != kNone; p = parent_[p]) ++d;
    return d;
  }

  OrderRelation order_relation(const VisitNode& a, const VisitNode& b) const {
    const auto ia = index_of(a);
    const auto ib = index_of(b);
    if (ia == ib) return OrderRelation::Same;
    const auto path_a = ancestry(ia);
    const auto path_b = ancestry(ib);
    if (std::find(path_b.begin(), path_b.end(), ia) != path_b.end()) return OrderRelation::Contains;
    if (std::find(path_a.begin(), path_a.end(), ib) != path_a.end()) {
      return OrderRelation::ContainedBy;
    }
    // Lowest common ancestor; the children on each path below it are siblings.
    std::size_t ka = path_a.size() - 1;
    std::size_t kb = path_b.size() - 1;
    if (path_a[ka] == path_b[kb]) {
      while (ka > 0 && kb > 0 && path_a[ka - 1] == path_b[kb - 1]) {
        --ka;
        --kb;
      }
      --ka;
      --kb;
    }
    const std::size_t sib_a = path_a[ka];
    const std::size_t sib_b = path_b[kb];
    if (chain_reaches(sib_a, sib_b)) return OrderRelation::Before;
    if (chain_reaches(sib_b, sib_a)) return OrderRelation::After;
    return OrderRelation::Incomparable;
  }

  std::span<const std::pair<VisitNode, VisitNode>> overlap() const { return overlap_; }
  const std::set<std::string>& excluded() const { return excluded_; }

  /// Canonical edge lists: explicit ROOT pairs are omitted, edges in node order.
  RawGraph to_raw() const {
    RawGraph raw;
    raw.nodes = nodes_;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      if (parent_[i] != kNone) raw.inclusion.emplace_back(nodes_[parent_[i]], nodes_[i]);
      if (successor_[i] != kNone) raw.transition.emplace_back(nodes_[i], nodes_[successor_[i]]);
    }
    raw.overlap = overlap_;
    raw.excluded = excluded_;
    return raw;
  }

 private:
  friend BuildResult build_graph(const RawGraph& raw, ValidationMode mode);
  VisitingOrderGraph() = default;

  std::size_t index_of(const VisitNode& node) const {
    auto it = index_.find(node);
    if (it == index_.end()) throw std::out_of_range("unknown node '" + to_string(node) + "'");
    return it->second;
  }

  std::optional<VisitNode> lift(std::ptrdiff_t i) const {
    if (i == kNone) return std::nullopt;
    return nodes_[static_cast<std::size_t>(i)];
  }

  /// [node, parent, grandparent, ..., top-level node]
  std::vector<std::size_t> ancestry(std::size_t i) const {
    std::vector<std::size_t> path{i};
    for (auto p = parent_[i]; p != kNone; p = parent_[p]) path.push_back(static_cast<std::size_t>(p));
    return path;
  }

  bool chain_reaches(std::size_t from, std::size_t to) const {
    for (auto s = successor_[from]; s != kNone; s = successor_[s]) {
      if (static_cast<std::size_t>(s) == to) return true;
    }
    return false;
  }

  std::vector<VisitNode> nodes_;
  std::map<VisitNode, std::size_t> index_;
  std::vector<std::ptrdiff_t> parent_;
  std::vector<std::ptrdiff_t> successor_;
  std::vector<std::ptrdiff_t> predecessor_;
  std::vector<std::pair<VisitNode, VisitNode>> overlap_;
  std::set<std::string> excluded_;
};

namespace detail {

// Shared by build_graph and validate so both enforce identical rules.
struct GraphCheck {
  std::vector<VisitNode> nodes;
  std::map<VisitNode, std::size_t> index;
  std::vector<std::ptrdiff_t> parent;
  std::vector<std::ptrdiff_t> successor;
  std::vector<std::ptrdiff_t> predecessor;
  std::vector<std::pair<VisitNode, VisitNode>> overlap;
  std::vector<Violation> violations;

  void add(ViolationCode code, std::string node, std::string detail = {}) {
    violations.push_back({code, std::move(node), std::move(detail)});
  }

  std::optional<std::size_t> find(const VisitNode& node) const {
    auto it = index.find(node);
    if (it == index.end()) return std::nullopt;
    return it->second;
  }
};

inline std::string edge_text(const std::string& a, const std::string& b) { return a + " -> " + b; }

inline void check_nodes(const RawGraph& raw, GraphCheck& g) {
  std::set<VisitNode> unique(raw.nodes.begin(), raw.nodes.end());
  g.nodes.assign(unique.begin(), unique.end());
  for (std::size_t i = 0; i < g.nodes.size(); ++i) g.index.emplace(g.nodes[i], i);

  std::map<std::string, std::set<std::size_t>> visits;
  for (const auto& node : g.nodes) {
    const auto name = to_string(node);
    if (is_reserved_id(node.entity_id)) {
      g.add(ViolationCode::DanglingReference, name, "reserved identifier used as entity id");
    } else if (node.entity_id.empty() || node.entity_id.find('#') != std::string::npos) {
      g.add(ViolationCode::DanglingReference, name, "malformed entity id");
    }
    if (raw.excluded.contains(node.entity_id)) {
      g.add(ViolationCode::UnknownTimeNode, name, "entity is marked UnknownTime");
    }
    visits[node.entity_id].insert(node.visit_index);
  }
  for (const auto& [entity, indices] : visits) {
    const std::size_t last = *indices.rbegin();
    for (std::size_t k = 0; k < last; ++k) {
      if (!indices.contains(k)) {
        g.add(ViolationCode::EmptyVisitPartition, to_string(VisitNode{entity, k}),
              "visit episode missing between 0 and " + std::to_string(last));
      }
    }
  }
}

inline void check_inclusion(const RawGraph& raw, GraphCheck& g) {
  const std::size_t n = g.nodes.size();
  std::vector<std::set<std::ptrdiff_t>> parents(n);
  for (const auto& [parent, child] : raw.inclusion) {
    const auto c = g.find(child);
    std::optional<std::size_t> p;
    if (parent) p = g.find(*parent);
    if (!c) g.add(ViolationCode::DanglingReference, to_string(child), "inclusion child is not a node");
    if (parent && !p) {
      g.add(ViolationCode::DanglingReference, to_string(*parent), "inclusion parent is not a node");
    }
    if (!c || (parent && !p)) continue;
    parents[*c].insert(p ? static_cast<std::ptrdiff_t>(*p) : VisitingOrderGraph::kNone);
  }
  g.parent.assign(n, VisitingOrderGraph::kNone);
  for (std::size_t i = 0; i < n; ++i) {
    if (parents[i].empty()) continue;
    if (parents[i].size() > 1) {
      std::string detail;
      for (auto p : parents[i]) {
        if (!detail.empty()) detail += ", ";
        detail += p == VisitingOrderGraph::kNone ? std::string(kRootId) : to_string(g.nodes[p]);
      }
      g.add(ViolationCode::MultiParent, to_string(g.nodes[i]), "parents " + detail);
    }
    // Lowest index wins; ROOT (-1) sorts first.
    g.parent[i] = *parents[i].begin();
  }

  // The parent map is a functional graph: each cycle is found once.
  std::vector<int> state(n, 0);  // 0 new, 1 on current walk, 2 done
  for (std::size_t start = 0; start < n; ++start) {
    std::vector<std::size_t> walk;
    std::ptrdiff_t cur = static_cast<std::ptrdiff_t>(start);
    while (cur != VisitingOrderGraph::kNone && state[cur] == 0) {
      state[cur] = 1;
      walk.push_back(static_cast<std::size_t>(cur));
      cur = g.parent[cur];
    }
    if (cur != VisitingOrderGraph::kNone && state[cur] == 1) {
      auto it = std::find(walk.begin(), walk.end(), static_cast<std::size_t>(cur));
      const std::size_t smallest = *std::min_element(it, walk.end());
      g.add(ViolationCode::CycleInclusion, to_string(g.nodes[smallest]),
            "inclusion cycle of length " + std::to_string(walk.end() - it));
    }
    for (auto i : walk) state[i] = 2;
  }
}

inline void check_transitions(const RawGraph& raw, GraphCheck& g) {
  const std::size_t n = g.nodes.size();
  std::vector<std::set<std::size_t>> out(n);
  std::vector<std::set<std::size_t>> in(n);
  for (const auto& [from, to] : raw.transition) {
    const auto a = g.find(from);
    const auto b = g.find(to);
    if (!a) g.add(ViolationCode::DanglingReference, to_string(from), "transition source is not a node");
    if (!b) g.add(ViolationCode::DanglingReference, to_string(to), "transition target is not a node");
    if (!a || !b) continue;
    out[*a].insert(*b);
    in[*b].insert(*a);
  }
  g.successor.assign(n, VisitingOrderGraph::kNone);
  g.predecessor.assign(n, VisitingOrderGraph::kNone);
  for (std::size_t i = 0; i < n; ++i) {
    const auto name = to_string(g.nodes[i]);
    if (out[i].size() > 1) g.add(ViolationCode::MultiSuccessor, name);
    if (in[i].size() > 1) g.add(ViolationCode::MultiPredecessor, name);
    if (!out[i].empty()) g.successor[i] = static_cast<std::ptrdiff_t>(*out[i].begin());
    if (!in[i].empty()) g.predecessor[i] = static_cast<std::ptrdiff_t>(*in[i].begin());
    for (auto j : out[i]) {
      if (i != j && g.parent[i] != g.parent[j]) {
        g.add(ViolationCode::TransitionNotSiblings, name, edge_text(name, to_string(g.nodes[j])));
      }
    }
  }

  // Tarjan SCC over the full transition relation (it may not be functional here).
  std::vector<std::ptrdiff_t> order(n, -1), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::ptrdiff_t counter = 0;
  auto strongconnect = [&](auto&& self, std::size_t v) -> void {
    order[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    for (auto w : out[v]) {
      if (order[w] < 0) {
        self(self, w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], order[w]);
      }
    }
    if (low[v] == order[v]) {
      std::vector<std::size_t> component;
      std::size_t w = 0;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        component.push_back(w);
      } while (w != v);
      if (component.size() > 1 || out[v].contains(v)) {
        const auto smallest = *std::min_element(component.begin(), component.end());
        g.add(ViolationCode::TransitionCycle, to_string(g.nodes[smallest]),
              "transition cycle of length " + std::to_string(component.size()));
      }
    }
  };
  for (std::size_t v = 0; v < n; ++v) {
    if (order[v] < 0) strongconnect(strongconnect, v);
  }
}

inline bool carries_edges(const GraphCheck& g, std::size_t i) {
  if (g.parent[i] != VisitingOrderGraph::kNone) return true;
  if (g.successor[i] != VisitingOrderGraph::kNone) return true;
  if (g.predecessor[i] != VisitingOrderGraph::kNone) return true;
  return std::find(g.parent.begin(), g.parent.end(), static_cast<std::ptrdiff_t>(i)) !=
         g.parent.end();
}

inline void check_overlap(const RawGraph& raw, GraphCheck& g) {
  std::set<std::pair<VisitNode, VisitNode>> seen;
  for (const auto& [x, y] : raw.overlap) {
    const auto a = g.find(x);
    const auto b = g.find(y);
    if (!a) g.add(ViolationCode::DanglingReference, to_string(x), "overlap member is not a node");
    if (!b) g.add(ViolationCode::DanglingReference, to_string(y), "overlap member is not a node");
    if (!a || !b) continue;
    if (*a == *b) {
      g.add(ViolationCode::DanglingReference, to_string(x), "entity overlaps itself");
      continue;
    }
    auto key = std::minmax(x, y);
    if (!seen.insert({key.first, key.second}).second) continue;
    g.overlap.emplace_back(key.first, key.second);
    if (carries_edges(g, *a) && carries_edges(g, *b)) {
      g.add(ViolationCode::OverlapBothLinked, to_string(key.first),
            "both " + to_string(x) + " and " + to_string(y) + " carry edges");
    }
  }
}

inline void check_single_chain(GraphCheck& g) {
  std::set<std::size_t> bystanders;  // overlap members standing in for a representative
  for (const auto& [x, y] : g.overlap) {
    for (const auto& node : {x, y}) {
      const auto i = *g.find(node);
      if (!carries_edges(g, i)) bystanders.insert(i);
    }
  }
  std::map<std::ptrdiff_t, std::size_t> heads;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    if (bystanders.contains(i)) continue;
    if (g.predecessor[i] == VisitingOrderGraph::kNone) ++heads[g.parent[i]];
  }
  for (const auto& [parent, count] : heads) {
    if (count > 1) {
      g.add(ViolationCode::FragmentedChain,
            parent == VisitingOrderGraph::kNone ? std::string(kRootId) : to_string(g.nodes[parent]),
            std::to_string(count) + " chains among siblings");
    }
  }
}

inline GraphCheck check(const RawGraph& raw, ValidationMode mode) {
  GraphCheck g;
  check_nodes(raw, g);
  check_inclusion(raw, g);
  check_transitions(raw, g);
  check_overlap(raw, g);
  if (mode == ValidationMode::Strict) check_single_chain(g);
  std::sort(g.violations.begin(), g.violations.end());
  g.violations.erase(std::unique(g.violations.begin(), g.violations.end()), g.violations.end());
  return g;
}

}  // namespace detail

/// Every violation of the structural rules, ordered by code, then node.
inline std::vector<Violation> validate(const RawGraph& raw,
                                       ValidationMode mode = ValidationMode::Lenient) {
  return detail::check(raw, mode).violations;
}

inline std::vector<Violation> validate(const VisitingOrderGraph& graph,
                                       ValidationMode mode = ValidationMode::Lenient) {
  return validate(graph.to_raw(), mode);
}

/// Nodes without an inclusion pair default to parent ROOT. Returns either a
/// graph satisfying every invariant or the complete list of violations.
inline BuildResult build_graph(const RawGraph& raw, ValidationMode mode = ValidationMode::Lenient) {
  auto g = detail::check(raw, mode);
  if (!g.violations.empty()) return std::move(g.violations);
  VisitingOrderGraph graph;
  graph.nodes_ = std::move(g.nodes);
  graph.index_ = std::move(g.index);
  graph.parent_ = std::move(g.parent);
  graph.successor_ = std::move(g.successor);
  graph.predecessor_ = std::move(g.predecessor);
  graph.overlap_ = std::move(g.overlap);
  graph.excluded_ = raw.excluded;
  return graph;
}

/// build_graph, throwing GraphError on violations.
inline VisitingOrderGraph build_graph_or_throw(const RawGraph& raw,
                                               ValidationMode mode = ValidationMode::Lenient) {
  auto result = build_graph(raw, mode);
  if (auto* violations = std::get_if<std::vector<Violation>>(&result)) {
    throw GraphError(std::move(*violations));
  }
  return std::get<VisitingOrderGraph>(std::move(result));
}

/// One node per visit partition, indexed in partition order.
inline std::vector<VisitNode> split_multi_visit(const std::string& entity_id,
                                                std::span<const std::string> mention_ids,
                                                std::span<const std::vector<std::string>> partitions) {
  std::vector<Violation> violations;
  if (partitions.empty()) {
    violations.push_back({ViolationCode::EmptyVisitPartition, entity_id, "no visit partitions"});
  }
  const std::set<std::string> own(mention_ids.begin(), mention_ids.end());
  std::set<std::string> used;
  std::vector<VisitNode> nodes;
  for (std::size_t k = 0; k < partitions.size(); ++k) {
    const VisitNode node{entity_id, k};
    if (partitions[k].empty()) {
      violations.push_back({ViolationCode::EmptyVisitPartition, to_string(node), "empty partition"});
    }
    for (const auto& m : partitions[k]) {
      if (!own.contains(m)) {
        violations.push_back({ViolationCode::DanglingReference, to_string(node),
                              "mention '" + m + "' is not part of the entity"});
      } else if (!used.insert(m).second) {
        violations.push_back({ViolationCode::EmptyVisitPartition, to_string(node),
                              "mention '" + m + "' appears in more than one partition"});
      }
    }
    nodes.push_back(node);
  }
  if (!violations.empty()) {
    std::sort(violations.begin(), violations.end());
    throw GraphError(std::move(violations));
  }
  return nodes;
}

}  // namespace voyagegraph
