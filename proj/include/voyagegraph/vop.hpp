#pragma once

// Visiting order prediction: parent selection (inclusion) and successor
// selection (transition) over sibling groups, with the rule baselines and
// the naive and sequence-sorting decoders.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "voyagegraph/document.hpp"
#include "voyagegraph/graph.hpp"
#include "voyagegraph/rng.hpp"
#include "voyagegraph/vsp.hpp"

namespace voyagegraph {

/// Pairwise relation scores; higher means more likely. ROOT and EOS are
/// passed as nullopt candidates.
class PairwiseScorer {
 public:
  virtual ~PairwiseScorer() = default;
  /// How likely `candidate` geographically includes `query`.
  virtual double score_parent(const NodeIndex& doc, const VisitNode& query,
                              const ParentRef& candidate) const = 0;
  /// How likely `candidate` is visited directly after `query`.
  virtual double score_successor(const NodeIndex& doc, const VisitNode& query,
                                 const SuccessorRef& candidate) const = 0;
};

using ParentAssignment = std::map<VisitNode, ParentRef>;
using SuccessorAssignment = std::map<VisitNode, SuccessorRef>;

enum class RelationTask { Inclusion, Transition };

/// Inclusion: earliest proper-noun mention, else earliest mention.
/// Transition: earliest mention of the best class among Visit, See, rest.
inline const Mention& representative_mention(const NodeMentions& node, RelationTask task) {
  const auto& ms = node.mentions;
  if (ms.empty()) throw std::invalid_argument("node " + to_string(node.node) + " has no mentions");
  if (task == RelationTask::Inclusion) {
    for (const auto* m : ms)
      if (m->is_proper_noun) return *m;
    return *ms.front();
  }
  for (auto wanted : {MentionLabel::Visit, MentionLabel::See}) {
    for (const auto* m : ms)
      if (m->label == wanted) return *m;
  }
  return *ms.front();
}

/// Every other node, then ROOT.
inline std::vector<ParentRef> irp_candidates(std::span<const VisitNode> nodes, const VisitNode& query) {
  if (std::find(nodes.begin(), nodes.end(), query) == nodes.end()) {
    throw std::invalid_argument("query node " + to_string(query) + " is not among the input nodes");
  }
  std::vector<ParentRef> out;
  for (const auto& n : nodes)
    if (n != query) out.emplace_back(n);
  out.emplace_back(std::nullopt);
  return out;
}

/// Siblings in node order, then EOS.
inline std::vector<SuccessorRef> trp_candidates(const VisitingOrderGraph& graph, const VisitNode& query) {
  std::vector<SuccessorRef> out;
  for (auto& n : graph.siblings(query)) out.emplace_back(std::move(n));
  out.emplace_back(std::nullopt);
  return out;
}

/// Sibling groups keyed by parent (ROOT as nullopt), members in node order.
inline std::map<ParentRef, std::vector<VisitNode>> sibling_groups(const ParentAssignment& parents) {
  std::map<ParentRef, std::vector<VisitNode>> groups;
  for (const auto& [node, parent] : parents) groups[parent].push_back(node);
  return groups;
}

inline std::map<ParentRef, std::vector<VisitNode>> sibling_groups(const VisitingOrderGraph& graph) {
  std::map<ParentRef, std::vector<VisitNode>> groups;
  for (const auto& n : graph.nodes()) groups[graph.parent(n)].push_back(n);
  return groups;
}

inline ParentAssignment parent_assignment(const VisitingOrderGraph& graph) {
  ParentAssignment out;
  for (const auto& n : graph.nodes()) out.emplace(n, graph.parent(n));
  return out;
}

inline SuccessorAssignment successor_assignment(const VisitingOrderGraph& graph) {
  SuccessorAssignment out;
  for (const auto& n : graph.nodes()) out.emplace(n, graph.successor(n));
  return out;
}

namespace detail {

inline double checked_score(double s, const std::string& what) {
  if (!std::isfinite(s)) throw ScorerError("non-finite score for " + what);
  return s;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Inclusion relation prediction

/// Per-node argmax over every other node and ROOT. Ties prefer a real node
/// over ROOT, then the earlier representative mention, then the node id.
inline ParentAssignment predict_parents(const PairwiseScorer& scorer, const NodeIndex& doc,
                                        std::span<const VisitNode> nodes) {
  std::vector<VisitNode> ordered(nodes.begin(), nodes.end());
  std::sort(ordered.begin(), ordered.end(), [&](const VisitNode& a, const VisitNode& b) {
    const auto& ma = representative_mention(doc.at(a), RelationTask::Inclusion);
    const auto& mb = representative_mention(doc.at(b), RelationTask::Inclusion);
    return std::pair(occurrence_key(ma), a) < std::pair(occurrence_key(mb), b);
  });
  ParentAssignment out;
  for (const auto& q : nodes) {
    ParentRef best = std::nullopt;
    double best_score = 0.0;
    bool first = true;
    auto consider = [&](const ParentRef& candidate) {
      const double s = detail::checked_score(
          scorer.score_parent(doc, q, candidate),
          "parent(" + to_string(q) + ", " + parent_to_string(candidate) + ")");
      if (first || s > best_score) {
        best = candidate;
        best_score = s;
        first = false;
      }
    };
    for (const auto& c : ordered)
      if (c != q) consider(c);
    consider(std::nullopt);
    out.emplace(q, best);
  }
  return out;
}

/// Every node under ROOT.
inline ParentAssignment flat_baseline(std::span<const VisitNode> nodes) {
  ParentAssignment out;
  for (const auto& n : nodes) out.emplace(n, std::nullopt);
  return out;
}

/// Uniform draw from each node's candidate set.
inline ParentAssignment random_parent_baseline(std::span<const VisitNode> nodes, std::uint64_t seed) {
  std::vector<VisitNode> sorted(nodes.begin(), nodes.end());
  std::sort(sorted.begin(), sorted.end());
  Rng rng(derive_seed(seed, std::string_view("irp-random")));
  ParentAssignment out;
  for (const auto& q : sorted) {
    const auto candidates = irp_candidates(sorted, q);
    out.emplace(q, candidates[rng.below(candidates.size())]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Transition relation prediction

/// Chains `ordered` front to back, last node to EOS.
inline SuccessorAssignment chain_of(std::span<const VisitNode> ordered) {
  SuccessorAssignment out;
  for (std::size_t i = 0; i < ordered.size(); ++i) {
    out.emplace(ordered[i], i + 1 < ordered.size() ? SuccessorRef(ordered[i + 1]) : std::nullopt);
  }
  return out;
}

enum class OccOrderStrategy { EarliestMention, VisitStatus };

/// Siblings lined up by where their representative mention occurs.
inline SuccessorAssignment occorder(const NodeIndex& doc, std::span<const VisitNode> group,
                                    OccOrderStrategy strategy) {
  auto key_mention = [&](const VisitNode& n) -> const Mention& {
    const auto& nm = doc.at(n);
    return strategy == OccOrderStrategy::EarliestMention ? nm.earliest()
                                                         : representative_mention(nm, RelationTask::Transition);
  };
  std::vector<VisitNode> ordered(group.begin(), group.end());
  std::sort(ordered.begin(), ordered.end(), [&](const VisitNode& a, const VisitNode& b) {
    return std::pair(occurrence_key(key_mention(a)), a) < std::pair(occurrence_key(key_mention(b)), b);
  });
  return chain_of(ordered);
}

/// Independent per-node argmax over siblings and EOS; may break chain
/// structure. Ties prefer the earlier sibling in node order, EOS last.
inline SuccessorAssignment naive_score_decode(const PairwiseScorer& scorer, const NodeIndex& doc,
                                              std::span<const VisitNode> group) {
  std::vector<VisitNode> sorted(group.begin(), group.end());
  std::sort(sorted.begin(), sorted.end());
  SuccessorAssignment out;
  for (const auto& q : sorted) {
    SuccessorRef best;
    double best_score = 0.0;
    bool first = true;
    auto consider = [&](const SuccessorRef& c) {
      const double s = detail::checked_score(
          scorer.score_successor(doc, q, c), "successor(" + to_string(q) + ", " + successor_to_string(c) + ")");
      if (first || s > best_score) {
        best = c;
        best_score = s;
        first = false;
      }
    };
    for (const auto& c : sorted)
      if (c != q) consider(c);
    consider(std::nullopt);
    out.emplace(q, best);
  }
  return out;
}

inline constexpr std::size_t kChainEnd = static_cast<std::size_t>(-1);

/// Greedy sequence sorting over an n x n row-major score matrix, where
/// scores[i * n + j] rates j directly following i (diagonal unused).
/// Repeatedly accepts the best remaining pair, dropping pairs that reuse a
/// source or target or would close a cycle, until one chain covers all n
/// nodes. Ties go to the lexicographically smaller (i, j). Returns the
/// successor of each node, kChainEnd for the tail.
inline std::vector<std::size_t> sequence_sort(std::size_t n, std::span<const double> scores) {
  if (scores.size() != n * n) throw std::invalid_argument("sequence_sort: score matrix must be n x n");
  std::vector<std::size_t> succ(n, kChainEnd), pred(n, kChainEnd);
  if (n < 2) return succ;
  struct Pair {
    double score;
    std::size_t from, to;
  };
  std::vector<Pair> pairs;
  pairs.reserve(n * (n - 1));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) {
        const double s = scores[i * n + j];
        if (!std::isfinite(s)) throw ScorerError("sequence_sort: non-finite score");
        pairs.push_back({s, i, j});
      }
  std::stable_sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) { return a.score > b.score; });
  std::size_t accepted = 0;
  for (const auto& p : pairs) {
    if (succ[p.from] != kChainEnd || pred[p.to] != kChainEnd) continue;
    std::size_t tail = p.to;
    while (succ[tail] != kChainEnd) tail = succ[tail];
    if (tail == p.from) continue;
    succ[p.from] = p.to;
    pred[p.to] = p.from;
    if (++accepted == n - 1) break;
  }
  return succ;
}

/// Sequence sorting over one sibling group; EOS is implied by the chain tail
/// and never scored.
inline SuccessorAssignment sequence_sort_decode(const PairwiseScorer& scorer, const NodeIndex& doc,
                                                std::span<const VisitNode> group) {
  std::vector<VisitNode> sorted(group.begin(), group.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  std::vector<double> scores(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) scores[i * n + j] = scorer.score_successor(doc, sorted[i], sorted[j]);
  const auto succ = sequence_sort(n, scores);
  SuccessorAssignment out;
  for (std::size_t i = 0; i < n; ++i) {
    out.emplace(sorted[i], succ[i] == kChainEnd ? SuccessorRef() : SuccessorRef(sorted[succ[i]]));
  }
  return out;
}

/// Uniformly random permutation chain.
inline SuccessorAssignment random_order_baseline(std::span<const VisitNode> group, std::uint64_t seed) {
  std::vector<VisitNode> order(group.begin(), group.end());
  std::sort(order.begin(), order.end());
  Rng rng(derive_seed(seed, std::string_view("trp-random")));
  rng.shuffle(std::span<VisitNode>(order));
  return chain_of(order);
}

/// Applies a per-group decoder to every sibling group of `parents`.
template <class Decoder>
  requires std::invocable<Decoder, std::span<const VisitNode>>
SuccessorAssignment decode_groups(const ParentAssignment& parents, Decoder&& decode) {
  SuccessorAssignment out;
  for (const auto& [parent, members] : sibling_groups(parents)) {
    out.merge(std::invoke(decode, std::span<const VisitNode>(members)));
  }
  return out;
}

/// Overlap members that stand in for their partner and take no part in
/// transitions: the member without a non-ROOT parent or children when its
/// partner has one, or the later node when neither does.
inline std::set<VisitNode> overlap_bystanders(const ParentAssignment& parents,
                                              std::span<const std::pair<VisitNode, VisitNode>> overlap) {
  std::set<VisitNode> has_children;
  for (const auto& [node, parent] : parents)
    if (parent) has_children.insert(*parent);
  auto linked = [&](const VisitNode& n) {
    auto it = parents.find(n);
    return (it != parents.end() && it->second) || has_children.contains(n);
  };
  std::set<VisitNode> out;
  for (const auto& [x, y] : overlap) {
    if (!parents.contains(x) || !parents.contains(y)) continue;
    const bool lx = linked(x), ly = linked(y);
    if (lx && !ly) out.insert(y);
    else if (ly && !lx) out.insert(x);
    else if (!lx && !ly) out.insert(std::max(x, y));
  }
  return out;
}

/// Like decode_groups, with bystanders kept out of every group and sent to EOS.
template <class Decoder>
SuccessorAssignment decode_groups(const ParentAssignment& parents, const std::set<VisitNode>& bystanders,
                                  Decoder&& decode) {
  ParentAssignment kept;
  for (const auto& [node, parent] : parents)
    if (!bystanders.contains(node)) kept.emplace(node, parent);
  auto out = decode_groups(kept, std::forward<Decoder>(decode));
  for (const auto& b : bystanders)
    if (parents.contains(b)) out.emplace(b, std::nullopt);
  return out;
}

/// Predicted edges written back into a document's graph: inclusion for every
/// non-ROOT parent, transition for every non-EOS successor.
inline RawGraph assignment_graph(const ParentAssignment& parents, const SuccessorAssignment& successors,
                                 const std::vector<std::pair<VisitNode, VisitNode>>& overlap = {}) {
  RawGraph raw;
  for (const auto& [node, parent] : parents) {
    raw.nodes.push_back(node);
    if (parent) raw.inclusion.emplace_back(parent, node);
  }
  for (const auto& [node, successor] : successors)
    if (successor) raw.transition.emplace_back(node, *successor);
  raw.overlap = overlap;
  return raw;
}

}  // namespace voyagegraph
