#pragma once

// Shared test data: the Kyoto/Nara example graph and document, random valid
// graphs, and an order-inference oracle that works from transitive closure.

#include <string>
#include <vector>

#include "voyagegraph/corpus_io.hpp"
#include "voyagegraph/graph.hpp"
#include "voyagegraph/rng.hpp"

namespace voyagegraph::testing {

inline VisitNode node(const std::string& id, std::size_t k = 0) { return {id, k}; }

/// Kyoto City -> Nara City at the top level; Kyoto Station under Kyoto City;
/// Nara Station -> Todaiji Temple under Nara City; Great Buddha Hall under
/// Todaiji Temple.
inline RawGraph kyoto_nara_raw() {
  RawGraph raw;
  raw.nodes = {node("KyotoCity"), node("NaraCity"), node("KyotoStation"),
               node("NaraStation"), node("TodaijiTemple"), node("GreatBuddhaHall")};
  raw.inclusion = {{node("KyotoCity"), node("KyotoStation")},
                   {node("NaraCity"), node("NaraStation")},
                   {node("NaraCity"), node("TodaijiTemple")},
                   {node("TodaijiTemple"), node("GreatBuddhaHall")}};
  raw.transition = {{node("KyotoCity"), node("NaraCity")},
                    {node("NaraStation"), node("TodaijiTemple")}};
  return raw;
}

/// The same trip as an annotated document (sentences in Japanese).
inline std::string kyoto_nara_json() {
  return R"({
  "id": "doc-kyoto-nara",
  "sentences": [
    {"id": "s1", "text": "その日は、京都市を素通りして、京都駅から奈良市に向かいました。"},
    {"id": "s2", "text": "奈良駅で降りた後、駅から東大寺まで少し歩きました。"},
    {"id": "s3", "text": "大仏殿の大仏は大きかった。"}
  ],
  "mentions": [
    {"id": "m1", "entity_id": "KyotoCity", "sentence_id": "s1", "start": 5, "end": 8, "surface": "京都市", "is_proper_noun": true, "label": "Visit"},
    {"id": "m2", "entity_id": "KyotoStation", "sentence_id": "s1", "start": 15, "end": 18, "surface": "京都駅", "is_proper_noun": true, "label": "Visit"},
    {"id": "m3", "entity_id": "NaraCity", "sentence_id": "s1", "start": 20, "end": 23, "surface": "奈良市", "is_proper_noun": true, "label": "PlanToVisit"},
    {"id": "m4", "entity_id": "NaraStation", "sentence_id": "s2", "start": 0, "end": 3, "surface": "奈良駅", "is_proper_noun": true, "label": "Visit"},
    {"id": "m5", "entity_id": "NaraStation", "sentence_id": "s2", "start": 9, "end": 10, "surface": "駅", "is_proper_noun": false, "label": "Visit"},
    {"id": "m6", "entity_id": "TodaijiTemple", "sentence_id": "s2", "start": 12, "end": 15, "surface": "東大寺", "is_proper_noun": true, "label": "Visit"},
    {"id": "m7", "entity_id": "GreatBuddhaHall", "sentence_id": "s3", "start": 0, "end": 3, "surface": "大仏殿", "is_proper_noun": true, "label": "Visit"}
  ],
  "entities": [
    {"id": "KyotoCity", "mention_ids": ["m1"], "label": "Visit"},
    {"id": "KyotoStation", "mention_ids": ["m2"], "label": "Visit"},
    {"id": "NaraCity", "mention_ids": ["m3"], "label": "Visit"},
    {"id": "NaraStation", "mention_ids": ["m4", "m5"], "label": "Visit"},
    {"id": "TodaijiTemple", "mention_ids": ["m6"], "label": "Visit"},
    {"id": "GreatBuddhaHall", "mention_ids": ["m7"], "label": "Visit"}
  ],
  "graph": {
    "inclusion": [["KyotoCity", "KyotoStation"], ["NaraCity", "NaraStation"],
                  ["NaraCity", "TodaijiTemple"], ["TodaijiTemple", "GreatBuddhaHall"]],
    "transition": [["KyotoCity", "NaraCity"], ["NaraStation", "TodaijiTemple"]],
    "overlap": []
  }
})";
}

/// A random valid graph with up to `max_nodes` nodes: random forest, each
/// sibling group cut into random disjoint chains. Some entities get a second
/// visit episode.
inline RawGraph random_valid_graph(Rng& rng, std::size_t max_nodes) {
  const std::size_t n = 1 + rng.below(max_nodes);
  RawGraph raw;
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0 && rng.bernoulli(0.15)) {
      raw.nodes.push_back(node(raw.nodes.back().entity_id, raw.nodes.back().visit_index + 1));
    } else {
      raw.nodes.push_back(node("n" + std::to_string(i)));
    }
  }
  std::vector<VisitNode> order = raw.nodes;
  rng.shuffle(std::span<VisitNode>(order));
  std::map<ParentRef, std::vector<VisitNode>> groups;
  for (std::size_t i = 0; i < order.size(); ++i) {
    ParentRef parent;
    if (i > 0 && rng.bernoulli(0.6)) parent = order[rng.below(i)];
    if (parent) raw.inclusion.emplace_back(parent, order[i]);
    groups[parent].push_back(order[i]);
  }
  for (auto& [parent, members] : groups) {
    rng.shuffle(std::span<VisitNode>(members));
    for (std::size_t i = 0; i + 1 < members.size(); ++i) {
      if (rng.bernoulli(0.7)) raw.transition.emplace_back(members[i], members[i + 1]);
    }
  }
  return raw;
}

/// Order relation by brute force: transitive closure of transitions, lifted
/// through every ancestor pair.
inline OrderRelation closure_order_oracle(const RawGraph& raw, const VisitNode& a, const VisitNode& b) {
  std::map<VisitNode, std::size_t> idx;
  for (const auto& n : raw.nodes) idx.emplace(n, idx.size());
  const std::size_t n = idx.size();
  std::vector<std::ptrdiff_t> parent(n, -1);
  for (const auto& [p, c] : raw.inclusion) {
    if (p) parent[idx.at(c)] = static_cast<std::ptrdiff_t>(idx.at(*p));
  }
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (const auto& [x, y] : raw.transition) reach[idx.at(x)][idx.at(y)] = true;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (reach[i][k] && reach[k][j]) reach[i][j] = true;
  auto self_and_ancestors = [&](std::size_t i) {
    std::vector<std::size_t> out{i};
    for (auto p = parent[i]; p >= 0; p = parent[p]) out.push_back(static_cast<std::size_t>(p));
    return out;
  };
  const auto ia = idx.at(a);
  const auto ib = idx.at(b);
  if (ia == ib) return OrderRelation::Same;
  const auto up_a = self_and_ancestors(ia);
  const auto up_b = self_and_ancestors(ib);
  if (std::find(up_b.begin() + 1, up_b.end(), ia) != up_b.end()) return OrderRelation::Contains;
  if (std::find(up_a.begin() + 1, up_a.end(), ib) != up_a.end()) return OrderRelation::ContainedBy;
  for (auto x : up_a)
    for (auto y : up_b)
      if (reach[x][y]) return OrderRelation::Before;
  for (auto x : up_a)
    for (auto y : up_b)
      if (reach[y][x]) return OrderRelation::After;
  return OrderRelation::Incomparable;
}

inline std::vector<ViolationCode> codes(const std::vector<Violation>& violations) {
  std::vector<ViolationCode> out;
  for (const auto& v : violations) out.push_back(v.code);
  return out;
}

}  // namespace voyagegraph::testing
