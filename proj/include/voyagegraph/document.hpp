#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "voyagegraph/graph.hpp"
#include "voyagegraph/labels.hpp"

namespace voyagegraph {

struct Sentence {
  std::string id;
  std::string text;

  bool operator==(const Sentence&) const = default;
};

/// Offsets count Unicode code points within the sentence text.
struct Mention {
  std::string id;
  std::string entity_id;
  std::size_t sentence_index = 0;
  std::size_t start = 0;
  std::size_t end = 0;
  std::string surface;
  bool is_proper_noun = false;
  std::optional<MentionLabel> label;

  bool operator==(const Mention&) const = default;
};

struct Entity {
  std::string id;
  std::vector<std::string> mention_ids;
  std::optional<EntityLabel> label;
  bool unknown_time = false;
  /// One mention-id partition per visit episode, when the entity was revisited.
  std::optional<std::vector<std::vector<std::string>>> visits;

  bool operator==(const Entity&) const = default;
};

struct Document {
  std::string id;
  std::vector<Sentence> sentences;
  std::vector<Mention> mentions;
  std::vector<Entity> entities;
  /// Edge lists exactly as annotated or predicted; nodes are derived.
  std::optional<RawGraph> graph;

  bool operator==(const Document&) const = default;

  const Mention& mention(const std::string& mention_id) const {
    for (const auto& m : mentions) {
      if (m.id == mention_id) return m;
    }
    throw std::out_of_range("document " + id + ": unknown mention '" + mention_id + "'");
  }

  const Entity& entity(const std::string& entity_id) const {
    for (const auto& e : entities) {
      if (e.id == entity_id) return e;
    }
    throw std::out_of_range("document " + id + ": unknown entity '" + entity_id + "'");
  }
};

/// Strict total occurrence order: (sentence, start, end, id).
inline auto occurrence_key(const Mention& m) {
  return std::tie(m.sentence_index, m.start, m.end, m.id);
}

inline bool occurs_before(const Mention& a, const Mention& b) {
  return occurrence_key(a) < occurrence_key(b);
}

/// Number of visit episodes: partitions when present, otherwise one.
inline std::size_t visit_count(const Entity& entity) {
  return entity.visits && !entity.visits->empty() ? entity.visits->size() : 1;
}

/// An entity takes part in the graph when it is visited (or unlabeled) and
/// its visit timing is known.
inline bool is_graph_entity(const Entity& entity) {
  return !entity.unknown_time && (!entity.label || *entity.label == EntityLabel::Visit);
}

/// A graph node together with the mentions of its visit episode.
struct NodeMentions {
  VisitNode node;
  std::vector<const Mention*> mentions;  // occurrence order

  const Mention& earliest() const { return *mentions.front(); }
};

/// Mentions belonging to one node of `entity`.
inline std::vector<const Mention*> mentions_of(const Document& doc, const Entity& entity,
                                               std::size_t visit_index) {
  const std::vector<std::string>* ids = &entity.mention_ids;
  if (entity.visits && entity.visits->size() > 1) ids = &entity.visits->at(visit_index);
  std::vector<const Mention*> out;
  for (const auto& id : *ids) out.push_back(&doc.mention(id));
  std::sort(out.begin(), out.end(), [](const Mention* a, const Mention* b) { return occurs_before(*a, *b); });
  return out;
}

/// Graph nodes derived from the entity list, in node order.
inline std::vector<VisitNode> graph_nodes(const Document& doc) {
  std::vector<VisitNode> nodes;
  for (const auto& e : doc.entities) {
    if (!is_graph_entity(e)) continue;
    for (std::size_t k = 0; k < visit_count(e); ++k) nodes.push_back({e.id, k});
  }
  std::sort(nodes.begin(), nodes.end());
  return nodes;
}

/// Node lookup with mention access; pointers refer into `doc`, which must outlive it.
class NodeIndex {
 public:
  explicit NodeIndex(const Document& doc) : doc_(&doc) {
    for (const auto& e : doc.entities) {
      for (std::size_t k = 0; k < visit_count(e); ++k) {
        VisitNode node{e.id, k};
        nodes_.emplace(node, NodeMentions{node, mentions_of(doc, e, k)});
      }
    }
  }

  const Document& document() const { return *doc_; }

  const NodeMentions& at(const VisitNode& node) const {
    auto it = nodes_.find(node);
    if (it == nodes_.end()) {
      throw std::out_of_range("document " + doc_->id + ": unknown node '" + to_string(node) + "'");
    }
    return it->second;
  }

  bool contains(const VisitNode& node) const { return nodes_.contains(node); }

 private:
  const Document* doc_;
  std::map<VisitNode, NodeMentions> nodes_;
};

/// The document's edge lists completed with derived nodes and exclusions.
/// Entities referenced by edges but excluded as UnknownTime are added as
/// nodes so that validation reports them as UnknownTimeNode.
inline RawGraph raw_graph(const Document& doc) {
  RawGraph raw = doc.graph.value_or(RawGraph{});
  raw.nodes = graph_nodes(doc);
  std::set<VisitNode> declared(raw.nodes.begin(), raw.nodes.end());
  for (const auto& e : doc.entities) {
    if (e.unknown_time) raw.excluded.insert(e.id);
  }
  auto pull_in = [&](const VisitNode& node) {
    if (declared.contains(node) || !raw.excluded.contains(node.entity_id)) return;
    declared.insert(node);
    raw.nodes.push_back(node);
  };
  for (const auto& [parent, child] : raw.inclusion) {
    if (parent) pull_in(*parent);
    pull_in(child);
  }
  for (const auto& [a, b] : raw.transition) {
    pull_in(a);
    pull_in(b);
  }
  for (const auto& [a, b] : raw.overlap) {
    pull_in(a);
    pull_in(b);
  }
  std::sort(raw.nodes.begin(), raw.nodes.end());
  return raw;
}

/// Gold graph of a document; throws GraphError when it does not validate.
inline VisitingOrderGraph document_graph(const Document& doc,
                                         ValidationMode mode = ValidationMode::Lenient) {
  return build_graph_or_throw(raw_graph(doc), mode);
}

}  // namespace voyagegraph
