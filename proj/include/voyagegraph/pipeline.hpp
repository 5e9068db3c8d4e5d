#pragma once

// Named prediction systems applied document by document. Every prediction
// is a copy of the input document with labels or graph edges replaced.

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "voyagegraph/corpus_io.hpp"
#include "voyagegraph/document.hpp"
#include "voyagegraph/synth.hpp"
#include "voyagegraph/vop.hpp"
#include "voyagegraph/vsp.hpp"

namespace voyagegraph {

enum class System { Majority, Flat, Random, OccOrderEm, OccOrderVs, Oracle, Heuristic };
enum class Decoder { Naive, SeqSort };

inline System parse_system(std::string_view s) {
  if (s == "majority") return System::Majority;
  if (s == "flat") return System::Flat;
  if (s == "random") return System::Random;
  if (s == "occorder-em") return System::OccOrderEm;
  if (s == "occorder-vs") return System::OccOrderVs;
  if (s == "oracle") return System::Oracle;
  if (s == "heuristic") return System::Heuristic;
  throw std::invalid_argument("unknown system '" + std::string(s) + "'");
}

inline Decoder parse_decoder(std::string_view s) {
  if (s == "naive") return Decoder::Naive;
  if (s == "seqsort") return Decoder::SeqSort;
  throw std::invalid_argument("unknown decoder '" + std::string(s) + "'");
}

struct PredictOptions {
  System system = System::Oracle;
  Decoder decoder = Decoder::SeqSort;
  std::uint64_t seed = 13;
  double noise = 0.0;
  /// Majority baseline statistics come from here.
  const std::vector<Document>* train = nullptr;
  /// Gold annotations for the oracle; the inputs themselves when null.
  const std::vector<Document>* gold = nullptr;
};

namespace detail {

inline std::uint64_t document_seed(std::uint64_t seed, const Document& doc) { return derive_seed(seed, doc.id); }

[[noreturn]] inline void unsupported(System s, std::string_view task) {
  static const char* names[] = {"majority", "flat", "random", "occorder-em", "occorder-vs", "oracle", "heuristic"};
  throw std::invalid_argument(std::string("system '") + names[static_cast<int>(s)] + "' does not apply to " +
                              std::string(task));
}

/// Nodes a relation predictor works over: derived from the entity labels.
inline std::vector<VisitNode> prediction_nodes(const Document& doc) { return graph_nodes(doc); }

inline std::vector<std::pair<VisitNode, VisitNode>> given_overlap(const Document& doc) {
  if (!doc.graph) return {};
  return doc.graph->overlap;
}

}  // namespace detail

// ---------------------------------------------------------------------------

inline std::vector<Document> predict_vsp_corpus(const std::vector<Document>& docs, const PredictOptions& o) {
  std::unique_ptr<MentionScorer> scorer;
  std::optional<EntityLabel> entity_constant;
  switch (o.system) {
    case System::Majority: {
      if (!o.train) throw std::invalid_argument("the majority system needs a training corpus");
      auto base = majority_baseline(mention_histogram(*o.train), entity_histogram(*o.train));
      entity_constant = base.entity_label;
      scorer = std::make_unique<ConstantMentionScorer>(base.scorer);
      break;
    }
    case System::Oracle:
      scorer = std::make_unique<OracleMentionScorer>(o.gold ? *o.gold : docs, o.noise, o.seed);
      break;
    default:
      detail::unsupported(o.system, "visit status prediction");
  }
  std::vector<Document> out;
  for (const auto& d : docs) {
    auto p = predict_vsp(*scorer, d);
    // The entity-level majority constant is the baseline's own entity output.
    if (entity_constant)
      for (auto& [id, label] : p.entity_labels) label = *entity_constant;
    out.push_back(with_vsp_labels(d, p));
  }
  return out;
}

inline ParentAssignment predict_irp_document(const Document& doc, const PredictOptions& o,
                                             const PairwiseScorer* scorer) {
  const auto nodes = detail::prediction_nodes(doc);
  switch (o.system) {
    case System::Flat: return flat_baseline(nodes);
    case System::Random: return random_parent_baseline(nodes, detail::document_seed(o.seed, doc));
    case System::Oracle:
    case System::Heuristic: return predict_parents(*scorer, NodeIndex(doc), nodes);
    default: detail::unsupported(o.system, "inclusion relation prediction");
  }
}

inline SuccessorAssignment predict_trp_document(const Document& doc, const ParentAssignment& parents,
                                                const PredictOptions& o, const PairwiseScorer* scorer) {
  const NodeIndex index(doc);
  const auto overlap = detail::given_overlap(doc);
  const auto bystanders = overlap_bystanders(parents, overlap);
  const auto seed = detail::document_seed(o.seed, doc);
  auto decode = [&](std::span<const VisitNode> group) -> SuccessorAssignment {
    switch (o.system) {
      case System::Random: return random_order_baseline(group, derive_seed(seed, to_string(group.front())));
      case System::OccOrderEm: return occorder(index, group, OccOrderStrategy::EarliestMention);
      case System::OccOrderVs: return occorder(index, group, OccOrderStrategy::VisitStatus);
      case System::Oracle:
      case System::Heuristic:
        return o.decoder == Decoder::Naive ? naive_score_decode(*scorer, index, group)
                                           : sequence_sort_decode(*scorer, index, group);
      default: detail::unsupported(o.system, "transition relation prediction");
    }
  };
  return decode_groups(parents, bystanders, decode);
}

namespace detail {

inline std::unique_ptr<PairwiseScorer> pair_scorer(const std::vector<Document>& docs, const PredictOptions& o) {
  if (o.system == System::Oracle) return std::make_unique<OraclePairScorer>(o.gold ? *o.gold : docs, o.noise, o.seed);
  if (o.system == System::Heuristic) return std::make_unique<HeuristicScorer>();
  return nullptr;
}

/// Inclusion edges of `doc`'s graph as a total assignment over its nodes.
inline ParentAssignment given_parents(const Document& doc) {
  ParentAssignment out;
  for (const auto& n : graph_nodes(doc)) out.emplace(n, std::nullopt);
  if (!doc.graph) return out;
  for (const auto& [p, c] : doc.graph->inclusion) {
    auto it = out.find(c);
    if (it == out.end()) {
      throw std::invalid_argument("document " + doc.id + ": inclusion edge for unknown node " + to_string(c));
    }
    it->second = p;
  }
  return out;
}

}  // namespace detail

/// Predicted inclusion edges; the document's overlap pairs are carried over.
inline std::vector<Document> predict_irp_corpus(const std::vector<Document>& docs, const PredictOptions& o) {
  const auto scorer = detail::pair_scorer(docs, o);
  std::vector<Document> out;
  for (const auto& d : docs) {
    auto p = d;
    p.graph = assignment_graph(predict_irp_document(d, o, scorer.get()), {}, detail::given_overlap(d));
    p.graph->nodes.clear();
    out.push_back(std::move(p));
  }
  return out;
}

/// Predicted transition edges over the sibling structure of `parents` (the
/// inputs' own inclusion edges when null), which is kept in the output.
inline std::vector<Document> predict_trp_corpus(const std::vector<Document>& docs, const PredictOptions& o,
                                                const std::vector<Document>* parents = nullptr) {
  const auto scorer = detail::pair_scorer(docs, o);
  std::vector<Document> out;
  for (const auto& d : docs) {
    const Document* structure = &d;
    if (parents) {
      structure = nullptr;
      for (const auto& p : *parents)
        if (p.id == d.id) structure = &p;
      if (!structure) throw std::invalid_argument("document " + d.id + " is missing from the parent predictions");
    }
    const auto assignment = detail::given_parents(*structure);
    auto p = d;
    p.graph = assignment_graph(assignment, predict_trp_document(d, assignment, o, scorer.get()),
                               detail::given_overlap(d));
    p.graph->nodes.clear();
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace voyagegraph
