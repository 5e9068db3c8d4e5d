#pragma once

// Relation-pair F1 with depth, direction and group-size breakdowns, plus the
// agreement measures (pair F1 and Cohen's kappa) between two annotations.

#include <algorithm>
#include <iomanip>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "voyagegraph/corpus_io.hpp"
#include "voyagegraph/document.hpp"
#include "voyagegraph/graph.hpp"
#include "voyagegraph/vop.hpp"
#include "voyagegraph/vsp.hpp"

namespace voyagegraph {

struct PairScore {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  std::size_t gold() const { return tp + fn; }
  std::size_t predicted() const { return tp + fp; }
  double precision() const { return safe_ratio(static_cast<double>(tp), static_cast<double>(predicted())); }
  double recall() const { return safe_ratio(static_cast<double>(tp), static_cast<double>(gold())); }
  double f1() const { return f1_score(precision(), recall()); }

  PairScore& operator+=(const PairScore& o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
  bool operator==(const PairScore&) const = default;
};

struct PairF1Report {
  PairScore overall;
  std::map<std::string, PairScore> breakdown;
  /// Unweighted mean of per-document F1 over documents with any gold or
  /// predicted pair; equals overall F1 for a single document.
  double document_mean_f1 = 0.0;
  std::size_t documents = 0;

  double precision() const { return overall.precision(); }
  double recall() const { return overall.recall(); }
  double f1() const { return overall.f1(); }
};

/// Exact set comparison.
template <class Pair>
PairScore pair_f1(const std::set<Pair>& gold, const std::set<Pair>& predicted) {
  PairScore s;
  for (const auto& p : predicted) {
    if (gold.contains(p)) ++s.tp;
    else ++s.fp;
  }
  s.fn = gold.size() - s.tp;
  return s;
}

using NodePair = std::pair<std::optional<VisitNode>, VisitNode>;  // <parent or ROOT, child>
using TransitionPair = std::pair<VisitNode, VisitNode>;

namespace detail {

/// Tallies a gold and a predicted pair set into per-key buckets.
template <class Pair, class KeyFn>
void bucketed(std::map<std::string, PairScore>& out, const std::set<Pair>& gold,
              const std::set<Pair>& predicted, KeyFn&& key) {
  for (const auto& p : predicted) {
    auto& s = out[key(p)];
    if (gold.contains(p)) ++s.tp;
    else ++s.fp;
  }
  for (const auto& p : gold)
    if (!predicted.contains(p)) ++out[key(p)].fn;
}

inline std::string depth_key(std::size_t depth) { return "depth=" + std::to_string(depth); }

inline std::string size_key(std::size_t candidates) {
  return candidates >= 10 ? std::string("size>=10") : "size=" + std::to_string(candidates);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Inclusion

/// Pairs <parent, child> including ROOT parents, broken down by the child's
/// gold depth ("depth=k" for each k, plus "depth>=2").
inline PairF1Report evaluate_irp(const VisitingOrderGraph& gold, const ParentAssignment& predicted) {
  for (const auto& [node, parent] : predicted) {
    if (!gold.contains(node)) throw std::invalid_argument("predicted parent for unknown node " + to_string(node));
    if (parent && *parent == node) throw std::invalid_argument("node " + to_string(node) + " is its own parent");
  }
  std::set<NodePair> gold_pairs, pred_pairs;
  for (const auto& n : gold.nodes()) {
    auto it = predicted.find(n);
    if (it == predicted.end()) throw std::invalid_argument("no predicted parent for node " + to_string(n));
    gold_pairs.emplace(gold.parent(n), n);
    pred_pairs.emplace(it->second, n);
  }
  PairF1Report r;
  r.overall = pair_f1(gold_pairs, pred_pairs);
  detail::bucketed(r.breakdown, gold_pairs, pred_pairs,
                   [&](const NodePair& p) { return detail::depth_key(gold.depth(p.second)); });
  PairScore deep;
  for (const auto& [key, s] : r.breakdown)
    if (key != "depth=1") deep += s;
  if (deep.tp + deep.fp + deep.fn > 0) r.breakdown["depth>=2"] = deep;
  r.documents = 1;
  r.document_mean_f1 = r.f1();
  return r;
}

// ---------------------------------------------------------------------------
// Transition

/// Pairs <from, to> with to != EOS. Each pair is "fwd" when the target's
/// earliest mention follows the source's, else "rev"; and bucketed by the
/// source's candidate-set size (siblings plus EOS) in the gold graph.
/// `parents` gives the sibling structure the predictions must respect; the
/// gold structure when absent.
inline PairF1Report evaluate_trp(const VisitingOrderGraph& gold, const SuccessorAssignment& predicted,
                                 const Document& doc, const ParentAssignment* parents = nullptr) {
  const NodeIndex index(doc);
  const ParentAssignment gold_parents = parent_assignment(gold);
  const ParentAssignment& structure = parents ? *parents : gold_parents;
  std::set<TransitionPair> gold_pairs, pred_pairs;
  for (const auto& n : gold.nodes())
    if (auto s = gold.successor(n)) gold_pairs.emplace(n, *s);
  for (const auto& [from, to] : predicted) {
    auto pf = structure.find(from);
    if (!gold.contains(from) || pf == structure.end()) {
      throw std::invalid_argument("predicted successor for unknown node " + to_string(from));
    }
    if (!to) continue;
    auto pt = structure.find(*to);
    if (*to == from || pt == structure.end() || pt->second != pf->second) {
      throw std::invalid_argument("successor " + to_string(*to) + " of " + to_string(from) +
                                  " lies outside its sibling group");
    }
    pred_pairs.emplace(from, *to);
  }
  PairF1Report r;
  r.overall = pair_f1(gold_pairs, pred_pairs);
  auto direction = [&](const TransitionPair& p) {
    return occurs_before(index.at(p.first).earliest(), index.at(p.second).earliest()) ? std::string("fwd")
                                                                                      : std::string("rev");
  };
  auto size = [&](const TransitionPair& p) {
    return detail::size_key(gold.siblings(p.first).size() + 1);
  };
  detail::bucketed(r.breakdown, gold_pairs, pred_pairs, direction);
  detail::bucketed(r.breakdown, gold_pairs, pred_pairs, size);
  r.documents = 1;
  r.document_mean_f1 = r.f1();
  return r;
}

/// Pools per-document reports: counts add up, the document mean averages
/// per-document F1 over documents that had any pair.
inline PairF1Report pool_reports(const std::vector<PairF1Report>& reports) {
  PairF1Report out;
  double sum = 0.0;
  for (const auto& r : reports) {
    out.overall += r.overall;
    for (const auto& [k, s] : r.breakdown) out.breakdown[k] += s;
    if (r.overall.tp + r.overall.fp + r.overall.fn > 0) {
      sum += r.overall.f1();
      ++out.documents;
    }
  }
  out.document_mean_f1 = out.documents == 0 ? 0.0 : sum / static_cast<double>(out.documents);
  return out;
}

namespace detail {

inline const Document& find_document(const std::vector<Document>& docs, const std::string& id) {
  for (const auto& d : docs)
    if (d.id == id) return d;
  throw std::invalid_argument("document " + id + " is missing from the predictions");
}

inline void check_same_documents(const std::vector<Document>& a, const std::vector<Document>& b) {
  std::set<std::string> ia, ib;
  for (const auto& d : a) ia.insert(d.id);
  for (const auto& d : b) ib.insert(d.id);
  if (ia != ib) throw std::invalid_argument("the two corpora cover different document sets");
}

/// Parents read from a predicted graph, defaulting to ROOT for every node of `nodes`.
inline ParentAssignment parents_from_raw(const RawGraph& raw, std::span<const VisitNode> nodes) {
  ParentAssignment out;
  for (const auto& n : nodes) out.emplace(n, std::nullopt);
  for (const auto& [p, c] : raw.inclusion) {
    auto it = out.find(c);
    if (it == out.end()) throw std::invalid_argument("predicted inclusion for unknown node " + to_string(c));
    it->second = p;
  }
  return out;
}

inline SuccessorAssignment successors_from_raw(const RawGraph& raw, std::span<const VisitNode> nodes) {
  SuccessorAssignment out;
  for (const auto& n : nodes) out.emplace(n, std::nullopt);
  for (const auto& [a, b] : raw.transition) {
    auto it = out.find(a);
    if (it == out.end()) throw std::invalid_argument("predicted transition from unknown node " + to_string(a));
    if (it->second) throw std::invalid_argument("node " + to_string(a) + " has two predicted successors");
    it->second = b;
  }
  return out;
}

}  // namespace detail

enum class RelationTaskEval { Irp, Trp };

/// Corpus-level evaluation of predicted graphs against gold graphs. Every
/// gold node absent from a predicted inclusion list counts as a ROOT child;
/// every node without a predicted transition goes to EOS. For TRP the
/// predicted inclusion edges define the sibling structure when
/// `use_predicted_parents` is set.
inline PairF1Report evaluate_relations(const std::vector<Document>& gold, const std::vector<Document>& predicted,
                                       RelationTaskEval task, bool use_predicted_parents = false) {
  detail::check_same_documents(gold, predicted);
  std::vector<const Document*> ordered;
  for (const auto& d : gold) ordered.push_back(&d);
  std::sort(ordered.begin(), ordered.end(), [](auto* a, auto* b) { return a->id < b->id; });
  std::vector<PairF1Report> reports;
  for (const Document* g : ordered) {
    try {
      const auto graph = document_graph(*g);
      const auto& p = detail::find_document(predicted, g->id);
      const RawGraph raw = p.graph.value_or(RawGraph{});
      if (task == RelationTaskEval::Irp) {
        reports.push_back(evaluate_irp(graph, detail::parents_from_raw(raw, graph.nodes())));
      } else {
        const auto succ = detail::successors_from_raw(raw, graph.nodes());
        if (use_predicted_parents) {
          const auto parents = detail::parents_from_raw(raw, graph.nodes());
          reports.push_back(evaluate_trp(graph, succ, *g, &parents));
        } else {
          reports.push_back(evaluate_trp(graph, succ, *g));
        }
      }
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("document " + g->id + ": " + e.what());
    }
  }
  return pool_reports(reports);
}

inline nlohmann::json pair_score_to_json(const PairScore& s) {
  return {{"tp", s.tp},   {"fp", s.fp},           {"fn", s.fn},
          {"precision", s.precision()}, {"recall", s.recall()}, {"f1", s.f1()}};
}

inline nlohmann::json report_to_json(const PairF1Report& r) {
  nlohmann::json breakdown = nlohmann::json::object();
  for (const auto& [k, s] : r.breakdown) breakdown[k] = pair_score_to_json(s);
  auto j = pair_score_to_json(r.overall);
  j["breakdown"] = breakdown;
  j["documents"] = r.documents;
  j["document_mean_f1"] = r.document_mean_f1;
  return j;
}

inline std::string report_table(const PairF1Report& r) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(3);
  auto row = [&](const std::string& name, const PairScore& s) {
    out << std::left << std::setw(12) << name << std::right << std::setw(8) << s.precision() << std::setw(8)
        << s.recall() << std::setw(8) << s.f1() << std::setw(7) << s.tp << std::setw(7) << s.fp << std::setw(7)
        << s.fn << "\n";
  };
  out << std::left << std::setw(12) << "" << std::right << std::setw(8) << "P" << std::setw(8) << "R"
      << std::setw(8) << "F1" << std::setw(7) << "TP" << std::setw(7) << "FP" << std::setw(7) << "FN" << "\n";
  row("overall", r.overall);
  for (const auto& [k, s] : r.breakdown) row(k, s);
  out << "\nper-document mean F1 " << r.document_mean_f1 << " over " << r.documents << " documents\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// Agreement

/// Kappa from a square contingency table (row annotator A, column B).
inline double cohens_kappa(const std::vector<std::vector<std::size_t>>& table) {
  const std::size_t k = table.size();
  double total = 0.0, agree = 0.0;
  std::vector<double> rows(k, 0.0), cols(k, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    if (table[i].size() != k) throw std::invalid_argument("cohens_kappa: table must be square");
    for (std::size_t j = 0; j < k; ++j) {
      const auto c = static_cast<double>(table[i][j]);
      total += c;
      rows[i] += c;
      cols[j] += c;
      if (i == j) agree += c;
    }
  }
  if (total == 0.0) throw std::invalid_argument("cohens_kappa: no items");
  const double po = agree / total;
  double pe = 0.0;
  for (std::size_t i = 0; i < k; ++i) pe += (rows[i] / total) * (cols[i] / total);
  if (pe >= 1.0) return po >= 1.0 ? 1.0 : 0.0;
  return (po - pe) / (1.0 - pe);
}

template <VisitLabel Label>
double cohens_kappa(std::span<const Label> a, std::span<const Label> b) {
  if (a.size() != b.size()) throw std::invalid_argument("cohens_kappa: label sequences differ in length");
  if (a.empty()) throw std::invalid_argument("cohens_kappa: no items");
  constexpr std::size_t L = LabelTraits<Label>::count;
  std::vector<std::vector<std::size_t>> table(L, std::vector<std::size_t>(L, 0));
  for (std::size_t i = 0; i < a.size(); ++i) ++table[label_index(a[i])][label_index(b[i])];
  return cohens_kappa(table);
}

struct AgreementReport {
  double f1 = 0.0;
  std::optional<double> kappa;  // label levels only
  std::size_t items = 0;
};

enum class RelationKind { Inclusion, Transition, Both };

/// Relation pair F1 between two annotations of the same documents, A as
/// gold. Inclusion pairs include ROOT parents.
inline AgreementReport iaa_f1(const std::vector<Document>& a, const std::vector<Document>& b, RelationKind kind) {
  detail::check_same_documents(a, b);
  using Tagged = std::tuple<std::string, std::string, std::string, std::string>;  // doc, kind, from, to
  auto pairs = [&](const Document& d) {
    std::set<Tagged> out;
    const auto graph = document_graph(d);
    for (const auto& n : graph.nodes()) {
      if (kind != RelationKind::Transition)
        out.emplace(d.id, "inclusion", parent_to_string(graph.parent(n)), to_string(n));
      if (kind != RelationKind::Inclusion)
        if (auto s = graph.successor(n)) out.emplace(d.id, "transition", to_string(n), to_string(*s));
    }
    return out;
  };
  std::set<Tagged> pa, pb;
  for (const auto& d : a) pa.merge(pairs(d));
  for (const auto& d : b) pb.merge(pairs(detail::find_document(b, d.id)));
  const auto s = pair_f1(pa, pb);
  return {s.f1(), std::nullopt, s.gold()};
}

/// Label agreement over pooled items: macro-F1 with A as gold, and kappa.
inline AgreementReport iaa_labels(const std::vector<Document>& a, const std::vector<Document>& b, VspLevel level) {
  detail::check_same_documents(a, b);
  auto run = [&](const auto& la, const auto& lb) {
    const auto report = evaluate_labels(la, lb);
    using L = typename std::decay_t<decltype(la)>::mapped_type;
    std::vector<L> va, vb;
    for (const auto& [k, v] : la) va.push_back(v);
    for (const auto& [k, v] : lb) vb.push_back(v);
    return AgreementReport{report.macro_f1, cohens_kappa<L>(std::span<const L>(va), std::span<const L>(vb)),
                           report.total};
  };
  if (level == VspLevel::Mention) return run(pooled_mention_labels(a), pooled_mention_labels(b));
  return run(pooled_entity_labels(a), pooled_entity_labels(b));
}

inline nlohmann::json agreement_to_json(const AgreementReport& r) {
  nlohmann::json j = {{"f1", r.f1}, {"items", r.items}};
  j["kappa"] = r.kappa ? nlohmann::json(*r.kappa) : nlohmann::json(nullptr);
  return j;
}

}  // namespace voyagegraph
