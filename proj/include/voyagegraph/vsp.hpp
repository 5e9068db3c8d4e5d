#pragma once

// Visit status prediction: argmax over a pluggable mention scorer, entity
// labels by mention label aggregation, the majority baseline, and the
// accuracy / macro-F1 evaluation.

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ranges>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "voyagegraph/document.hpp"
#include "voyagegraph/labels.hpp"

namespace voyagegraph {

using MentionWeights = LabelArray<MentionLabel, double>;

/// Non-negative weight per mention label; higher is more likely. NaN marks a
/// missing weight.
class MentionScorer {
 public:
  virtual ~MentionScorer() = default;
  virtual MentionWeights score(const Document& doc, const Mention& mention) const = 0;
};

class ScorerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Highest weight wins; ties go to the earlier label in declaration order.
inline MentionLabel argmax_label(const MentionWeights& weights) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < weights.size(); ++i) {
    if (weights[i] > weights[best]) best = i;
  }
  return LabelTraits<MentionLabel>::all[best];
}

inline std::map<std::string, MentionLabel> predict_mention_labels(const MentionScorer& scorer,
                                                                  const Document& doc) {
  std::map<std::string, MentionLabel> out;
  for (const auto& m : doc.mentions) {
    const auto weights = scorer.score(doc, m);
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (std::isnan(weights[i]) || weights[i] < 0.0) {
        throw ScorerError("document " + doc.id + ", mention " + m.id + ": invalid weight for " +
                          std::string(LabelTraits<MentionLabel>::names[i]));
      }
    }
    out.emplace(m.id, argmax_label(weights));
  }
  return out;
}

/// Visit iff some mention is Visit or PlanToVisit.
template <std::ranges::input_range Labels>
EntityLabel aggregate_mla(const Labels& labels) {
  if (std::ranges::empty(labels)) throw std::invalid_argument("aggregate_mla: entity has no mention labels");
  for (MentionLabel l : labels) {
    if (l == MentionLabel::Visit || l == MentionLabel::PlanToVisit) return EntityLabel::Visit;
  }
  return EntityLabel::Other;
}

inline std::map<std::string, EntityLabel> predict_entity_labels(
    const Document& doc, const std::map<std::string, MentionLabel>& mention_labels) {
  std::map<std::string, EntityLabel> out;
  for (const auto& e : doc.entities) {
    std::vector<MentionLabel> labels;
    for (const auto& id : e.mention_ids) {
      auto it = mention_labels.find(id);
      if (it == mention_labels.end()) {
        throw std::invalid_argument("document " + doc.id + ": no label for mention " + id);
      }
      labels.push_back(it->second);
    }
    out.emplace(e.id, aggregate_mla(labels));
  }
  return out;
}

struct VspPrediction {
  std::map<std::string, MentionLabel> mention_labels;
  std::map<std::string, EntityLabel> entity_labels;
};

inline VspPrediction predict_vsp(const MentionScorer& scorer, const Document& doc) {
  VspPrediction p;
  p.mention_labels = predict_mention_labels(scorer, doc);
  p.entity_labels = predict_entity_labels(doc, p.mention_labels);
  return p;
}

/// Copy of `doc` carrying the predicted labels. Relation edges are dropped;
/// overlap pairs are input annotations and survive while both members are
/// still graph nodes under the new labels.
inline Document with_vsp_labels(Document doc, const VspPrediction& p) {
  for (auto& m : doc.mentions) m.label = p.mention_labels.at(m.id);
  for (auto& e : doc.entities) e.label = p.entity_labels.at(e.id);
  if (!doc.graph) return doc;
  const auto nodes = graph_nodes(doc);
  const std::set<VisitNode> alive(nodes.begin(), nodes.end());
  RawGraph kept;
  for (const auto& pair : doc.graph->overlap)
    if (alive.contains(pair.first) && alive.contains(pair.second)) kept.overlap.push_back(pair);
  if (kept.overlap.empty()) doc.graph.reset();
  else doc.graph = std::move(kept);
  return doc;
}

/// Always returns one label.
class ConstantMentionScorer final : public MentionScorer {
 public:
  explicit ConstantMentionScorer(MentionLabel label) : label_(label) {}

  MentionWeights score(const Document&, const Mention&) const override {
    MentionWeights w{};
    w[label_index(label_)] = 1.0;
    return w;
  }

  MentionLabel label() const { return label_; }

 private:
  MentionLabel label_;
};

/// Most frequent label; ties go to the earlier label.
template <VisitLabel Label>
Label majority_label(const LabelArray<Label, std::size_t>& histogram) {
  std::size_t total = 0;
  for (auto c : histogram) total += c;
  if (total == 0) throw std::invalid_argument("majority baseline needs a non-empty label histogram");
  std::size_t best = 0;
  for (std::size_t i = 1; i < histogram.size(); ++i) {
    if (histogram[i] > histogram[best]) best = i;
  }
  return LabelTraits<Label>::all[best];
}

struct MajorityBaseline {
  ConstantMentionScorer scorer;
  EntityLabel entity_label;
};

inline MajorityBaseline majority_baseline(const LabelArray<MentionLabel, std::size_t>& mention_histogram,
                                          const LabelArray<EntityLabel, std::size_t>& entity_histogram) {
  return {ConstantMentionScorer(majority_label<MentionLabel>(mention_histogram)),
          majority_label<EntityLabel>(entity_histogram)};
}

inline LabelArray<MentionLabel, std::size_t> mention_histogram(const std::vector<Document>& docs) {
  LabelArray<MentionLabel, std::size_t> h{};
  for (const auto& d : docs)
    for (const auto& m : d.mentions)
      if (m.label) ++h[label_index(*m.label)];
  return h;
}

inline LabelArray<EntityLabel, std::size_t> entity_histogram(const std::vector<Document>& docs) {
  LabelArray<EntityLabel, std::size_t> h{};
  for (const auto& d : docs)
    for (const auto& e : d.entities)
      if (e.label) ++h[label_index(*e.label)];
  return h;
}

// ---------------------------------------------------------------------------
// Evaluation

struct LabelScore {
  std::string label;
  std::size_t support = 0;    // gold count
  std::size_t predicted = 0;  // predicted count
  std::size_t correct = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct ClassificationReport {
  std::size_t total = 0;
  std::size_t correct = 0;
  double accuracy = 0.0;
  double macro_f1 = 0.0;
  std::vector<LabelScore> per_label;
  /// Row gold, column predicted, both in label order.
  std::vector<std::vector<std::size_t>> confusion;
};

inline double safe_ratio(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

inline double f1_score(double precision, double recall) {
  return precision + recall == 0.0 ? 0.0 : 2.0 * precision * recall / (precision + recall);
}

/// Gold and predicted must cover the same ids. Macro-F1 averages over the full
/// label set, zero-support labels included.
template <VisitLabel Label>
ClassificationReport evaluate_labels(const std::map<std::string, Label>& gold,
                                     const std::map<std::string, Label>& predicted) {
  if (gold.size() != predicted.size() ||
      !std::equal(gold.begin(), gold.end(), predicted.begin(),
                  [](const auto& a, const auto& b) { return a.first == b.first; })) {
    throw std::invalid_argument("gold and predicted label sets cover different ids");
  }
  constexpr std::size_t L = LabelTraits<Label>::count;
  ClassificationReport r;
  r.confusion.assign(L, std::vector<std::size_t>(L, 0));
  for (auto g = gold.begin(), p = predicted.begin(); g != gold.end(); ++g, ++p) {
    ++r.confusion[label_index(g->second)][label_index(p->second)];
  }
  r.total = gold.size();
  double f1_sum = 0.0;
  for (std::size_t i = 0; i < L; ++i) {
    LabelScore s;
    s.label = std::string(LabelTraits<Label>::names[i]);
    s.correct = r.confusion[i][i];
    for (std::size_t j = 0; j < L; ++j) {
      s.support += r.confusion[i][j];
      s.predicted += r.confusion[j][i];
    }
    s.precision = safe_ratio(static_cast<double>(s.correct), static_cast<double>(s.predicted));
    s.recall = safe_ratio(static_cast<double>(s.correct), static_cast<double>(s.support));
    s.f1 = f1_score(s.precision, s.recall);
    r.correct += s.correct;
    f1_sum += s.f1;
    r.per_label.push_back(std::move(s));
  }
  r.accuracy = safe_ratio(static_cast<double>(r.correct), static_cast<double>(r.total));
  r.macro_f1 = f1_sum / static_cast<double>(L);
  return r;
}

enum class VspLevel { Mention, Entity };

/// Pooled "document/id" -> label maps over a corpus.
inline std::map<std::string, MentionLabel> pooled_mention_labels(const std::vector<Document>& docs) {
  std::map<std::string, MentionLabel> out;
  for (const auto& d : docs)
    for (const auto& m : d.mentions) {
      if (!m.label) throw std::invalid_argument("document " + d.id + ": mention " + m.id + " has no label");
      out.emplace(d.id + "/" + m.id, *m.label);
    }
  return out;
}

inline std::map<std::string, EntityLabel> pooled_entity_labels(const std::vector<Document>& docs) {
  std::map<std::string, EntityLabel> out;
  for (const auto& d : docs)
    for (const auto& e : d.entities) {
      if (!e.label) throw std::invalid_argument("document " + d.id + ": entity " + e.id + " has no label");
      out.emplace(d.id + "/" + e.id, *e.label);
    }
  return out;
}

inline ClassificationReport evaluate_vsp(const std::vector<Document>& gold,
                                         const std::vector<Document>& predicted, VspLevel level) {
  if (level == VspLevel::Mention) {
    return evaluate_labels(pooled_mention_labels(gold), pooled_mention_labels(predicted));
  }
  return evaluate_labels(pooled_entity_labels(gold), pooled_entity_labels(predicted));
}

inline nlohmann::json report_to_json(const ClassificationReport& r) {
  nlohmann::json labels = nlohmann::json::array();
  for (const auto& s : r.per_label) {
    labels.push_back({{"label", s.label},
                      {"support", s.support},
                      {"predicted", s.predicted},
                      {"correct", s.correct},
                      {"precision", s.precision},
                      {"recall", s.recall},
                      {"f1", s.f1}});
  }
  return {{"total", r.total},       {"correct", r.correct},     {"accuracy", r.accuracy},
          {"macro_f1", r.macro_f1}, {"per_label", labels},      {"confusion", r.confusion}};
}

inline std::string report_table(const ClassificationReport& r) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(3);
  out << "Acc. " << r.accuracy << "  Macro F1 " << r.macro_f1 << "  (n=" << r.total << ")\n\n";
  out << std::left << std::setw(15) << "Label" << std::right << std::setw(8) << "P" << std::setw(8) << "R"
      << std::setw(8) << "F1" << std::setw(9) << "Support" << "\n";
  for (const auto& s : r.per_label) {
    out << std::left << std::setw(15) << s.label << std::right << std::setw(8) << s.precision
        << std::setw(8) << s.recall << std::setw(8) << s.f1 << std::setw(9) << s.support << "\n";
  }
  out << "\nConfusion (row gold, column predicted):\n";
  for (std::size_t i = 0; i < r.confusion.size(); ++i) {
    out << std::left << std::setw(15) << r.per_label[i].label << std::right;
    for (auto c : r.confusion[i]) out << std::setw(7) << c;
    out << "\n";
  }
  return out.str();
}

}  // namespace voyagegraph
