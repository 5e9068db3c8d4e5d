#pragma once

// Seeded synthetic travelogues with gold visiting order graphs, plus the
// oracle scorers (gold + Gaussian noise) and a suffix-lexicon heuristic.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "voyagegraph/corpus_io.hpp"
#include "voyagegraph/document.hpp"
#include "voyagegraph/graph.hpp"
#include "voyagegraph/rng.hpp"
#include "voyagegraph/utf8.hpp"
#include "voyagegraph/vop.hpp"
#include "voyagegraph/vsp.hpp"

namespace voyagegraph {

struct SynthConfig {
  std::size_t documents = 100;
  std::size_t entities_min = 19;
  std::size_t entities_max = 47;
  std::size_t max_depth = 4;
  /// Cap on children per non-ROOT parent.
  std::size_t max_group_size = 8;
  /// Chance a node is placed directly under ROOT.
  double root_parent_rate = 0.42;
  /// Chance an adjacent sibling pair is left unlinked (fragments chains).
  double chain_break_rate = 0.0;
  /// Weights for 1, 2, ... mentions per graph node or non-graph entity.
  std::vector<double> mentions_per_entity = {0.62, 0.22, 0.1, 0.06};
  double other_rate = 0.174;
  double unknown_time_rate = 0.02;
  double multi_visit_rate = 0.045;
  double overlap_rate = 0.018;
  double reverse_pair_rate = 0.1;
  double first_proper_rate = 0.9;
  double extra_proper_rate = 0.4;
  double same_sentence_rate = 0.25;
  double filler_sentence_rate = 0.3;
  /// Label weights in label order for the first mention of a visited node.
  LabelArray<MentionLabel, double> first_mention_labels = {0.87, 0.13, 0, 0, 0, 0};
  /// Label weights for later mentions of a visited node.
  LabelArray<MentionLabel, double> visited_mention_labels = {0.72, 0.07, 0.05, 0.004, 0.003, 0.153};
  /// Label weights for mentions of Other entities (no Visit / PlanToVisit).
  LabelArray<MentionLabel, double> other_mention_labels = {0, 0, 0.25, 0.02, 0.015, 0.715};
  std::uint64_t seed = 13;

  bool operator==(const SynthConfig&) const = default;
};

namespace detail {

inline void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument("invalid synth config: " + what);
}

inline void require_probability(double p, const char* name) {
  require(std::isfinite(p) && p >= 0.0 && p <= 1.0, std::string(name) + " must lie in [0, 1]");
}

template <class Range>
void require_weights(const Range& w, const char* name) {
  double total = 0.0;
  for (double x : w) {
    require(std::isfinite(x) && x >= 0.0, std::string(name) + " has a negative or non-finite weight");
    total += x;
  }
  require(total > 0.0, std::string(name) + " has no positive weight");
}

}  // namespace detail

inline void validate_config(const SynthConfig& c) {
  using detail::require;
  require(c.documents >= 1, "documents must be at least 1");
  require(c.entities_min >= 1, "entities_min must be at least 1");
  require(c.entities_min <= c.entities_max, "entities_min exceeds entities_max");
  require(c.entities_max <= 400, "entities_max above 400");
  require(c.max_depth >= 1, "max_depth must be at least 1");
  require(c.max_group_size >= 1, "max_group_size must be at least 1");
  for (auto [p, name] : {std::pair{c.root_parent_rate, "root_parent_rate"},
                         {c.chain_break_rate, "chain_break_rate"},
                         {c.other_rate, "other_rate"},
                         {c.unknown_time_rate, "unknown_time_rate"},
                         {c.multi_visit_rate, "multi_visit_rate"},
                         {c.overlap_rate, "overlap_rate"},
                         {c.reverse_pair_rate, "reverse_pair_rate"},
                         {c.first_proper_rate, "first_proper_rate"},
                         {c.extra_proper_rate, "extra_proper_rate"},
                         {c.same_sentence_rate, "same_sentence_rate"},
                         {c.filler_sentence_rate, "filler_sentence_rate"}}) {
    detail::require_probability(p, name);
  }
  detail::require_weights(c.mentions_per_entity, "mentions_per_entity");
  detail::require_weights(c.first_mention_labels, "first_mention_labels");
  detail::require_weights(c.visited_mention_labels, "visited_mention_labels");
  detail::require_weights(c.other_mention_labels, "other_mention_labels");
  require(c.first_mention_labels[2] + c.first_mention_labels[3] + c.first_mention_labels[4] +
                  c.first_mention_labels[5] == 0.0,
          "first_mention_labels may only weight Visit and PlanToVisit");
  require(c.other_mention_labels[0] + c.other_mention_labels[1] == 0.0,
          "other_mention_labels may not weight Visit or PlanToVisit");
}

namespace detail {

inline nlohmann::json label_weights_json(const LabelArray<MentionLabel, double>& w) {
  nlohmann::json j = nlohmann::json::object();
  for (auto l : LabelTraits<MentionLabel>::all) j[std::string(label_name(l))] = w[label_index(l)];
  return j;
}

inline LabelArray<MentionLabel, double> label_weights_from(const nlohmann::json& j, const std::string& key) {
  if (!j.is_object()) throw std::invalid_argument("synth config: " + key + " must be an object");
  LabelArray<MentionLabel, double> w{};
  for (const auto& [name, value] : j.items()) {
    auto label = try_parse_label<MentionLabel>(name);
    if (!label) throw std::invalid_argument("synth config: " + key + " has unknown label '" + name + "'");
    if (!value.is_number()) throw std::invalid_argument("synth config: " + key + "." + name + " must be a number");
    w[label_index(*label)] = value.get<double>();
  }
  return w;
}

}  // namespace detail

inline nlohmann::json config_to_json(const SynthConfig& c) {
  return {{"documents", c.documents},
          {"entities_min", c.entities_min},
          {"entities_max", c.entities_max},
          {"max_depth", c.max_depth},
          {"max_group_size", c.max_group_size},
          {"root_parent_rate", c.root_parent_rate},
          {"chain_break_rate", c.chain_break_rate},
          {"mentions_per_entity", c.mentions_per_entity},
          {"other_rate", c.other_rate},
          {"unknown_time_rate", c.unknown_time_rate},
          {"multi_visit_rate", c.multi_visit_rate},
          {"overlap_rate", c.overlap_rate},
          {"reverse_pair_rate", c.reverse_pair_rate},
          {"first_proper_rate", c.first_proper_rate},
          {"extra_proper_rate", c.extra_proper_rate},
          {"same_sentence_rate", c.same_sentence_rate},
          {"filler_sentence_rate", c.filler_sentence_rate},
          {"first_mention_labels", detail::label_weights_json(c.first_mention_labels)},
          {"visited_mention_labels", detail::label_weights_json(c.visited_mention_labels)},
          {"other_mention_labels", detail::label_weights_json(c.other_mention_labels)},
          {"seed", c.seed}};
}

/// Missing keys keep their defaults; unknown keys are rejected.
inline SynthConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("synth config must be a JSON object");
  SynthConfig c;
  for (const auto& [key, v] : j.items()) {
    auto num = [&]() {
      if (!v.is_number()) throw std::invalid_argument("synth config: " + key + " must be a number");
      return v.get<double>();
    };
    auto count = [&]() -> std::size_t {
      if (!v.is_number_unsigned()) throw std::invalid_argument("synth config: " + key + " must be a non-negative integer");
      return v.get<std::size_t>();
    };
    if (key == "documents") c.documents = count();
    else if (key == "entities_min") c.entities_min = count();
    else if (key == "entities_max") c.entities_max = count();
    else if (key == "max_depth") c.max_depth = count();
    else if (key == "max_group_size") c.max_group_size = count();
    else if (key == "root_parent_rate") c.root_parent_rate = num();
    else if (key == "chain_break_rate") c.chain_break_rate = num();
    else if (key == "other_rate") c.other_rate = num();
    else if (key == "unknown_time_rate") c.unknown_time_rate = num();
    else if (key == "multi_visit_rate") c.multi_visit_rate = num();
    else if (key == "overlap_rate") c.overlap_rate = num();
    else if (key == "reverse_pair_rate") c.reverse_pair_rate = num();
    else if (key == "first_proper_rate") c.first_proper_rate = num();
    else if (key == "extra_proper_rate") c.extra_proper_rate = num();
    else if (key == "same_sentence_rate") c.same_sentence_rate = num();
    else if (key == "filler_sentence_rate") c.filler_sentence_rate = num();
    else if (key == "seed") c.seed = static_cast<std::uint64_t>(count());
    else if (key == "mentions_per_entity") {
      if (!v.is_array()) throw std::invalid_argument("synth config: mentions_per_entity must be an array");
      c.mentions_per_entity.clear();
      for (const auto& x : v) {
        if (!x.is_number()) throw std::invalid_argument("synth config: mentions_per_entity must hold numbers");
        c.mentions_per_entity.push_back(x.get<double>());
      }
    } else if (key == "first_mention_labels") c.first_mention_labels = detail::label_weights_from(v, key);
    else if (key == "visited_mention_labels") c.visited_mention_labels = detail::label_weights_from(v, key);
    else if (key == "other_mention_labels") c.other_mention_labels = detail::label_weights_from(v, key);
    else throw std::invalid_argument("synth config: unknown key '" + key + "'");
  }
  validate_config(c);
  return c;
}

/// Named presets: "default" (shaped after the annotated corpus totals:
/// 100 documents, about 3,354 entities and 3,369 relations) and "clean"
/// (complete chains, no reverse pairs, no overlap or unknown-time entities).
inline SynthConfig preset_config(std::string_view name) {
  SynthConfig c;
  if (name == "default") return c;
  if (name == "clean") {
    c.reverse_pair_rate = 0.0;
    c.overlap_rate = 0.0;
    c.unknown_time_rate = 0.0;
    return c;
  }
  throw std::invalid_argument("unknown synth preset '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// Generation

/// Place names: katakana stem plus a suffix whose level orders geography
/// coarse (0) to fine (3).
inline const std::vector<std::pair<std::string, int>>& default_suffix_lexicon() {
  static const std::vector<std::pair<std::string, int>> lexicon = {
      {"県", 0}, {"市", 1}, {"町", 2}, {"村", 2}, {"駅", 3}, {"寺", 3}, {"公園", 3}, {"神社", 3}, {"城", 3}};
  return lexicon;
}

struct SynthResult {
  std::vector<Document> documents;
  /// Counts recorded while generating, independent of corpus_stats.
  CorpusStats stats;
};

namespace detail {

enum class SynthRole { Visited, UnknownTime, Other, Bystander };

struct SynthEntity {
  std::string id;
  SynthRole role = SynthRole::Visited;
  std::size_t visits = 1;
  int level = 3;
  std::string name;
};

struct SynthEvent {
  std::size_t entity;
  std::size_t visit;
  bool first;
};

inline std::string padded(std::string_view prefix, std::size_t i, int width) {
  std::string digits = std::to_string(i);
  if (static_cast<int>(digits.size()) < width) digits.insert(0, static_cast<std::size_t>(width) - digits.size(), '0');
  return std::string(prefix) + digits;
}

inline std::string katakana_stem(Rng& rng) {
  static const std::array<const char*, 30> syllables = {
      "ア", "カ", "サ", "タ", "ナ", "ハ", "マ", "ヤ", "ラ", "ワ", "イ", "キ", "シ", "チ", "ニ",
      "ヒ", "ミ", "リ", "ウ", "ク", "ス", "ツ", "ヌ", "フ", "ム", "ユ", "ル", "オ", "コ", "ト"};
  std::string out;
  const auto n = rng.between(2, 4);
  for (std::int64_t i = 0; i < n; ++i) out += syllables[rng.below(syllables.size())];
  return out;
}

inline std::string level_suffix(Rng& rng, int level) {
  std::vector<std::string> options;
  for (const auto& [suffix, l] : default_suffix_lexicon())
    if (l == level) options.push_back(suffix);
  return options[rng.below(options.size())];
}

inline std::string general_noun(int level) {
  static const std::array<const char*, 4> nouns = {"その県", "その市", "その町", "そこ"};
  return nouns[static_cast<std::size_t>(std::clamp(level, 0, 3))];
}

class DocumentSynth {
 public:
  DocumentSynth(const SynthConfig& config, std::string doc_id, std::uint64_t seed, CorpusStats& stats)
      : c_(config), rng_(seed), stats_(stats) {
    doc_.id = std::move(doc_id);
  }

  Document run() {
    make_entities();
    make_tree();
    make_narrative();
    make_overlap();
    make_events();
    write_text();
    write_graph();
    ++stats_.documents;
    return std::move(doc_);
  }

 private:
  void make_entities() {
    const auto n = static_cast<std::size_t>(
        rng_.between(static_cast<std::int64_t>(c_.entities_min), static_cast<std::int64_t>(c_.entities_max)));
    for (std::size_t i = 0; i < n; ++i) {
      SynthEntity e;
      if (rng_.bernoulli(c_.other_rate)) e.role = SynthRole::Other;
      else if (rng_.bernoulli(c_.unknown_time_rate)) e.role = SynthRole::UnknownTime;
      else if (rng_.bernoulli(c_.multi_visit_rate)) e.visits = 2;
      entities_.push_back(e);
    }
    if (std::none_of(entities_.begin(), entities_.end(),
                     [](const SynthEntity& e) { return e.role == SynthRole::Visited; })) {
      entities_.front() = SynthEntity{};
    }
    for (std::size_t i = 0; i < entities_.size(); ++i) entities_[i].id = padded("E", i + 1, 3);
  }

  void make_tree() {
    for (std::size_t i = 0; i < entities_.size(); ++i)
      if (entities_[i].role == SynthRole::Visited)
        for (std::size_t k = 0; k < entities_[i].visits; ++k) nodes_.push_back({i, k});
    rng_.shuffle(std::span<std::pair<std::size_t, std::size_t>>(nodes_));
    parent_.assign(nodes_.size(), kNone);
    depth_.assign(nodes_.size(), 1);
    std::vector<std::size_t> children(nodes_.size(), 0);
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      if (i == 0 || rng_.bernoulli(c_.root_parent_rate)) continue;
      std::vector<std::size_t> candidates;
      for (std::size_t j = 0; j < i; ++j) {
        if (depth_[j] < c_.max_depth && children[j] < c_.max_group_size && nodes_[j].first != nodes_[i].first) {
          candidates.push_back(j);
        }
      }
      if (candidates.empty()) continue;
      const auto p = candidates[rng_.below(candidates.size())];
      parent_[i] = static_cast<std::ptrdiff_t>(p);
      depth_[i] = depth_[p] + 1;
      ++children[p];
    }
    // Sibling chains in visiting order.
    std::map<std::ptrdiff_t, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < nodes_.size(); ++i) groups[parent_[i]].push_back(i);
    for (auto& [p, members] : groups) {
      rng_.shuffle(std::span<std::size_t>(members));
      for (std::size_t i = 0; i + 1 < members.size(); ++i) {
        if (!rng_.bernoulli(c_.chain_break_rate)) transitions_.emplace_back(members[i], members[i + 1]);
      }
    }
    groups_ = std::move(groups);
    // Levels follow the depth of an entity's first episode.
    std::vector<bool> leveled(entities_.size(), false);
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      auto& e = entities_[nodes_[i].first];
      if (nodes_[i].second == 0 && !leveled[nodes_[i].first]) {
        e.level = static_cast<int>(std::min<std::size_t>(depth_[i] - 1, 3));
        leveled[nodes_[i].first] = true;
      }
    }
    for (auto& e : entities_)
      if (e.role != SynthRole::Visited) e.level = static_cast<int>(rng_.below(4));
  }

  /// Pre-order walk with siblings in chain order; reverse pairs then swap
  /// the narrative positions of gold-adjacent siblings.
  void make_narrative() {
    std::function<void(std::ptrdiff_t)> walk = [&](std::ptrdiff_t parent) {
      auto it = groups_.find(parent);
      if (it == groups_.end()) return;
      for (auto child : it->second) {
        narrative_.push_back(child);
        walk(static_cast<std::ptrdiff_t>(child));
      }
    };
    walk(kNone);
    for (const auto& [a, b] : transitions_) {
      if (!rng_.bernoulli(c_.reverse_pair_rate)) continue;
      auto pa = std::find(narrative_.begin(), narrative_.end(), a);
      auto pb = std::find(narrative_.begin(), narrative_.end(), b);
      std::iter_swap(pa, pb);
    }
  }

  /// Bystanders get fresh entities placed right after their representative.
  void make_overlap() {
    std::vector<std::size_t> order = narrative_;
    for (auto node : order) {
      const auto& [ei, k] = nodes_[node];
      if (entities_[ei].visits != 1 || !rng_.bernoulli(c_.overlap_rate)) continue;
      SynthEntity b;
      b.role = SynthRole::Bystander;
      b.level = entities_[ei].level;
      b.id = padded("E", entities_.size() + 1, 3);
      entities_.push_back(b);
      const std::size_t bnode = nodes_.size();
      nodes_.push_back({entities_.size() - 1, 0});
      parent_.push_back(kNone);
      depth_.push_back(1);
      overlap_.emplace_back(node, bnode);
      auto pos = std::find(narrative_.begin(), narrative_.end(), node);
      narrative_.insert(pos + 1, bnode);
    }
  }

  std::size_t mention_count() { return 1 + rng_.weighted(c_.mentions_per_entity); }

  void make_events() {
    for (auto node : narrative_) events_.push_back({nodes_[node].first, nodes_[node].second, true});
    for (std::size_t i = 0; i < entities_.size(); ++i) {
      const auto role = entities_[i].role;
      if (role == SynthRole::Visited || role == SynthRole::Bystander) continue;
      const auto at = rng_.below(events_.size() + 1);
      events_.insert(events_.begin() + static_cast<std::ptrdiff_t>(at), SynthEvent{i, 0, true});
    }
    // Later mentions always follow their episode's first mention.
    std::vector<SynthEvent> firsts = events_;
    for (const auto& f : firsts) {
      const auto extra = mention_count() - 1;
      for (std::size_t x = 0; x < extra; ++x) {
        std::size_t pos = 0;
        while (!(events_[pos].entity == f.entity && events_[pos].visit == f.visit && events_[pos].first)) ++pos;
        const auto at = pos + 1 + rng_.below(events_.size() - pos);
        events_.insert(events_.begin() + static_cast<std::ptrdiff_t>(at), SynthEvent{f.entity, f.visit, false});
      }
    }
  }

  MentionLabel draw_label(const SynthEntity& e, bool first) {
    const auto& w = e.role == SynthRole::Other ? c_.other_mention_labels
                    : first                    ? c_.first_mention_labels
                                               : c_.visited_mention_labels;
    return LabelTraits<MentionLabel>::all[rng_.weighted(w)];
  }

  std::string unique_name(int level) {
    for (;;) {
      auto name = katakana_stem(rng_) + level_suffix(rng_, level);
      if (names_.insert(name).second) return name;
    }
  }

  void write_text() {
    static const std::array<const char*, 6> connectors = {"その後、", "次に", "朝から", "少し歩いて", "ようやく", ""};
    static const std::array<const char*, 4> fillers = {"天気はとても良かった。", "ここで少し休憩した。",
                                                       "写真をたくさん撮った。", "人が多かった。"};
    for (auto& e : entities_) e.name = unique_name(e.level);
    std::map<std::pair<std::size_t, std::size_t>, std::vector<std::string>> episode_mentions;
    std::vector<std::vector<std::string>> entity_mentions(entities_.size());
    std::string text;
    std::size_t cursor = 0;  // code points in the open sentence
    auto close_sentence = [&]() {
      if (text.empty()) return;
      text += "を訪れた。";
      doc_.sentences.push_back({padded("s", doc_.sentences.size() + 1, 3), text});
      text.clear();
      cursor = 0;
      if (rng_.bernoulli(c_.filler_sentence_rate)) {
        doc_.sentences.push_back(
            {padded("s", doc_.sentences.size() + 1, 3), fillers[rng_.below(fillers.size())]});
      }
    };
    for (std::size_t i = 0; i < events_.size(); ++i) {
      const auto& ev = events_[i];
      const auto& e = entities_[ev.entity];
      if (i > 0 && !rng_.bernoulli(c_.same_sentence_rate)) close_sentence();
      std::string prefix = text.empty() ? connectors[rng_.below(connectors.size())] : "、";
      text += prefix;
      cursor += utf8::length(prefix);
      Mention m;
      m.id = padded("m", doc_.mentions.size() + 1, 3);
      m.entity_id = e.id;
      m.sentence_index = doc_.sentences.size();
      m.is_proper_noun = rng_.bernoulli(ev.first ? c_.first_proper_rate : c_.extra_proper_rate);
      m.surface = m.is_proper_noun ? e.name : general_noun(e.level);
      m.start = cursor;
      m.end = cursor + utf8::length(m.surface);
      m.label = draw_label(e, ev.first);
      text += m.surface;
      cursor = m.end;
      ++stats_.mentions;
      ++stats_.mention_labels[label_index(*m.label)];
      episode_mentions[{ev.entity, ev.visit}].push_back(m.id);
      entity_mentions[ev.entity].push_back(m.id);
      doc_.mentions.push_back(std::move(m));
    }
    close_sentence();
    stats_.sentences += doc_.sentences.size();
    for (std::size_t i = 0; i < entities_.size(); ++i) {
      const auto& se = entities_[i];
      Entity e;
      e.id = se.id;
      e.mention_ids = entity_mentions[i];
      e.label = se.role == SynthRole::Other ? EntityLabel::Other : EntityLabel::Visit;
      e.unknown_time = se.role == SynthRole::UnknownTime;
      if (se.visits > 1) {
        std::vector<std::vector<std::string>> visits;
        for (std::size_t k = 0; k < se.visits; ++k) visits.push_back(episode_mentions.at({i, k}));
        e.visits = std::move(visits);
        ++stats_.multi_visit;
      }
      ++stats_.entities;
      ++stats_.entity_labels[label_index(*e.label)];
      if (e.unknown_time) ++stats_.unknown_time;
      doc_.entities.push_back(std::move(e));
    }
  }

  VisitNode visit_node(std::size_t node) const {
    return {entities_[nodes_[node].first].id, nodes_[node].second};
  }

  void write_graph() {
    RawGraph g;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      if (parent_[i] != kNone) {
        g.inclusion.emplace_back(visit_node(static_cast<std::size_t>(parent_[i])), visit_node(i));
        ++stats_.inclusion;
      }
    }
    std::sort(g.inclusion.begin(), g.inclusion.end());
    for (const auto& [a, b] : transitions_) g.transition.emplace_back(visit_node(a), visit_node(b));
    std::sort(g.transition.begin(), g.transition.end());
    stats_.transition += g.transition.size();
    for (const auto& [a, b] : overlap_) g.overlap.emplace_back(visit_node(a), visit_node(b));
    stats_.overlap += g.overlap.size();
    stats_.nodes += nodes_.size();
    doc_.graph = std::move(g);
  }

  static constexpr std::ptrdiff_t kNone = -1;

  const SynthConfig& c_;
  Rng rng_;
  CorpusStats& stats_;
  Document doc_;
  std::vector<SynthEntity> entities_;
  std::vector<std::pair<std::size_t, std::size_t>> nodes_;  // (entity, visit)
  std::vector<std::ptrdiff_t> parent_;
  std::vector<std::size_t> depth_;
  std::map<std::ptrdiff_t, std::vector<std::size_t>> groups_;
  std::vector<std::pair<std::size_t, std::size_t>> transitions_;
  std::vector<std::size_t> narrative_;
  std::vector<std::pair<std::size_t, std::size_t>> overlap_;
  std::vector<SynthEvent> events_;
  std::set<std::string> names_;
};

}  // namespace detail

/// Documents "doc-0001".. each from its own derived seed, so a document does
/// not depend on how many others are generated.
inline SynthResult generate_corpus(const SynthConfig& config) {
  validate_config(config);
  SynthResult out;
  for (std::size_t i = 0; i < config.documents; ++i) {
    const auto id = detail::padded("doc-", i + 1, 4);
    detail::DocumentSynth synth(config, id, derive_seed(config.seed, static_cast<std::uint64_t>(i)), out.stats);
    out.documents.push_back(synth.run());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Scorers

namespace detail {

inline const Document& gold_document(const std::map<std::string, Document>& gold, const std::string& id) {
  auto it = gold.find(id);
  if (it == gold.end()) throw ScorerError("oracle has no gold for document " + id);
  return it->second;
}

inline double noise(std::uint64_t seed, double sigma, const std::string& key) {
  if (sigma == 0.0) return 0.0;
  Rng rng(derive_seed(seed, key));
  return sigma * rng.normal();
}

}  // namespace detail

/// Gold label weighted 1, others 0, each plus N(0, sigma) noise clamped at 0.
class OracleMentionScorer final : public MentionScorer {
 public:
  OracleMentionScorer(const std::vector<Document>& gold, double sigma, std::uint64_t seed)
      : sigma_(sigma), seed_(derive_seed(seed, std::string_view("oracle-vsp"))) {
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("oracle noise must be finite and >= 0");
    for (const auto& d : gold) {
      auto& labels = labels_[d.id];
      for (const auto& m : d.mentions) {
        if (!m.label) throw std::invalid_argument("document " + d.id + ": mention " + m.id + " has no gold label");
        labels.emplace(m.id, *m.label);
      }
    }
  }

  MentionWeights score(const Document& doc, const Mention& mention) const override {
    auto d = labels_.find(doc.id);
    if (d == labels_.end()) throw ScorerError("oracle has no gold for document " + doc.id);
    auto m = d->second.find(mention.id);
    if (m == d->second.end()) throw ScorerError("oracle has no gold for mention " + doc.id + "/" + mention.id);
    MentionWeights w{};
    w[label_index(m->second)] = 1.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      const auto key = doc.id + "|" + mention.id + "|" + std::to_string(i);
      w[i] = std::max(0.0, w[i] + detail::noise(seed_, sigma_, key));
    }
    return w;
  }

 private:
  double sigma_;
  std::uint64_t seed_;
  std::map<std::string, std::map<std::string, MentionLabel>> labels_;
};

/// Gold parent / successor scored 1, every other candidate 0, plus noise.
class OraclePairScorer final : public PairwiseScorer {
 public:
  OraclePairScorer(const std::vector<Document>& gold, double sigma, std::uint64_t seed)
      : sigma_(sigma), seed_(derive_seed(seed, std::string_view("oracle-vop"))) {
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("oracle noise must be finite and >= 0");
    for (const auto& d : gold) {
      const auto graph = document_graph(d);
      auto& g = gold_[d.id];
      g.parents = parent_assignment(graph);
      g.successors = successor_assignment(graph);
    }
  }

  double score_parent(const NodeIndex& doc, const VisitNode& query, const ParentRef& candidate) const override {
    const auto& g = lookup(doc.document().id);
    auto it = g.parents.find(query);
    if (it == g.parents.end()) throw ScorerError("oracle has no gold parent for " + to_string(query));
    if (candidate && !g.parents.contains(*candidate)) {
      throw ScorerError("oracle has no gold node " + to_string(*candidate));
    }
    const double base = it->second == candidate ? 1.0 : 0.0;
    return base + detail::noise(seed_, sigma_,
                                doc.document().id + "|par|" + to_string(query) + "|" + parent_to_string(candidate));
  }

  double score_successor(const NodeIndex& doc, const VisitNode& query,
                         const SuccessorRef& candidate) const override {
    const auto& g = lookup(doc.document().id);
    auto it = g.successors.find(query);
    if (it == g.successors.end()) throw ScorerError("oracle has no gold successor for " + to_string(query));
    if (candidate && !g.successors.contains(*candidate)) {
      throw ScorerError("oracle has no gold node " + to_string(*candidate));
    }
    const double base = it->second == candidate ? 1.0 : 0.0;
    return base + detail::noise(seed_, sigma_,
                                doc.document().id + "|sub|" + to_string(query) + "|" + successor_to_string(candidate));
  }

 private:
  struct Gold {
    ParentAssignment parents;
    SuccessorAssignment successors;
  };

  const Gold& lookup(const std::string& id) const {
    auto it = gold_.find(id);
    if (it == gold_.end()) throw ScorerError("oracle has no gold for document " + id);
    return it->second;
  }

  double sigma_;
  std::uint64_t seed_;
  std::map<std::string, Gold> gold_;
};

/// Parent: candidates at a strictly coarser place level score 1 / gap, ROOT
/// 0, everything else -1. Successor: mentioned later scores 1 / (1 + sentence
/// gap), earlier the negative of that, EOS 0.
class HeuristicScorer final : public PairwiseScorer {
 public:
  explicit HeuristicScorer(std::vector<std::pair<std::string, int>> lexicon = default_suffix_lexicon())
      : lexicon_(std::move(lexicon)) {
    for (const auto& [suffix, level] : lexicon_) finest_ = std::max(finest_, level);
  }

  /// Level of the longest matching suffix; unknown suffixes are finest.
  int level(std::string_view surface) const {
    int best = finest_;
    std::size_t best_len = 0;
    for (const auto& [suffix, lvl] : lexicon_) {
      if (suffix.size() > best_len && surface.size() >= suffix.size() && surface.ends_with(suffix)) {
        best = lvl;
        best_len = suffix.size();
      }
    }
    return best;
  }

  double score_parent(const NodeIndex& doc, const VisitNode& query, const ParentRef& candidate) const override {
    if (!candidate) return 0.0;
    const int lq = level(representative_mention(doc.at(query), RelationTask::Inclusion).surface);
    const int lc = level(representative_mention(doc.at(*candidate), RelationTask::Inclusion).surface);
    return lc < lq ? 1.0 / static_cast<double>(lq - lc) : -1.0;
  }

  double score_successor(const NodeIndex& doc, const VisitNode& query,
                         const SuccessorRef& candidate) const override {
    if (!candidate) return 0.0;
    const auto& a = doc.at(query).earliest();
    const auto& b = doc.at(*candidate).earliest();
    const auto gap = a.sentence_index > b.sentence_index ? a.sentence_index - b.sentence_index
                                                          : b.sentence_index - a.sentence_index;
    const double closeness = 1.0 / (1.0 + static_cast<double>(gap));
    return occurs_before(a, b) ? closeness : -closeness;
  }

 private:
  std::vector<std::pair<std::string, int>> lexicon_;
  int finest_ = 0;
};

}  // namespace voyagegraph
