// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 only when
// all pass. Pass criterion numbers as arguments to run a subset.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "fixtures.hpp"
#include "reference_decoder.hpp"
#include "voyagegraph/corpus_io.hpp"
#include "voyagegraph/eval.hpp"
#include "voyagegraph/pipeline.hpp"
#include "voyagegraph/synth.hpp"

namespace vg = voyagegraph;
using vg::testing::kNoSuccessor;
using vg::testing::node;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

bool near(double x, double target, double tol) { return std::abs(x - target) <= tol; }

std::vector<vg::Document> default_corpus(std::size_t documents = 100, std::uint64_t seed = 13) {
  auto c = vg::preset_config("default");
  c.documents = documents;
  c.seed = seed;
  return vg::generate_corpus(c).documents;
}

// 1 -------------------------------------------------------------------------

Outcome majority_identity() {
  auto docs = default_corpus();
  const Stopwatch clock;
  // Relabel so that exactly round(0.679 M) mentions and round(0.823 E) entities are Visit.
  std::vector<vg::Mention*> mentions;
  std::vector<vg::Entity*> entities;
  for (auto& d : docs) {
    for (auto& m : d.mentions) mentions.push_back(&m);
    for (auto& e : d.entities) entities.push_back(&e);
  }
  vg::Rng rng(679);
  rng.shuffle(std::span<vg::Mention*>(mentions));
  rng.shuffle(std::span<vg::Entity*>(entities));
  const auto visit_mentions = static_cast<std::size_t>(std::llround(0.679 * static_cast<double>(mentions.size())));
  const auto visit_entities = static_cast<std::size_t>(std::llround(0.823 * static_cast<double>(entities.size())));
  constexpr auto& labels = vg::LabelTraits<vg::MentionLabel>::all;
  for (std::size_t i = 0; i < mentions.size(); ++i) {
    mentions[i]->label = i < visit_mentions ? vg::MentionLabel::Visit : labels[1 + (i - visit_mentions) % 5];
  }
  for (std::size_t i = 0; i < entities.size(); ++i) {
    entities[i]->label = i < visit_entities ? vg::EntityLabel::Visit : vg::EntityLabel::Other;
  }

  vg::PredictOptions o;
  o.system = vg::System::Majority;
  o.train = &docs;
  const auto pred = vg::predict_vsp_corpus(docs, o);
  const auto m = vg::evaluate_vsp(docs, pred, vg::VspLevel::Mention);
  const auto e = vg::evaluate_vsp(docs, pred, vg::VspLevel::Entity);
  const double secs = clock.seconds();
  return {near(m.accuracy, 0.679, 0.001) && near(m.macro_f1, 0.135, 0.001) && near(e.macro_f1, 0.451, 0.001) &&
              secs < 1.0,
          fmt::format("mention accuracy {:.4f}, macro-F1 {:.4f}; entity macro-F1 {:.4f}; {:.2f} s", m.accuracy,
                      m.macro_f1, e.macro_f1, secs)};
}

// 2 -------------------------------------------------------------------------

Outcome flat_identity() {
  const Stopwatch clock;
  bool exact = true;
  std::size_t graphs = 0;
  auto check = [&](const vg::VisitingOrderGraph& g) {
    const auto r = vg::evaluate_irp(g, vg::flat_baseline(g.nodes()));
    for (const auto& [key, score] : r.breakdown) {
      if (!key.starts_with("depth")) continue;
      if (key == "depth=1" ? score.f1() != 1.0 : score.f1() != 0.0) exact = false;
    }
    ++graphs;
  };
  for (const auto& d : default_corpus()) check(vg::document_graph(d));
  vg::Rng rng(2);
  for (int i = 0; i < 1000; ++i) check(vg::build_graph_or_throw(vg::testing::random_valid_graph(rng, 12)));

  // 114 top-level nodes; the other 354 hang below them at depths 2 to 4.
  vg::RawGraph raw;
  for (int i = 0; i < 114; ++i) raw.nodes.push_back(node("r" + std::to_string(i)));
  for (int i = 0; i < 354; ++i) {
    raw.nodes.push_back(node("c" + std::to_string(i)));
    raw.inclusion.emplace_back(i < 114 ? node("r" + std::to_string(i)) : node("c" + std::to_string(i - 114)),
                               node("c" + std::to_string(i)));
  }
  const auto g = vg::build_graph_or_throw(raw);
  const double f1 = vg::evaluate_irp(g, vg::flat_baseline(g.nodes())).f1();
  const double secs = clock.seconds();
  return {exact && g.size() == 468 && near(f1, 0.2436, 0.0005) && secs < 1.0,
          fmt::format("depth-1 F1 1 and depth>=2 F1 0 on {} graphs: {}; 114/468 graph F1 {:.4f}; {:.2f} s", graphs,
                      exact ? "yes" : "no", f1, secs)};
}

// 3 -------------------------------------------------------------------------

Outcome occorder_reverse() {
  const Stopwatch clock;
  const auto docs = default_corpus(1000, 3);
  vg::PredictOptions o;
  o.system = vg::System::OccOrderEm;
  const auto pred = vg::predict_trp_corpus(docs, o);
  const auto report = vg::evaluate_relations(docs, pred, vg::RelationTaskEval::Trp);
  const auto rev = report.breakdown.contains("rev") ? report.breakdown.at("rev") : vg::PairScore{};
  const double secs = clock.seconds();
  return {rev.gold() > 0 && rev.tp == 0 && secs < 10.0,
          fmt::format("{} reverse gold pairs, recall {:.4f}; {:.2f} s", rev.gold(), rev.recall(), secs)};
}

// 4 -------------------------------------------------------------------------

std::vector<double> random_scores(vg::Rng& rng, std::size_t n, bool ties) {
  std::vector<double> s(n * n, 0.0);
  for (auto& x : s) x = ties ? static_cast<double>(rng.below(3)) - 1.0 : rng.normal();
  return s;
}

Outcome decoder_validity() {
  const Stopwatch clock;
  vg::Rng rng(4);
  std::size_t bad = 0;
  for (int i = 0; i < 10000; ++i) {
    const std::size_t n = 1 + rng.below(8);
    const auto scores = random_scores(rng, n, i % 4 == 0);
    if (!vg::testing::is_single_chain(vg::sequence_sort(n, scores))) ++bad;
  }
  const double secs = clock.seconds();
  return {bad == 0 && secs < 30.0, fmt::format("{} of 10000 decodes not a single chain; {:.2f} s", bad, secs)};
}

// 5 -------------------------------------------------------------------------

/// Every ranking of the 12 pairs of a 4-node group, cut off where the greedy
/// procedure has finished: the rest of the ranking cannot matter to it.
class RankingEnumerator {
 public:
  RankingEnumerator() {
    for (std::size_t a = 0; a < 4; ++a)
      for (std::size_t b = 0; b < 4; ++b)
        if (a != b) pairs_.push_back(a * 4 + b);
  }

  void run() { visit(vg::testing::ReferencePool(4), (1u << 12) - 1, 0); }

  std::size_t leaves = 0;
  std::size_t mismatches = 0;

 private:
  void visit(const vg::testing::ReferencePool& pool, unsigned unranked, std::size_t depth) {
    if (pool.done()) {
      std::vector<double> scores(16, 0.0);
      for (std::size_t k = 0; k < depth; ++k) scores[pairs_[prefix_[k]]] = 100.0 - static_cast<double>(k);
      double low = 50.0;
      for (std::size_t p = 0; p < 12; ++p)
        if (unranked & (1u << p)) scores[pairs_[p]] = low--;
      ++leaves;
      if (vg::sequence_sort(4, scores) != pool.successors()) ++mismatches;
      return;
    }
    for (std::size_t p = 0; p < 12; ++p) {
      if (!(unranked & (1u << p))) continue;
      prefix_[depth] = p;
      const std::size_t a = pairs_[p] / 4, b = pairs_[p] % 4;
      if (pool.live(a, b)) {
        auto next = pool;
        next.accept(a, b);
        visit(next, unranked & ~(1u << p), depth + 1);
      } else {
        visit(pool, unranked & ~(1u << p), depth + 1);
      }
    }
  }

  std::vector<std::size_t> pairs_;
  std::array<std::size_t, 12> prefix_{};
};

Outcome decoder_oracle() {
  const Stopwatch clock;
  std::size_t checked = 0, mismatches = 0;
  auto compare = [&](std::size_t n, const std::vector<double>& scores) {
    ++checked;
    if (vg::sequence_sort(n, scores) != vg::testing::reference_sequence_sort(n, scores)) ++mismatches;
  };
  // Sizes 1 to 3: every permutation of distinct scores.
  for (std::size_t n = 1; n <= 3; ++n) {
    std::vector<double> ranks(n * (n - 1));
    std::iota(ranks.begin(), ranks.end(), 1.0);
    do {
      std::vector<double> scores(n * n, 0.0);
      std::size_t k = 0;
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
          if (a != b) scores[a * n + b] = ranks[k++];
      compare(n, scores);
    } while (std::next_permutation(ranks.begin(), ranks.end()));
  }
  // Size 4: all 12! rankings, one representative per decisive prefix.
  RankingEnumerator four;
  four.run();
  // Sizes 5 and 6: random distinct scores.
  vg::Rng rng(5);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t n = 5 + rng.below(2);
    compare(n, random_scores(rng, n, false));
  }
  const double secs = clock.seconds();
  return {mismatches == 0 && four.mismatches == 0,
          fmt::format("{} mismatches over {} matrices of size 1-3 and 5-6; {} mismatches over {} decisive "
                      "rankings of size 4; {:.1f} s",
                      mismatches, checked, four.mismatches, four.leaves, secs)};
}

// 6 -------------------------------------------------------------------------

Outcome order_oracle() {
  const Stopwatch clock;
  vg::Rng rng(6);
  std::size_t pairs = 0, bad = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto raw = vg::testing::random_valid_graph(rng, 12);
    const auto g = vg::build_graph_or_throw(raw);
    for (const auto& a : g.nodes())
      for (const auto& b : g.nodes()) {
        ++pairs;
        if (g.order_relation(a, b) != vg::testing::closure_order_oracle(raw, a, b)) ++bad;
      }
  }
  return {bad == 0, fmt::format("{} disagreements over {} node pairs; {:.2f} s", bad, pairs, clock.seconds())};
}

// 7 -------------------------------------------------------------------------

Outcome oracle_end_to_end() {
  const auto gold = default_corpus();
  const Stopwatch clock;
  vg::PredictOptions o;
  o.system = vg::System::Oracle;
  o.decoder = vg::Decoder::SeqSort;
  o.noise = 0.0;
  o.gold = &gold;
  const auto vsp = vg::predict_vsp_corpus(gold, o);
  const auto irp = vg::predict_irp_corpus(vsp, o);
  const auto trp = vg::predict_trp_corpus(vsp, o, &irp);
  const auto mention = vg::evaluate_vsp(gold, vsp, vg::VspLevel::Mention);
  const auto entity = vg::evaluate_vsp(gold, vsp, vg::VspLevel::Entity);
  const double irp_f1 = vg::evaluate_relations(gold, irp, vg::RelationTaskEval::Irp).f1();
  const double trp_f1 = vg::evaluate_relations(gold, trp, vg::RelationTaskEval::Trp, true).f1();
  const double secs = clock.seconds();
  const bool perfect = mention.accuracy == 1.0 && mention.macro_f1 == 1.0 && entity.accuracy == 1.0 &&
                       entity.macro_f1 == 1.0 && irp_f1 == 1.0 && trp_f1 == 1.0;
  return {perfect && secs < 10.0,
          fmt::format("VSP accuracy {}/{}, macro-F1 {}/{}; IRP F1 {}; TRP F1 {}; {:.2f} s", mention.accuracy,
                      entity.accuracy, mention.macro_f1, entity.macro_f1, irp_f1, trp_f1, secs)};
}

// 8 -------------------------------------------------------------------------

Outcome kappa() {
  const double table = vg::cohens_kappa({{20, 5}, {10, 15}});
  vg::Rng rng(8);
  constexpr auto& all = vg::LabelTraits<vg::MentionLabel>::all;
  std::vector<vg::MentionLabel> a, b;
  for (int i = 0; i < 10000; ++i) {
    a.push_back(all[rng.below(all.size())]);
    b.push_back(all[rng.below(all.size())]);
  }
  const double same = vg::cohens_kappa<vg::MentionLabel>(a, a);
  const double independent = vg::cohens_kappa<vg::MentionLabel>(a, b);
  return {near(table, 0.4, 1e-9) && same == 1.0 && near(independent, 0.0, 0.05),
          fmt::format("[[20,5],[10,15]] {:.12f}; identical {}; independent {:.4f}", table, same, independent)};
}

// 9 -------------------------------------------------------------------------

struct Counterexample {
  vg::ViolationCode code;
  vg::RawGraph raw;
  vg::ValidationMode mode = vg::ValidationMode::Lenient;
};

std::vector<Counterexample> counterexamples() {
  using C = vg::ViolationCode;
  const auto a = node("a"), b = node("b"), c = node("c");
  std::vector<Counterexample> out;
  auto add = [&](C code, vg::RawGraph raw, vg::ValidationMode mode = vg::ValidationMode::Lenient) {
    out.push_back({code, std::move(raw), mode});
  };
  add(C::CycleInclusion, {{a, b}, {{a, b}, {b, a}}, {}, {}, {}});
  add(C::MultiParent, {{a, b, c}, {{a, c}, {b, c}}, {}, {}, {}});
  add(C::TransitionNotSiblings, {{a, b, c}, {{a, b}}, {{b, c}}, {}, {}});
  add(C::MultiSuccessor, {{a, b, c}, {}, {{a, b}, {a, c}}, {}, {}});
  add(C::MultiPredecessor, {{a, b, c}, {}, {{a, c}, {b, c}}, {}, {}});
  add(C::TransitionCycle, {{a, b}, {}, {{a, b}, {b, a}}, {}, {}});
  add(C::FragmentedChain, {{a, b}, {}, {}, {}, {}}, vg::ValidationMode::Strict);
  add(C::UnknownTimeNode, {{a}, {}, {}, {}, {"a"}});
  add(C::OverlapBothLinked, {{a, b}, {}, {{a, b}}, {{a, b}}, {}});
  add(C::EmptyVisitPartition, {{node("a", 1)}, {}, {}, {}, {}});
  add(C::DanglingReference, {{a}, {}, {{a, node("z")}}, {}, {}});
  return out;
}

Outcome validator_completeness() {
  std::set<vg::ViolationCode> covered;
  std::vector<std::string> wrong;
  for (const auto& ce : counterexamples()) {
    const auto found = vg::testing::codes(vg::validate(ce.raw, ce.mode));
    const bool rejected = std::holds_alternative<std::vector<vg::Violation>>(vg::build_graph(ce.raw, ce.mode));
    if (found == std::vector{ce.code} && rejected) {
      covered.insert(ce.code);
    } else {
      wrong.emplace_back(vg::violation_name(ce.code));
    }
  }
  const bool figure_ok = vg::validate(vg::testing::kyoto_nara_raw(), vg::ValidationMode::Strict).empty();
  std::string detail = fmt::format("{} of {} codes produced alone by their counterexample", covered.size(),
                                   vg::kAllViolationCodes.size());
  for (const auto& w : wrong) detail += "; wrong: " + w;
  detail += figure_ok ? "; Kyoto/Nara example graph accepted" : "; Kyoto/Nara example graph rejected";
  return {covered.size() == vg::kAllViolationCodes.size() && figure_ok, detail};
}

// 10 ------------------------------------------------------------------------

std::vector<vg::Document> parse_lines(const std::string& text) {
  std::vector<vg::Document> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(vg::parse_document(line));
  return out;
}

Outcome determinism() {
  std::vector<std::string> failures;
  auto expect = [&](bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  };
  const auto docs = default_corpus();
  const auto text = vg::serialize_corpus(docs);
  const auto parsed = parse_lines(text);
  expect(parsed == docs, "parse(serialize(corpus)) != corpus");
  expect(vg::serialize_corpus(parsed) == text, "serialize(parse(text)) != text");

  expect(vg::serialize_corpus(default_corpus()) == text, "corpus differs under the same seed");
  expect(vg::serialize_corpus(default_corpus(100, 14)) != text, "corpus ignores the seed");
  expect(vg::split_corpus(docs, {7, 1, 2}, 13) == vg::split_corpus(parsed, {7, 1, 2}, 13),
         "split differs under the same seed");

  auto baselines = [&](std::uint64_t seed) {
    vg::PredictOptions o;
    o.system = vg::System::Random;
    o.seed = seed;
    const auto irp = vg::predict_irp_corpus(docs, o);
    const auto trp = vg::predict_trp_corpus(docs, o);
    const auto irp_report = vg::evaluate_relations(docs, irp, vg::RelationTaskEval::Irp);
    const auto trp_report = vg::evaluate_relations(docs, trp, vg::RelationTaskEval::Trp);
    return vg::serialize_corpus(irp) + vg::serialize_corpus(trp) + vg::report_to_json(irp_report).dump() +
           vg::report_table(trp_report);
  };
  const auto first = baselines(21);
  expect(baselines(21) == first, "random baselines or reports differ under the same seed");
  expect(baselines(22) != first, "random baselines ignore the seed");

  std::string detail = failures.empty() ? "round-trips exact; corpora, splits, baselines and reports reproduce"
                                        : "";
  for (const auto& f : failures) detail += (detail.empty() ? "" : "; ") + f;
  return {failures.empty(), detail};
}

struct Criterion {
  int number;
  const char* title;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {1, "majority baseline metric identity", majority_identity},
      {2, "flat inclusion baseline identity", flat_identity},
      {3, "earliest-mention order misses every reverse pair", occorder_reverse},
      {4, "sequence sorting yields one chain", decoder_validity},
      {5, "sequence sorting matches the step-by-step reference", decoder_oracle},
      {6, "order inference matches transitive closure", order_oracle},
      {7, "noise-free oracle pipeline reproduces gold", oracle_end_to_end},
      {8, "Cohen's kappa", kappa},
      {9, "validator completeness", validator_completeness},
      {10, "determinism and round-trip", determinism},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int failed = 0;
  for (const auto& c : criteria) {
    if (!selected.empty() && !selected.contains(c.number)) continue;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s %2d  %s: %s\n", o.pass ? "PASS" : "FAIL", c.number, c.title, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
