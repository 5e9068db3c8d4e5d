#include "voyagegraph/synth.hpp"

#include <gtest/gtest.h>

#include "voyagegraph/eval.hpp"
#include "voyagegraph/pipeline.hpp"

namespace voyagegraph {
namespace {

SynthConfig small(std::uint64_t seed, std::size_t documents = 10) {
  SynthConfig c;
  c.documents = documents;
  c.seed = seed;
  return c;
}

TEST(Generate, DefaultPresetMatchesCorpusTotals) {
  const auto r = generate_corpus(preset_config("default"));
  EXPECT_EQ(r.stats.documents, 100u);
  EXPECT_NEAR(static_cast<double>(r.stats.entities), 3354.0, 0.05 * 3354);
  EXPECT_NEAR(static_cast<double>(r.stats.relations()), 3369.0, 0.05 * 3369);
}

// Other seeds scatter a few percent around the preset; only gross drift fails.
TEST(Generate, TotalsHoldAcrossSeeds) {
  for (std::uint64_t seed : {1u, 7u, 99u}) {
    auto c = preset_config("default");
    c.seed = seed;
    const auto s = generate_corpus(c).stats;
    EXPECT_NEAR(static_cast<double>(s.entities), 3354.0, 0.12 * 3354) << seed;
    EXPECT_NEAR(static_cast<double>(s.relations()), 3369.0, 0.12 * 3369) << seed;
  }
}

TEST(Generate, EveryDocumentParsesAndValidatesStrictly) {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    SynthConfig c = small(rng.next(), 5);
    c.max_depth = 1 + rng.below(5);
    c.root_parent_rate = rng.uniform();
    c.reverse_pair_rate = rng.uniform();
    c.overlap_rate = rng.uniform() * 0.3;
    c.multi_visit_rate = rng.uniform() * 0.3;
    c.unknown_time_rate = rng.uniform() * 0.2;
    c.max_group_size = 1 + rng.below(6);
    for (const auto& d : generate_corpus(c).documents) {
      EXPECT_TRUE(validate(raw_graph(d), ValidationMode::Strict).empty()) << d.id;
      EXPECT_EQ(parse_document(serialize_document(d)), d) << d.id;
    }
  }
}

TEST(Generate, ChainBreaksStayLenientlyValid) {
  SynthConfig c = small(3, 10);
  c.chain_break_rate = 0.5;
  for (const auto& d : generate_corpus(c).documents) EXPECT_TRUE(validate(raw_graph(d)).empty()) << d.id;
}

TEST(Generate, SameSeedSameBytes) {
  const auto a = generate_corpus(small(42));
  const auto b = generate_corpus(small(42));
  EXPECT_EQ(serialize_corpus(a.documents), serialize_corpus(b.documents));
  EXPECT_NE(serialize_corpus(a.documents), serialize_corpus(generate_corpus(small(43)).documents));
}

TEST(Generate, DocumentsIndependentOfCorpusSize) {
  const auto a = generate_corpus(small(5, 3));
  const auto b = generate_corpus(small(5, 8));
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(a.documents[i], b.documents[i]);
}

TEST(Generate, DepthOneMeansFlatIsPerfect) {
  SynthConfig c = small(6, 10);
  c.max_depth = 1;
  const auto docs = generate_corpus(c).documents;
  PredictOptions o;
  o.system = System::Flat;
  EXPECT_EQ(evaluate_relations(docs, predict_irp_corpus(docs, o), RelationTaskEval::Irp).f1(), 1.0);
}

TEST(Generate, LabelsAgreeWithAggregation) {
  for (const auto& d : generate_corpus(small(8)).documents) {
    for (const auto& e : d.entities) {
      std::vector<MentionLabel> labels;
      for (const auto& id : e.mention_ids) labels.push_back(*d.mention(id).label);
      EXPECT_EQ(aggregate_mla(labels), *e.label) << d.id << "/" << e.id;
    }
  }
}

TEST(Config, JsonRoundTripAndValidation) {
  SynthConfig c;
  c.max_depth = 3;
  c.other_mention_labels = {0, 0, 1, 0, 0, 1};
  EXPECT_EQ(config_from_json(config_to_json(c)), c);
  EXPECT_EQ(config_from_json(Json::object()), SynthConfig{});
  EXPECT_THROW(config_from_json(Json{{"colour", 1}}), std::invalid_argument);
  EXPECT_THROW(config_from_json(Json{{"entities_min", 10}, {"entities_max", 5}}), std::invalid_argument);
  EXPECT_THROW(config_from_json(Json{{"max_depth", 0}}), std::invalid_argument);
  EXPECT_THROW(config_from_json(Json{{"overlap_rate", 1.5}}), std::invalid_argument);
  EXPECT_THROW(config_from_json(Json{{"other_mention_labels", {{"Visit", 1.0}}}}), std::invalid_argument);
  EXPECT_THROW(config_from_json(Json{{"mentions_per_entity", {0.0, 0.0}}}), std::invalid_argument);
  EXPECT_THROW(preset_config("nope"), std::invalid_argument);
}

// ---------------------------------------------------------------------------

TEST(Oracle, NoiseFreeIsPerfectEndToEnd) {
  const auto docs = generate_corpus(small(9, 20)).documents;
  PredictOptions o;
  const auto vsp = predict_vsp_corpus(docs, o);
  EXPECT_EQ(evaluate_vsp(docs, vsp, VspLevel::Mention).accuracy, 1.0);
  const auto irp = predict_irp_corpus(docs, o);
  EXPECT_EQ(evaluate_relations(docs, irp, RelationTaskEval::Irp).f1(), 1.0);
  const auto trp = predict_trp_corpus(docs, o, &irp);
  EXPECT_EQ(evaluate_relations(docs, trp, RelationTaskEval::Trp, true).f1(), 1.0);
}

TEST(Oracle, NoiseDegradesOnAverage) {
  const auto docs = generate_corpus(small(10, 20)).documents;
  auto mean_f1 = [&](double sigma) {
    double sum = 0.0;
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      PredictOptions o;
      o.noise = sigma;
      o.seed = seed;
      sum += evaluate_relations(docs, predict_irp_corpus(docs, o), RelationTaskEval::Irp).f1();
    }
    return sum / 3.0;
  };
  const double f0 = mean_f1(0.0), f02 = mean_f1(0.2), f05 = mean_f1(0.5), f10 = mean_f1(10.0);
  EXPECT_EQ(f0, 1.0);
  EXPECT_GT(f02, 0.0);
  EXPECT_LT(f02, 1.0);
  EXPECT_GE(f02, f05);
  EXPECT_GE(f05, f10);
  // Heavy noise approaches the random baseline.
  PredictOptions r;
  r.system = System::Random;
  const double random_f1 = evaluate_relations(docs, predict_irp_corpus(docs, r), RelationTaskEval::Irp).f1();
  EXPECT_NEAR(f10, random_f1, 0.05);
}

TEST(Oracle, UnknownQueriesFail) {
  const auto docs = generate_corpus(small(11, 2)).documents;
  const OraclePairScorer oracle({docs[0]}, 0.0, 1);
  const auto nodes = graph_nodes(docs[1]);
  EXPECT_THROW(oracle.score_parent(NodeIndex(docs[1]), nodes[0], std::nullopt), ScorerError);
  const OracleMentionScorer m({docs[0]}, 0.0, 1);
  EXPECT_THROW(m.score(docs[1], docs[1].mentions[0]), ScorerError);
  EXPECT_THROW(OracleMentionScorer({docs[0]}, -1.0, 1), std::invalid_argument);
}

TEST(Heuristic, Levels) {
  const HeuristicScorer h;
  EXPECT_EQ(h.level("アカ県"), 0);
  EXPECT_EQ(h.level("アカ市"), 1);
  EXPECT_EQ(h.level("アカ公園"), 3);
  EXPECT_EQ(h.level("unknown"), 3);
}

Document three_places(const std::vector<std::string>& names) {
  Document d;
  d.id = "h";
  std::string text;
  for (std::size_t i = 0; i < names.size(); ++i) {
    const auto start = utf8::length(text);
    text += names[i];
    const auto id = "E" + std::to_string(i);
    d.mentions.push_back({"m" + std::to_string(i), id, 0, start, start + utf8::length(names[i]), names[i], true,
                          MentionLabel::Visit});
    d.entities.push_back({id, {"m" + std::to_string(i)}, EntityLabel::Visit, false, std::nullopt});
  }
  d.sentences = {{"s", text}};
  return d;
}

TEST(Heuristic, ParentScores) {
  const HeuristicScorer h;
  const auto d = three_places({"カサ市", "ナハ県", "マヤ市"});
  const NodeIndex index(d);
  const VisitNode city{"E0", 0}, pref{"E1", 0}, other_city{"E2", 0};
  EXPECT_GT(h.score_parent(index, city, pref), 0.0);
  EXPECT_LE(h.score_parent(index, city, other_city), 0.0);
  EXPECT_LT(h.score_parent(index, city, other_city), h.score_parent(index, city, std::nullopt));
  const auto p = predict_parents(h, index, graph_nodes(d));
  EXPECT_EQ(p.at(city), pref);
  EXPECT_EQ(p.at(pref), std::nullopt);  // nothing coarser: ROOT
  const auto two = three_places({"カサ市", "マヤ市"});
  for (const auto& [n, parent] : predict_parents(h, NodeIndex(two), graph_nodes(two))) EXPECT_EQ(parent, std::nullopt);
}

TEST(Heuristic, FacilityUnderCity) {
  const HeuristicScorer h;
  const auto d = three_places({"カサ市", "ナハ駅"});
  EXPECT_GT(h.score_parent(NodeIndex(d), {"E1", 0}, VisitNode{"E0", 0}), 0.0);
}

}  // namespace
}  // namespace voyagegraph
