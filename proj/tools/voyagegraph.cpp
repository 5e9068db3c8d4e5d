// voyagegraph: validate, inspect, split, synthesize, predict and evaluate
// travelogue corpora annotated with visiting order graphs.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "voyagegraph/corpus_io.hpp"
#include "voyagegraph/eval.hpp"
#include "voyagegraph/pipeline.hpp"
#include "voyagegraph/synth.hpp"

namespace fs = std::filesystem;
using namespace voyagegraph;

namespace {

/// Diagnostics go to stderr; VOYAGEGRAPH_LOG picks the level (default warn).
void setup_logging() {
  auto logger = spdlog::stderr_logger_st("voyagegraph");
  logger->set_pattern("voyagegraph [%l] %v");
  const char* env = std::getenv("VOYAGEGRAPH_LOG");
  logger->set_level(env ? spdlog::level::from_str(env) : spdlog::level::warn);
  spdlog::set_default_logger(std::move(logger));
}

/// Record of one invocation, embedded in every prediction and report.
struct RunManifest {
  std::string command;
  Json options = Json::object();
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;

  Json to_json() const {
    const auto digest = fnv1a64(options.dump());
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(digest));
    return {{"command", command}, {"options", options},   {"config_digest", hex},
            {"inputs", inputs},   {"outputs", outputs},   {"version", VOYAGEGRAPH_VERSION}};
  }
};

std::vector<Document> load(const std::string& path, bool validate_graph = true) {
  spdlog::info("reading {}", path);
  ParseOptions options;
  options.validate_graph = validate_graph;
  return read_corpus(path, options).documents;
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty() || out == "-") std::cout << text;
  else write_text(out, text);
}

// ---------------------------------------------------------------------------

int cmd_validate(const std::string& input, bool strict) {
  const auto docs = load(input, false);
  std::size_t bad = 0;
  for (const auto& d : docs) {
    const auto violations = validate(raw_graph(d), strict ? ValidationMode::Strict : ValidationMode::Lenient);
    for (const auto& v : violations) std::cout << d.id << ": " << to_string(v) << "\n";
    if (!violations.empty()) ++bad;
  }
  std::cout << docs.size() - bad << " of " << docs.size() << " documents valid\n";
  return bad == 0 ? 0 : 1;
}

int cmd_stats(const std::vector<std::string>& inputs, bool json) {
  std::vector<std::pair<std::string, CorpusStats>> rows;
  CorpusStats total;
  for (const auto& in : inputs) {
    auto s = corpus_stats(load(in));
    total += s;
    rows.emplace_back(fs::path(in).stem().string(), s);
  }
  if (rows.size() > 1) rows.emplace_back("Total", total);
  if (json) {
    Json j = Json::object();
    for (const auto& [name, s] : rows) j[name] = stats_to_json(s);
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << stats_table(rows);
  }
  return 0;
}

int cmd_split(const std::string& input, const std::string& ratio_text, std::uint64_t seed, const std::string& out_dir) {
  const auto ratio = parse_ratio(ratio_text);
  const auto split = split_corpus(load(input), ratio, seed);
  RunManifest m{"split", {{"ratio", ratio_text}, {"seed", seed}}, {input}, {}};
  auto write_ids = [&](const char* name, const std::vector<std::string>& ids) {
    std::string text;
    for (const auto& id : ids) text += id + "\n";
    const auto path = (fs::path(out_dir) / (std::string(name) + ".txt")).string();
    write_text(path, text);
    m.outputs.push_back(path);
    spdlog::info("{}: {} documents", name, ids.size());
  };
  write_ids("train", split.train);
  write_ids("dev", split.dev);
  write_ids("test", split.test);
  write_text(fs::path(out_dir) / "manifest.json", m.to_json().dump(2) + "\n");
  std::cout << split.train.size() << " / " << split.dev.size() << " / " << split.test.size() << "\n";
  return 0;
}

int cmd_synth(const std::string& config_path, const std::string& preset, std::optional<std::uint64_t> seed,
              std::optional<std::size_t> documents, const std::string& out) {
  SynthConfig config = config_path.empty() ? preset_config(preset)
                                           : config_from_json(Json::parse(detail::read_file(config_path)));
  if (seed) config.seed = *seed;
  if (documents) config.documents = *documents;
  validate_config(config);
  const auto result = generate_corpus(config);
  RunManifest m{"synth", config_to_json(config), {}, {out}};
  if (!config_path.empty()) m.inputs.push_back(config_path);
  emit(serialize_corpus(result.documents, m.to_json()), out);
  spdlog::info("generated {} documents", result.documents.size());
  return 0;
}

struct PredictArgs {
  std::string input, out, system = "oracle", decoder = "seqsort", train, gold, parents;
  std::uint64_t seed = 13;
  double noise = 0.0;
};

int cmd_predict(const std::string& task, const PredictArgs& a) {
  const auto docs = load(a.input);
  PredictOptions o;
  o.system = parse_system(a.system);
  o.decoder = parse_decoder(a.decoder);
  o.seed = a.seed;
  o.noise = a.noise;
  std::vector<Document> train, gold, parents;
  RunManifest m{"predict-" + task,
                {{"system", a.system}, {"seed", a.seed}, {"noise", a.noise}},
                {a.input},
                {a.out.empty() ? "-" : a.out}};
  if (task == "trp") m.options["decoder"] = a.decoder;
  if (!a.train.empty()) {
    train = load(a.train);
    o.train = &train;
    m.inputs.push_back(a.train);
  }
  if (!a.gold.empty()) {
    gold = load(a.gold);
    o.gold = &gold;
    m.inputs.push_back(a.gold);
  }
  std::vector<Document> pred;
  if (task == "vsp") {
    pred = predict_vsp_corpus(docs, o);
  } else if (task == "irp") {
    pred = predict_irp_corpus(docs, o);
  } else {
    if (!a.parents.empty()) {
      parents = load(a.parents, false);
      m.inputs.push_back(a.parents);
    }
    pred = predict_trp_corpus(docs, o, a.parents.empty() ? nullptr : &parents);
  }
  emit(serialize_corpus(pred, m.to_json()), a.out);
  return 0;
}

int cmd_evaluate(const std::string& task, const std::string& level, const std::string& gold_path,
                 const std::string& pred_path, bool predicted_parents, bool json, const std::string& out) {
  const auto gold = load(gold_path);
  const auto pred = load(pred_path, false);
  RunManifest m{"evaluate", {{"task", task}, {"level", level}, {"predicted_parents", predicted_parents}},
                {gold_path, pred_path}, {out.empty() ? "-" : out}};
  Json report;
  std::string table;
  if (task == "vsp") {
    const auto r = evaluate_vsp(gold, pred, level == "entity" ? VspLevel::Entity : VspLevel::Mention);
    report = report_to_json(r);
    table = report_table(r);
  } else {
    const auto r = evaluate_relations(gold, pred, task == "irp" ? RelationTaskEval::Irp : RelationTaskEval::Trp,
                                      predicted_parents);
    report = report_to_json(r);
    table = report_table(r);
  }
  if (json) {
    emit(Json{{"manifest", m.to_json()}, {"report", report}}.dump(2) + "\n", out);
  } else {
    emit("# " + m.to_json().dump() + "\n" + table, out);
  }
  return 0;
}

int cmd_iaa(const std::string& a_path, const std::string& b_path, bool json) {
  const auto a = load(a_path);
  const auto b = load(b_path);
  RunManifest m{"iaa", Json::object(), {a_path, b_path}, {"-"}};
  const std::vector<std::pair<std::string, AgreementReport>> rows = {
      {"mention", iaa_labels(a, b, VspLevel::Mention)},
      {"entity", iaa_labels(a, b, VspLevel::Entity)},
      {"inclusion", iaa_f1(a, b, RelationKind::Inclusion)},
      {"transition", iaa_f1(a, b, RelationKind::Transition)},
      {"relations", iaa_f1(a, b, RelationKind::Both)}};
  if (json) {
    Json j = Json::object();
    for (const auto& [name, r] : rows) j[name] = agreement_to_json(r);
    std::cout << Json{{"manifest", m.to_json()}, {"agreement", j}}.dump(2) << "\n";
    return 0;
  }
  std::cout << "# " << m.to_json().dump() << "\n";
  std::cout << std::fixed << std::setprecision(3);
  std::cout << std::left << std::setw(12) << "" << std::right << std::setw(8) << "F1" << std::setw(8) << "kappa"
            << std::setw(8) << "items" << "\n";
  for (const auto& [name, r] : rows) {
    std::cout << std::left << std::setw(12) << name << std::right << std::setw(8) << r.f1 << std::setw(8);
    if (r.kappa) std::cout << *r.kappa;
    else std::cout << "-";
    std::cout << std::setw(8) << r.items << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  CLI::App app{"Visiting order graph toolkit for travelogue corpora"};
  app.set_version_flag("--version", VOYAGEGRAPH_VERSION);
  app.require_subcommand(1);

  std::string input, out, ratio = "7:1:2", out_dir, config_path, preset = "default", task, level = "mention";
  std::string gold, pred, a_path, b_path;
  std::vector<std::string> inputs;
  std::uint64_t seed = 13;
  std::optional<std::uint64_t> synth_seed;
  std::optional<std::size_t> synth_docs;
  bool strict = false, json = false, predicted_parents = false;
  PredictArgs pa;

  auto* validate_cmd = app.add_subcommand("validate", "Check every document's graph; exit 0 iff all are valid");
  validate_cmd->add_option("input", input, "Corpus file or directory")->required()->check(CLI::ExistingPath);
  validate_cmd->add_flag("--strict", strict, "Also require one chain per sibling group");

  auto* stats_cmd = app.add_subcommand("stats", "Corpus statistics table");
  stats_cmd->add_option("inputs", inputs, "Corpus files or directories")->required()->check(CLI::ExistingPath);
  stats_cmd->add_flag("--json", json, "Emit JSON");

  auto* split_cmd = app.add_subcommand("split", "Seeded train/dev/test split into id-list files");
  split_cmd->add_option("input", input, "Corpus file or directory")->required()->check(CLI::ExistingPath);
  split_cmd->add_option("--ratio", ratio, "Ratio as a:b:c")->capture_default_str();
  split_cmd->add_option("--seed", seed, "Random seed")->capture_default_str();
  split_cmd->add_option("--out-dir", out_dir, "Directory for train.txt, dev.txt, test.txt")->required();

  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic corpus");
  auto* config_opt = synth_cmd->add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
  synth_cmd->add_option("--preset", preset, "Preset: default or clean")->capture_default_str()->excludes(config_opt);
  synth_cmd->add_option("--seed", synth_seed, "Overrides the config seed");
  synth_cmd->add_option("--documents", synth_docs, "Overrides the document count");
  synth_cmd->add_option("--out", out, "Output file (stdout when omitted)");

  std::vector<CLI::App*> predict_cmds;
  const std::pair<const char*, const char*> tasks[] = {{"vsp", "Predict mention and entity visit status"},
                                                       {"irp", "Predict inclusion edges (parent of each node)"},
                                                       {"trp", "Predict transition edges within sibling groups"}};
  for (const auto& [t, help] : tasks) {
    auto* cmd = app.add_subcommand(std::string("predict-") + t, help);
    cmd->add_option("input", pa.input, "Input corpus")->required()->check(CLI::ExistingPath);
    cmd->add_option("--system", pa.system,
                    "majority | flat | random | occorder-em | occorder-vs | oracle | heuristic")
        ->capture_default_str();
    cmd->add_option("--seed", pa.seed, "Random seed")->capture_default_str();
    cmd->add_option("--noise", pa.noise, "Oracle noise sigma")->capture_default_str()->check(CLI::NonNegativeNumber);
    cmd->add_option("--gold", pa.gold, "Gold corpus for the oracle (default: the input)")->check(CLI::ExistingPath);
    cmd->add_option("--out", pa.out, "Output file (stdout when omitted)");
    if (std::string(t) == "vsp") {
      cmd->add_option("--train", pa.train, "Training corpus for the majority baseline")->check(CLI::ExistingPath);
    }
    if (std::string(t) == "trp") {
      cmd->add_option("--decoder", pa.decoder, "naive | seqsort")->capture_default_str();
      cmd->add_option("--parents", pa.parents, "Predicted inclusion edges to decode over")
          ->check(CLI::ExistingPath);
    }
    predict_cmds.push_back(cmd);
  }

  auto* eval_cmd = app.add_subcommand("evaluate", "Score predictions against gold");
  eval_cmd->add_option("--task", task, "vsp | irp | trp")->required()->check(CLI::IsMember({"vsp", "irp", "trp"}));
  eval_cmd->add_option("--level", level, "mention | entity (vsp)")
      ->capture_default_str()
      ->check(CLI::IsMember({"mention", "entity"}));
  eval_cmd->add_option("--gold", gold, "Gold corpus")->required()->check(CLI::ExistingPath);
  eval_cmd->add_option("--pred", pred, "Predicted corpus")->required()->check(CLI::ExistingPath);
  eval_cmd->add_flag("--predicted-parents", predicted_parents, "TRP: sibling groups from the predicted inclusion");
  eval_cmd->add_flag("--json", json, "Emit JSON");
  eval_cmd->add_option("--out", out, "Output file (stdout when omitted)");

  auto* iaa_cmd = app.add_subcommand("iaa", "Agreement between two annotations of the same documents");
  iaa_cmd->add_option("--a", a_path, "Annotation A (treated as gold for F1)")->required()->check(CLI::ExistingPath);
  iaa_cmd->add_option("--b", b_path, "Annotation B")->required()->check(CLI::ExistingPath);
  iaa_cmd->add_flag("--json", json, "Emit JSON");

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate_cmd->parsed()) return cmd_validate(input, strict);
    if (stats_cmd->parsed()) return cmd_stats(inputs, json);
    if (split_cmd->parsed()) return cmd_split(input, ratio, seed, out_dir);
    if (synth_cmd->parsed()) return cmd_synth(config_path, preset, synth_seed, synth_docs, out);
    for (std::size_t i = 0; i < predict_cmds.size(); ++i) {
      if (predict_cmds[i]->parsed()) return cmd_predict(i == 0 ? "vsp" : i == 1 ? "irp" : "trp", pa);
    }
    if (eval_cmd->parsed()) return cmd_evaluate(task, level, gold, pred, predicted_parents, json, out);
    if (iaa_cmd->parsed()) return cmd_iaa(a_path, b_path, json);
  } catch (const ParseError& e) {
    std::cerr << "voyagegraph: " << e.what() << "\n";
    return 2;
  } catch (const GraphError& e) {
    std::cerr << "voyagegraph: " << e.what() << "\n";
    for (const auto& v : e.violations()) std::cerr << "  " << to_string(v) << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "voyagegraph: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
