#pragma once

// Annotated travelogue documents as JSON: parsing with path diagnostics,
// canonical serialization, corpus files, seeded splits and statistics.

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "voyagegraph/document.hpp"
#include "voyagegraph/graph.hpp"
#include "voyagegraph/labels.hpp"
#include "voyagegraph/rng.hpp"
#include "voyagegraph/utf8.hpp"

namespace voyagegraph {

using Json = nlohmann::json;

/// Data error carrying the document id and the path to the offending field.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string document_id, std::string path, const std::string& message)
      : std::runtime_error(format(document_id, path, message)),
        document_id_(std::move(document_id)),
        path_(std::move(path)) {}

  const std::string& document_id() const { return document_id_; }
  const std::string& path() const { return path_; }

 private:
  static std::string format(const std::string& doc, const std::string& path,
                            const std::string& message) {
    std::string out = "document " + (doc.empty() ? std::string("<unknown>") : doc);
    if (!path.empty()) out += ": " + path;
    return out + ": " + message;
  }

  std::string document_id_;
  std::string path_;
};

struct ParseOptions {
  /// Require the embedded graph to build (lenient mode). Prediction files
  /// may hold structurally invalid graphs and are read with this off.
  bool validate_graph = true;
};

namespace detail {

class DocumentReader {
 public:
  explicit DocumentReader(const Json& root) : root_(root) {}

  Document read(const ParseOptions& options) {
    expect_object(root_, "", {"id", "sentences", "mentions", "entities", "graph"});
    doc_.id = string_at(root_, "id", "id");
    if (doc_.id.empty()) fail("id", "document id must not be empty");
    read_sentences();
    read_mentions();
    read_entities();
    check_membership();
    if (root_.contains("graph")) read_graph();
    if (options.validate_graph && doc_.graph) {
      const auto violations = validate(raw_graph(doc_), ValidationMode::Lenient);
      if (!violations.empty()) {
        std::string message = "graph does not validate";
        for (const auto& v : violations) message += "; " + to_string(v);
        fail("graph", message);
      }
    }
    return std::move(doc_);
  }

 private:
  [[noreturn]] void fail(const std::string& path, const std::string& message) const {
    throw ParseError(doc_.id, path, message);
  }

  void expect_object(const Json& j, const std::string& path,
                     std::initializer_list<std::string_view> allowed) const {
    if (!j.is_object()) fail(path, "expected an object");
    for (const auto& [key, value] : j.items()) {
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
        fail(join(path, key), "unknown field");
      }
    }
  }

  static std::string join(const std::string& path, std::string_view key) {
    return path.empty() ? std::string(key) : path + "." + std::string(key);
  }

  static std::string index(const std::string& path, std::size_t i) {
    return path + "[" + std::to_string(i) + "]";
  }

  const Json& field(const Json& obj, std::string_view key, const std::string& path) const {
    auto it = obj.find(key);
    if (it == obj.end()) fail(path, "missing required field");
    return *it;
  }

  std::string string_at(const Json& obj, std::string_view key, const std::string& path) const {
    const auto& v = field(obj, key, path);
    if (!v.is_string()) fail(path, "expected a string");
    return v.get<std::string>();
  }

  std::size_t unsigned_at(const Json& obj, std::string_view key, const std::string& path) const {
    const auto& v = field(obj, key, path);
    if (!v.is_number_unsigned()) fail(path, "expected a non-negative integer");
    return v.get<std::size_t>();
  }

  bool bool_at(const Json& obj, std::string_view key, const std::string& path) const {
    const auto& v = field(obj, key, path);
    if (!v.is_boolean()) fail(path, "expected a boolean");
    return v.get<bool>();
  }

  const Json& array_at(const Json& obj, std::string_view key, const std::string& path) const {
    const auto& v = field(obj, key, path);
    if (!v.is_array()) fail(path, "expected an array");
    return v;
  }

  template <VisitLabel Label>
  std::optional<Label> label_at(const Json& obj, const std::string& path) const {
    if (!obj.contains("label")) return std::nullopt;
    const auto name = string_at(obj, "label", path);
    auto label = try_parse_label<Label>(name);
    if (!label) fail(path, "unknown label '" + name + "'");
    return label;
  }

  void read_sentences() {
    const auto& arr = array_at(root_, "sentences", "sentences");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const auto path = index("sentences", i);
      expect_object(arr[i], path, {"id", "text"});
      Sentence s{string_at(arr[i], "id", join(path, "id")), string_at(arr[i], "text", join(path, "text"))};
      if (!sentence_index_.emplace(s.id, i).second) fail(join(path, "id"), "duplicate sentence id '" + s.id + "'");
      doc_.sentences.push_back(std::move(s));
    }
  }

  void read_mentions() {
    const auto& arr = array_at(root_, "mentions", "mentions");
    std::set<std::string> seen;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const auto path = index("mentions", i);
      const auto& j = arr[i];
      expect_object(j, path,
                    {"id", "entity_id", "sentence_id", "start", "end", "surface", "is_proper_noun", "label"});
      Mention m;
      m.id = string_at(j, "id", join(path, "id"));
      if (!seen.insert(m.id).second) fail(join(path, "id"), "duplicate mention id '" + m.id + "'");
      m.entity_id = string_at(j, "entity_id", join(path, "entity_id"));
      const auto sentence_id = string_at(j, "sentence_id", join(path, "sentence_id"));
      auto s = sentence_index_.find(sentence_id);
      if (s == sentence_index_.end()) fail(join(path, "sentence_id"), "unknown sentence '" + sentence_id + "'");
      m.sentence_index = s->second;
      m.start = unsigned_at(j, "start", join(path, "start"));
      m.end = unsigned_at(j, "end", join(path, "end"));
      m.surface = string_at(j, "surface", join(path, "surface"));
      m.is_proper_noun = bool_at(j, "is_proper_noun", join(path, "is_proper_noun"));
      m.label = label_at<MentionLabel>(j, join(path, "label"));

      const auto& text = doc_.sentences[m.sentence_index].text;
      const std::size_t length = utf8::length(text);
      if (m.start >= m.end) fail(join(path, "start"), "start must be less than end");
      if (m.end > length) {
        fail(join(path, "end"), "offset " + std::to_string(m.end) + " beyond sentence length " +
                                    std::to_string(length));
      }
      if (utf8::slice(text, m.start, m.end) != m.surface) {
        fail(join(path, "surface"), "surface does not match sentence text at [" +
                                        std::to_string(m.start) + ", " + std::to_string(m.end) + ")");
      }
      doc_.mentions.push_back(std::move(m));
    }
  }

  void read_entities() {
    const auto& arr = array_at(root_, "entities", "entities");
    std::set<std::string> seen;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const auto path = index("entities", i);
      const auto& j = arr[i];
      expect_object(j, path, {"id", "mention_ids", "label", "unknown_time", "visits"});
      Entity e;
      e.id = string_at(j, "id", join(path, "id"));
      if (e.id.empty() || is_reserved_id(e.id) || e.id.find('#') != std::string::npos) {
        fail(join(path, "id"), "invalid entity id '" + e.id + "'");
      }
      if (!seen.insert(e.id).second) fail(join(path, "id"), "duplicate entity id '" + e.id + "'");
      const auto& ids = array_at(j, "mention_ids", join(path, "mention_ids"));
      if (ids.empty()) fail(join(path, "mention_ids"), "entity has no mentions");
      for (std::size_t k = 0; k < ids.size(); ++k) {
        if (!ids[k].is_string()) fail(index(join(path, "mention_ids"), k), "expected a string");
        e.mention_ids.push_back(ids[k].get<std::string>());
      }
      e.label = label_at<EntityLabel>(j, join(path, "label"));
      if (j.contains("unknown_time")) e.unknown_time = bool_at(j, "unknown_time", join(path, "unknown_time"));
      if (j.contains("visits")) {
        const auto vpath = join(path, "visits");
        const auto& visits = array_at(j, "visits", vpath);
        std::vector<std::vector<std::string>> partitions;
        for (std::size_t k = 0; k < visits.size(); ++k) {
          if (!visits[k].is_array()) fail(index(vpath, k), "expected an array");
          auto& part = partitions.emplace_back();
          for (const auto& m : visits[k]) {
            if (!m.is_string()) fail(index(vpath, k), "expected mention id strings");
            part.push_back(m.get<std::string>());
          }
        }
        try {
          split_multi_visit(e.id, e.mention_ids, partitions);
        } catch (const GraphError& err) {
          fail(vpath, err.violations().empty() ? err.what() : to_string(err.violations().front()));
        }
        e.visits = std::move(partitions);
      }
      doc_.entities.push_back(std::move(e));
    }
  }

  void check_membership() const {
    std::map<std::string, std::size_t> mention_pos;
    for (std::size_t i = 0; i < doc_.mentions.size(); ++i) mention_pos.emplace(doc_.mentions[i].id, i);
    std::map<std::string, std::string> owner;
    for (std::size_t i = 0; i < doc_.entities.size(); ++i) {
      const auto& e = doc_.entities[i];
      const auto path = join(index("entities", i), "mention_ids");
      for (std::size_t k = 0; k < e.mention_ids.size(); ++k) {
        const auto& id = e.mention_ids[k];
        auto it = mention_pos.find(id);
        if (it == mention_pos.end()) fail(index(path, k), "unknown mention '" + id + "'");
        const auto& m = doc_.mentions[it->second];
        if (m.entity_id != e.id) {
          fail(index(path, k), "mention '" + id + "' points to entity '" + m.entity_id + "'");
        }
        if (!owner.emplace(id, e.id).second) fail(index(path, k), "mention '" + id + "' listed twice");
        if (k > 0 && !occurs_before(doc_.mentions[mention_pos.at(e.mention_ids[k - 1])], m)) {
          fail(index(path, k), "mention_ids are not in occurrence order");
        }
      }
    }
    for (std::size_t i = 0; i < doc_.mentions.size(); ++i) {
      if (!owner.contains(doc_.mentions[i].id)) {
        fail(join(index("mentions", i), "entity_id"),
             "entity '" + doc_.mentions[i].entity_id + "' does not list this mention");
      }
    }
  }

  VisitNode node_at(const Json& j, const std::string& path) const {
    if (!j.is_string()) fail(path, "expected a node reference string");
    const auto ref = j.get<std::string>();
    auto node = parse_node_ref(ref);
    if (!node || is_reserved_id(ref)) fail(path, "invalid node reference '" + ref + "'");
    return *node;
  }

  void read_graph() {
    const auto& g = root_.at("graph");
    expect_object(g, "graph", {"inclusion", "transition", "overlap"});
    RawGraph raw;
    auto pairs = [&](std::string_view key, auto&& consume) {
      if (!g.contains(key)) return;
      const auto path = join("graph", key);
      const auto& arr = array_at(g, key, path);
      for (std::size_t i = 0; i < arr.size(); ++i) {
        if (!arr[i].is_array() || arr[i].size() != 2) fail(index(path, i), "expected a pair");
        consume(arr[i][0], arr[i][1], index(path, i));
      }
    };
    pairs("inclusion", [&](const Json& a, const Json& b, const std::string& path) {
      ParentRef parent;
      if (!(a.is_string() && a.get<std::string>() == kRootId)) parent = node_at(a, path + "[0]");
      raw.inclusion.emplace_back(std::move(parent), node_at(b, path + "[1]"));
    });
    pairs("transition", [&](const Json& a, const Json& b, const std::string& path) {
      raw.transition.emplace_back(node_at(a, path + "[0]"), node_at(b, path + "[1]"));
    });
    pairs("overlap", [&](const Json& a, const Json& b, const std::string& path) {
      raw.overlap.emplace_back(node_at(a, path + "[0]"), node_at(b, path + "[1]"));
    });
    doc_.graph = std::move(raw);
  }

  const Json& root_;
  Document doc_;
  std::map<std::string, std::size_t> sentence_index_;
};

}  // namespace detail

inline Document parse_document(const Json& json, const ParseOptions& options = {}) {
  return detail::DocumentReader(json).read(options);
}

inline Document parse_document(std::string_view bytes, const ParseOptions& options = {}) {
  Json json;
  try {
    json = Json::parse(bytes);
  } catch (const Json::parse_error& err) {
    throw ParseError("", "", std::string("malformed JSON: ") + err.what());
  }
  return parse_document(json, options);
}

inline Document parse_document(const std::string& bytes, const ParseOptions& options = {}) {
  return parse_document(std::string_view(bytes), options);
}

inline Document parse_document(const char* bytes, const ParseOptions& options = {}) {
  return parse_document(std::string_view(bytes), options);
}

/// Node reference as written in files: multi-visit entities always carry "#k".
inline std::string node_ref(const Document& doc, const VisitNode& node) {
  for (const auto& e : doc.entities) {
    if (e.id == node.entity_id && visit_count(e) > 1) {
      return node.entity_id + "#" + std::to_string(node.visit_index);
    }
  }
  return to_string(node);
}

inline Json document_to_json(const Document& doc) {
  Json root = Json::object();
  root["id"] = doc.id;
  Json sentences = Json::array();
  for (const auto& s : doc.sentences) sentences.push_back({{"id", s.id}, {"text", s.text}});
  root["sentences"] = std::move(sentences);
  Json mentions = Json::array();
  for (const auto& m : doc.mentions) {
    Json j = {{"id", m.id},
              {"entity_id", m.entity_id},
              {"sentence_id", doc.sentences.at(m.sentence_index).id},
              {"start", m.start},
              {"end", m.end},
              {"surface", m.surface},
              {"is_proper_noun", m.is_proper_noun}};
    if (m.label) j["label"] = std::string(label_name(*m.label));
    mentions.push_back(std::move(j));
  }
  root["mentions"] = std::move(mentions);
  Json entities = Json::array();
  for (const auto& e : doc.entities) {
    Json j = {{"id", e.id}, {"mention_ids", e.mention_ids}};
    if (e.label) j["label"] = std::string(label_name(*e.label));
    if (e.unknown_time) j["unknown_time"] = true;
    if (e.visits) j["visits"] = *e.visits;
    entities.push_back(std::move(j));
  }
  root["entities"] = std::move(entities);
  if (doc.graph) {
    Json inclusion = Json::array();
    for (const auto& [parent, child] : doc.graph->inclusion) {
      inclusion.push_back({parent ? node_ref(doc, *parent) : std::string(kRootId), node_ref(doc, child)});
    }
    Json transition = Json::array();
    for (const auto& [a, b] : doc.graph->transition) transition.push_back({node_ref(doc, a), node_ref(doc, b)});
    Json overlap = Json::array();
    for (const auto& [a, b] : doc.graph->overlap) overlap.push_back({node_ref(doc, a), node_ref(doc, b)});
    root["graph"] = {{"inclusion", std::move(inclusion)},
                     {"transition", std::move(transition)},
                     {"overlap", std::move(overlap)}};
  }
  return root;
}

/// Canonical single-line form: sorted keys, no insignificant whitespace,
/// UTF-8 kept as is, LF terminated.
inline std::string serialize_document(const Document& doc) {
  return document_to_json(doc).dump(-1, ' ', false, Json::error_handler_t::strict) + "\n";
}

/// Documents plus the run manifest record, if the file carried one.
struct Corpus {
  std::vector<Document> documents;
  std::optional<Json> manifest;
};

namespace detail {

inline bool is_manifest_record(const Json& j) {
  return j.is_object() && j.contains("manifest") && !j.contains("id");
}

inline void add_record(Corpus& corpus, const Json& j, const ParseOptions& options,
                       const std::string& where) {
  if (is_manifest_record(j)) {
    corpus.manifest = j.at("manifest");
    return;
  }
  try {
    corpus.documents.push_back(parse_document(j, options));
  } catch (const ParseError& err) {
    throw ParseError(err.document_id(), err.path(), std::string(err.what()) + " (" + where + ")");
  }
}

inline void read_corpus_text(Corpus& corpus, const std::string& text, const ParseOptions& options,
                             const std::string& source) {
  // A whole-file JSON value is a single document or an array of documents;
  // anything else is read as JSON lines.
  Json whole = Json::parse(text, nullptr, false);
  if (!whole.is_discarded()) {
    if (whole.is_array()) {
      for (std::size_t i = 0; i < whole.size(); ++i) {
        add_record(corpus, whole[i], options, source + " item " + std::to_string(i));
      }
      return;
    }
    add_record(corpus, whole, options, source);
    return;
  }
  std::istringstream in(text);
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto where = source + ":" + std::to_string(number);
    Json j;
    try {
      j = Json::parse(line);
    } catch (const Json::parse_error& err) {
      throw ParseError("", "", "malformed JSON at " + where + ": " + err.what());
    }
    add_record(corpus, j, options, where);
  }
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace detail

/// Reads a JSON-lines file, a single-document JSON file, or a directory of
/// *.json / *.jsonl files (in file-name order).
inline Corpus read_corpus(const std::filesystem::path& path, const ParseOptions& options = {}) {
  Corpus corpus;
  if (std::filesystem::is_directory(path)) {
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(path)) {
      const auto ext = entry.path().extension();
      if (entry.is_regular_file() && (ext == ".json" || ext == ".jsonl")) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& file : files) {
      detail::read_corpus_text(corpus, detail::read_file(file), options, file.string());
    }
  } else {
    detail::read_corpus_text(corpus, detail::read_file(path), options, path.string());
  }
  std::set<std::string> ids;
  for (const auto& doc : corpus.documents) {
    if (!ids.insert(doc.id).second) throw ParseError(doc.id, "id", "duplicate document id in corpus");
  }
  return corpus;
}

/// Canonical JSON lines: the manifest record first, then documents by id.
inline std::string serialize_corpus(std::vector<Document> documents,
                                    const std::optional<Json>& manifest = std::nullopt) {
  std::sort(documents.begin(), documents.end(),
            [](const Document& a, const Document& b) { return a.id < b.id; });
  std::string out;
  if (manifest) out += Json{{"manifest", *manifest}}.dump(-1, ' ', false) + "\n";
  for (const auto& doc : documents) out += serialize_document(doc);
  return out;
}

inline void write_text(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
}

// ---------------------------------------------------------------------------
// Split

struct CorpusSplit {
  std::vector<std::string> train;
  std::vector<std::string> dev;
  std::vector<std::string> test;

  bool operator==(const CorpusSplit&) const = default;
};

/// Largest-remainder allocation of n items to the ratio parts; remainder ties
/// go to the earlier part.
inline std::array<std::size_t, 3> split_sizes(std::size_t n, const std::array<unsigned, 3>& ratio) {
  const std::uint64_t total = std::accumulate(ratio.begin(), ratio.end(), std::uint64_t{0});
  std::array<std::size_t, 3> sizes{};
  std::array<std::uint64_t, 3> remainder{};
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    sizes[i] = static_cast<std::size_t>(n * ratio[i] / total);
    remainder[i] = n * ratio[i] % total;
    assigned += sizes[i];
  }
  std::array<std::size_t, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::size_t k = 0; assigned < n; ++k, ++assigned) ++sizes[order[k]];
  return sizes;
}

/// Seeded shuffle of the sorted ids, cut by split_sizes. Each part is
/// returned sorted.
inline CorpusSplit split_corpus(std::vector<std::string> ids, const std::array<unsigned, 3>& ratio,
                                std::uint64_t seed) {
  for (auto r : ratio) {
    if (r == 0) throw std::invalid_argument("split ratio components must be positive");
  }
  if (ids.size() < ratio.size()) {
    throw std::invalid_argument("cannot split " + std::to_string(ids.size()) +
                                " documents into 3 parts");
  }
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
    throw std::invalid_argument("duplicate document ids");
  }
  Rng rng(derive_seed(seed, std::string_view("split")));
  rng.shuffle(std::span<std::string>(ids));
  const auto sizes = split_sizes(ids.size(), ratio);
  CorpusSplit split;
  std::array<std::vector<std::string>*, 3> parts{&split.train, &split.dev, &split.test};
  auto first = ids.begin();
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const auto last = first + static_cast<std::ptrdiff_t>(sizes[i]);
    parts[i]->assign(first, last);
    std::sort(parts[i]->begin(), parts[i]->end());
    first = last;
  }
  return split;
}

inline CorpusSplit split_corpus(const std::vector<Document>& documents,
                                const std::array<unsigned, 3>& ratio, std::uint64_t seed) {
  std::vector<std::string> ids;
  for (const auto& d : documents) ids.push_back(d.id);
  return split_corpus(std::move(ids), ratio, seed);
}

/// "7:1:2" -> {7, 1, 2}
inline std::array<unsigned, 3> parse_ratio(std::string_view text) {
  std::array<unsigned, 3> ratio{};
  std::size_t part = 0;
  for (std::size_t pos = 0; pos <= text.size(); ++part) {
    auto colon = text.find(':', pos);
    if (colon == std::string_view::npos) colon = text.size();
    const auto token = text.substr(pos, colon - pos);
    unsigned value = 0;
    auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (part >= 3 || token.empty() || ec != std::errc{} || end != token.data() + token.size()) {
      part = 0;
      break;
    }
    ratio[part] = value;
    pos = colon + 1;
  }
  if (part != 3) throw std::invalid_argument("ratio must look like A:B:C, got '" + std::string(text) + "'");
  if (ratio[0] + ratio[1] + ratio[2] == 0) throw std::invalid_argument("ratio must not be all zero");
  return ratio;
}

// ---------------------------------------------------------------------------
// Statistics

struct CorpusStats {
  std::size_t documents = 0;
  std::size_t sentences = 0;
  std::size_t mentions = 0;
  std::size_t entities = 0;
  std::size_t nodes = 0;
  std::size_t inclusion = 0;  // pairs with a non-ROOT parent
  std::size_t transition = 0;
  std::size_t overlap = 0;
  std::size_t unknown_time = 0;
  std::size_t multi_visit = 0;
  LabelArray<MentionLabel, std::size_t> mention_labels{};
  std::size_t mention_unlabeled = 0;
  LabelArray<EntityLabel, std::size_t> entity_labels{};
  std::size_t entity_unlabeled = 0;

  bool operator==(const CorpusStats&) const = default;

  CorpusStats& operator+=(const CorpusStats& o) {
    documents += o.documents;
    sentences += o.sentences;
    mentions += o.mentions;
    entities += o.entities;
    nodes += o.nodes;
    inclusion += o.inclusion;
    transition += o.transition;
    overlap += o.overlap;
    unknown_time += o.unknown_time;
    multi_visit += o.multi_visit;
    for (std::size_t i = 0; i < mention_labels.size(); ++i) mention_labels[i] += o.mention_labels[i];
    mention_unlabeled += o.mention_unlabeled;
    for (std::size_t i = 0; i < entity_labels.size(); ++i) entity_labels[i] += o.entity_labels[i];
    entity_unlabeled += o.entity_unlabeled;
    return *this;
  }

  friend CorpusStats operator+(CorpusStats a, const CorpusStats& b) { return a += b; }

  std::size_t relations() const { return inclusion + transition; }
};

inline CorpusStats document_stats(const Document& doc) {
  CorpusStats s;
  s.documents = 1;
  s.sentences = doc.sentences.size();
  s.mentions = doc.mentions.size();
  s.entities = doc.entities.size();
  s.nodes = graph_nodes(doc).size();
  for (const auto& m : doc.mentions) {
    if (m.label) ++s.mention_labels[label_index(*m.label)];
    else ++s.mention_unlabeled;
  }
  for (const auto& e : doc.entities) {
    if (e.label) ++s.entity_labels[label_index(*e.label)];
    else ++s.entity_unlabeled;
    if (e.unknown_time) ++s.unknown_time;
    if (visit_count(e) >= 2) ++s.multi_visit;
  }
  if (doc.graph) {
    std::set<std::pair<VisitNode, VisitNode>> inclusion, transition, overlap;
    for (const auto& [parent, child] : doc.graph->inclusion) {
      if (parent) inclusion.emplace(*parent, child);
    }
    transition.insert(doc.graph->transition.begin(), doc.graph->transition.end());
    for (const auto& [a, b] : doc.graph->overlap) overlap.insert(std::minmax(a, b));
    s.inclusion = inclusion.size();
    s.transition = transition.size();
    s.overlap = overlap.size();
  }
  return s;
}

inline CorpusStats corpus_stats(const std::vector<Document>& documents) {
  CorpusStats total;
  for (const auto& doc : documents) total += document_stats(doc);
  return total;
}

inline Json stats_to_json(const CorpusStats& s) {
  Json mention_labels = Json::object();
  for (auto l : LabelTraits<MentionLabel>::all) {
    mention_labels[std::string(label_name(l))] = s.mention_labels[label_index(l)];
  }
  Json entity_labels = Json::object();
  for (auto l : LabelTraits<EntityLabel>::all) {
    entity_labels[std::string(label_name(l))] = s.entity_labels[label_index(l)];
  }
  return {{"documents", s.documents},
          {"sentences", s.sentences},
          {"mentions", s.mentions},
          {"entities", s.entities},
          {"nodes", s.nodes},
          {"inclusion", s.inclusion},
          {"transition", s.transition},
          {"relations", s.relations()},
          {"overlap", s.overlap},
          {"unknown_time", s.unknown_time},
          {"multi_visit", s.multi_visit},
          {"mention_labels", mention_labels},
          {"mention_unlabeled", s.mention_unlabeled},
          {"entity_labels", entity_labels},
          {"entity_unlabeled", s.entity_unlabeled}};
}

/// Plain-text table: one row per named corpus part.
inline std::string stats_table(const std::vector<std::pair<std::string, CorpusStats>>& rows) {
  std::ostringstream out;
  auto line = [&](const std::string& name, auto... values) {
    out << std::left;
    out.width(8);
    out << name;
    ((out.width(9), out << std::right << values), ...);
    out << "\n";
  };
  line("Set", "#Doc", "#Sent", "#Men", "#Ent", "#Node", "#Inc", "#Tra", "#Inc+Tra", "#Over",
       "#UnkT", "#MV");
  for (const auto& [name, s] : rows) {
    line(name, s.documents, s.sentences, s.mentions, s.entities, s.nodes, s.inclusion,
         s.transition, s.relations(), s.overlap, s.unknown_time, s.multi_visit);
  }
  if (rows.empty()) return out.str();
  out << "\nMention labels:";
  for (auto l : LabelTraits<MentionLabel>::all) out << " " << label_name(l) << "=" << rows.back().second.mention_labels[label_index(l)];
  out << " unlabeled=" << rows.back().second.mention_unlabeled << "\nEntity labels:";
  for (auto l : LabelTraits<EntityLabel>::all) out << " " << label_name(l) << "=" << rows.back().second.entity_labels[label_index(l)];
  out << " unlabeled=" << rows.back().second.entity_unlabeled << "\n";
  return out.str();
}

}  // namespace voyagegraph
