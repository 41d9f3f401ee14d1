#include "semem/persistence.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <tuple>

#include "json_diagnostics.hpp"
#include "semem/error.hpp"
#include "semem/json_codec.hpp"

namespace semem {

namespace {

[[noreturn]] void malformed(const std::string& message) { throw Error(ErrorCode::kMalformedDocument, message); }

Json perception_to_json(const PerceptionConfig& config) {
  return Json{{"match_threshold", config.match_threshold},
              {"descriptor_dim", config.descriptor_dim},
              {"weights",
               {{"shape", config.weights.shape},
                {"color", config.weights.color},
                {"size", config.weights.size},
                {"descriptor", config.weights.descriptor}}}};
}

// Field access with the JSON path in every error.
class Reader {
 public:
  Reader(const Json& json, std::string path) : json_(json), path_(std::move(path)) {}

  const Json& json() const { return json_; }
  const std::string& path() const { return path_; }

  void expect_object(std::initializer_list<std::string_view> allowed) const {
    if (!json_.is_object()) malformed(path_ + ": expected object");
    for (const auto& [key, value] : json_.items()) {
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
        malformed(path_ + "." + key + ": unknown field");
      }
    }
  }

  bool has(const char* key) const { return json_.contains(key); }

  Reader at(const char* key) const {
    if (!json_.contains(key)) malformed(path_ + "." + key + ": missing field");
    return Reader(json_.at(key), path_ + "." + key);
  }

  Reader at(std::size_t index) const { return Reader(json_.at(index), path_ + "[" + std::to_string(index) + "]"); }

  const Json& array() const {
    if (!json_.is_array()) malformed(path_ + ": expected array");
    return json_;
  }

  std::string text() const {
    if (!json_.is_string()) malformed(path_ + ": expected string");
    return json_.get<std::string>();
  }

  std::uint64_t count() const {
    if (!json_.is_number_unsigned()) malformed(path_ + ": expected non-negative integer");
    return json_.get<std::uint64_t>();
  }

  double number() const {
    if (!json_.is_number()) malformed(path_ + ": expected number");
    return json_.get<double>();
  }

  // Runs a codec parser, relabelling its InvalidArgument as a document error.
  template <class F>
  auto decode(F&& parse) const {
    try {
      return parse(json_);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kInvalidArgument) throw;
      malformed(path_ + ": " + e.what());
    }
  }

 private:
  const Json& json_;
  std::string path_;
};

template <class E>
E enum_from(const Reader& r, std::initializer_list<E> values) {
  std::string name = r.text();
  for (E v : values) {
    if (to_string(v) == name) return v;
  }
  malformed(r.path() + ": unknown value '" + name + "'");
}

PerceptionConfig perception_from(const Reader& r) {
  r.expect_object({"match_threshold", "descriptor_dim", "weights"});
  PerceptionConfig config;
  config.match_threshold = r.at("match_threshold").number();
  config.descriptor_dim = r.at("descriptor_dim").count();
  Reader w = r.at("weights");
  w.expect_object({"shape", "color", "size", "descriptor"});
  config.weights = {w.at("shape").number(), w.at("color").number(), w.at("size").number(),
                    w.at("descriptor").number()};
  return config;
}

}  // namespace

std::string serialize(const World& world, bool include_scene) {
  const KnowledgeGraph& graph = world.graph;
  auto keep = [&](NodeId id) { return include_scene || graph.node(id).subgraph == Subgraph::kPrior; };

  Json nodes = Json::array();
  for (const auto& [id, node] : graph.nodes()) {
    if (keep(id)) nodes.push_back(to_json(node));
  }

  std::vector<const Edge*> kept;
  for (const auto& [id, edge] : graph.edges()) {
    if (keep(edge.source) && keep(edge.dest)) kept.push_back(&edge);
  }
  auto key = [](const Edge* e) {
    return std::make_tuple(e->source, e->dest, e->kind, std::string_view(e->action_label),
                           e->object.value_or(NodeId{0}), e->id);
  };
  std::sort(kept.begin(), kept.end(), [&](const Edge* a, const Edge* b) { return key(a) < key(b); });
  Json edges = Json::array();
  for (const Edge* edge : kept) edges.push_back(to_json(*edge));

  Json signatures = Json::array();
  for (const auto& entry : world.signatures.entries()) {
    signatures.push_back(Json{{"type", entry.type_label}, {"signature", to_json(entry.signature)}});
  }
  Json skills = Json::array();
  for (const auto& [name, skill] : world.skills.skills()) skills.push_back(to_json(skill));

  Json document{{"format_version", kFormatVersion},
                {"includes_scene", include_scene},
                {"next_node_id", graph.parts().next_node_id},
                {"next_edge_id", graph.parts().next_edge_id},
                {"counters", graph.instance_counters()},
                {"nodes", nodes},
                {"edges", edges},
                {"perception", perception_to_json(world.signatures.config())},
                {"signatures", signatures},
                {"skills", skills}};
  return document.dump(2) + "\n";
}

std::size_t save(const World& world, const std::filesystem::path& path, bool include_scene) {
  std::string text = serialize(world, include_scene);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot open '" + path.string() + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.flush();
  if (!out) throw Error(ErrorCode::kIoFailure, "write to '" + path.string() + "' failed");
  return text.size();
}

World deserialize(std::string_view text) {
  Json document;
  try {
    document = Json::parse(text);
  } catch (const Json::parse_error& e) {
    malformed("not valid JSON at " + detail::describe_position(text, e.byte));
  }
  Reader root(document, "$");
  if (!document.is_object()) malformed("$: expected object");
  std::uint64_t version = root.at("format_version").count();
  if (version != static_cast<std::uint64_t>(kFormatVersion)) {
    throw Error(ErrorCode::kUnsupportedVersion,
                "format_version " + std::to_string(version) + " is not supported (expected " +
                    std::to_string(kFormatVersion) + ")");
  }
  root.expect_object({"format_version", "includes_scene", "next_node_id", "next_edge_id", "counters", "nodes",
                      "edges", "perception", "signatures", "skills"});

  KnowledgeGraph::Parts parts;
  parts.next_node_id = root.at("next_node_id").count();
  parts.next_edge_id = root.at("next_edge_id").count();

  Reader counters = root.at("counters");
  if (!counters.json().is_object()) malformed("$.counters: expected object");
  for (const auto& [type, value] : counters.json().items()) {
    parts.counters[type] = Reader(value, "$.counters." + type).count();
  }

  const Json& nodes = root.at("nodes").array();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    Reader r = root.at("nodes").at(i);
    r.expect_object({"id", "label", "subgraph", "kind", "value", "skill_ref"});
    Node node;
    node.id = NodeId{r.at("id").count()};
    node.label = r.at("label").text();
    node.subgraph = enum_from(r.at("subgraph"), {Subgraph::kPrior, Subgraph::kScene});
    node.kind = enum_from(r.at("kind"), {NodeKind::kTypeConcept, NodeKind::kObjectInstance, NodeKind::kPropertySlot,
                                         NodeKind::kActionImpl});
    if (r.has("value")) node.value = r.at("value").decode(value_from_json);
    if (r.has("skill_ref")) node.skill_ref = r.at("skill_ref").text();
    parts.nodes.push_back(std::move(node));
  }

  const Json& edges = root.at("edges").array();
  for (std::size_t i = 0; i < edges.size(); ++i) {
    Reader r = root.at("edges").at(i);
    r.expect_object({"id", "source", "dest", "kind", "label", "object"});
    Edge edge;
    edge.id = EdgeId{r.at("id").count()};
    edge.source = NodeId{r.at("source").count()};
    edge.dest = NodeId{r.at("dest").count()};
    edge.kind = enum_from(r.at("kind"), {EdgeKind::kHas, EdgeKind::kIs, EdgeKind::kInstanceOf, EdgeKind::kAction});
    if (r.has("label")) edge.action_label = r.at("label").text();
    if (r.has("object")) edge.object = NodeId{r.at("object").count()};
    parts.edges.push_back(std::move(edge));
  }

  World world;
  world.graph = KnowledgeGraph::from_parts(std::move(parts));

  PerceptionConfig config;
  if (root.has("perception")) config = perception_from(root.at("perception"));
  std::vector<SignatureDatabase::Entry> entries;
  const Json& signatures = root.at("signatures").array();
  for (std::size_t i = 0; i < signatures.size(); ++i) {
    Reader r = root.at("signatures").at(i);
    r.expect_object({"type", "signature"});
    SignatureDatabase::Entry entry{r.at("type").text(), r.at("signature").decode(signature_from_json)};
    try {
      validate_signature(entry.signature, config.descriptor_dim);
    } catch (const Error& e) {
      malformed(r.path() + ": " + e.what());
    }
    auto type = world.graph.find_type(entry.type_label);
    if (!type || world.graph.node(*type).label != entry.type_label) {
      throw Error(ErrorCode::kIntegrityViolation,
                  r.path() + ": signature for unknown type '" + entry.type_label + "'");
    }
    entries.push_back(std::move(entry));
  }
  world.signatures = SignatureDatabase(config);
  world.signatures.restore(std::move(entries));

  const Json& skills = root.at("skills").array();
  for (std::size_t i = 0; i < skills.size(); ++i) {
    Reader r = root.at("skills").at(i);
    Skill skill = r.decode(skill_from_json);
    if (world.skills.contains(skill.name)) malformed(r.path() + ": duplicate skill '" + skill.name + "'");
    world.skills.add(std::move(skill));
  }
  return world;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::kIoFailure, "read from '" + path.string() + "' failed");
  return buffer.str();
}

World load(const std::filesystem::path& path) { return deserialize(read_text_file(path)); }

}  // namespace semem
