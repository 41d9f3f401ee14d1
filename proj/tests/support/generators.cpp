#include "generators.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

#include "oracles.hpp"
#include "semem/error.hpp"

namespace gen {

using semem::ErrorCode;
using semem::KnowledgeGraph;
using semem::NodeId;
using semem::NodeKind;
using semem::Subgraph;

std::size_t pick(Rng& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }

bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

namespace {

const std::vector<std::string> kTypes = {"Alpha", "Beta", "Gamma", "Delta", "Epsilon", "alpha", "BETA", "Nut"};
const std::vector<std::string> kSlots = {"color", "shape", "size", "position", "grip"};
const std::vector<std::string> kNested = {"width", "depth", "grip"};
const std::vector<std::string> kVerbs = {"pick", "place", "push"};
const std::vector<std::string> kSkills = {"skill_a", "skill_b", "skill_c", "skill_d"};
const std::vector<std::string> kWords = {"green", "blue", "hex", "Green "};

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

template <typename T>
const T& choose(Rng& rng, const std::vector<T>& items) {
  return items[pick(rng, items.size())];
}

std::vector<std::string> existing_types(const KnowledgeGraph& g) {
  std::vector<std::string> out;
  for (const auto& [id, n] : g.nodes()) {
    if (n.kind == NodeKind::kTypeConcept) out.push_back(n.label);
  }
  return out;
}

// Mostly a type that exists, sometimes any name from the pool.
std::string some_type(const KnowledgeGraph& g, Rng& rng) {
  auto known = existing_types(g);
  if (!known.empty() && coin(rng, 0.8)) return choose(rng, known);
  return choose(rng, kTypes);
}

std::optional<NodeId> type_named(const KnowledgeGraph& g, const std::string& label) {
  for (const auto& [id, n] : g.nodes()) {
    if (n.kind == NodeKind::kTypeConcept && lower(n.label) == lower(label)) return id;
  }
  return std::nullopt;
}

std::vector<NodeId> nodes_where(const KnowledgeGraph& g, auto pred) {
  std::vector<NodeId> out;
  for (const auto& [id, n] : g.nodes()) {
    if (pred(n)) out.push_back(id);
  }
  return out;
}

semem::Value random_value(Rng& rng) {
  if (coin(rng, 0.7)) return semem::Value{choose(rng, kWords)};
  return semem::Value{std::vector<double>{double(pick(rng, 3)), double(pick(rng, 3)), 1.0}};
}

std::string code_name(ErrorCode code) { return std::string(semem::to_string(code)); }

}  // namespace

semem::Pose random_pose(Rng& rng) {
  static const std::vector<double> grid = {0.0, 50.0, 100.0, -25.5};
  static const std::vector<double> angles = {-180.0, -90.0, 0.0, 45.0, 90.0};
  semem::Pose pose;
  for (auto& x : pose.position) x = choose(rng, grid);
  for (auto& a : pose.orientation) a = choose(rng, angles);
  return pose;
}

Step random_op(KnowledgeGraph& graph, Rng& rng) {
  Step step;
  auto run = [&](auto&& body) {
    try {
      body();
    } catch (const semem::Error& e) {
      step.threw = true;
      step.error = code_name(e.code());
    }
  };

  switch (pick(rng, 10)) {
    case 0:
    case 1: {
      step.op = "add_type";
      std::string label = choose(rng, kTypes);
      std::optional<std::string> parent;
      if (coin(rng, 0.6)) parent = some_type(graph, rng);
      std::vector<std::string> slots;
      for (const auto& s : kSlots) {
        if (coin(rng, 0.5)) slots.push_back(s);
      }
      if (type_named(graph, label)) {
        step.expected_error = code_name(ErrorCode::kDuplicateType);
      } else if (parent && !type_named(graph, *parent)) {
        step.expected_error = code_name(ErrorCode::kUnknownParent);
      }
      run([&] {
        graph.add_type(label, parent ? std::optional<std::string_view>(*parent) : std::nullopt, slots);
      });
      break;
    }
    case 2: {
      step.op = "add_slot";
      auto owners = nodes_where(graph, [](const semem::Node& n) {
        return n.subgraph == Subgraph::kPrior &&
               (n.kind == NodeKind::kTypeConcept || n.kind == NodeKind::kPropertySlot);
      });
      auto live = std::vector<NodeId>(graph.instances().begin(), graph.instances().end());
      std::string label = choose(rng, coin(rng) ? kNested : kSlots);
      NodeId owner;
      if (!live.empty() && coin(rng, 0.1)) {
        owner = choose(rng, live);
        step.expected_error = code_name(ErrorCode::kInvalidArgument);
      } else if (!owners.empty()) {
        owner = choose(rng, owners);
        for (const auto& [id, e] : graph.edges()) {
          if (e.source == owner && e.kind == semem::EdgeKind::kHas && graph.nodes().at(e.dest).label == label) {
            step.expected_error = code_name(ErrorCode::kInvalidArgument);
          }
        }
      } else {
        owner = NodeId{999999};
        step.expected_error = code_name(ErrorCode::kInvalidArgument);
      }
      run([&] { graph.add_slot(owner, label); });
      break;
    }
    case 3: {
      step.op = "link_subtype";
      std::string child = some_type(graph, rng);
      std::string parent = some_type(graph, rng);
      auto c = type_named(graph, child);
      auto p = type_named(graph, parent);
      if (!c || !p) {
        step.expected_error = code_name(ErrorCode::kUnknownType);
      } else if (*c == *p || oracle::closure(graph, child).contains(graph.nodes().at(*p).label)) {
        step.expected_error = code_name(ErrorCode::kHierarchyCycle);
      }
      run([&] { graph.link_subtype(child, parent); });
      break;
    }
    case 4: {
      step.op = "define_action";
      std::string actor = some_type(graph, rng);
      std::string object = some_type(graph, rng);
      if (!type_named(graph, actor) || !type_named(graph, object)) {
        step.expected_error = code_name(ErrorCode::kUnknownType);
      }
      run([&] { graph.define_action(actor, choose(rng, kVerbs), object, choose(rng, kSkills)); });
      break;
    }
    case 5:
    case 6: {
      step.op = "instantiate";
      std::string type = some_type(graph, rng);
      auto t = type_named(graph, type);
      std::vector<semem::PropertyValue> values;
      if (!t) {
        step.expected_error = code_name(ErrorCode::kUnknownType);
      } else {
        for (const auto& path : oracle::prior_paths(graph, *t)) {
          if (coin(rng, 0.4)) values.push_back({path, random_value(rng)});
        }
        if (coin(rng, 0.1)) {
          values.push_back({"bogus", random_value(rng)});
          step.expected_error = code_name(ErrorCode::kUnknownSlot);
        }
      }
      semem::Pose pose = random_pose(rng);
      run([&] { step.created_instance = graph.instantiate(type, values, pose); });
      break;
    }
    case 7: {
      step.op = "remove_instance";
      auto live = std::vector<NodeId>(graph.instances().begin(), graph.instances().end());
      NodeId target;
      if (live.empty() || coin(rng, 0.15)) {
        auto others = nodes_where(graph, [](const semem::Node& n) { return n.kind != NodeKind::kObjectInstance; });
        target = others.empty() ? NodeId{424242} : choose(rng, others);
        step.expected_error = code_name(ErrorCode::kNotAnInstance);
      } else {
        target = choose(rng, live);
      }
      run([&] { graph.remove_instance(target); });
      break;
    }
    case 8: {
      step.op = "set_slot_value";
      auto live = std::vector<NodeId>(graph.instances().begin(), graph.instances().end());
      if (live.empty()) {
        step.expected_error = code_name(ErrorCode::kNotAnInstance);
        run([&] { graph.set_slot_value(NodeId{424242}, "color", random_value(rng)); });
        break;
      }
      NodeId target = choose(rng, live);
      auto paths = oracle::instance_paths(graph, target);
      std::string path = "nope";
      if (!paths.empty() && coin(rng, 0.85)) {
        path = *std::next(paths.begin(), static_cast<long>(pick(rng, paths.size())));
      } else {
        step.expected_error = code_name(ErrorCode::kUnknownSlot);
      }
      run([&] { graph.set_slot_value(target, path, random_value(rng)); });
      break;
    }
    default: {
      auto live = std::vector<NodeId>(graph.instances().begin(), graph.instances().end());
      if (!live.empty() && coin(rng, 0.9)) {
        step.op = "set_instance_pose";
        NodeId target = choose(rng, live);
        semem::Pose pose = random_pose(rng);
        run([&] { graph.set_instance_pose(target, pose); });
      } else {
        step.op = "clear_scene";
        run([&] { graph.clear_scene(); });
      }
      break;
    }
  }
  return step;
}

KnowledgeGraph random_graph(Rng& rng, std::size_t ops) {
  KnowledgeGraph graph;
  for (std::size_t i = 0; i < ops; ++i) random_op(graph, rng);
  return graph;
}

semem::Signature random_signature(Rng& rng, std::size_t descriptor_dim) {
  static const std::vector<std::string> shapes = {"hex", "cylinder", "square", "round"};
  static const std::vector<std::string> colors = {"green", "blue", "gray"};
  static const std::vector<double> sizes = {10.0, 20.0, 30.0, 40.0};
  semem::Signature sig;
  sig.shape_class = choose(rng, shapes);
  sig.color_class = choose(rng, colors);
  for (auto& x : sig.size) x = choose(rng, sizes);
  if (coin(rng, 0.3)) {
    std::vector<double> d(descriptor_dim, 0.0);
    d[pick(rng, std::min<std::size_t>(4, descriptor_dim))] = 1.0;
    sig.descriptor = d;
  }
  return sig;
}

semem::World random_world(Rng& rng, std::size_t ops) {
  semem::World world;
  world.graph = random_graph(rng, ops);
  for (const auto& [id, n] : world.graph.nodes()) {
    if (n.kind == NodeKind::kTypeConcept) {
      std::size_t count = pick(rng, 3);
      for (std::size_t i = 0; i < count; ++i) {
        world.signatures.register_signature(world.graph, n.label, random_signature(rng));
      }
    }
  }
  std::set<std::string> refs;
  for (const auto& [id, n] : world.graph.nodes()) {
    if (n.kind == NodeKind::kActionImpl && n.skill_ref) refs.insert(*n.skill_ref);
  }
  for (const auto& ref : refs) {
    semem::Skill skill{ref, {}};
    skill.steps.push_back(semem::MoveTo{random_pose(rng)});
    skill.steps.push_back(semem::GripClose{});
    if (coin(rng)) {
      skill.steps.push_back(semem::RemovePatient{});
    } else {
      skill.steps.push_back(semem::PlacePatient{random_pose(rng)});
    }
    skill.steps.push_back(semem::GripOpen{});
    world.skills.add(skill);
  }
  return world;
}

std::vector<semem::PropertyValue> random_filters(const KnowledgeGraph& graph, Rng& rng) {
  (void)graph;
  static const std::vector<std::string> slots = {"color", "shape", "position", "grip"};
  std::vector<semem::PropertyValue> filters;
  std::size_t count = pick(rng, 3);
  for (std::size_t i = 0; i < count; ++i) {
    std::string slot = choose(rng, slots);
    if (slot == "position") {
      semem::Pose pose = random_pose(rng);
      filters.push_back({slot, semem::Value{std::vector<double>(pose.position.begin(), pose.position.end())}});
    } else {
      filters.push_back({slot, random_value(rng)});
    }
  }
  return filters;
}

std::vector<Sentence> parser_corpus(const semem::Lexicon& lexicon, std::size_t minimum) {
  const std::vector<std::string> actors = {"YuMi", "Robot", "yumi", ""};
  const std::vector<std::string> openers = {"", "please ", "now "};
  const std::vector<std::string> dets = {"", "the ", "a ", "an ", "The "};
  const std::vector<std::string> nouns = {"nut", "screw", "box", "clip", "widget", "Bolt"};
  const std::vector<std::string> endings = {"!", ".", "", " now!"};
  std::vector<std::string> verbs(lexicon.verbs.begin(), lexicon.verbs.end());
  std::vector<std::string> colors(lexicon.colors.begin(), lexicon.colors.end());
  std::vector<std::string> shapes(lexicon.shapes.begin(), lexicon.shapes.end());

  Rng rng(20240601);
  std::set<std::string> seen;
  std::vector<Sentence> corpus;
  while (corpus.size() < minimum) {
    Sentence s;
    const std::string& actor = choose(rng, actors);
    std::string verb = choose(rng, verbs);
    const std::string& det = choose(rng, dets);
    const std::string& noun = choose(rng, nouns);

    std::vector<std::string> adjectives;
    switch (pick(rng, 5)) {
      case 1: adjectives = {choose(rng, colors)}; break;
      case 2: adjectives = {choose(rng, shapes)}; break;
      case 3: adjectives = {choose(rng, colors), choose(rng, shapes)}; break;
      case 4: adjectives = {choose(rng, shapes), choose(rng, colors)}; break;
      default: break;
    }

    std::string text;
    if (!actor.empty()) text += actor + ", ";
    text += choose(rng, openers);
    std::string shown_verb = verb;
    if (coin(rng, 0.2)) shown_verb[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(shown_verb[0])));
    text += shown_verb + " " + det;
    for (const auto& a : adjectives) text += a + " ";
    text += noun + choose(rng, endings);
    if (!seen.insert(text).second) continue;

    s.text = text;
    s.expected.raw = text;
    s.expected.actor = actor.empty() ? std::string(semem::kDefaultActor) : lower(actor);
    s.expected.action = verb;
    s.expected.patient.type_word = lower(noun);
    std::string d = lower(det);
    if (d == "the ") s.expected.patient.determiner = semem::Determiner::kDefinite;
    if (d == "a " || d == "an ") s.expected.patient.determiner = semem::Determiner::kIndefinite;
    for (const auto& a : adjectives) {
      std::string slot = lexicon.colors.contains(a) ? "color" : "shape";
      s.expected.patient.modifiers.push_back({slot, semem::Value{a}});
    }
    corpus.push_back(std::move(s));
  }
  return corpus;
}

}  // namespace gen
