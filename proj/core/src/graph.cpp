#include "semem/graph.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <functional>
#include <tuple>

#include "semem/error.hpp"

namespace semem {

std::string_view to_string(Subgraph subgraph) noexcept {
  return subgraph == Subgraph::kPrior ? "prior" : "scene";
}

std::string_view to_string(NodeKind kind) noexcept {
  switch (kind) {
    case NodeKind::kTypeConcept: return "type";
    case NodeKind::kObjectInstance: return "instance";
    case NodeKind::kPropertySlot: return "slot";
    case NodeKind::kActionImpl: return "action_impl";
  }
  return "?";
}

std::string_view to_string(EdgeKind kind) noexcept {
  switch (kind) {
    case EdgeKind::kHas: return "has";
    case EdgeKind::kIs: return "is";
    case EdgeKind::kInstanceOf: return "instance_of";
    case EdgeKind::kAction: return "action";
  }
  return "?";
}

namespace {

std::string type_key(std::string_view label) { return to_lower(trim(label)); }

void check_label(std::string_view label, std::string_view what) {
  if (label.empty() || trim(label) != label) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(what) + " must be non-empty without surrounding whitespace");
  }
}

std::string instance_prefix(std::string_view type_label) { return to_lower(type_label) + "_"; }

std::optional<std::uint64_t> parse_instance_number(std::string_view label, std::string_view prefix) {
  if (label.size() <= prefix.size() || label.substr(0, prefix.size()) != prefix) return std::nullopt;
  auto digits = label.substr(prefix.size());
  std::uint64_t n = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
  if (ec != std::errc{} || ptr != digits.data() + digits.size() || n == 0) return std::nullopt;
  return n;
}

}  // namespace

// ---------------------------------------------------------------------------
// Low-level storage

NodeId KnowledgeGraph::add_node(std::string label, Subgraph subgraph, NodeKind kind,
                                std::optional<Value> value, std::optional<std::string> skill_ref) {
  NodeId id{next_node_id_++};
  Node node{id, std::move(label), subgraph, kind, std::move(value), std::move(skill_ref)};
  if (kind == NodeKind::kTypeConcept) types_by_key_[type_key(node.label)] = id;
  if (subgraph == Subgraph::kScene) scene_labels_[node.label] = id;
  if (kind == NodeKind::kObjectInstance) instances_.insert(id);
  nodes_.emplace(id, std::move(node));
  return id;
}

EdgeId KnowledgeGraph::add_edge(NodeId source, NodeId dest, EdgeKind kind, std::string action_label,
                                std::optional<NodeId> object) {
  EdgeId id{next_edge_id_++};
  edges_.emplace(id, Edge{id, source, dest, kind, std::move(action_label), object});
  out_[source].push_back(id);
  in_[dest].push_back(id);
  return id;
}

void KnowledgeGraph::erase_edge(EdgeId id) {
  auto it = edges_.find(id);
  if (it == edges_.end()) return;
  auto drop = [id](std::vector<EdgeId>& list) { std::erase(list, id); };
  drop(out_[it->second.source]);
  drop(in_[it->second.dest]);
  edges_.erase(it);
}

void KnowledgeGraph::erase_node(NodeId id) {
  auto it = nodes_.find(id);
  if (it == nodes_.end()) return;
  std::vector<EdgeId> incident = out_edges(id);
  auto incoming = in_edges(id);
  incident.insert(incident.end(), incoming.begin(), incoming.end());
  for (EdgeId e : incident) erase_edge(e);
  if (it->second.subgraph == Subgraph::kScene) scene_labels_.erase(it->second.label);
  if (it->second.kind == NodeKind::kTypeConcept) types_by_key_.erase(type_key(it->second.label));
  instances_.erase(id);
  out_.erase(id);
  in_.erase(id);
  nodes_.erase(it);
}

void KnowledgeGraph::rebuild_indexes() {
  out_.clear();
  in_.clear();
  types_by_key_.clear();
  scene_labels_.clear();
  instances_.clear();
  for (const auto& [id, node] : nodes_) {
    if (node.kind == NodeKind::kTypeConcept) types_by_key_[type_key(node.label)] = id;
    if (node.subgraph == Subgraph::kScene) scene_labels_[node.label] = id;
    if (node.kind == NodeKind::kObjectInstance) instances_.insert(id);
  }
  for (const auto& [id, edge] : edges_) {
    out_[edge.source].push_back(id);
    in_[edge.dest].push_back(id);
  }
}

// ---------------------------------------------------------------------------
// Read access

const Node* KnowledgeGraph::find_node(NodeId id) const {
  auto it = nodes_.find(id);
  return it == nodes_.end() ? nullptr : &it->second;
}

const Node& KnowledgeGraph::node(NodeId id) const {
  const Node* found = find_node(id);
  if (found == nullptr) {
    throw Error(ErrorCode::kInvalidArgument, "no node with id " + std::to_string(id.value));
  }
  return *found;
}

bool KnowledgeGraph::is_live_instance(NodeId id) const { return instances_.contains(id); }

std::optional<NodeId> KnowledgeGraph::find_type(std::string_view label) const {
  auto it = types_by_key_.find(type_key(label));
  if (it == types_by_key_.end()) return std::nullopt;
  return it->second;
}

std::optional<NodeId> KnowledgeGraph::find_scene_node(std::string_view label) const {
  auto it = scene_labels_.find(std::string(label));
  if (it == scene_labels_.end()) return std::nullopt;
  return it->second;
}

std::vector<EdgeId> KnowledgeGraph::out_edges(NodeId id) const {
  auto it = out_.find(id);
  return it == out_.end() ? std::vector<EdgeId>{} : it->second;
}

std::vector<EdgeId> KnowledgeGraph::in_edges(NodeId id) const {
  auto it = in_.find(id);
  return it == in_.end() ? std::vector<EdgeId>{} : it->second;
}

NodeId KnowledgeGraph::require_type(std::string_view label) const {
  auto found = find_type(label);
  if (!found) throw Error(ErrorCode::kUnknownType, "unknown type '" + std::string(label) + "'");
  return *found;
}

NodeId KnowledgeGraph::type_of(NodeId instance) const {
  if (!is_live_instance(instance)) {
    throw Error(ErrorCode::kNotAnInstance, "node " + std::to_string(instance.value) + " is not an instance");
  }
  for (EdgeId e : out_edges(instance)) {
    const Edge& edge = edges_.at(e);
    if (edge.kind == EdgeKind::kInstanceOf) return edge.dest;
  }
  throw Error(ErrorCode::kIntegrityViolation, "instance without instance-of edge");
}

std::uint64_t KnowledgeGraph::instance_number(NodeId instance) const {
  const Node& type = node(type_of(instance));
  return parse_instance_number(node(instance).label, instance_prefix(type.label)).value_or(0);
}

std::map<std::string, NodeId> KnowledgeGraph::slots_of(NodeId owner) const {
  std::map<std::string, NodeId> out;
  std::function<void(NodeId, const std::string&)> walk = [&](NodeId from, const std::string& prefix) {
    for (EdgeId e : out_edges(from)) {
      const Edge& edge = edges_.at(e);
      if (edge.kind != EdgeKind::kHas) continue;
      const Node& slot = nodes_.at(edge.dest);
      // Scene copies carry the owner prefix in their label; the path uses the bare slot name.
      std::string name = slot.label.substr(slot.label.rfind('.') == std::string::npos
                                               ? 0
                                               : slot.label.rfind('.') + 1);
      std::string path = prefix.empty() ? name : prefix + "." + name;
      if (out.emplace(path, edge.dest).second) walk(edge.dest, path);
    }
  };
  walk(owner, "");
  return out;
}

std::optional<Value> KnowledgeGraph::slot_value(NodeId instance, std::string_view slot_path) const {
  auto slots = slots_of(instance);
  auto it = slots.find(std::string(slot_path));
  if (it == slots.end()) return std::nullopt;
  return nodes_.at(it->second).value;
}

// ---------------------------------------------------------------------------
// Prior knowledge

NodeId KnowledgeGraph::add_type(std::string_view label, std::optional<std::string_view> parent_label,
                                const std::vector<std::string>& property_slots) {
  check_label(label, "type label");
  if (find_type(label)) {
    throw Error(ErrorCode::kDuplicateType, "type '" + std::string(label) + "' already exists");
  }
  std::optional<NodeId> parent;
  if (parent_label) {
    parent = find_type(*parent_label);
    if (!parent) {
      throw Error(ErrorCode::kUnknownParent, "unknown parent type '" + std::string(*parent_label) + "'");
    }
  }
  std::set<std::string> seen;
  for (const auto& slot : property_slots) {
    check_label(slot, "slot label");
    if (slot.find('.') != std::string::npos) {
      throw Error(ErrorCode::kInvalidArgument, "slot label '" + slot + "' must not contain '.'");
    }
    if (!seen.insert(slot).second) {
      throw Error(ErrorCode::kInvalidArgument, "duplicate slot '" + slot + "'");
    }
  }

  NodeId type = add_node(std::string(label), Subgraph::kPrior, NodeKind::kTypeConcept);
  if (parent) add_edge(type, *parent, EdgeKind::kIs);
  for (const auto& slot : property_slots) {
    NodeId slot_id = add_node(slot, Subgraph::kPrior, NodeKind::kPropertySlot);
    add_edge(type, slot_id, EdgeKind::kHas);
  }
  return type;
}

NodeId KnowledgeGraph::add_slot(NodeId owner, std::string_view label, std::optional<Value> default_value) {
  const Node* owner_node = find_node(owner);
  if (owner_node == nullptr || owner_node->subgraph != Subgraph::kPrior ||
      (owner_node->kind != NodeKind::kTypeConcept && owner_node->kind != NodeKind::kPropertySlot)) {
    throw Error(ErrorCode::kInvalidArgument, "slots attach to prior types or prior slots only");
  }
  check_label(label, "slot label");
  if (label.find('.') != std::string_view::npos) {
    throw Error(ErrorCode::kInvalidArgument, "slot label must not contain '.'");
  }
  for (EdgeId e : out_edges(owner)) {
    const Edge& edge = edges_.at(e);
    if (edge.kind == EdgeKind::kHas && nodes_.at(edge.dest).label == label) {
      throw Error(ErrorCode::kInvalidArgument, "duplicate slot '" + std::string(label) + "'");
    }
  }
  NodeId slot = add_node(std::string(label), Subgraph::kPrior, NodeKind::kPropertySlot, std::move(default_value));
  add_edge(owner, slot, EdgeKind::kHas);
  return slot;
}

std::map<NodeId, std::size_t> KnowledgeGraph::ancestors_by_distance(NodeId type) const {
  std::map<NodeId, std::size_t> distance{{type, 0}};
  std::deque<NodeId> queue{type};
  while (!queue.empty()) {
    NodeId current = queue.front();
    queue.pop_front();
    for (EdgeId e : out_edges(current)) {
      const Edge& edge = edges_.at(e);
      if (edge.kind != EdgeKind::kIs) continue;
      if (distance.emplace(edge.dest, distance[current] + 1).second) queue.push_back(edge.dest);
    }
  }
  return distance;
}

bool KnowledgeGraph::is_ancestor(NodeId candidate, NodeId of) const {
  return ancestors_by_distance(of).contains(candidate);
}

EdgeId KnowledgeGraph::link_subtype(std::string_view child_label, std::string_view parent_label) {
  NodeId child = require_type(child_label);
  NodeId parent = require_type(parent_label);
  if (child == parent || is_ancestor(child, parent)) {
    throw Error(ErrorCode::kHierarchyCycle, "'" + std::string(child_label) + "' is already a supertype of '" +
                                                std::string(parent_label) + "'");
  }
  for (EdgeId e : out_edges(child)) {
    const Edge& edge = edges_.at(e);
    if (edge.kind == EdgeKind::kIs && edge.dest == parent) return e;
  }
  return add_edge(child, parent, EdgeKind::kIs);
}

EdgeId KnowledgeGraph::define_action(std::string_view actor_type, std::string_view action_label,
                                     std::string_view object_type, std::string_view skill_ref) {
  NodeId actor = require_type(actor_type);
  NodeId object = require_type(object_type);
  check_label(action_label, "action label");
  check_label(skill_ref, "skill reference");

  std::optional<NodeId> impl;
  for (const auto& [id, node] : nodes_) {
    if (node.kind == NodeKind::kActionImpl && node.skill_ref == skill_ref) {
      impl = id;
      break;
    }
  }
  if (impl) {
    for (EdgeId e : out_edges(actor)) {
      const Edge& edge = edges_.at(e);
      if (edge.kind == EdgeKind::kAction && edge.dest == *impl && edge.object == object &&
          iequals(edge.action_label, action_label)) {
        return e;
      }
    }
  } else {
    impl = add_node(std::string(skill_ref), Subgraph::kPrior, NodeKind::kActionImpl, std::nullopt,
                    std::string(skill_ref));
  }
  return add_edge(actor, *impl, EdgeKind::kAction, to_lower(action_label), object);
}

// ---------------------------------------------------------------------------
// Scene

NodeId KnowledgeGraph::instantiate(std::string_view type_label, const std::vector<PropertyValue>& values,
                                   const Pose& pose) {
  NodeId type = require_type(type_label);
  if (!pose.is_valid()) {
    throw Error(ErrorCode::kInvalidArgument, "pose must be finite with angles in [-180, 180)");
  }
  auto prior_slots = slots_of(type);
  for (const auto& value : values) {
    if (!prior_slots.contains(value.slot)) {
      throw Error(ErrorCode::kUnknownSlot, "type '" + nodes_.at(type).label + "' has no slot '" + value.slot + "'");
    }
  }

  const std::string type_name = nodes_.at(type).label;
  std::uint64_t number = ++counters_[type_name];
  std::string label = instance_prefix(type_name) + std::to_string(number);
  NodeId instance = add_node(label, Subgraph::kScene, NodeKind::kObjectInstance, Value{pose});
  add_edge(instance, type, EdgeKind::kInstanceOf);

  // Mirror the has-structure of the type; prior defaults carry over.
  std::map<NodeId, NodeId> copy_of{{type, instance}};
  for (const auto& [path, prior_slot] : prior_slots) {
    const Node& source = nodes_.at(prior_slot);
    NodeId owner_copy = instance;
    for (EdgeId e : in_edges(prior_slot)) {
      const Edge& edge = edges_.at(e);
      if (edge.kind == EdgeKind::kHas && copy_of.contains(edge.source)) owner_copy = copy_of.at(edge.source);
    }
    NodeId copy = add_node(label + "." + path, Subgraph::kScene, NodeKind::kPropertySlot, source.value);
    add_edge(owner_copy, copy, EdgeKind::kHas);
    copy_of[prior_slot] = copy;
  }

  auto copied = slots_of(instance);
  if (copied.contains("position")) nodes_.at(copied.at("position")).value = Value{pose};
  for (const auto& value : values) nodes_.at(copied.at(value.slot)).value = value.value;
  return instance;
}

std::size_t KnowledgeGraph::remove_instance(NodeId id) {
  if (!is_live_instance(id)) {
    throw Error(ErrorCode::kNotAnInstance, "node " + std::to_string(id.value) + " is not a live instance");
  }
  std::vector<NodeId> doomed{id};
  for (const auto& [path, slot] : slots_of(id)) doomed.push_back(slot);
  for (NodeId n : doomed) erase_node(n);
  return doomed.size();
}

std::size_t KnowledgeGraph::clear_scene() {
  std::size_t removed = 0;
  auto live = std::vector<NodeId>(instances_.begin(), instances_.end());
  for (NodeId id : live) removed += remove_instance(id);
  return removed;
}

void KnowledgeGraph::set_slot_value(NodeId instance, std::string_view slot_path, Value value) {
  if (!is_live_instance(instance)) {
    throw Error(ErrorCode::kNotAnInstance, "node " + std::to_string(instance.value) + " is not a live instance");
  }
  auto slots = slots_of(instance);
  auto it = slots.find(std::string(slot_path));
  if (it == slots.end()) {
    throw Error(ErrorCode::kUnknownSlot, "instance has no slot '" + std::string(slot_path) + "'");
  }
  nodes_.at(it->second).value = std::move(value);
}

void KnowledgeGraph::set_instance_pose(NodeId instance, const Pose& pose) {
  if (!is_live_instance(instance)) {
    throw Error(ErrorCode::kNotAnInstance, "node " + std::to_string(instance.value) + " is not a live instance");
  }
  if (!pose.is_valid()) {
    throw Error(ErrorCode::kInvalidArgument, "pose must be finite with angles in [-180, 180)");
  }
  nodes_.at(instance).value = Value{pose};
  auto slots = slots_of(instance);
  if (auto it = slots.find("position"); it != slots.end()) nodes_.at(it->second).value = Value{pose};
}

// ---------------------------------------------------------------------------
// Queries

std::vector<std::string> KnowledgeGraph::type_closure(std::string_view label) const {
  NodeId root = require_type(label);
  std::set<NodeId> seen{root};
  std::deque<NodeId> queue{root};
  while (!queue.empty()) {
    NodeId current = queue.front();
    queue.pop_front();
    for (EdgeId e : in_edges(current)) {
      const Edge& edge = edges_.at(e);
      if (edge.kind == EdgeKind::kIs && seen.insert(edge.source).second) queue.push_back(edge.source);
    }
  }
  std::vector<std::string> labels;
  for (NodeId id : seen) labels.push_back(nodes_.at(id).label);
  std::sort(labels.begin(), labels.end());
  return labels;
}

std::vector<NodeId> KnowledgeGraph::query_instances(std::string_view type_label,
                                                    const std::vector<PropertyValue>& filters) const {
  std::set<NodeId> types;
  for (const auto& label : type_closure(type_label)) types.insert(*find_type(label));

  std::vector<std::tuple<std::uint64_t, std::string, NodeId>> hits;
  for (NodeId id : instances_) {
    if (!types.contains(type_of(id))) continue;
    bool ok = std::all_of(filters.begin(), filters.end(), [&](const PropertyValue& filter) {
      auto actual = slot_value(id, filter.slot);
      return actual.has_value() && value_matches(filter.value, *actual);
    });
    if (ok) hits.emplace_back(instance_number(id), nodes_.at(id).label, id);
  }
  std::sort(hits.begin(), hits.end());
  std::vector<NodeId> out;
  out.reserve(hits.size());
  for (const auto& hit : hits) out.push_back(std::get<2>(hit));
  return out;
}

ActionLookup KnowledgeGraph::lookup_action(std::string_view actor_type, std::string_view action_label,
                                           std::string_view object_type) const {
  NodeId actor = require_type(actor_type);
  auto actor_chain = ancestors_by_distance(actor);
  std::map<NodeId, std::size_t> object_chain;
  if (auto object = find_type(object_type)) object_chain = ancestors_by_distance(*object);

  ActionLookup result;
  std::optional<std::tuple<std::size_t, std::size_t, std::string>> best_key;
  std::map<std::string, NearMiss> misses;

  for (const auto& [ancestor, actor_distance] : actor_chain) {
    for (EdgeId e : out_edges(ancestor)) {
      const Edge& edge = edges_.at(e);
      if (edge.kind != EdgeKind::kAction || !iequals(edge.action_label, action_label)) continue;
      const Node& impl = nodes_.at(edge.dest);
      const std::string& skill = *impl.skill_ref;
      if (auto hit = object_chain.find(*edge.object); hit != object_chain.end()) {
        auto key = std::make_tuple(hit->second, actor_distance, skill);
        if (!best_key || key < *best_key) {
          best_key = key;
          result.exact = ActionMatch{e, edge.dest, skill, nodes_.at(ancestor).label, nodes_.at(*edge.object).label};
        }
      } else {
        const std::string& object_label = nodes_.at(*edge.object).label;
        auto [it, inserted] = misses.emplace(object_label, NearMiss{edge.action_label, object_label, skill});
        if (!inserted && skill < it->second.skill_ref) it->second.skill_ref = skill;
      }
    }
  }
  if (!result.exact) {
    for (auto& [label, miss] : misses) result.near_misses.push_back(std::move(miss));
  }
  return result;
}

// ---------------------------------------------------------------------------
// Validation and reconstruction

std::vector<std::string> KnowledgeGraph::validate() const {
  std::vector<std::string> problems;
  auto complain = [&problems](std::string message) { problems.push_back(std::move(message)); };

  std::map<std::string, int> type_keys;
  std::map<std::string, int> scene_labels;
  for (const auto& [id, node] : nodes_) {
    const std::string where = "node " + std::to_string(id.value) + " '" + node.label + "'";
    if (id.value == 0 || id.value >= next_node_id_) complain(where + ": id outside allocated range");
    if (node.label.empty()) complain(where + ": empty label");
    switch (node.kind) {
      case NodeKind::kTypeConcept:
        if (node.subgraph != Subgraph::kPrior) complain(where + ": type concept outside prior subgraph");
        ++type_keys[type_key(node.label)];
        break;
      case NodeKind::kObjectInstance:
        if (node.subgraph != Subgraph::kScene) complain(where + ": instance outside scene subgraph");
        break;
      case NodeKind::kActionImpl:
        if (!node.skill_ref || node.skill_ref->empty()) complain(where + ": action implementation without skill");
        break;
      case NodeKind::kPropertySlot:
        break;
    }
    if (node.kind != NodeKind::kActionImpl && node.skill_ref) complain(where + ": skill reference on non-action node");
    if (node.value && node.skill_ref) complain(where + ": both value and skill reference set");
    if (node.subgraph == Subgraph::kScene) ++scene_labels[node.label];
  }
  for (const auto& [key, count] : type_keys) {
    if (count > 1) complain("type label '" + key + "' is not unique");
  }
  for (const auto& [label, count] : scene_labels) {
    if (count > 1) complain("scene label '" + label + "' is not unique");
  }

  std::map<NodeId, int> instance_of_count;
  std::map<NodeId, int> has_in_count;
  for (const auto& [id, edge] : edges_) {
    const std::string where = "edge " + std::to_string(id.value);
    if (id.value == 0 || id.value >= next_edge_id_) complain(where + ": id outside allocated range");
    const Node* source = find_node(edge.source);
    const Node* dest = find_node(edge.dest);
    if (source == nullptr || dest == nullptr) {
      complain(where + ": endpoint missing");
      continue;
    }
    bool spans = source->subgraph == Subgraph::kScene && dest->subgraph == Subgraph::kPrior;
    if ((edge.kind == EdgeKind::kInstanceOf) != spans) {
      complain(where + ": only instance-of edges may span scene -> prior");
    }
    if (edge.kind != EdgeKind::kInstanceOf && source->subgraph != dest->subgraph) {
      complain(where + ": endpoints in different subgraphs");
    }
    if (edge.kind != EdgeKind::kAction && (!edge.action_label.empty() || edge.object)) {
      complain(where + ": action fields on non-action edge");
    }
    switch (edge.kind) {
      case EdgeKind::kHas:
        if (dest->kind != NodeKind::kPropertySlot) complain(where + ": has edge must target a property slot");
        if (source->kind == NodeKind::kActionImpl) complain(where + ": action implementation cannot own slots");
        ++has_in_count[edge.dest];
        break;
      case EdgeKind::kIs:
        if (source->kind != NodeKind::kTypeConcept || dest->kind != NodeKind::kTypeConcept) {
          complain(where + ": is edge must join two type concepts");
        }
        break;
      case EdgeKind::kInstanceOf:
        if (source->kind != NodeKind::kObjectInstance || dest->kind != NodeKind::kTypeConcept) {
          complain(where + ": instance-of must join an instance to a type");
        }
        ++instance_of_count[edge.source];
        break;
      case EdgeKind::kAction: {
        if (source->kind != NodeKind::kTypeConcept && source->kind != NodeKind::kObjectInstance) {
          complain(where + ": action source must be an actor type or instance");
        }
        if (dest->kind != NodeKind::kActionImpl) complain(where + ": action must target an action implementation");
        if (edge.action_label.empty()) complain(where + ": empty action label");
        const Node* object = edge.object ? find_node(*edge.object) : nullptr;
        if (object == nullptr || object->kind != NodeKind::kTypeConcept) {
          complain(where + ": action object must be a type concept");
        }
        break;
      }
    }
  }

  for (const auto& [id, node] : nodes_) {
    if (node.kind == NodeKind::kObjectInstance && instance_of_count[id] != 1) {
      complain("instance '" + node.label + "' must have exactly one instance-of edge");
    }
    if (node.kind == NodeKind::kPropertySlot && has_in_count[id] != 1) {
      complain("slot '" + node.label + "' must have exactly one owner");
    }
  }

  // Instance naming against counters; only meaningful once the edges are sound.
  if (problems.empty()) {
    for (const auto& [id, node] : nodes_) {
      if (node.kind != NodeKind::kObjectInstance) continue;
      const std::string& type_label = nodes_.at(type_of(id)).label;
      auto number = parse_instance_number(node.label, instance_prefix(type_label));
      auto counter = counters_.find(type_label);
      if (!number || counter == counters_.end() || *number > counter->second) {
        complain("instance '" + node.label + "' does not follow counter naming for '" + type_label + "'");
      }
    }
  }

  // Is-acyclicity via Kahn's algorithm.
  std::map<NodeId, int> indegree;
  std::map<NodeId, std::vector<NodeId>> children;
  for (const auto& [id, node] : nodes_) {
    if (node.kind == NodeKind::kTypeConcept) indegree[id] = 0;
  }
  for (const auto& [id, edge] : edges_) {
    if (edge.kind != EdgeKind::kIs || !indegree.contains(edge.source) || !indegree.contains(edge.dest)) continue;
    children[edge.source].push_back(edge.dest);
    ++indegree[edge.dest];
  }
  std::deque<NodeId> ready;
  for (const auto& [id, degree] : indegree) {
    if (degree == 0) ready.push_back(id);
  }
  std::size_t ordered = 0;
  while (!ready.empty()) {
    NodeId current = ready.front();
    ready.pop_front();
    ++ordered;
    for (NodeId next : children[current]) {
      if (--indegree[next] == 0) ready.push_back(next);
    }
  }
  if (ordered != indegree.size()) complain("is-hierarchy contains a cycle");
  return problems;
}

KnowledgeGraph::Parts KnowledgeGraph::parts() const {
  Parts out;
  for (const auto& [id, node] : nodes_) out.nodes.push_back(node);
  for (const auto& [id, edge] : edges_) out.edges.push_back(edge);
  out.counters = counters_;
  out.next_node_id = next_node_id_;
  out.next_edge_id = next_edge_id_;
  return out;
}

KnowledgeGraph KnowledgeGraph::from_parts(Parts parts) {
  KnowledgeGraph graph;
  for (auto& node : parts.nodes) {
    NodeId id = node.id;
    if (!graph.nodes_.emplace(id, std::move(node)).second) {
      throw Error(ErrorCode::kIntegrityViolation, "duplicate node id " + std::to_string(id.value));
    }
  }
  for (auto& edge : parts.edges) {
    EdgeId id = edge.id;
    if (!graph.edges_.emplace(id, std::move(edge)).second) {
      throw Error(ErrorCode::kIntegrityViolation, "duplicate edge id " + std::to_string(id.value));
    }
  }
  graph.counters_ = std::move(parts.counters);
  graph.next_node_id_ = parts.next_node_id;
  graph.next_edge_id_ = parts.next_edge_id;
  graph.rebuild_indexes();
  auto problems = graph.validate();
  if (!problems.empty()) throw Error(ErrorCode::kIntegrityViolation, problems.front());
  return graph;
}

}  // namespace semem
