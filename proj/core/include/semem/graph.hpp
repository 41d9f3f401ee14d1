#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "semem/types.hpp"

namespace semem {

enum class Subgraph { kPrior, kScene };
enum class NodeKind { kTypeConcept, kObjectInstance, kPropertySlot, kActionImpl };
enum class EdgeKind { kHas, kIs, kInstanceOf, kAction };

std::string_view to_string(Subgraph subgraph) noexcept;
std::string_view to_string(NodeKind kind) noexcept;
std::string_view to_string(EdgeKind kind) noexcept;

/// A labeled graph element. Static information lives in `value`; ActionImpl
/// nodes instead reference an executable skill by name.
struct Node {
  NodeId id;
  std::string label;
  Subgraph subgraph = Subgraph::kPrior;
  NodeKind kind = NodeKind::kTypeConcept;
  std::optional<Value> value;
  std::optional<std::string> skill_ref;

  bool operator==(const Node&) const = default;
};

/// Directed edge. Action edges run from an actor to an ActionImpl node and
/// additionally record the object type the implementation serves.
struct Edge {
  EdgeId id;
  NodeId source;
  NodeId dest;
  EdgeKind kind = EdgeKind::kHas;
  std::string action_label;
  std::optional<NodeId> object;

  bool operator==(const Edge&) const = default;
};

struct ActionMatch {
  EdgeId edge;
  NodeId impl;
  std::string skill_ref;
  std::string actor_type;
  std::string object_type;
};

/// Same action label registered for a different object type.
struct NearMiss {
  std::string action_label;
  std::string object_type;
  std::string skill_ref;

  bool operator==(const NearMiss&) const = default;
};

struct ActionLookup {
  std::optional<ActionMatch> exact;
  std::vector<NearMiss> near_misses;
};

/// The dual knowledge graph: a prior subgraph of type concepts, property slots
/// and action implementations, and a scene subgraph of object instances linked
/// back to their types by `instance-of` edges.
///
/// Type labels are unique case-insensitively and every type-label argument is
/// matched case-insensitively. Instances are named `<lowercased type>_<n>`
/// from a per-type counter that never decreases. The class is a plain value:
/// copies are independent snapshots.
class KnowledgeGraph {
 public:
  struct Parts {
    std::vector<Node> nodes;
    std::vector<Edge> edges;
    std::map<std::string, std::uint64_t> counters;
    std::uint64_t next_node_id = 1;
    std::uint64_t next_edge_id = 1;
  };

  KnowledgeGraph() = default;

  /// Rebuilds a graph from raw parts; throws IntegrityViolation if any
  /// invariant is broken.
  static KnowledgeGraph from_parts(Parts parts);
  Parts parts() const;

  // --- mutation ---------------------------------------------------------

  NodeId add_type(std::string_view label, std::optional<std::string_view> parent_label,
                  const std::vector<std::string>& property_slots);

  /// Adds a property slot under a prior type or another prior slot.
  NodeId add_slot(NodeId owner, std::string_view label, std::optional<Value> default_value = {});

  /// Adds an `is` edge child -> parent. Throws HierarchyCycle if parent is
  /// already a subtype of child.
  EdgeId link_subtype(std::string_view child_label, std::string_view parent_label);

  EdgeId define_action(std::string_view actor_type, std::string_view action_label,
                       std::string_view object_type, std::string_view skill_ref);

  NodeId instantiate(std::string_view type_label, const std::vector<PropertyValue>& values,
                     const Pose& pose);

  /// Removes the instance and its copied property nodes. Returns the number
  /// of nodes removed.
  std::size_t remove_instance(NodeId id);

  /// Removes every instance; counters are kept.
  std::size_t clear_scene();

  /// Writes a value into a copied slot of a live instance (dotted path).
  void set_slot_value(NodeId instance, std::string_view slot_path, Value value);
  void set_instance_pose(NodeId instance, const Pose& pose);

  // --- queries ----------------------------------------------------------

  std::vector<std::string> type_closure(std::string_view label) const;

  std::vector<NodeId> query_instances(std::string_view type_label,
                                      const std::vector<PropertyValue>& filters) const;

  ActionLookup lookup_action(std::string_view actor_type, std::string_view action_label,
                             std::string_view object_type) const;

  // --- read access ------------------------------------------------------

  const std::map<NodeId, Node>& nodes() const noexcept { return nodes_; }
  const std::map<EdgeId, Edge>& edges() const noexcept { return edges_; }
  const std::map<std::string, std::uint64_t>& instance_counters() const noexcept { return counters_; }
  const std::set<NodeId>& instances() const noexcept { return instances_; }

  const Node* find_node(NodeId id) const;
  const Node& node(NodeId id) const;
  bool is_live_instance(NodeId id) const;

  std::optional<NodeId> find_type(std::string_view label) const;
  std::optional<NodeId> find_scene_node(std::string_view label) const;

  std::vector<EdgeId> out_edges(NodeId id) const;
  std::vector<EdgeId> in_edges(NodeId id) const;

  /// Type node an instance is classified under.
  NodeId type_of(NodeId instance) const;
  std::uint64_t instance_number(NodeId instance) const;

  /// Property slots reachable from `owner` through `has` edges, keyed by
  /// dotted path relative to the owner ("color", "position", "grip.width").
  std::map<std::string, NodeId> slots_of(NodeId owner) const;
  std::optional<Value> slot_value(NodeId instance, std::string_view slot_path) const;

  /// Every broken invariant, one message each; empty when the graph is sound.
  std::vector<std::string> validate() const;

 private:
  NodeId add_node(std::string label, Subgraph subgraph, NodeKind kind,
                  std::optional<Value> value = {}, std::optional<std::string> skill_ref = {});
  EdgeId add_edge(NodeId source, NodeId dest, EdgeKind kind, std::string action_label = {},
                  std::optional<NodeId> object = {});
  void erase_edge(EdgeId id);
  void erase_node(NodeId id);
  void rebuild_indexes();

  NodeId require_type(std::string_view label) const;
  std::map<NodeId, std::size_t> ancestors_by_distance(NodeId type) const;
  bool is_ancestor(NodeId candidate, NodeId of) const;

  std::map<NodeId, Node> nodes_;
  std::map<EdgeId, Edge> edges_;
  std::unordered_map<NodeId, std::vector<EdgeId>> out_;
  std::unordered_map<NodeId, std::vector<EdgeId>> in_;
  std::map<std::string, NodeId> types_by_key_;
  std::map<std::string, NodeId> scene_labels_;
  std::set<NodeId> instances_;
  std::map<std::string, std::uint64_t> counters_;
  std::uint64_t next_node_id_ = 1;
  std::uint64_t next_edge_id_ = 1;
};

}  // namespace semem
