#include <gtest/gtest.h>

#include "oracles.hpp"
#include "semem/error.hpp"
#include "semem/graph.hpp"

using namespace semem;

namespace {

Pose at(double x, double y = 0, double z = 0) { return Pose{{x, y, z}, {0, 0, 0}}; }

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::kInvalidArgument;
}

std::vector<std::string> labels(const KnowledgeGraph& g, const std::vector<NodeId>& ids) {
  std::vector<std::string> out;
  for (NodeId id : ids) out.push_back(g.node(id).label);
  return out;
}

class GraphTest : public ::testing::Test {
 protected:
  void SetUp() override {
    g.add_type("YuMi", std::nullopt, {"position"});
    g.add_type("Nut", std::nullopt, {"color", "shape", "position"});
    g.add_type("Screw", std::nullopt, {"color", "shape", "position"});
    g.add_type("Box", std::nullopt, {"color", "shape", "size", "position"});
    g.add_type("Clip", std::nullopt, {"color", "shape", "position"});
    g.define_action("YuMi", "pick", "Nut", "pick_nut_skill");
    g.define_action("YuMi", "pick", "Screw", "pick_screw_skill");
    g.define_action("YuMi", "pick", "Box", "pick_box_skill");
  }
  void TearDown() override {
    auto problems = oracle::check_graph(g);
    EXPECT_TRUE(problems.empty()) << problems.front();
    EXPECT_TRUE(g.validate().empty());
  }
  KnowledgeGraph g;
};

}  // namespace

TEST_F(GraphTest, AddTypeCreatesConceptWithHasLinkedSlots) {
  NodeId nut = *g.find_type("Nut");
  EXPECT_EQ(g.node(nut).kind, NodeKind::kTypeConcept);
  EXPECT_EQ(g.node(nut).subgraph, Subgraph::kPrior);
  EXPECT_EQ(oracle::prior_paths(g, nut), (std::set<std::string>{"color", "shape", "position"}));
  EXPECT_EQ(g.slots_of(nut).size(), 3u);
}

TEST_F(GraphTest, BareRootConceptHasNoSlots) {
  NodeId thing = g.add_type("Thing", std::nullopt, {});
  EXPECT_TRUE(g.slots_of(thing).empty());
}

TEST_F(GraphTest, TypeLabelsAreUniqueIgnoringCase) {
  EXPECT_EQ(code_of([&] { g.add_type("Nut", std::nullopt, {}); }), ErrorCode::kDuplicateType);
  EXPECT_EQ(code_of([&] { g.add_type("nUT", std::nullopt, {}); }), ErrorCode::kDuplicateType);
  EXPECT_EQ(g.find_type("nut"), g.find_type("Nut"));
}

TEST_F(GraphTest, AddTypeRejectsBadArgumentsWithoutChangingState) {
  KnowledgeGraph before = g;
  EXPECT_EQ(code_of([&] { g.add_type("Gear", std::string_view("Ghost"), {}); }), ErrorCode::kUnknownParent);
  EXPECT_EQ(code_of([&] { g.add_type(" Gear", std::nullopt, {}); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([&] { g.add_type("Gear", std::nullopt, {"a.b"}); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([&] { g.add_type("Gear", std::nullopt, {"color", "color"}); }), ErrorCode::kInvalidArgument);
  EXPECT_TRUE(oracle::same_state(before, g));
}

TEST_F(GraphTest, SubtypeWithParentGetsIsEdge) {
  g.add_type("Fastener", std::nullopt, {});
  NodeId bolt = g.add_type("Bolt", std::string_view("fastener"), {"color"});
  bool found = false;
  for (EdgeId e : g.out_edges(bolt)) {
    const Edge& edge = g.edges().at(e);
    if (edge.kind == EdgeKind::kIs) found = g.node(edge.dest).label == "Fastener";
  }
  EXPECT_TRUE(found);
}

TEST_F(GraphTest, DefineActionKeepsOneEdgePerObjectType) {
  auto nut = g.lookup_action("YuMi", "pick", "Nut");
  auto screw = g.lookup_action("YuMi", "pick", "Screw");
  ASSERT_TRUE(nut.exact && screw.exact);
  EXPECT_NE(nut.exact->edge, screw.exact->edge);
  EXPECT_EQ(nut.exact->skill_ref, "pick_nut_skill");
  EXPECT_EQ(screw.exact->skill_ref, "pick_screw_skill");
  // Re-defining the same action is idempotent.
  EXPECT_EQ(g.define_action("YuMi", "Pick", "Nut", "pick_nut_skill"), nut.exact->edge);
  EXPECT_EQ(code_of([&] { g.define_action("YuMi", "pick", "Gear", "pick_gear_skill"); }), ErrorCode::kUnknownType);
}

TEST_F(GraphTest, InstancesAreNamedFromPerTypeCounters) {
  NodeId nut = g.instantiate("Nut", {{"color", Value{"green"}}}, at(200, 100));
  EXPECT_EQ(g.node(nut).label, "nut_1");
  EXPECT_EQ(g.slot_value(nut, "color"), Value{"green"});
  EXPECT_EQ(g.slot_value(nut, "position"), Value{at(200, 100)});
  EXPECT_EQ(g.node(g.instantiate("Clip", {}, at(0))).label, "clip_1");
  EXPECT_EQ(g.node(g.instantiate("Clip", {}, at(1))).label, "clip_2");
  EXPECT_EQ(g.instance_number(nut), 1u);
  EXPECT_EQ(g.node(g.type_of(nut)).label, "Nut");
}

TEST_F(GraphTest, InstantiateCopiesTheTypeSlotTreeExactly) {
  NodeId box = *g.find_type("Box");
  NodeId grip = g.add_slot(box, "grip");
  g.add_slot(grip, "width", Value{std::vector<double>{12}});
  NodeId b = g.instantiate("Box", {{"grip.width", Value{std::vector<double>{20}}}}, at(5));
  EXPECT_EQ(oracle::instance_paths(g, b), oracle::prior_paths(g, box));
  EXPECT_EQ(g.slot_value(b, "grip.width"), Value{std::vector<double>{20}});
  EXPECT_TRUE(g.find_scene_node("box_1.grip.width"));
  // The prior default stays untouched.
  EXPECT_EQ(g.node(g.slots_of(box).at("grip.width")).value, Value{std::vector<double>{12}});
}

TEST_F(GraphTest, SlotDefaultsCarryIntoCopies) {
  NodeId nut = *g.find_type("Nut");
  g.add_slot(nut, "material", Value{"steel"});
  NodeId n = g.instantiate("Nut", {}, at(0));
  EXPECT_EQ(g.slot_value(n, "material"), Value{"steel"});
}

TEST_F(GraphTest, SlotlessTypeInstantiatesWithoutPropertyNodes) {
  g.add_type("Thing", std::nullopt, {});
  NodeId t = g.instantiate("Thing", {}, at(0));
  EXPECT_TRUE(g.slots_of(t).empty());
}

TEST_F(GraphTest, InstantiateRejectsUnknownTypeSlotAndBadPose) {
  KnowledgeGraph before = g;
  EXPECT_EQ(code_of([&] { g.instantiate("Gear", {}, at(0)); }), ErrorCode::kUnknownType);
  EXPECT_EQ(code_of([&] { g.instantiate("Nut", {{"weight", Value{"1"}}}, at(0)); }), ErrorCode::kUnknownSlot);
  Pose bad = at(0);
  bad.orientation[2] = 200;
  EXPECT_EQ(code_of([&] { g.instantiate("Nut", {}, bad); }), ErrorCode::kInvalidArgument);
  EXPECT_TRUE(oracle::same_state(before, g));
}

TEST_F(GraphTest, RemovingAnInstanceTakesItsPropertySubtree) {
  NodeId screw = g.instantiate("Screw", {}, at(0));
  std::size_t expected = 1 + oracle::instance_paths(g, screw).size();
  EXPECT_EQ(expected, 4u);
  EXPECT_EQ(g.remove_instance(screw), expected);
  EXPECT_FALSE(g.find_node(screw));
  EXPECT_EQ(code_of([&] { g.remove_instance(screw); }), ErrorCode::kNotAnInstance);
  EXPECT_EQ(g.node(g.instantiate("Screw", {}, at(0))).label, "screw_2");
}

TEST_F(GraphTest, ClearSceneKeepsCountersAndPrior) {
  KnowledgeGraph prior_only = g;
  g.instantiate("Nut", {}, at(0));
  g.instantiate("Nut", {}, at(1));
  EXPECT_EQ(g.clear_scene(), 8u);
  EXPECT_TRUE(g.instances().empty());
  EXPECT_EQ(g.instance_counters().at("Nut"), 2u);
  EXPECT_EQ(g.nodes(), prior_only.nodes());
}

TEST_F(GraphTest, ClosureFollowsIsEdgesBackwards) {
  EXPECT_EQ(g.type_closure("Nut"), (std::vector<std::string>{"Nut"}));
  g.add_type("Fastener", std::nullopt, {});
  g.link_subtype("Nut", "Fastener");
  g.link_subtype("Screw", "Fastener");
  EXPECT_EQ(g.type_closure("fastener"), (std::vector<std::string>{"Fastener", "Nut", "Screw"}));
  EXPECT_EQ(code_of([&] { g.type_closure("Ghost"); }), ErrorCode::kUnknownType);
}

TEST_F(GraphTest, LinkSubtypeRefusesCycles) {
  g.add_type("Fastener", std::nullopt, {});
  g.add_type("Part", std::nullopt, {});
  g.link_subtype("Nut", "Fastener");
  g.link_subtype("Fastener", "Part");
  KnowledgeGraph before = g;
  EXPECT_EQ(code_of([&] { g.link_subtype("Part", "Nut"); }), ErrorCode::kHierarchyCycle);
  EXPECT_EQ(code_of([&] { g.link_subtype("Nut", "nut"); }), ErrorCode::kHierarchyCycle);
  EXPECT_TRUE(oracle::same_state(before, g));
  // Repeating an existing link is a no-op.
  std::size_t edges = g.edges().size();
  g.link_subtype("Nut", "Fastener");
  EXPECT_EQ(g.edges().size(), edges);
}

TEST_F(GraphTest, QueriesReturnInstancesInNumberOrder) {
  g.instantiate("Nut", {{"color", Value{"green"}}}, at(0));
  g.instantiate("Nut", {{"color", Value{"blue"}}}, at(1));
  g.instantiate("Clip", {{"shape", Value{"big"}}}, at(2));
  g.instantiate("Clip", {{"shape", Value{"small"}}}, at(3));
  EXPECT_EQ(labels(g, g.query_instances("Nut", {})), (std::vector<std::string>{"nut_1", "nut_2"}));
  EXPECT_EQ(labels(g, g.query_instances("Clip", {{"shape", Value{"big"}}})), (std::vector<std::string>{"clip_1"}));
  EXPECT_TRUE(g.query_instances("Nut", {{"color", Value{"purple"}}}).empty());
  EXPECT_TRUE(g.query_instances("Nut", {{"weight", Value{"1"}}}).empty());
  EXPECT_EQ(labels(g, g.query_instances("Nut", {{"position", Value{std::vector<double>{1, 0, 0}}}})),
            (std::vector<std::string>{"nut_2"}));
}

TEST_F(GraphTest, QueriesIncludeSubtypeInstances) {
  g.add_type("Fastener", std::nullopt, {"color"});
  g.link_subtype("Nut", "Fastener");
  g.instantiate("Nut", {}, at(0));
  EXPECT_EQ(labels(g, g.query_instances("Fastener", {})), (std::vector<std::string>{"nut_1"}));
}

TEST_F(GraphTest, LookupReportsNearMissesSortedByType) {
  g.add_type("new_obj", std::nullopt, {});
  auto lookup = g.lookup_action("YuMi", "pick", "new_obj");
  EXPECT_FALSE(lookup.exact);
  std::vector<std::string> types;
  for (const auto& m : lookup.near_misses) types.push_back(m.object_type);
  EXPECT_EQ(types, (std::vector<std::string>{"Box", "Nut", "Screw"}));
  EXPECT_TRUE(g.lookup_action("YuMi", "juggle", "Nut").near_misses.empty());
  EXPECT_FALSE(g.lookup_action("YuMi", "juggle", "Nut").exact);
}

TEST_F(GraphTest, LookupInheritsActionsFromSupertypes) {
  g.add_type("Fastener", std::nullopt, {});
  g.add_type("Bolt", std::string_view("Fastener"), {});
  g.define_action("YuMi", "push", "Fastener", "push_fastener_skill");
  auto lookup = g.lookup_action("YuMi", "push", "Bolt");
  ASSERT_TRUE(lookup.exact);
  EXPECT_EQ(lookup.exact->skill_ref, "push_fastener_skill");
}

TEST_F(GraphTest, SlotWritesAndPoseUpdates) {
  NodeId nut = g.instantiate("Nut", {}, at(0));
  g.set_slot_value(nut, "color", Value{"blue"});
  EXPECT_EQ(g.slot_value(nut, "color"), Value{"blue"});
  EXPECT_EQ(code_of([&] { g.set_slot_value(nut, "weight", Value{"1"}); }), ErrorCode::kUnknownSlot);
  g.set_instance_pose(nut, at(7, 8, 9));
  EXPECT_EQ(g.node(nut).value, Value{at(7, 8, 9)});
  EXPECT_EQ(g.slot_value(nut, "position"), Value{at(7, 8, 9)});
  EXPECT_EQ(code_of([&] { g.set_slot_value(*g.find_type("Nut"), "color", Value{"x"}); }), ErrorCode::kNotAnInstance);
}

TEST_F(GraphTest, AddSlotOnlyOnPriorOwners) {
  NodeId nut = g.instantiate("Nut", {}, at(0));
  EXPECT_EQ(code_of([&] { g.add_slot(nut, "x"); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([&] { g.add_slot(*g.find_type("Nut"), "color"); }), ErrorCode::kInvalidArgument);
}

TEST_F(GraphTest, PartsRoundTripThroughFromParts) {
  g.instantiate("Nut", {{"color", Value{"green"}}}, at(0));
  KnowledgeGraph copy = KnowledgeGraph::from_parts(g.parts());
  EXPECT_TRUE(oracle::same_state(g, copy));
  EXPECT_EQ(oracle::canonical_form(g), oracle::canonical_form(copy));
  EXPECT_EQ(copy.find_scene_node("nut_1"), g.find_scene_node("nut_1"));
}

TEST_F(GraphTest, FromPartsRejectsBrokenGraphs) {
  auto parts = g.parts();
  parts.edges.push_back(Edge{EdgeId{999}, NodeId{1}, NodeId{12345}, EdgeKind::kHas, "", std::nullopt});
  EXPECT_EQ(code_of([&] { KnowledgeGraph::from_parts(parts); }), ErrorCode::kIntegrityViolation);

  parts = g.parts();
  NodeId yumi = *g.find_type("YuMi");
  NodeId nut = *g.find_type("Nut");
  parts.edges.push_back(Edge{EdgeId{998}, yumi, nut, EdgeKind::kIs, "", std::nullopt});
  parts.edges.push_back(Edge{EdgeId{999}, nut, yumi, EdgeKind::kIs, "", std::nullopt});
  parts.next_edge_id = 1000;
  EXPECT_EQ(code_of([&] { KnowledgeGraph::from_parts(parts); }), ErrorCode::kIntegrityViolation);
}

TEST_F(GraphTest, CopiesAreIndependentSnapshots) {
  KnowledgeGraph copy = g;
  copy.instantiate("Nut", {}, at(0));
  EXPECT_TRUE(g.instances().empty());
  EXPECT_EQ(copy.instances().size(), 1u);
}
