#include <gtest/gtest.h>

#include <functional>

#include "criteria.hpp"
#include "oracles.hpp"
#include "semem/engine.hpp"
#include "semem/error.hpp"
#include "semem/persistence.hpp"
#include "semem/seed.hpp"

using namespace semem;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::kInvalidArgument;
}

std::vector<Observation> scene(const std::string& name) {
  return parse_scene_document(read_text_file(criteria::source_dir() / "data" / "scenes" / name));
}

std::vector<EventKind> kinds(const std::vector<Event>& events) {
  std::vector<EventKind> out;
  for (const auto& e : events) out.push_back(e.kind);
  return out;
}

class EngineTest : public ::testing::Test {
 protected:
  EngineTest() : engine(seed_world(), Lexicon::load(criteria::source_dir() / "data" / "lexicon.json")) {}

  // A failed call must leave the world, the dialogue and the event queue alone.
  void expect_untouched(const std::function<void()>& call, ErrorCode code) {
    std::string before = serialize(engine.world(), true);
    std::size_t prompts = engine.session().prompts().size();
    std::size_t records = engine.log().records().size();
    engine.drain_events();
    EXPECT_EQ(code_of(call), code);
    EXPECT_EQ(serialize(engine.world(), true), before);
    EXPECT_EQ(engine.session().prompts().size(), prompts);
    EXPECT_EQ(engine.log().records().size(), records);
    EXPECT_TRUE(engine.drain_events().empty());
  }

  Engine engine;
};

}  // namespace

TEST_F(EngineTest, IngestPublishesDeltaThenReport) {
  auto report = engine.ingest(scene("exp1.json"));
  EXPECT_EQ(report.instantiated.size(), 4u);
  auto events = engine.drain_events();
  EXPECT_EQ(kinds(events), (std::vector<EventKind>{EventKind::kGraphChanged, EventKind::kSceneIngested}));
  const Json& delta = events[0].payload;
  // Four instances, each with its copied slots.
  std::size_t scene_nodes = 0;
  for (const auto& [id, node] : engine.world().graph.nodes()) scene_nodes += node.subgraph == Subgraph::kScene;
  EXPECT_EQ(delta["added_nodes"].size(), scene_nodes);
  EXPECT_FALSE(delta.contains("removed_nodes"));
  EXPECT_EQ(delta["counters"]["Nut"], 1);
  EXPECT_TRUE(engine.drain_events().empty());
}

TEST_F(EngineTest, ResolvedInstructionExecutesAndLogs) {
  engine.ingest(scene("exp1.json"));
  engine.drain_events();
  auto result = engine.instruct("YuMi, pick the screw!");
  ASSERT_TRUE(result.record);
  EXPECT_TRUE(result.record->success());
  EXPECT_FALSE(result.prompt);
  EXPECT_EQ(engine.log().records().size(), 1u);
  EXPECT_EQ(kinds(engine.drain_events()),
            (std::vector<EventKind>{EventKind::kGraphChanged, EventKind::kExecutionRecorded}));
  EXPECT_FALSE(engine.world().graph.find_scene_node("screw_1"));
}

TEST_F(EngineTest, ConfirmationPromptBlocksOtherCalls) {
  engine.ingest(scene("closest_match.json"));
  auto result = engine.instruct("YuMi, pick the green nut!");
  ASSERT_TRUE(result.prompt);
  EXPECT_EQ(result.prompt->kind, PromptKind::kConfirmObject);
  auto events = engine.drain_events();
  ASSERT_FALSE(events.empty());
  EXPECT_EQ(events.back().kind, EventKind::kPromptOpened);

  expect_untouched([&] { engine.instruct("YuMi, pick the nut!"); }, ErrorCode::kDialogueBusy);
  expect_untouched([&] { engine.ingest(scene("exp1.json")); }, ErrorCode::kDialogueBusy);
  expect_untouched([&] { engine.answer(Answer{result.prompt->id + 7, ConfirmChoice{true}}); },
                   ErrorCode::kUnknownPrompt);

  auto effects = engine.answer(Answer{result.prompt->id, ConfirmChoice{true}});
  EXPECT_FALSE(effects.empty());
  EXPECT_EQ(kinds(engine.drain_events()), (std::vector<EventKind>{EventKind::kPromptClosed, EventKind::kGraphChanged,
                                                                  EventKind::kExecutionRecorded}));
  EXPECT_EQ(engine.log().records().size(), 1u);
  EXPECT_EQ(engine.session().open_prompt(), nullptr);
}

TEST_F(EngineTest, ParseErrorsLeaveNoTrace) {
  engine.ingest(scene("exp1.json"));
  expect_untouched([&] { engine.instruct(""); }, ErrorCode::kEmptyInput);
  expect_untouched([&] { engine.instruct("pick the nut and the screw"); }, ErrorCode::kUnsupportedConjunction);
  expect_untouched([&] { engine.instruct("the green", ParseStrategy::kTriplet); }, ErrorCode::kNoTripletFound);
}

TEST_F(EngineTest, DomainFailureIsAnOutcomeWithoutEvents) {
  engine.ingest(scene("exp1.json"));
  engine.drain_events();
  auto result = engine.instruct("YuMi, pick the clip!");
  EXPECT_EQ(outcome_name(result.outcome), "NoInstanceInScene");
  EXPECT_FALSE(result.record);
  EXPECT_TRUE(engine.drain_events().empty());
}

TEST_F(EngineTest, UnknownObjectsOpenPromptsOneAtATime) {
  engine.ingest(scene("exp3.json"));
  auto events = engine.drain_events();
  EXPECT_EQ(events.back().kind, EventKind::kPromptOpened);
  ASSERT_NE(engine.session().open_prompt(), nullptr);
  EXPECT_EQ(engine.session().open_prompt()->kind, PromptKind::kLabelUnknownObject);
}

TEST_F(EngineTest, ResetSceneClearsInstancesAndReports) {
  engine.ingest(scene("exp1.json"));
  engine.drain_events();
  std::size_t removed = engine.reset_scene();
  EXPECT_GT(removed, 4u);
  auto events = engine.drain_events();
  ASSERT_EQ(events.size(), 1u);
  EXPECT_EQ(events[0].payload["removed_nodes"].size(), removed);
  EXPECT_EQ(engine.reset_scene(), 0u);
  EXPECT_TRUE(engine.drain_events().empty());
  EXPECT_TRUE(oracle::check_graph(engine.world().graph).empty());
}

TEST(GraphDelta, EmptyForEqualGraphs) {
  World w = seed_world();
  EXPECT_TRUE(graph_delta(w.graph, w.graph).empty());
  KnowledgeGraph after = w.graph;
  after.add_type("Gear", std::nullopt, {"color"});
  Json delta = graph_delta(w.graph, after);
  EXPECT_EQ(delta["added_nodes"].size(), 2u);
  EXPECT_EQ(delta["added_edges"].size(), 1u);
  EXPECT_FALSE(delta.contains("counters"));
}

TEST(EventKinds, HaveStableNames) {
  EXPECT_EQ(to_string(EventKind::kGraphChanged), "GraphChanged");
  EXPECT_EQ(to_string(EventKind::kExecutionRecorded), "ExecutionRecorded");
}
