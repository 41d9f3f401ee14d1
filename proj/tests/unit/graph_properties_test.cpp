#include <gtest/gtest.h>

#include "criteria.hpp"
#include "generators.hpp"
#include "oracles.hpp"
#include "semem/error.hpp"

using namespace semem;

TEST(GraphProperties, RandomSequencesKeepEveryInvariant) {
  auto result = criteria::graph_invariants(200, 60);
  EXPECT_TRUE(result.pass) << result.detail;
}

TEST(GraphProperties, GeneratorPredictionsCoverEveryErrorKind) {
  std::map<std::string, int> seen;
  for (int s = 0; s < 200; ++s) {
    gen::Rng rng(s);
    KnowledgeGraph g;
    for (int i = 0; i < 60; ++i) {
      auto step = gen::random_op(g, rng);
      if (step.threw) ++seen[step.error];
    }
  }
  for (const char* code : {"DuplicateType", "UnknownParent", "HierarchyCycle", "UnknownType", "UnknownSlot",
                           "NotAnInstance", "InvalidArgument"}) {
    EXPECT_GT(seen[code], 0) << code << " never exercised";
  }
}

TEST(GraphProperties, CanonicalFormIgnoresNodeIds) {
  // Same content built in a different order gives a different id layout.
  KnowledgeGraph a, b;
  a.add_type("Nut", std::nullopt, {"color"});
  a.add_type("Box", std::nullopt, {"size"});
  b.add_type("Box", std::nullopt, {"size"});
  b.add_type("Nut", std::nullopt, {"color"});
  a.instantiate("Nut", {{"color", Value{"green"}}}, Pose{});
  b.instantiate("Nut", {{"color", Value{"green"}}}, Pose{});
  EXPECT_NE(a.find_type("Nut"), b.find_type("Nut"));
  EXPECT_EQ(oracle::canonical_form(a), oracle::canonical_form(b));
  b.set_slot_value(*b.find_scene_node("nut_1"), "color", Value{"blue"});
  EXPECT_NE(oracle::canonical_form(a), oracle::canonical_form(b));
}

TEST(GraphProperties, OracleCatchesTamperedGraphs) {
  KnowledgeGraph g;
  g.add_type("Nut", std::nullopt, {"color"});
  g.instantiate("Nut", {}, Pose{});
  auto parts = g.parts();
  // Drop the instance-of edge: the oracle must notice, independently of validate().
  std::erase_if(parts.edges, [](const Edge& e) { return e.kind == EdgeKind::kInstanceOf; });
  KnowledgeGraph tampered;
  try {
    tampered = KnowledgeGraph::from_parts(parts);
    FAIL() << "from_parts accepted an instance without instance-of";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIntegrityViolation);
  }
}
