#pragma once

#include "semem/executor.hpp"
#include "semem/graph.hpp"
#include "semem/perception.hpp"

namespace semem {

/// Everything the robot has learned: the dual graph, the reference
/// signatures, and the skill library. Saved and loaded as one document.
struct World {
  KnowledgeGraph graph;
  SignatureDatabase signatures;
  SkillRegistry skills;
};

}  // namespace semem
