#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "semem/nlparse.hpp"
#include "semem/perception.hpp"
#include "semem/world.hpp"

namespace gen {

using Rng = std::mt19937_64;

std::size_t pick(Rng& rng, std::size_t n);
bool coin(Rng& rng, double p = 0.5);

/// Outcome of one random graph operation, for the property checks.
struct Step {
  std::string op;
  bool threw = false;
  std::string error;          // error code name when it threw
  std::string expected_error;  // what an independent prediction said, if any
  std::optional<semem::NodeId> created_instance;
};

/// Applies one random mutation (types, slots, subtypes, actions, instances,
/// removals, slot writes, poses). Labels come from small pools so duplicates,
/// unknown names and hierarchy cycles are frequent.
Step random_op(semem::KnowledgeGraph& graph, Rng& rng);

semem::KnowledgeGraph random_graph(Rng& rng, std::size_t ops);

/// Random world with signatures and skills for every type that exists.
semem::World random_world(Rng& rng, std::size_t ops);

semem::Pose random_pose(Rng& rng);

/// Signature from small pools; sizes on a coarse grid so equal distances
/// (ties) occur; descriptors optional and unit length.
semem::Signature random_signature(Rng& rng, std::size_t descriptor_dim = 16);

std::vector<semem::PropertyValue> random_filters(const semem::KnowledgeGraph& graph, Rng& rng);

struct Sentence {
  std::string text;
  semem::IntentFrame expected;  // what the template says the parse must be
};

/// Template corpus: actors x verbs x 0-2 adjectives x nouns x determiners.
std::vector<Sentence> parser_corpus(const semem::Lexicon& lexicon, std::size_t minimum = 200);

}  // namespace gen
