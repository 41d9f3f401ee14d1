#pragma once

// JSON wire forms shared by the persistence document, the HTTP service, the
// execution log and scenario files.

#include <nlohmann/json.hpp>

#include "semem/executor.hpp"
#include "semem/graph.hpp"
#include "semem/nlparse.hpp"
#include "semem/perception.hpp"
#include "semem/resolver.hpp"
#include "semem/session.hpp"

namespace semem {

using Json = nlohmann::json;

Json to_json(const Pose& pose);
Json to_json(const Value& value);
Json to_json(const PropertyValue& value);
Json to_json(const Signature& signature);
/// Same shape as one element of a scene-description document.
Json to_json(const Observation& observation);
Json to_json(const IntentFrame& frame);
Json to_json(const NearMiss& miss);
Json to_json(const ResolvedPlan& plan);
Json to_json(const ResolutionOutcome& outcome);
Json to_json(const SkillStep& step);
Json to_json(const Skill& skill);
Json to_json(const ExecutionRecord& record);
Json to_json(const Prompt& prompt);
Json to_json(const Effect& effect);
Json to_json(const IngestReport& report);
Json to_json(const Node& node);
Json to_json(const Edge& edge);

/// Node and edge lists with subgraph tags, plus counters.
Json graph_to_json(const KnowledgeGraph& graph);

// Parsers throw Error(kInvalidArgument) with the offending field named.
Pose pose_from_json(const Json& json);
Value value_from_json(const Json& json);
SkillStep skill_step_from_json(const Json& json);
Skill skill_from_json(const Json& json);
Signature signature_from_json(const Json& json);
AnswerChoice answer_choice_from_json(const Json& json);
/// {"prompt_id": n, "choice": {...}}
Answer answer_from_json(const Json& json);
Json to_json(const AnswerChoice& choice);

}  // namespace semem
