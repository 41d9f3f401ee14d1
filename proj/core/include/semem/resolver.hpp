#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "semem/graph.hpp"
#include "semem/nlparse.hpp"

namespace semem {

/// A fully grounded instruction: who acts, on which instance, with which skill.
struct ResolvedPlan {
  NodeId actor_instance;
  NodeId patient_instance;
  std::string action_label;
  std::string skill_ref;
  IntentFrame frame;

  bool operator==(const ResolvedPlan&) const = default;
};

struct Resolved {
  ResolvedPlan plan;
  bool operator==(const Resolved&) const = default;
};

/// No instance satisfies every filter; `proposed` is the closest one and
/// `mismatched` its actual value for the first violated filter.
struct NeedsObjectConfirmation {
  NodeId proposed;
  PropertyValue mismatched;
  ResolvedPlan plan_if_accepted;
  std::string requested_type;

  bool operator==(const NeedsObjectConfirmation&) const = default;
};

/// No action edge links the actor to the object type. Near-misses are the
/// same label on other object types, sorted by type name.
struct NeedsActionConfirmation {
  std::vector<NearMiss> near_misses;
  IntentFrame frame;
  NodeId actor_instance;
  NodeId patient_instance;
  std::string actor_type;
  std::string object_type;

  bool operator==(const NeedsActionConfirmation&) const = default;
};

struct UnknownTypeWord {
  std::string word;
  bool operator==(const UnknownTypeWord&) const = default;
};

struct NoInstanceInScene {
  std::string type_label;
  bool operator==(const NoInstanceInScene&) const = default;
};

struct NoActorInScene {
  std::string actor_type;
  bool operator==(const NoActorInScene&) const = default;
};

using ResolutionOutcome = std::variant<Resolved, NeedsObjectConfirmation, NeedsActionConfirmation, UnknownTypeWord,
                                       NoInstanceInScene, NoActorInScene>;

std::string_view outcome_name(const ResolutionOutcome& outcome) noexcept;

/// Grounds a frame against the graph. Never throws for domain failures;
/// every failure is an outcome variant. Read-only on the graph.
ResolutionOutcome resolve(const KnowledgeGraph& graph, const IntentFrame& frame);

/// Accepting yields the stored plan; rejecting yields NoInstanceInScene.
/// Throws StaleProposal if the proposed or actor instance is gone.
ResolutionOutcome confirm_object(const KnowledgeGraph& graph, const NeedsObjectConfirmation& proposal, bool accepted);

}  // namespace semem
