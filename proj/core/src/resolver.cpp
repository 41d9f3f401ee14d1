#include "semem/resolver.hpp"

#include <limits>

#include <spdlog/spdlog.h>

#include "semem/error.hpp"

namespace semem {

std::string_view outcome_name(const ResolutionOutcome& outcome) noexcept {
  constexpr std::string_view names[] = {"Resolved",      "NeedsObjectConfirmation", "NeedsActionConfirmation",
                                        "UnknownTypeWord", "NoInstanceInScene",     "NoActorInScene"};
  return names[outcome.index()];
}

ResolutionOutcome resolve(const KnowledgeGraph& graph, const IntentFrame& frame) {
  // Step 1: named objects to prior type nodes.
  auto actor_type = graph.find_type(frame.actor);
  if (!actor_type) return UnknownTypeWord{frame.actor};
  auto patient_type = graph.find_type(frame.patient.type_word);
  if (!patient_type) return UnknownTypeWord{frame.patient.type_word};
  const std::string& actor_label = graph.node(*actor_type).label;
  const std::string& patient_label = graph.node(*patient_type).label;

  // Step 2: scene instances via is / instance-of.
  auto actors = graph.query_instances(actor_label, {});
  if (actors.empty()) return NoActorInScene{actor_label};
  NodeId actor = actors.front();

  auto candidates = graph.query_instances(patient_label, {});
  if (candidates.empty()) return NoInstanceInScene{patient_label};

  // Step 3: property filters.
  const auto& filters = frame.patient.modifiers;
  auto filtered = graph.query_instances(patient_label, filters);

  NodeId chosen = candidates.front();
  std::optional<PropertyValue> mismatched;
  if (!filtered.empty()) {
    chosen = filtered.front();
    if (filtered.size() > 1 && frame.patient.determiner == Determiner::kDefinite) {
      spdlog::debug("'{}' matches {} instances; choosing {}", frame.raw, filtered.size(), graph.node(chosen).label);
    }
  } else {
    // Closest match: fewest violated filters, ties by instance number.
    std::size_t fewest = std::numeric_limits<std::size_t>::max();
    for (NodeId candidate : candidates) {
      std::size_t violations = 0;
      std::optional<PropertyValue> first_violation;
      for (const auto& filter : filters) {
        auto actual = graph.slot_value(candidate, filter.slot);
        if (actual && value_matches(filter.value, *actual)) continue;
        ++violations;
        if (!first_violation) first_violation = PropertyValue{filter.slot, actual.value_or(Value{std::string{}})};
      }
      if (violations < fewest) {
        fewest = violations;
        chosen = candidate;
        mismatched = first_violation;
      }
    }
  }

  // Step 4: the action edge from actor to object.
  NodeId object_type = graph.type_of(chosen);
  auto lookup = graph.lookup_action(actor_label, frame.action, graph.node(object_type).label);
  if (!lookup.exact) {
    return NeedsActionConfirmation{std::move(lookup.near_misses), frame, actor, chosen, actor_label,
                                   graph.node(object_type).label};
  }

  // Step 5: executable plan.
  ResolvedPlan plan{actor, chosen, to_lower(frame.action), lookup.exact->skill_ref, frame};
  if (mismatched) return NeedsObjectConfirmation{chosen, *mismatched, std::move(plan), patient_label};
  return Resolved{std::move(plan)};
}

ResolutionOutcome confirm_object(const KnowledgeGraph& graph, const NeedsObjectConfirmation& proposal, bool accepted) {
  if (!graph.is_live_instance(proposal.proposed) || !graph.is_live_instance(proposal.plan_if_accepted.actor_instance)) {
    throw Error(ErrorCode::kStaleProposal, "the proposed object is no longer in the scene");
  }
  if (!accepted) return NoInstanceInScene{proposal.requested_type};
  return Resolved{proposal.plan_if_accepted};
}

}  // namespace semem
