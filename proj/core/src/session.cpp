#include "semem/session.hpp"

#include <algorithm>

#include "semem/error.hpp"

namespace semem {

std::string_view to_string(PromptKind kind) noexcept {
  switch (kind) {
    case PromptKind::kConfirmObject: return "ConfirmObject";
    case PromptKind::kChooseAction: return "ChooseAction";
    case PromptKind::kLabelUnknownObject: return "LabelUnknownObject";
    case PromptKind::kTeachSkill: return "TeachSkill";
  }
  return "?";
}

std::optional<PromptKind> prompt_kind_from_string(std::string_view name) {
  for (auto kind : {PromptKind::kConfirmObject, PromptKind::kChooseAction, PromptKind::kLabelUnknownObject,
                    PromptKind::kTeachSkill}) {
    if (to_string(kind) == name) return kind;
  }
  return std::nullopt;
}

std::string_view to_string(PromptState state) noexcept {
  switch (state) {
    case PromptState::kOpen: return "open";
    case PromptState::kAnswered: return "answered";
    case PromptState::kExpired: return "expired";
  }
  return "?";
}

Session::Session(SessionConfig config) : config_(std::move(config)) {}

std::int64_t Session::now() { return config_.clock ? config_.clock() : ++logical_clock_; }

const Prompt* Session::open_prompt() const {
  auto it = std::find_if(prompts_.begin(), prompts_.end(), [](const Prompt& p) { return p.state == PromptState::kOpen; });
  return it == prompts_.end() ? nullptr : &*it;
}

const Prompt* Session::find(std::uint64_t id) const {
  auto it = std::find_if(prompts_.begin(), prompts_.end(), [id](const Prompt& p) { return p.id == id; });
  return it == prompts_.end() ? nullptr : &*it;
}

bool Session::expire_stale() {
  if (!config_.prompt_timeout_ms) return false;
  for (auto& prompt : prompts_) {
    if (prompt.state == PromptState::kOpen && now() - prompt.created_at > *config_.prompt_timeout_ms) {
      prompt.state = PromptState::kExpired;
      return true;
    }
  }
  return false;
}

const Prompt& Session::raise(PromptKind kind, PromptPayload payload) {
  expire_stale();
  if (const Prompt* open = open_prompt()) {
    throw Error(ErrorCode::kDialogueBusy, "prompt " + std::to_string(open->id) + " is still waiting for an answer");
  }
  prompts_.push_back(Prompt{next_id_++, kind, std::move(payload), now(), PromptState::kOpen});
  return prompts_.back();
}

const Prompt& Session::raise_unknown_object(const Observation& observation) {
  return raise(PromptKind::kLabelUnknownObject, observation);
}

const Prompt& Session::raise_confirm_object(const NeedsObjectConfirmation& proposal) {
  return raise(PromptKind::kConfirmObject, proposal);
}

const Prompt& Session::raise_choose_action(const NeedsActionConfirmation& request) {
  return raise(PromptKind::kChooseAction, request);
}

std::optional<Prompt> Session::queue_unknowns(const std::vector<Observation>& observations) {
  pending_.insert(pending_.end(), observations.begin(), observations.end());
  expire_stale();
  if (open_prompt() != nullptr || pending_.empty()) return std::nullopt;
  Observation next = pending_.front();
  pending_.pop_front();
  return raise_unknown_object(next);
}

void Session::open_next_pending(std::vector<Effect>& effects) {
  if (open_prompt() != nullptr || pending_.empty()) return;
  Observation next = pending_.front();
  pending_.pop_front();
  const Prompt& prompt = raise_unknown_object(next);
  effects.push_back(PromptRaised{prompt.id, prompt.kind});
}

void Session::teach_skill(SkillRegistry& registry, std::string name, std::vector<SkillStep> steps) {
  registry.add(Skill{std::move(name), std::move(steps)});
}

namespace {

bool choice_fits(PromptKind kind, const AnswerChoice& choice) {
  switch (kind) {
    case PromptKind::kConfirmObject:
      return std::holds_alternative<ConfirmChoice>(choice);
    case PromptKind::kChooseAction:
      return std::holds_alternative<ChooseActionChoice>(choice) || std::holds_alternative<RequestTeachChoice>(choice) ||
             std::holds_alternative<DeclineChoice>(choice);
    case PromptKind::kLabelUnknownObject:
      return std::holds_alternative<NewTypeChoice>(choice) || std::holds_alternative<ExistingTypeChoice>(choice) ||
             std::holds_alternative<DeclineChoice>(choice);
    case PromptKind::kTeachSkill:
      return std::holds_alternative<TeachChoice>(choice) || std::holds_alternative<DeclineChoice>(choice);
  }
  return false;
}

std::vector<PropertyValue> detected_values(const KnowledgeGraph& graph, NodeId type, const Signature& signature) {
  auto slots = graph.slots_of(type);
  std::vector<PropertyValue> values;
  if (slots.contains("color")) values.push_back({"color", Value{to_lower(signature.color_class)}});
  if (slots.contains("shape")) values.push_back({"shape", Value{to_lower(signature.shape_class)}});
  if (slots.contains("size")) {
    values.push_back({"size", Value{std::vector<double>(signature.size.begin(), signature.size.end())}});
  }
  return values;
}

}  // namespace

std::vector<Effect> Session::answer(World& world, Executor& executor, const Answer& answer) {
  expire_stale();
  auto it = std::find_if(prompts_.begin(), prompts_.end(), [&](const Prompt& p) { return p.id == answer.prompt_id; });
  if (it == prompts_.end()) {
    throw Error(ErrorCode::kUnknownPrompt, "no prompt with id " + std::to_string(answer.prompt_id));
  }
  if (it->state != PromptState::kOpen) {
    throw Error(ErrorCode::kPromptNotOpen,
                "prompt " + std::to_string(answer.prompt_id) + " is " + std::string(to_string(it->state)));
  }
  if (!choice_fits(it->kind, answer.choice)) {
    throw Error(ErrorCode::kShapeMismatch,
                "answer does not fit a " + std::string(to_string(it->kind)) + " prompt");
  }

  World world_before = world;
  Executor executor_before = executor;
  auto prompts_before = prompts_;
  auto pending_before = pending_;
  auto next_id_before = next_id_;
  auto clock_before = logical_clock_;
  try {
    std::size_t index = static_cast<std::size_t>(it - prompts_.begin());
    prompts_[index].state = PromptState::kAnswered;
    Prompt prompt = prompts_[index];
    auto effects = apply(world, executor, prompt, answer.choice);
    open_next_pending(effects);
    return effects;
  } catch (...) {
    world = std::move(world_before);
    executor = std::move(executor_before);
    prompts_ = std::move(prompts_before);
    pending_ = std::move(pending_before);
    next_id_ = next_id_before;
    logical_clock_ = clock_before;
    throw;
  }
}

std::vector<Effect> Session::apply(World& world, Executor& executor, Prompt& prompt, const AnswerChoice& choice) {
  std::vector<Effect> effects;
  KnowledgeGraph& graph = world.graph;

  // Re-grounds a waiting instruction after the dialogue changed the graph.
  auto follow_up = [&](const IntentFrame& frame) {
    auto outcome = resolve(graph, frame);
    if (auto* resolved = std::get_if<Resolved>(&outcome)) {
      effects.push_back(Executed{executor.execute(graph, world.skills, resolved->plan)});
    } else if (auto* proposal = std::get_if<NeedsObjectConfirmation>(&outcome)) {
      const Prompt& raised = raise_confirm_object(*proposal);
      effects.push_back(PromptRaised{raised.id, raised.kind});
    } else if (auto* request = std::get_if<NeedsActionConfirmation>(&outcome)) {
      const Prompt& raised = raise_choose_action(*request);
      effects.push_back(PromptRaised{raised.id, raised.kind});
    } else {
      effects.push_back(OutcomeReported{outcome});
    }
  };

  if (std::holds_alternative<DeclineChoice>(choice)) {
    if (prompt.kind == PromptKind::kLabelUnknownObject) effects.push_back(ObservationDropped{});
    return effects;
  }

  switch (prompt.kind) {
    case PromptKind::kConfirmObject: {
      const auto& proposal = std::get<NeedsObjectConfirmation>(prompt.payload);
      auto outcome = confirm_object(graph, proposal, std::get<ConfirmChoice>(choice).accept);
      if (auto* resolved = std::get_if<Resolved>(&outcome)) {
        effects.push_back(Executed{executor.execute(graph, world.skills, resolved->plan)});
      } else {
        effects.push_back(OutcomeReported{outcome});
      }
      break;
    }
    case PromptKind::kChooseAction: {
      const auto& request = std::get<NeedsActionConfirmation>(prompt.payload);
      if (std::holds_alternative<RequestTeachChoice>(choice)) {
        const Prompt& raised = raise(PromptKind::kTeachSkill,
                                     TeachRequest{request.actor_type, to_lower(request.frame.action),
                                                  request.object_type, request});
        effects.push_back(PromptRaised{raised.id, raised.kind});
        break;
      }
      const auto& chosen = std::get<ChooseActionChoice>(choice);
      auto miss = std::find_if(request.near_misses.begin(), request.near_misses.end(), [&](const NearMiss& m) {
        return iequals(m.action_label, chosen.action_label) && iequals(m.object_type, chosen.object_type);
      });
      if (miss == request.near_misses.end()) {
        throw Error(ErrorCode::kInvalidArgument,
                    "'" + chosen.action_label + "' on '" + chosen.object_type + "' was not among the proposed actions");
      }
      graph.define_action(request.actor_type, request.frame.action, request.object_type, miss->skill_ref);
      effects.push_back(ActionDefined{request.actor_type, to_lower(request.frame.action), request.object_type,
                                      miss->skill_ref});
      follow_up(request.frame);
      break;
    }
    case PromptKind::kLabelUnknownObject: {
      const auto& observation = std::get<Observation>(prompt.payload);
      std::string type_label;
      if (const auto* fresh = std::get_if<NewTypeChoice>(&choice)) {
        std::vector<std::string> slots = fresh->slots;
        if (slots.empty()) slots = {"color", "shape", "size", "position"};
        std::optional<std::string_view> parent;
        if (fresh->parent) parent = *fresh->parent;
        graph.add_type(fresh->label, parent, slots);
        type_label = fresh->label;
        effects.push_back(TypeCreated{fresh->label, fresh->parent});
      } else {
        const auto& existing = std::get<ExistingTypeChoice>(choice);
        auto type = graph.find_type(existing.label);
        if (!type) throw Error(ErrorCode::kUnknownType, "unknown type '" + existing.label + "'");
        type_label = graph.node(*type).label;
      }
      world.signatures.register_signature(graph, type_label, observation.signature);
      effects.push_back(SignatureRegistered{type_label});
      NodeId type = *graph.find_type(type_label);
      NodeId instance = graph.instantiate(type_label, detected_values(graph, type, observation.signature),
                                          observation.pose);
      effects.push_back(InstanceCreated{instance, graph.node(instance).label, type_label});
      break;
    }
    case PromptKind::kTeachSkill: {
      const auto& request = std::get<TeachRequest>(prompt.payload);
      const auto& taught = std::get<TeachChoice>(choice);
      teach_skill(world.skills, taught.skill_name, taught.steps);
      effects.push_back(SkillTaught{taught.skill_name, taught.steps.size()});
      graph.define_action(request.actor_type, request.action_label, request.object_type, taught.skill_name);
      effects.push_back(ActionDefined{request.actor_type, request.action_label, request.object_type,
                                      taught.skill_name});
      if (request.pending) follow_up(request.pending->frame);
      break;
    }
  }
  return effects;
}

}  // namespace semem
