#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "semem/executor.hpp"
#include "semem/perception.hpp"
#include "semem/resolver.hpp"
#include "semem/world.hpp"

namespace semem {

enum class PromptKind { kConfirmObject, kChooseAction, kLabelUnknownObject, kTeachSkill };
enum class PromptState { kOpen, kAnswered, kExpired };

std::string_view to_string(PromptKind kind) noexcept;
std::optional<PromptKind> prompt_kind_from_string(std::string_view name);
std::string_view to_string(PromptState state) noexcept;

/// What the operator is asked to teach: an action for an (actor, object)
/// pair, optionally with the instruction waiting on it.
struct TeachRequest {
  std::string actor_type;
  std::string action_label;
  std::string object_type;
  std::optional<NeedsActionConfirmation> pending;

  bool operator==(const TeachRequest&) const = default;
};

using PromptPayload = std::variant<NeedsObjectConfirmation, NeedsActionConfirmation, Observation, TeachRequest>;

struct Prompt {
  std::uint64_t id = 0;
  PromptKind kind = PromptKind::kConfirmObject;
  PromptPayload payload;
  std::int64_t created_at = 0;
  PromptState state = PromptState::kOpen;
};

// Answer choices. Which ones a prompt accepts depends on its kind:
//   ConfirmObject       ConfirmChoice
//   ChooseAction        ChooseActionChoice | RequestTeachChoice | DeclineChoice
//   LabelUnknownObject  NewTypeChoice | ExistingTypeChoice | DeclineChoice
//   TeachSkill          TeachChoice | DeclineChoice
struct ConfirmChoice {
  bool accept = false;
};
struct ChooseActionChoice {
  std::string action_label;
  std::string object_type;
};
struct RequestTeachChoice {};
struct DeclineChoice {};
struct NewTypeChoice {
  std::string label;
  std::optional<std::string> parent;
  std::vector<std::string> slots;  // empty: the observation's detected properties
};
struct ExistingTypeChoice {
  std::string label;
};
struct TeachChoice {
  std::string skill_name;
  std::vector<SkillStep> steps;
};

using AnswerChoice = std::variant<ConfirmChoice, ChooseActionChoice, RequestTeachChoice, DeclineChoice, NewTypeChoice,
                                  ExistingTypeChoice, TeachChoice>;

struct Answer {
  std::uint64_t prompt_id = 0;
  AnswerChoice choice;
};

// Effects applied by an answer, in order.
struct TypeCreated {
  std::string label;
  std::optional<std::string> parent;
};
struct SubtypeLinked {
  std::string child;
  std::string parent;
};
struct SignatureRegistered {
  std::string type_label;
};
struct InstanceCreated {
  NodeId id;
  std::string label;
  std::string type_label;
};
struct SkillTaught {
  std::string name;
  std::size_t steps = 0;
};
struct ActionDefined {
  std::string actor_type;
  std::string action_label;
  std::string object_type;
  std::string skill_ref;
};
struct Executed {
  ExecutionRecord record;
};
struct OutcomeReported {
  ResolutionOutcome outcome;
};
struct ObservationDropped {};
struct PromptRaised {
  std::uint64_t id = 0;
  PromptKind kind = PromptKind::kConfirmObject;
};

using Effect = std::variant<TypeCreated, SubtypeLinked, SignatureRegistered, InstanceCreated, SkillTaught,
                            ActionDefined, Executed, OutcomeReported, ObservationDropped, PromptRaised>;

struct SessionConfig {
  /// Open prompts idle longer than this expire; no timeout when empty.
  std::optional<std::int64_t> prompt_timeout_ms;
  /// Milliseconds source for created_at; defaults to a logical counter so
  /// replays stay deterministic.
  std::function<std::int64_t()> clock;
};

/// Sequential dialogue with the operator. At most one prompt is open;
/// further unknown observations wait in a queue.
class Session {
 public:
  explicit Session(SessionConfig config = {});

  /// Throws DialogueBusy while another prompt is open.
  const Prompt& raise_unknown_object(const Observation& observation);
  const Prompt& raise_confirm_object(const NeedsObjectConfirmation& proposal);
  const Prompt& raise_choose_action(const NeedsActionConfirmation& request);

  /// Queues unknowns and opens the first when idle. Returns the prompt
  /// opened by this call, if any.
  std::optional<Prompt> queue_unknowns(const std::vector<Observation>& observations);

  /// Applies an answer atomically: on any error the world, executor and
  /// session are left exactly as before and the error propagates.
  std::vector<Effect> answer(World& world, Executor& executor, const Answer& answer);

  /// Records a taught skill. Throws DuplicateSkill.
  static void teach_skill(SkillRegistry& registry, std::string name, std::vector<SkillStep> steps);

  /// Moves an idle open prompt to Expired. Returns true if one expired.
  bool expire_stale();

  const Prompt* open_prompt() const;
  const Prompt* find(std::uint64_t id) const;
  const std::vector<Prompt>& prompts() const noexcept { return prompts_; }
  std::size_t pending_unknowns() const noexcept { return pending_.size(); }

 private:
  const Prompt& raise(PromptKind kind, PromptPayload payload);
  std::int64_t now();
  std::vector<Effect> apply(World& world, Executor& executor, Prompt& prompt, const AnswerChoice& choice);
  void open_next_pending(std::vector<Effect>& effects);

  SessionConfig config_;
  std::vector<Prompt> prompts_;
  std::deque<Observation> pending_;
  std::uint64_t next_id_ = 1;
  std::int64_t logical_clock_ = 0;
};

}  // namespace semem
