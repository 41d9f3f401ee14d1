#include "semem/executor.hpp"

#include <chrono>

#include "semem/error.hpp"
#include "semem/json_codec.hpp"

namespace semem {

std::string_view step_name(const SkillStep& step) noexcept {
  constexpr std::string_view names[] = {"move_to", "grip_close", "grip_open", "remove_patient", "place_patient"};
  return names[step.index()];
}

void SkillRegistry::add(Skill skill) {
  if (skill.name.empty()) throw Error(ErrorCode::kInvalidArgument, "skill name must be non-empty");
  if (contains(skill.name)) throw Error(ErrorCode::kDuplicateSkill, "skill '" + skill.name + "' already exists");
  std::string name = skill.name;
  skills_.emplace(std::move(name), std::move(skill));
}

const Skill* SkillRegistry::find(std::string_view name) const {
  auto it = skills_.find(name);
  return it == skills_.end() ? nullptr : &it->second;
}

namespace {

Pose at(double x, double y, double z) { return Pose{{x, y, z}, {0.0, 0.0, 0.0}}; }

// Approach from above, grasp, lift clear, then hand the object off the table.
Skill pick_template(const std::string& name) {
  return Skill{name,
               {MoveTo{at(0, 0, 150)}, GripOpen{}, MoveTo{at(0, 0, 20)}, GripClose{}, MoveTo{at(0, 0, 150)},
                RemovePatient{}}};
}

Skill place_template(const std::string& name) {
  return Skill{name,
               {MoveTo{at(0, 0, 150)}, GripClose{}, MoveTo{at(300, 0, 150)}, PlacePatient{at(300, 0, 0)}, GripOpen{},
                MoveTo{at(300, 0, 150)}}};
}

}  // namespace

void register_builtin_skills(SkillRegistry& registry, KnowledgeGraph& graph) {
  std::vector<Skill> templates;
  for (std::string_view type : kSeedObjectTypes) {
    std::string key = to_lower(type);
    templates.push_back(pick_template("pick_" + key + "_skill"));
    templates.push_back(place_template("place_" + key + "_skill"));
  }
  for (const auto& skill : templates) {
    if (registry.contains(skill.name)) {
      throw Error(ErrorCode::kDuplicateSkill, "built-in skill '" + skill.name + "' already installed");
    }
  }
  for (auto& skill : templates) registry.add(std::move(skill));

  if (!graph.find_type(kSeedActorType)) return;
  for (std::string_view type : kSeedObjectTypes) {
    if (!graph.find_type(type)) continue;
    std::string key = to_lower(type);
    graph.define_action(kSeedActorType, "pick", type, "pick_" + key + "_skill");
    graph.define_action(kSeedActorType, "place", type, "place_" + key + "_skill");
  }
}

std::uint64_t Executor::tick() {
  if (config_.wall_clock) {
    auto now = std::chrono::system_clock::now().time_since_epoch();
    return static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::microseconds>(now).count());
  }
  return ++clock_;
}

ExecutionRecord Executor::execute(KnowledgeGraph& graph, const SkillRegistry& registry, const ResolvedPlan& plan) {
  if (!graph.is_live_instance(plan.patient_instance) || !graph.is_live_instance(plan.actor_instance)) {
    throw Error(ErrorCode::kStalePlan, "plan refers to an instance that is no longer in the scene");
  }
  const Skill* skill = registry.find(plan.skill_ref);
  if (skill == nullptr) throw Error(ErrorCode::kUnknownSkill, "no skill named '" + plan.skill_ref + "'");

  ExecutionRecord record;
  record.sequence = ++executions_;
  record.plan = plan;
  record.actor_label = graph.node(plan.actor_instance).label;
  record.patient_label = graph.node(plan.patient_instance).label;

  for (std::size_t i = 0; i < skill->steps.size(); ++i) {
    const SkillStep& step = skill->steps[i];
    const auto& injected = config_.inject_failure;
    if (injected && injected->step_index == i && (injected->skill.empty() || injected->skill == skill->name)) {
      record.failure = StepFailure{i, "injected failure"};
      break;
    }
    if (std::holds_alternative<RemovePatient>(step) || std::holds_alternative<PlacePatient>(step)) {
      if (!graph.is_live_instance(plan.patient_instance)) {
        record.failure = StepFailure{i, "patient is no longer in the scene"};
        break;
      }
      if (std::holds_alternative<RemovePatient>(step)) {
        graph.remove_instance(plan.patient_instance);
        record.scene_delta.removed.push_back(record.patient_label);
      } else {
        const Pose& pose = std::get<PlacePatient>(step).pose;
        graph.set_instance_pose(plan.patient_instance, pose);
        record.scene_delta.moved.emplace_back(record.patient_label, pose);
      }
    }
    record.steps_run.push_back(StepRun{i, std::string(step_name(step)), tick()});
  }
  return record;
}

ExecutionLog::ExecutionLog(const std::filesystem::path& path) : sink_(std::in_place, path, std::ios::app) {
  if (!*sink_) throw Error(ErrorCode::kIoFailure, "cannot open execution log '" + path.string() + "'");
}

void ExecutionLog::append(const ExecutionRecord& record) {
  records_.push_back(record);
  if (sink_) {
    *sink_ << to_json(record).dump() << '\n';
    sink_->flush();
  }
}

std::vector<ExecutionRecord> ExecutionLog::slice(std::size_t from, std::size_t limit) const {
  std::vector<ExecutionRecord> out;
  for (std::size_t i = from; i < records_.size() && out.size() < limit; ++i) out.push_back(records_[i]);
  return out;
}

}  // namespace semem
