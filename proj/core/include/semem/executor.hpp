#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "semem/graph.hpp"
#include "semem/resolver.hpp"

namespace semem {

// Primitive actuator steps.
struct MoveTo {
  Pose pose;
  bool operator==(const MoveTo&) const = default;
};
struct GripClose {
  bool operator==(const GripClose&) const = default;
};
struct GripOpen {
  bool operator==(const GripOpen&) const = default;
};
struct RemovePatient {
  bool operator==(const RemovePatient&) const = default;
};
struct PlacePatient {
  Pose pose;
  bool operator==(const PlacePatient&) const = default;
};

using SkillStep = std::variant<MoveTo, GripClose, GripOpen, RemovePatient, PlacePatient>;

std::string_view step_name(const SkillStep& step) noexcept;

struct Skill {
  std::string name;
  std::vector<SkillStep> steps;

  bool operator==(const Skill&) const = default;
};

class SkillRegistry {
 public:
  /// Throws DuplicateSkill if the name is taken.
  void add(Skill skill);
  const Skill* find(std::string_view name) const;
  bool contains(std::string_view name) const { return find(name) != nullptr; }
  std::size_t size() const noexcept { return skills_.size(); }
  const std::map<std::string, Skill, std::less<>>& skills() const noexcept { return skills_; }

  bool operator==(const SkillRegistry&) const = default;

 private:
  std::map<std::string, Skill, std::less<>> skills_;
};

/// Types that ship with pick/place skill templates.
inline constexpr std::string_view kSeedObjectTypes[] = {"Nut", "Screw", "Box", "Clip"};
inline constexpr std::string_view kSeedActorType = "YuMi";

/// Installs `pick_<type>_skill` and `place_<type>_skill` for every seed type
/// and, for those present in the graph, the matching actions from the seed
/// actor. Throws DuplicateSkill (before changing anything) if already installed.
void register_builtin_skills(SkillRegistry& registry, KnowledgeGraph& graph);

struct StepRun {
  std::size_t index = 0;
  std::string step;
  std::uint64_t timestamp = 0;

  bool operator==(const StepRun&) const = default;
};

struct StepFailure {
  std::size_t step_index = 0;
  std::string reason;

  bool operator==(const StepFailure&) const = default;
};

struct SceneDelta {
  std::vector<std::string> removed;
  std::vector<std::pair<std::string, Pose>> moved;

  bool operator==(const SceneDelta&) const = default;
};

struct ExecutionRecord {
  std::uint64_t sequence = 0;
  ResolvedPlan plan;
  std::string actor_label;
  std::string patient_label;
  std::vector<StepRun> steps_run;
  std::optional<StepFailure> failure;  // empty on success
  SceneDelta scene_delta;

  bool success() const noexcept { return !failure.has_value(); }
  bool operator==(const ExecutionRecord&) const = default;
};

/// Makes step `step_index` of `skill` (any skill when empty) fail.
struct FailureInjection {
  std::string skill;
  std::size_t step_index = 0;
};

struct ExecutorConfig {
  std::optional<FailureInjection> inject_failure;
  /// Logical step counters keep replays bit-stable; wall clock uses
  /// microseconds since the epoch instead.
  bool wall_clock = false;
};

/// Simulated actuator. Steps complete instantly; only RemovePatient and
/// PlacePatient touch the (scene) graph.
class Executor {
 public:
  explicit Executor(ExecutorConfig config = {}) : config_(std::move(config)) {}

  /// Throws StalePlan if an instance of the plan is gone and UnknownSkill if
  /// the skill is not registered. Step failures come back as a Failed record.
  ExecutionRecord execute(KnowledgeGraph& graph, const SkillRegistry& registry, const ResolvedPlan& plan);

  void set_failure_injection(std::optional<FailureInjection> injection) { config_.inject_failure = std::move(injection); }

 private:
  std::uint64_t tick();

  ExecutorConfig config_;
  std::uint64_t clock_ = 0;
  std::uint64_t executions_ = 0;
};

/// Append-only execution log; mirrors every record as one JSON line to an
/// optional file.
class ExecutionLog {
 public:
  ExecutionLog() = default;
  explicit ExecutionLog(const std::filesystem::path& path);

  void append(const ExecutionRecord& record);
  const std::vector<ExecutionRecord>& records() const noexcept { return records_; }
  std::vector<ExecutionRecord> slice(std::size_t from, std::size_t limit) const;

 private:
  std::vector<ExecutionRecord> records_;
  std::optional<std::ofstream> sink_;
};

}  // namespace semem
