#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "semem/engine.hpp"
#include "semem/error.hpp"

namespace semem {

// Human-readable transcript blocks. An instruction prints three labeled
// blocks: [interpretation], [match] and [execution].
std::string format_ingest(const IngestReport& report);
std::string format_instruction(const InstructionResult& result, const Engine& engine);
std::string format_prompt(const Prompt& prompt, const KnowledgeGraph& graph);
std::string format_effects(const std::vector<Effect>& effects, const Engine& engine);
std::string format_error(const Error& error);
/// Live scene instances, sorted, comma separated ("-" when empty).
std::string format_scene(const KnowledgeGraph& graph);

// Script steps.
struct InstructStep {
  std::string text;
};
struct AnswerStep {
  std::optional<std::uint64_t> prompt_id;  // the open prompt when empty
  AnswerChoice choice;
};
struct ExpectRemoved {
  std::string label;
};
struct ExpectPresent {
  std::string label;
};
struct ExpectPrompt {
  std::string kind;  // "none" expects no open prompt
};
struct ExpectOutcome {
  std::string variant;
};
struct ExpectError {
  std::string code;
};
struct ExpectPriorUnchanged {};

using ScriptStep = std::variant<InstructStep, AnswerStep, ExpectRemoved, ExpectPresent, ExpectPrompt, ExpectOutcome,
                                ExpectError, ExpectPriorUnchanged>;

struct Scenario {
  std::filesystem::path prior_graph;
  std::filesystem::path scene;
  std::optional<std::filesystem::path> lexicon;
  std::optional<ParseStrategy> strategy;
  std::vector<ScriptStep> script;
};

/// Reads a scenario file; relative paths are taken from the file's directory.
/// Throws MalformedDocument naming the step and field.
Scenario load_scenario(const std::filesystem::path& path);

struct ReplayOptions {
  std::optional<std::filesystem::path> lexicon;  // used when the scenario names none
  std::optional<ParseStrategy> strategy;         // overrides the scenario
};

struct ReplayResult {
  std::string transcript;
  bool passed = true;
  std::string first_failure;  // empty when passed
};

/// Deterministic run: logical clocks, no prompt timeout. Replay stops at the
/// first failed expectation.
ReplayResult replay(const Scenario& scenario, const ReplayOptions& options = {});

/// Runs scripted steps against a live engine, appending to `result`. Used by
/// replay and by the REPL's batch mode.
class ScriptRunner {
 public:
  explicit ScriptRunner(Engine& engine);

  /// Returns false when the step was an expectation that failed.
  bool run(const ScriptStep& step, std::string& transcript, std::string& failure);

 private:
  Engine& engine_;
  std::string prior_before_;
  std::optional<std::string> last_outcome_;
  std::optional<std::string> last_error_;
  std::set<std::string> seen_labels_;

  void remember_scene();
};

}  // namespace semem
