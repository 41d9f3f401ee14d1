#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "semem/executor.hpp"
#include "semem/json_codec.hpp"
#include "semem/nlparse.hpp"
#include "semem/perception.hpp"
#include "semem/resolver.hpp"
#include "semem/session.hpp"
#include "semem/world.hpp"

namespace semem {

enum class EventKind { kGraphChanged, kPromptOpened, kPromptClosed, kExecutionRecorded, kSceneIngested };

std::string_view to_string(EventKind kind) noexcept;

/// State change notification. Sequence numbers are assigned by whoever
/// publishes the stream.
struct Event {
  EventKind kind = EventKind::kGraphChanged;
  Json payload;
};

struct InstructionResult {
  IntentFrame frame;
  ResolutionOutcome outcome;
  std::optional<ExecutionRecord> record;  // set when the outcome was executed
  std::optional<Prompt> prompt;           // set when a confirmation was raised
};

struct EngineConfig {
  SessionConfig session;
  ExecutorConfig executor;
  ParseStrategy strategy = ParseStrategy::kHeuristic;
  std::optional<std::filesystem::path> log_path;
};

/// One robot: world, dialogue, executor and log behind the operations the
/// CLI and the service expose. Not thread-safe; callers serialize access.
///
/// Every mutating call is all-or-nothing: on error the state is unchanged.
/// Calls that would raise a prompt while another is open fail with
/// DialogueBusy before touching anything.
class Engine {
 public:
  Engine(World world, Lexicon lexicon, EngineConfig config = {});

  IngestReport ingest(const std::vector<Observation>& observations);

  /// Parses (nlparse errors propagate), resolves and runs Resolved outcomes
  /// right away. Object or action confirmations open a prompt.
  InstructionResult instruct(std::string_view text, std::optional<ParseStrategy> strategy = {});

  std::vector<Effect> answer(const Answer& answer);

  /// Clears the scene subgraph. Returns the number of nodes removed.
  std::size_t reset_scene();

  /// Expires an idle prompt if the session timeout says so.
  bool expire_stale();

  /// Events produced since the last drain, oldest first.
  std::vector<Event> drain_events();

  const World& world() const noexcept { return world_; }
  World& mutable_world() noexcept { return world_; }
  const Session& session() const noexcept { return session_; }
  const ExecutionLog& log() const noexcept { return log_; }
  const Lexicon& lexicon() const noexcept { return lexicon_; }
  ParseStrategy strategy() const noexcept { return strategy_; }
  void set_strategy(ParseStrategy strategy) noexcept { strategy_ = strategy; }
  Executor& executor() noexcept { return executor_; }

 private:
  struct Outputs {
    std::vector<Event> events;  // published after GraphChanged, before PromptOpened
    std::vector<ExecutionRecord> records;
  };

  void require_idle();
  // Runs `body` against the live state. On success the records are logged and
  // the state diff is published as events; on error everything is restored.
  void transact(const std::function<void(Outputs&)>& body);

  World world_;
  Lexicon lexicon_;
  Session session_;
  Executor executor_;
  ExecutionLog log_;
  ParseStrategy strategy_;
  std::vector<Event> events_;
};

/// Node/edge additions, removals and value updates between two graphs.
/// Empty object when nothing changed.
Json graph_delta(const KnowledgeGraph& before, const KnowledgeGraph& after);

}  // namespace semem
