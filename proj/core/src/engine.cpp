#include "semem/engine.hpp"

#include <map>

#include "semem/error.hpp"

namespace semem {

std::string_view to_string(EventKind kind) noexcept {
  switch (kind) {
    case EventKind::kGraphChanged: return "GraphChanged";
    case EventKind::kPromptOpened: return "PromptOpened";
    case EventKind::kPromptClosed: return "PromptClosed";
    case EventKind::kExecutionRecorded: return "ExecutionRecorded";
    case EventKind::kSceneIngested: return "SceneIngested";
  }
  return "?";
}

Json graph_delta(const KnowledgeGraph& before, const KnowledgeGraph& after) {
  Json added_nodes = Json::array();
  Json updated_nodes = Json::array();
  Json removed_nodes = Json::array();
  for (const auto& [id, node] : after.nodes()) {
    const Node* old = before.find_node(id);
    if (old == nullptr) {
      added_nodes.push_back(to_json(node));
    } else if (!(*old == node)) {
      updated_nodes.push_back(to_json(node));
    }
  }
  for (const auto& [id, node] : before.nodes()) {
    if (after.find_node(id) == nullptr) removed_nodes.push_back(id.value);
  }
  Json added_edges = Json::array();
  Json removed_edges = Json::array();
  for (const auto& [id, edge] : after.edges()) {
    if (!before.edges().contains(id)) added_edges.push_back(to_json(edge));
  }
  for (const auto& [id, edge] : before.edges()) {
    if (!after.edges().contains(id)) removed_edges.push_back(id.value);
  }

  Json delta = Json::object();
  if (!added_nodes.empty()) delta["added_nodes"] = std::move(added_nodes);
  if (!updated_nodes.empty()) delta["updated_nodes"] = std::move(updated_nodes);
  if (!removed_nodes.empty()) delta["removed_nodes"] = std::move(removed_nodes);
  if (!added_edges.empty()) delta["added_edges"] = std::move(added_edges);
  if (!removed_edges.empty()) delta["removed_edges"] = std::move(removed_edges);
  if (before.instance_counters() != after.instance_counters()) delta["counters"] = after.instance_counters();
  return delta;
}

Engine::Engine(World world, Lexicon lexicon, EngineConfig config)
    : world_(std::move(world)),
      lexicon_(std::move(lexicon)),
      session_(std::move(config.session)),
      executor_(std::move(config.executor)),
      log_(config.log_path ? ExecutionLog(*config.log_path) : ExecutionLog()),
      strategy_(config.strategy) {}

void Engine::require_idle() {
  if (const Prompt* open = session_.open_prompt()) {
    throw Error(ErrorCode::kDialogueBusy, "prompt " + std::to_string(open->id) + " is still waiting for an answer");
  }
}

void Engine::transact(const std::function<void(Outputs&)>& body) {
  World world_before = world_;
  Session session_before = session_;
  Executor executor_before = executor_;
  std::map<std::uint64_t, PromptState> states_before;
  for (const auto& prompt : session_.prompts()) states_before.emplace(prompt.id, prompt.state);

  Outputs out;
  try {
    body(out);
  } catch (...) {
    world_ = std::move(world_before);
    session_ = std::move(session_before);
    executor_ = std::move(executor_before);
    throw;
  }

  for (const auto& record : out.records) log_.append(record);

  std::vector<Event> opened;
  for (const auto& prompt : session_.prompts()) {
    auto it = states_before.find(prompt.id);
    if (it == states_before.end()) {
      if (prompt.state == PromptState::kOpen) opened.push_back(Event{EventKind::kPromptOpened, to_json(prompt)});
    } else if (it->second == PromptState::kOpen && prompt.state != PromptState::kOpen) {
      events_.push_back(Event{EventKind::kPromptClosed,
                              Json{{"id", prompt.id},
                                   {"kind", to_string(prompt.kind)},
                                   {"state", to_string(prompt.state)}}});
    }
  }
  Json delta = graph_delta(world_before.graph, world_.graph);
  if (!delta.empty()) events_.push_back(Event{EventKind::kGraphChanged, std::move(delta)});
  for (auto& event : out.events) events_.push_back(std::move(event));
  for (auto& event : opened) events_.push_back(std::move(event));
}

IngestReport Engine::ingest(const std::vector<Observation>& observations) {
  IngestReport report;
  transact([&](Outputs& out) {
    session_.expire_stale();
    require_idle();
    report = ingest_scene(world_.graph, world_.signatures, observations);
    session_.queue_unknowns(report.unknowns);
    out.events.push_back(Event{EventKind::kSceneIngested, to_json(report)});
  });
  return report;
}

InstructionResult Engine::instruct(std::string_view text, std::optional<ParseStrategy> strategy) {
  InstructionResult result;
  transact([&](Outputs& out) {
    session_.expire_stale();
    require_idle();
    result.frame = parse(text, lexicon_, strategy.value_or(strategy_));
    result.outcome = resolve(world_.graph, result.frame);
    if (auto* resolved = std::get_if<Resolved>(&result.outcome)) {
      result.record = executor_.execute(world_.graph, world_.skills, resolved->plan);
      out.records.push_back(*result.record);
      out.events.push_back(Event{EventKind::kExecutionRecorded, to_json(*result.record)});
    } else if (auto* proposal = std::get_if<NeedsObjectConfirmation>(&result.outcome)) {
      result.prompt = session_.raise_confirm_object(*proposal);
    } else if (auto* request = std::get_if<NeedsActionConfirmation>(&result.outcome)) {
      result.prompt = session_.raise_choose_action(*request);
    }
  });
  return result;
}

std::vector<Effect> Engine::answer(const Answer& answer) {
  std::vector<Effect> effects;
  transact([&](Outputs& out) {
    effects = session_.answer(world_, executor_, answer);
    for (const auto& effect : effects) {
      if (const auto* executed = std::get_if<Executed>(&effect)) {
        out.records.push_back(executed->record);
        out.events.push_back(Event{EventKind::kExecutionRecorded, to_json(executed->record)});
      }
    }
  });
  return effects;
}

std::size_t Engine::reset_scene() {
  std::size_t removed = 0;
  transact([&](Outputs&) { removed = world_.graph.clear_scene(); });
  return removed;
}

bool Engine::expire_stale() {
  bool expired = false;
  transact([&](Outputs&) { expired = session_.expire_stale(); });
  return expired;
}

std::vector<Event> Engine::drain_events() {
  std::vector<Event> out;
  out.swap(events_);
  return out;
}

}  // namespace semem
