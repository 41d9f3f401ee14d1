#include "semem/scenario.hpp"

#include <sstream>

#include "semem/persistence.hpp"

namespace semem {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string label_of(const KnowledgeGraph& graph, NodeId id) {
  const Node* node = graph.find_node(id);
  return node ? node->label : "#" + std::to_string(id.value);
}

std::string format_filters(const std::vector<PropertyValue>& values) {
  if (values.empty()) return "-";
  std::string out;
  for (const auto& v : values) {
    if (!out.empty()) out += ' ';
    out += v.slot + "=" + format_value(v.value);
  }
  return out;
}

void execution_block(std::ostringstream& out, const ExecutionRecord& record, const KnowledgeGraph& graph) {
  out << "[execution]\n";
  out << "  skill: " << record.plan.skill_ref << "\n";
  out << "  steps:";
  for (const auto& run : record.steps_run) out << ' ' << run.step;
  out << "\n";
  if (record.failure) {
    out << "  result: failed at step " << record.failure->step_index << " (" << record.failure->reason << ")\n";
  } else {
    out << "  result: success\n";
  }
  for (const auto& label : record.scene_delta.removed) out << "  removed: " << label << "\n";
  for (const auto& [label, pose] : record.scene_delta.moved) out << "  moved: " << label << " to " << format_value(pose) << "\n";
  out << "  scene: " << format_scene(graph) << "\n";
}

std::string describe_outcome_line(const ResolutionOutcome& outcome) {
  return std::visit(overloaded{[](const Resolved&) { return std::string("Resolved"); },
                               [](const NeedsObjectConfirmation& n) {
                                 return "NeedsObjectConfirmation (" + n.requested_type + ")";
                               },
                               [](const NeedsActionConfirmation& n) {
                                 return "NeedsActionConfirmation (" + n.frame.action + " on " + n.object_type + ")";
                               },
                               [](const UnknownTypeWord& u) { return "UnknownTypeWord (" + u.word + ")"; },
                               [](const NoInstanceInScene& n) { return "NoInstanceInScene (" + n.type_label + ")"; },
                               [](const NoActorInScene& n) { return "NoActorInScene (" + n.actor_type + ")"; }},
                    outcome);
}

}  // namespace

std::string format_scene(const KnowledgeGraph& graph) {
  std::vector<std::string> labels;
  for (NodeId id : graph.instances()) labels.push_back(graph.node(id).label);
  std::sort(labels.begin(), labels.end());
  if (labels.empty()) return "-";
  std::string out;
  for (const auto& label : labels) out += (out.empty() ? "" : ", ") + label;
  return out;
}

std::string format_ingest(const IngestReport& report) {
  std::ostringstream out;
  out << "[scene]\n  instantiated:";
  if (report.instantiated.empty()) out << " -";
  for (std::size_t i = 0; i < report.instantiated.size(); ++i) {
    const auto& item = report.instantiated[i];
    out << (i == 0 ? " " : ", ") << item.label << " (" << item.type_label << ")";
  }
  out << "\n  unknown: " << report.unknowns.size() << "\n  discarded: " << report.discarded << "\n";
  return out.str();
}

std::string format_instruction(const InstructionResult& result, const Engine& engine) {
  const KnowledgeGraph& graph = engine.world().graph;
  const IntentFrame& frame = result.frame;
  std::ostringstream out;
  out << "[interpretation]\n"
      << "  actor: " << frame.actor << "\n"
      << "  action: " << frame.action << "\n"
      << "  patient: " << frame.patient.type_word << "\n"
      << "  determiner: " << to_string(frame.patient.determiner) << "\n"
      << "  modifiers: " << format_filters(frame.patient.modifiers) << "\n";

  out << "[match]\n  outcome: " << describe_outcome_line(result.outcome) << "\n";
  std::visit(overloaded{[&](const Resolved& r) {
                          // The patient may already be gone; the record keeps its label.
                          out << "  actor: "
                              << (result.record ? result.record->actor_label : label_of(graph, r.plan.actor_instance))
                              << "\n  patient: "
                              << (result.record ? result.record->patient_label
                                                : label_of(graph, r.plan.patient_instance))
                              << "\n"
                              << "  action: " << r.plan.action_label << " -> " << r.plan.skill_ref << "\n";
                        },
                        [&](const NeedsObjectConfirmation& n) {
                          out << "  requested: " << n.requested_type << " with "
                              << format_filters(frame.patient.modifiers) << "\n"
                              << "  closest: " << label_of(graph, n.proposed) << " (" << n.mismatched.slot << "="
                              << format_value(n.mismatched.value) << ")\n";
                        },
                        [&](const NeedsActionConfirmation& n) {
                          out << "  actor: " << label_of(graph, n.actor_instance) << "\n"
                              << "  patient: " << label_of(graph, n.patient_instance) << "\n"
                              << "  missing: " << n.frame.action << " for " << n.actor_type << " on " << n.object_type
                              << "\n  near misses:";
                          if (n.near_misses.empty()) out << " -";
                          for (std::size_t i = 0; i < n.near_misses.size(); ++i) {
                            const auto& m = n.near_misses[i];
                            out << (i == 0 ? " " : ", ") << m.action_label << " on " << m.object_type;
                          }
                          out << "\n";
                        },
                        [](const auto&) {}},
             result.outcome);

  if (result.record) {
    std::ostringstream block;
    execution_block(block, *result.record, graph);
    out << block.str();
  } else if (result.prompt) {
    out << "[execution]\n  waiting on prompt " << result.prompt->id << " (" << to_string(result.prompt->kind)
        << ")\n";
  } else {
    out << "[execution]\n  nothing executed\n";
  }
  return out.str();
}

std::string format_prompt(const Prompt& prompt, const KnowledgeGraph& graph) {
  std::ostringstream out;
  out << "[prompt " << prompt.id << "] " << to_string(prompt.kind) << "\n";
  std::visit(overloaded{[&](const NeedsObjectConfirmation& n) {
                          out << "  accept " << label_of(graph, n.proposed) << " (" << n.mismatched.slot << "="
                              << format_value(n.mismatched.value) << ") instead?\n";
                        },
                        [&](const NeedsActionConfirmation& n) {
                          out << "  no '" << n.frame.action << "' for " << n.actor_type << " on " << n.object_type
                              << "\n  link to:";
                          if (n.near_misses.empty()) out << " -";
                          for (std::size_t i = 0; i < n.near_misses.size(); ++i) {
                            const auto& m = n.near_misses[i];
                            out << (i == 0 ? " " : ", ") << m.action_label << " on " << m.object_type;
                          }
                          out << "\n  or teach a new skill\n";
                        },
                        [&](const Observation& o) {
                          out << "  detected: color=" << o.signature.color_class << " shape=" << o.signature.shape_class
                              << " size="
                              << format_value(std::vector<double>(o.signature.size.begin(), o.signature.size.end()))
                              << " position=" << format_value(o.pose) << "\n";
                        },
                        [&](const TeachRequest& t) {
                          out << "  teach '" << t.action_label << "' for " << t.actor_type << " on " << t.object_type
                              << "\n";
                        }},
             prompt.payload);
  return out.str();
}

std::string format_effects(const std::vector<Effect>& effects, const Engine& engine) {
  const KnowledgeGraph& graph = engine.world().graph;
  std::ostringstream out;
  out << "[effects]\n";
  if (effects.empty()) out << "  none\n";
  std::ostringstream trailer;
  for (const auto& effect : effects) {
    std::visit(overloaded{[&](const TypeCreated& e) {
                            out << "  type created: " << e.label;
                            if (e.parent) out << " is " << *e.parent;
                            out << "\n";
                          },
                          [&](const SubtypeLinked& e) { out << "  subtype linked: " << e.child << " is " << e.parent << "\n"; },
                          [&](const SignatureRegistered& e) { out << "  signature registered: " << e.type_label << "\n"; },
                          [&](const InstanceCreated& e) {
                            out << "  instance created: " << e.label << " (" << e.type_label << ")\n";
                          },
                          [&](const SkillTaught& e) {
                            out << "  skill taught: " << e.name << " (" << e.steps << " steps)\n";
                          },
                          [&](const ActionDefined& e) {
                            out << "  action defined: " << e.actor_type << " " << e.action_label << " " << e.object_type
                                << " -> " << e.skill_ref << "\n";
                          },
                          [&](const Executed& e) {
                            out << "  executed: " << e.record.plan.action_label << " " << e.record.patient_label << "\n";
                            execution_block(trailer, e.record, graph);
                          },
                          [&](const OutcomeReported& e) {
                            out << "  outcome: " << describe_outcome_line(e.outcome) << "\n";
                          },
                          [&](const ObservationDropped&) { out << "  observation dropped\n"; },
                          [&](const PromptRaised& e) {
                            out << "  prompt raised: " << e.id << " (" << to_string(e.kind) << ")\n";
                            if (const Prompt* p = engine.session().find(e.id)) trailer << format_prompt(*p, graph);
                          }},
               effect);
  }
  return out.str() + trailer.str();
}

std::string format_error(const Error& error) {
  return "! error " + std::string(to_string(error.code())) + ": " + error.what() + "\n";
}

// ---------------------------------------------------------------------------
// Scenario files

namespace {

[[noreturn]] void bad_scenario(const std::string& message) { throw Error(ErrorCode::kMalformedDocument, message); }

std::string step_text(const Json& step, const char* key, const std::string& where) {
  const Json& v = step.at(key);
  if (!v.is_string()) bad_scenario(where + "." + key + ": expected string");
  return v.get<std::string>();
}

}  // namespace

Scenario load_scenario(const std::filesystem::path& path) {
  std::string text = read_text_file(path);
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    bad_scenario(path.filename().string() + ": not valid JSON (" + std::string(e.what()) + ")");
  }
  if (!doc.is_object()) bad_scenario("scenario: expected object");
  for (const auto& [key, value] : doc.items()) {
    if (key != "prior_graph" && key != "scene" && key != "lexicon" && key != "strategy" && key != "script" &&
        key != "description") {
      bad_scenario("scenario." + key + ": unknown field");
    }
  }
  std::filesystem::path base = path.parent_path();
  auto path_field = [&](const char* key) -> std::filesystem::path {
    if (!doc.contains(key) || !doc.at(key).is_string()) bad_scenario(std::string("scenario.") + key + ": expected path");
    return base / doc.at(key).get<std::string>();
  };

  Scenario scenario;
  scenario.prior_graph = path_field("prior_graph");
  scenario.scene = path_field("scene");
  if (doc.contains("lexicon")) scenario.lexicon = path_field("lexicon");
  if (doc.contains("strategy")) {
    if (!doc.at("strategy").is_string()) bad_scenario("scenario.strategy: expected string");
    scenario.strategy = parse_strategy_name(doc.at("strategy").get<std::string>());
    if (!scenario.strategy) bad_scenario("scenario.strategy: unknown strategy");
  }
  if (!doc.contains("script") || !doc.at("script").is_array()) bad_scenario("scenario.script: expected array");
  const Json& script = doc.at("script");
  for (std::size_t i = 0; i < script.size(); ++i) {
    std::string where = "scenario.script[" + std::to_string(i) + "]";
    const Json& step = script[i];
    if (!step.is_object() || step.size() != 1) bad_scenario(where + ": expected object with one key");
    const std::string& key = step.begin().key();
    if (key == "instruct") {
      scenario.script.push_back(InstructStep{step_text(step, "instruct", where)});
    } else if (key == "answer") {
      const Json& body = step.at("answer");
      if (!body.is_object() || !body.contains("choice")) bad_scenario(where + ".answer: expected {choice}");
      AnswerStep answer;
      if (body.contains("prompt_id")) {
        if (!body.at("prompt_id").is_number_unsigned()) bad_scenario(where + ".answer.prompt_id: expected integer");
        answer.prompt_id = body.at("prompt_id").get<std::uint64_t>();
      }
      try {
        answer.choice = answer_choice_from_json(body.at("choice"));
      } catch (const Error& e) {
        bad_scenario(where + ".answer: " + e.what());
      }
      scenario.script.push_back(std::move(answer));
    } else if (key == "expect_removed") {
      scenario.script.push_back(ExpectRemoved{step_text(step, "expect_removed", where)});
    } else if (key == "expect_present") {
      scenario.script.push_back(ExpectPresent{step_text(step, "expect_present", where)});
    } else if (key == "expect_prompt") {
      scenario.script.push_back(ExpectPrompt{step_text(step, "expect_prompt", where)});
    } else if (key == "expect_outcome") {
      scenario.script.push_back(ExpectOutcome{step_text(step, "expect_outcome", where)});
    } else if (key == "expect_error") {
      scenario.script.push_back(ExpectError{step_text(step, "expect_error", where)});
    } else if (key == "expect_prior_unchanged") {
      scenario.script.push_back(ExpectPriorUnchanged{});
    } else {
      bad_scenario(where + ": unknown step '" + key + "'");
    }
  }
  return scenario;
}

ScriptRunner::ScriptRunner(Engine& engine) : engine_(engine), prior_before_(serialize(engine.world())) {
  remember_scene();
}

void ScriptRunner::remember_scene() {
  for (NodeId id : engine_.world().graph.instances()) seen_labels_.insert(engine_.world().graph.node(id).label);
}

bool ScriptRunner::run(const ScriptStep& step, std::string& transcript, std::string& failure) {
  const KnowledgeGraph& graph = engine_.world().graph;
  auto check = [&](bool ok, const std::string& what) {
    transcript += "= expect " + what + ": " + (ok ? "ok" : "FAIL") + "\n";
    if (!ok) failure = "expectation failed: " + what;
    return ok;
  };
  auto live = [&](const std::string& label) {
    auto id = graph.find_scene_node(label);
    return id && graph.is_live_instance(*id);
  };

  return std::visit(
      overloaded{
          [&](const InstructStep& s) {
            transcript += "\n> " + s.text + "\n";
            try {
              InstructionResult result = engine_.instruct(s.text);
              transcript += format_instruction(result, engine_);
              if (result.prompt) transcript += format_prompt(*result.prompt, engine_.world().graph);
              last_outcome_ = std::string(outcome_name(result.outcome));
              last_error_.reset();
            } catch (const Error& e) {
              transcript += format_error(e);
              last_outcome_.reset();
              last_error_ = std::string(to_string(e.code()));
            }
            remember_scene();
            return true;
          },
          [&](const AnswerStep& s) {
            std::optional<std::uint64_t> id = s.prompt_id;
            if (!id) {
              if (const Prompt* open = engine_.session().open_prompt()) id = open->id;
            }
            transcript += "\n? answer prompt " + (id ? std::to_string(*id) : std::string("-")) + ": " +
                          to_json(s.choice).dump() + "\n";
            try {
              if (!id) throw Error(ErrorCode::kUnknownPrompt, "no open prompt to answer");
              auto effects = engine_.answer(Answer{*id, s.choice});
              transcript += format_effects(effects, engine_);
              for (const auto& effect : effects) {
                if (std::holds_alternative<Executed>(effect)) last_outcome_ = "Resolved";
                if (const auto* reported = std::get_if<OutcomeReported>(&effect)) {
                  last_outcome_ = std::string(outcome_name(reported->outcome));
                }
              }
              last_error_.reset();
            } catch (const Error& e) {
              transcript += format_error(e);
              last_error_ = std::string(to_string(e.code()));
            }
            remember_scene();
            return true;
          },
          [&](const ExpectRemoved& s) {
            return check(seen_labels_.contains(s.label) && !live(s.label), "removed " + s.label);
          },
          [&](const ExpectPresent& s) { return check(live(s.label), "present " + s.label); },
          [&](const ExpectPrompt& s) {
            const Prompt* open = engine_.session().open_prompt();
            std::string actual = open ? std::string(to_string(open->kind)) : "none";
            return check(actual == s.kind, "prompt " + s.kind + (actual == s.kind ? "" : " (open: " + actual + ")"));
          },
          [&](const ExpectOutcome& s) {
            std::string actual = last_outcome_.value_or("none");
            return check(actual == s.variant,
                         "outcome " + s.variant + (actual == s.variant ? "" : " (got " + actual + ")"));
          },
          [&](const ExpectError& s) {
            std::string actual = last_error_.value_or("none");
            return check(actual == s.code, "error " + s.code + (actual == s.code ? "" : " (got " + actual + ")"));
          },
          [&](const ExpectPriorUnchanged&) {
            return check(serialize(engine_.world()) == prior_before_, "prior graph unchanged");
          }},
      step);
}

ReplayResult replay(const Scenario& scenario, const ReplayOptions& options) {
  ReplayResult result;
  World world = load(scenario.prior_graph);
  auto lexicon_path = scenario.lexicon ? scenario.lexicon : options.lexicon;
  if (!lexicon_path) throw Error(ErrorCode::kInvalidArgument, "scenario names no lexicon and none was given");
  Lexicon lexicon = Lexicon::load(*lexicon_path);
  EngineConfig config;
  if (auto s = options.strategy ? options.strategy : scenario.strategy) config.strategy = *s;
  std::size_t dim = world.signatures.config().descriptor_dim;
  Engine engine(std::move(world), std::move(lexicon), std::move(config));

  std::ostringstream header;
  header << "# prior: " << scenario.prior_graph.filename().string() << "\n"
         << "# scene: " << scenario.scene.filename().string() << "\n"
         << "# strategy: " << to_string(engine.strategy()) << "\n";
  result.transcript = header.str();

  auto observations = parse_scene_document(read_text_file(scenario.scene), dim);
  IngestReport report = engine.ingest(observations);
  result.transcript += format_ingest(report);
  if (const Prompt* open = engine.session().open_prompt()) {
    result.transcript += format_prompt(*open, engine.world().graph);
  }

  ScriptRunner runner(engine);
  for (const auto& step : scenario.script) {
    if (!runner.run(step, result.transcript, result.first_failure)) {
      result.passed = false;
      break;
    }
  }
  result.transcript += result.passed ? "\nPASS\n" : "\nFAIL: " + result.first_failure + "\n";
  return result;
}

}  // namespace semem
