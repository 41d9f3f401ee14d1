// Interactive REPL and batch scenario runner.

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <iostream>
#include <optional>
#include <string>

#include "semem/engine.hpp"
#include "semem/persistence.hpp"
#include "semem/scenario.hpp"
#include "semem/seed.hpp"

namespace {

const char* kHelp =
    "commands:\n"
    "  <instruction>        e.g. YuMi, pick the green nut!\n"
    "  :scene               list scene instances\n"
    "  :ingest <file>       ingest a scene document\n"
    "  :reset               clear the scene\n"
    "  :graph               dump the graph as JSON\n"
    "  :prompt              show the open prompt\n"
    "  :answer <json>       answer the open prompt, e.g. {\"new_type\":{\"label\":\"new_obj\"}}\n"
    "  :accept | :reject    answer a ConfirmObject prompt\n"
    "  :strategy <name>     heuristic or triplet\n"
    "  :log                 execution log as JSON lines\n"
    "  :save <file>         save the prior graph\n"
    "  :help                this text\n"
    "  :quit                leave\n";

void answer_open(semem::Engine& engine, const semem::AnswerChoice& choice) {
  const semem::Prompt* open = engine.session().open_prompt();
  if (open == nullptr) throw semem::Error(semem::ErrorCode::kUnknownPrompt, "no open prompt");
  auto effects = engine.answer(semem::Answer{open->id, choice});
  std::cout << semem::format_effects(effects, engine);
}

// Returns false on :quit.
bool handle_command(semem::Engine& engine, const std::string& line) {
  std::string word = line.substr(0, line.find(' '));
  std::string rest = line.size() > word.size() ? semem::trim(line.substr(word.size())) : "";
  const auto& graph = engine.world().graph;

  if (word == ":quit" || word == ":q") return false;
  if (word == ":help") {
    std::cout << kHelp;
  } else if (word == ":scene") {
    std::cout << "scene: " << semem::format_scene(graph) << "\n";
  } else if (word == ":ingest") {
    auto observations = semem::parse_scene_document(semem::read_text_file(rest),
                                                    engine.world().signatures.config().descriptor_dim);
    std::cout << semem::format_ingest(engine.ingest(observations));
    if (const auto* open = engine.session().open_prompt()) std::cout << semem::format_prompt(*open, graph);
  } else if (word == ":reset") {
    std::cout << "removed " << engine.reset_scene() << " nodes\n";
  } else if (word == ":graph") {
    std::cout << semem::graph_to_json(graph).dump(2) << "\n";
  } else if (word == ":prompt") {
    if (const auto* open = engine.session().open_prompt()) {
      std::cout << semem::format_prompt(*open, graph);
    } else {
      std::cout << "no open prompt\n";
    }
  } else if (word == ":answer") {
    semem::Json json;
    try {
      json = semem::Json::parse(rest);
    } catch (const semem::Json::parse_error& e) {
      throw semem::Error(semem::ErrorCode::kInvalidArgument, std::string("answer is not JSON: ") + e.what());
    }
    answer_open(engine, semem::answer_choice_from_json(json));
  } else if (word == ":accept" || word == ":reject") {
    answer_open(engine, semem::ConfirmChoice{word == ":accept"});
  } else if (word == ":strategy") {
    auto strategy = semem::parse_strategy_name(rest);
    if (!strategy) throw semem::Error(semem::ErrorCode::kInvalidArgument, "unknown strategy '" + rest + "'");
    engine.set_strategy(*strategy);
    std::cout << "strategy: " << semem::to_string(*strategy) << "\n";
  } else if (word == ":log") {
    for (const auto& record : engine.log().records()) std::cout << semem::to_json(record).dump() << "\n";
  } else if (word == ":save") {
    std::cout << "wrote " << semem::save(engine.world(), rest) << " bytes\n";
  } else {
    std::cout << "! unknown command '" << word << "' (try :help)\n";
  }
  return true;
}

int run_repl(semem::Engine& engine, const std::optional<std::string>& save_on_exit) {
  std::string line;
  while (true) {
    std::cout << "semem> " << std::flush;
    if (!std::getline(std::cin, line)) break;
    line = semem::trim(line);
    if (line.empty()) continue;
    try {
      if (line.front() == ':') {
        if (!handle_command(engine, line)) break;
      } else {
        auto result = engine.instruct(line);
        std::cout << semem::format_instruction(result, engine);
        if (result.prompt) std::cout << semem::format_prompt(*result.prompt, engine.world().graph);
      }
    } catch (const semem::Error& e) {
      std::cout << semem::format_error(e);
    }
  }
  if (save_on_exit) {
    auto bytes = semem::save(engine.world(), *save_on_exit);
    spdlog::info("saved prior graph to {} ({} bytes)", *save_on_exit, bytes);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  spdlog::set_default_logger(spdlog::stderr_color_st("semem"));
  spdlog::set_level(spdlog::level::warn);

  CLI::App app{"Semantic memory robot REPL and scenario runner"};
  std::optional<std::string> prior, scene, lexicon, strategy_name, save_on_exit, replay_path, write_seed;
  bool verbose = false;
  app.add_option("--prior", prior, "prior graph document (.semem.json); built-in seed when omitted");
  app.add_option("--scene", scene, "scene document to ingest at startup");
  app.add_option("--lexicon", lexicon, "lexicon JSON");
  app.add_option("--strategy", strategy_name, "parser strategy: heuristic or triplet");
  app.add_option("--save-on-exit", save_on_exit, "save the prior graph here when the REPL ends");
  app.add_option("--replay", replay_path, "run a scenario file and exit 0 iff every expectation holds");
  app.add_option("--write-seed", write_seed, "write the built-in seed graph and exit");
  app.add_flag("-v,--verbose", verbose, "log to stderr at info level");
  CLI11_PARSE(app, argc, argv);
  if (verbose) spdlog::set_level(spdlog::level::info);

  try {
    std::optional<semem::ParseStrategy> strategy;
    if (strategy_name) {
      strategy = semem::parse_strategy_name(*strategy_name);
      if (!strategy) {
        std::cerr << "unknown strategy '" << *strategy_name << "'\n";
        return 2;
      }
    }

    if (write_seed) {
      auto bytes = semem::save(semem::seed_world(), *write_seed);
      std::cout << "wrote " << bytes << " bytes to " << *write_seed << "\n";
      return 0;
    }

    if (replay_path) {
      semem::ReplayOptions options;
      if (lexicon) options.lexicon = *lexicon;
      options.strategy = strategy;
      auto result = semem::replay(semem::load_scenario(*replay_path), options);
      std::cout << result.transcript;
      if (!result.passed) std::cerr << result.first_failure << "\n";
      return result.passed ? 0 : 1;
    }

    if (!lexicon) {
      std::cerr << "--lexicon is required\n";
      return 2;
    }
    semem::World world = prior ? semem::load(*prior) : semem::seed_world();
    semem::EngineConfig config;
    if (strategy) config.strategy = *strategy;
    semem::Engine engine(std::move(world), semem::Lexicon::load(*lexicon), std::move(config));
    if (scene) {
      auto observations = semem::parse_scene_document(semem::read_text_file(*scene),
                                                      engine.world().signatures.config().descriptor_dim);
      std::cout << semem::format_ingest(engine.ingest(observations));
      if (const auto* open = engine.session().open_prompt()) {
        std::cout << semem::format_prompt(*open, engine.world().graph);
      }
    }
    return run_repl(engine, save_on_exit);
  } catch (const semem::Error& e) {
    std::cerr << "semem: " << semem::to_string(e.code()) << ": " << e.what() << "\n";
    return 2;
  }
}
