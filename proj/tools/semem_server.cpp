// HTTP/SSE server over one engine. Flags override the ADDR, PRIOR_GRAPH and
// LEXICON environment variables.

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <csignal>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "semem/error.hpp"
#include "semem/persistence.hpp"
#include "semem/seed.hpp"
#include "semem/service.hpp"

namespace {

std::optional<std::string> env(const char* name) {
  const char* value = std::getenv(name);
  if (value == nullptr || *value == '\0') return std::nullopt;
  return std::string(value);
}

// "host:port", ":port" or "port".
void split_address(const std::string& addr, std::string& host, int& port) {
  auto colon = addr.rfind(':');
  std::string port_text = colon == std::string::npos ? addr : addr.substr(colon + 1);
  if (colon != std::string::npos && colon > 0) host = addr.substr(0, colon);
  port = std::stoi(port_text);
  if (port < 0 || port > 65535) throw std::out_of_range("port");
}

}  // namespace

int main(int argc, char** argv) {
  spdlog::set_default_logger(spdlog::stderr_color_mt("semem_server"));

  CLI::App app{"Semantic memory HTTP service"};
  std::optional<std::string> addr = env("ADDR");
  std::optional<std::string> prior = env("PRIOR_GRAPH");
  std::optional<std::string> lexicon = env("LEXICON");
  std::optional<std::string> log_path;
  std::optional<std::int64_t> timeout_ms;
  bool verbose = false;
  app.add_option("--addr", addr, "bind address host:port (env ADDR, default 127.0.0.1:8080)");
  app.add_option("--prior", prior, "prior graph document (env PRIOR_GRAPH; built-in seed when unset)");
  app.add_option("--lexicon", lexicon, "lexicon JSON (env LEXICON)");
  app.add_option("--log", log_path, "append execution records to this JSONL file");
  app.add_option("--prompt-timeout-ms", timeout_ms, "idle prompt expiry (default 600000)");
  app.add_flag("-v,--verbose", verbose, "debug logging");
  CLI11_PARSE(app, argc, argv);
  spdlog::set_level(verbose ? spdlog::level::debug : spdlog::level::info);

  if (!lexicon) {
    std::cerr << "a lexicon is required (--lexicon or LEXICON)\n";
    return 2;
  }

  semem::ServiceConfig config;
  try {
    if (addr) split_address(*addr, config.host, config.port);
  } catch (const std::exception&) {
    std::cerr << "bad address '" << *addr << "'\n";
    return 2;
  }
  if (timeout_ms) config.prompt_timeout_ms = *timeout_ms;
  if (log_path) config.log_path = *log_path;

  // Block the shutdown signals in every thread; the main thread waits for them.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  try {
    semem::World world = prior ? semem::load(*prior) : semem::seed_world();
    semem::Service service(std::move(world), semem::Lexicon::load(*lexicon), config);
    int port = service.start();
    std::cout << "listening on " << config.host << ":" << port << std::endl;
    int received = 0;
    sigwait(&signals, &received);
    spdlog::info("signal {}, shutting down", received);
    service.stop();
  } catch (const semem::Error& e) {
    std::cerr << "semem_server: " << semem::to_string(e.code()) << ": " << e.what() << "\n";
    return 2;
  }
  return 0;
}
