#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "semem/graph.hpp"
#include "semem/nlparse.hpp"
#include "semem/world.hpp"

namespace semem {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  std::size_t event_capacity = 10000;
  std::optional<std::int64_t> prompt_timeout_ms = 10 * 60 * 1000;
  std::size_t threads = 32;  // each open event stream holds one
  std::optional<std::filesystem::path> log_path;
  std::chrono::milliseconds keepalive{15000};
};

/// HTTP/JSON front of one engine.
///
///   POST /scene                 scene document -> ingest report
///   POST /instruction           {text, strategy?} -> frame, outcome, record?, prompt?
///   POST /prompt/{id}/answer    {choice} -> effects
///   GET  /prompt                open prompt, queue length, history
///   GET  /graph                 {seq, graph}; seq is the last event applied
///   GET  /events?from=N[&once=1]  server-sent events from cursor N
///   GET  /log?from=&limit=      execution records
///   POST /reset_scene           clears the scene subgraph
///
/// Every response is an envelope {request_id, ok, result | error{code,
/// message, details}} and echoes X-Request-Id. Mutations run one at a time on
/// a single writer thread; reads use the snapshot published after each write.
class Service {
 public:
  Service(World world, Lexicon lexicon, ServiceConfig config = {});
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Binds and serves on background threads. Returns the bound port.
  int start();
  void stop();

  struct Snapshot {
    KnowledgeGraph graph;
    std::uint64_t next_seq = 0;  // events [0, next_seq) are reflected
  };
  Snapshot snapshot() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace semem
