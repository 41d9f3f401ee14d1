#include "semem/service.hpp"

#include <httplib.h>
#include <spdlog/spdlog.h>

#include <atomic>
#include <condition_variable>
#include <deque>
#include <future>
#include <mutex>
#include <thread>

#include "semem/engine.hpp"
#include "semem/error.hpp"
#include "semem/json_codec.hpp"

namespace semem {

namespace {

struct Reply {
  int status = 200;
  Json body;  // result on success, {code, message, details} otherwise
};

Reply failure(int status, std::string code, std::string message, Json details = Json::object()) {
  return Reply{status, Json{{"code", std::move(code)}, {"message", std::move(message)}, {"details", std::move(details)}}};
}

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEmptyInput:
    case ErrorCode::kNoVerbFound:
    case ErrorCode::kNoPatientFound:
    case ErrorCode::kNoTripletFound:
    case ErrorCode::kUnknownModifier:
    case ErrorCode::kUnsupportedConjunction:
    case ErrorCode::kUnknownType:
    case ErrorCode::kUnknownParent:
    case ErrorCode::kUnknownSlot:
    case ErrorCode::kUnknownSkill:
      return 422;
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kInvalidSignature:
    case ErrorCode::kMalformedScene:
    case ErrorCode::kShapeMismatch:
    case ErrorCode::kMalformedDocument:
      return 400;
    case ErrorCode::kUnknownPrompt:
      return 404;
    case ErrorCode::kDialogueBusy:
    case ErrorCode::kPromptNotOpen:
    case ErrorCode::kDuplicateType:
    case ErrorCode::kDuplicateSkill:
    case ErrorCode::kHierarchyCycle:
    case ErrorCode::kStaleProposal:
    case ErrorCode::kStalePlan:
      return 409;
    default:
      return 500;
  }
}

Reply from_error(const Error& e) { return failure(status_for(e.code()), std::string(to_string(e.code())), e.what()); }

Json parse_body(const httplib::Request& req) {
  try {
    return Json::parse(req.body);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("request body is not JSON: ") + e.what());
  }
}

std::int64_t steady_ms() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

struct StoredEvent {
  std::uint64_t seq = 0;
  std::string frame;  // ready-to-send SSE text
};

}  // namespace

struct Service::Impl {
  ServiceConfig config;
  Engine engine;  // touched by the writer thread only
  httplib::Server server;
  std::thread listener;
  std::thread writer;
  int port = 0;
  std::size_t descriptor_dim = 16;  // fixed at construction

  // Writer queue.
  std::mutex queue_mutex;
  std::condition_variable queue_cv;
  std::deque<std::packaged_task<Reply()>> queue;
  bool stopping = false;

  // Published state, guarded by state_mutex.
  mutable std::mutex state_mutex;
  std::condition_variable events_cv;
  std::deque<StoredEvent> events;
  std::uint64_t next_seq = 0;
  std::shared_ptr<const KnowledgeGraph> graph;
  Json prompt_view;
  std::vector<Json> log_records;
  bool closed = false;

  std::atomic<std::uint64_t> request_counter{0};

  static EngineConfig engine_config(const ServiceConfig& config) {
    EngineConfig out;
    out.session.prompt_timeout_ms = config.prompt_timeout_ms;
    out.session.clock = steady_ms;
    out.log_path = config.log_path;
    return out;
  }

  Impl(World world, Lexicon lexicon, ServiceConfig cfg)
      : config(std::move(cfg)), engine(std::move(world), std::move(lexicon), engine_config(config)) {
    graph = std::make_shared<const KnowledgeGraph>(engine.world().graph);
    prompt_view = make_prompt_view();
  }

  Json make_prompt_view() const {
    const Session& session = engine.session();
    Json history = Json::array();
    for (const auto& prompt : session.prompts()) history.push_back(to_json(prompt));
    const Prompt* open = session.open_prompt();
    return Json{{"open", open ? to_json(*open) : Json(nullptr)},
                {"pending_unknowns", session.pending_unknowns()},
                {"prompts", history}};
  }

  // Writer thread: moves the engine's new events into the ring and refreshes
  // the snapshot in one critical section, so readers never see one without
  // the other.
  void publish() {
    auto fresh = engine.drain_events();
    auto graph_copy = std::make_shared<const KnowledgeGraph>(engine.world().graph);
    Json prompts = make_prompt_view();
    {
      std::lock_guard lock(state_mutex);
      for (auto& event : fresh) {
        Json wire{{"seq", next_seq}, {"kind", to_string(event.kind)}, {"payload", std::move(event.payload)}};
        if (event.kind == EventKind::kExecutionRecorded) log_records.push_back(wire["payload"]);
        std::string frame = "id: " + std::to_string(next_seq) + "\nevent: " + std::string(to_string(event.kind)) +
                            "\ndata: " + wire.dump() + "\n\n";
        events.push_back(StoredEvent{next_seq, std::move(frame)});
        ++next_seq;
        while (events.size() > config.event_capacity) events.pop_front();
      }
      graph = std::move(graph_copy);
      prompt_view = std::move(prompts);
    }
    events_cv.notify_all();
  }

  void writer_loop() {
    std::unique_lock lock(queue_mutex);
    while (true) {
      queue_cv.wait_for(lock, std::chrono::seconds(1), [&] { return stopping || !queue.empty(); });
      if (queue.empty()) {
        if (stopping) break;
        lock.unlock();
        try {
          if (engine.expire_stale()) publish();
        } catch (const std::exception& e) {
          spdlog::error("prompt expiry failed: {}", e.what());
        }
        lock.lock();
        continue;
      }
      auto task = std::move(queue.front());
      queue.pop_front();
      lock.unlock();
      task();
      lock.lock();
    }
  }

  // Runs `op` on the writer thread and waits for its reply.
  template <class F>
  Reply write(F&& op) {
    std::packaged_task<Reply()> task([this, op = std::forward<F>(op)]() mutable {
      Reply reply;
      try {
        reply = op();
      } catch (const Error& e) {
        reply = from_error(e);
      } catch (const std::exception& e) {
        reply = failure(500, "Internal", e.what());
      }
      publish();
      return reply;
    });
    auto future = task.get_future();
    {
      std::lock_guard lock(queue_mutex);
      if (stopping) return failure(503, "ShuttingDown", "service is stopping");
      queue.push_back(std::move(task));
    }
    queue_cv.notify_one();
    return future.get();
  }

  void send(const httplib::Request& req, httplib::Response& res, const Reply& reply) {
    std::string id = req.has_header("X-Request-Id") ? req.get_header_value("X-Request-Id")
                                                    : "req-" + std::to_string(++request_counter);
    Json envelope{{"request_id", id}, {"ok", reply.status < 400}};
    envelope[reply.status < 400 ? "result" : "error"] = reply.body;
    res.status = reply.status;
    res.set_header("X-Request-Id", id);
    res.set_content(envelope.dump(), "application/json");
    spdlog::debug("{} {} -> {} ({})", req.method, req.path, reply.status, id);
  }

  // Parses outside the writer where possible; parse failures never reach it.
  template <class F>
  void handle(const httplib::Request& req, httplib::Response& res, F&& body) {
    Reply reply;
    try {
      reply = body();
    } catch (const Error& e) {
      reply = from_error(e);
    } catch (const std::exception& e) {
      reply = failure(500, "Internal", e.what());
    }
    send(req, res, reply);
  }

  void routes() {
    server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                {"Access-Control-Allow-Headers", "Content-Type, X-Request-Id"},
                                {"Access-Control-Expose-Headers", "X-Request-Id"}});
    server.Options(".*", [](const httplib::Request&, httplib::Response& res) {
      res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
      res.status = 204;
    });

    server.Post("/scene", [this](const httplib::Request& req, httplib::Response& res) {
      handle(req, res, [&] {
        auto observations = parse_scene_document(req.body, descriptor_dim);
        return write([this, observations = std::move(observations)] {
          IngestReport report = engine.ingest(observations);
          Json result = to_json(report);
          const Prompt* open = engine.session().open_prompt();
          result["prompt"] = open ? to_json(*open) : Json(nullptr);
          return Reply{200, std::move(result)};
        });
      });
    });

    server.Post("/instruction", [this](const httplib::Request& req, httplib::Response& res) {
      handle(req, res, [&] {
        Json body = parse_body(req);
        if (!body.is_object() || !body.contains("text") || !body.at("text").is_string()) {
          throw Error(ErrorCode::kInvalidArgument, "expected {\"text\": string, \"strategy\"?: string}");
        }
        std::optional<ParseStrategy> strategy;
        if (body.contains("strategy") && !body.at("strategy").is_null()) {
          if (!body.at("strategy").is_string()) throw Error(ErrorCode::kInvalidArgument, "strategy must be a string");
          strategy = parse_strategy_name(body.at("strategy").get<std::string>());
          if (!strategy) throw Error(ErrorCode::kInvalidArgument, "unknown strategy");
        }
        std::string text = body.at("text").get<std::string>();
        return write([this, text = std::move(text), strategy] {
          InstructionResult result = engine.instruct(text, strategy);
          Json out{{"frame", to_json(result.frame)},
                   {"outcome", to_json(result.outcome)},
                   {"record", result.record ? to_json(*result.record) : Json(nullptr)},
                   {"prompt", result.prompt ? to_json(*result.prompt) : Json(nullptr)}};
          return Reply{200, std::move(out)};
        });
      });
    });

    server.Post(R"(/prompt/(\d+)/answer)", [this](const httplib::Request& req, httplib::Response& res) {
      handle(req, res, [&] {
        std::uint64_t id = std::stoull(req.matches[1].str());
        Json body = parse_body(req);
        if (!body.is_object() || !body.contains("choice")) {
          throw Error(ErrorCode::kInvalidArgument, "expected {\"choice\": {...}}");
        }
        AnswerChoice choice = answer_choice_from_json(body.at("choice"));
        return write([this, id, choice = std::move(choice)] {
          auto effects = engine.answer(Answer{id, choice});
          Json list = Json::array();
          for (const auto& effect : effects) list.push_back(to_json(effect));
          const Prompt* open = engine.session().open_prompt();
          return Reply{200, Json{{"effects", list}, {"prompt", open ? to_json(*open) : Json(nullptr)}}};
        });
      });
    });

    server.Post("/reset_scene", [this](const httplib::Request& req, httplib::Response& res) {
      handle(req, res, [&] {
        return write([this] { return Reply{200, Json{{"removed", engine.reset_scene()}}}; });
      });
    });

    server.Get("/prompt", [this](const httplib::Request& req, httplib::Response& res) {
      handle(req, res, [&] {
        std::lock_guard lock(state_mutex);
        return Reply{200, prompt_view};
      });
    });

    server.Get("/graph", [this](const httplib::Request& req, httplib::Response& res) {
      handle(req, res, [&] {
        std::shared_ptr<const KnowledgeGraph> g;
        std::uint64_t seq = 0;
        {
          std::lock_guard lock(state_mutex);
          g = graph;
          seq = next_seq;
        }
        return Reply{200, Json{{"next_seq", seq}, {"graph", graph_to_json(*g)}}};
      });
    });

    server.Get("/log", [this](const httplib::Request& req, httplib::Response& res) {
      handle(req, res, [&] {
        std::size_t from = req.has_param("from") ? std::stoull(req.get_param_value("from")) : 0;
        std::size_t limit = req.has_param("limit") ? std::stoull(req.get_param_value("limit")) : 100;
        std::lock_guard lock(state_mutex);
        Json records = Json::array();
        for (std::size_t i = from; i < log_records.size() && records.size() < limit; ++i) {
          records.push_back(log_records[i]);
        }
        return Reply{200, Json{{"total", log_records.size()}, {"from", from}, {"records", records}}};
      });
    });

    server.Get("/events", [this](const httplib::Request& req, httplib::Response& res) { events_route(req, res); });
  }


  void events_route(const httplib::Request& req, httplib::Response& res) {
    std::uint64_t from = 0;
    try {
      if (req.has_param("from")) from = std::stoull(req.get_param_value("from"));
    } catch (const std::exception&) {
      send(req, res, failure(400, "InvalidArgument", "from must be a non-negative integer"));
      return;
    }
    if (req.has_header("Last-Event-ID")) {
      try {
        from = std::stoull(req.get_header_value("Last-Event-ID")) + 1;
      } catch (const std::exception&) {
      }
    }
    bool once = req.has_param("once") && req.get_param_value("once") == "1";
    {
      std::lock_guard lock(state_mutex);
      std::uint64_t first = events.empty() ? next_seq : events.front().seq;
      if (from < first) {
        send(req, res,
             failure(410, "CursorExpired", "events before " + std::to_string(first) + " are gone; refetch /graph",
                     Json{{"first_available", first}, {"next_seq", next_seq}}));
        return;
      }
      if (from > next_seq) {
        send(req, res,
             failure(404, "UnknownCursor", "cursor is ahead of the stream", Json{{"next_seq", next_seq}}));
        return;
      }
    }
    res.set_header("Cache-Control", "no-cache");
    res.set_chunked_content_provider(
        "text/event-stream", [this, cursor = from, once](std::size_t, httplib::DataSink& sink) mutable {
          std::unique_lock lock(state_mutex);
          std::uint64_t first = events.empty() ? next_seq : events.front().seq;
          if (cursor < first) {
            // The consumer fell behind the ring while streaming.
            lock.unlock();
            std::string frame = "event: overflow\ndata: {\"first_available\":" + std::to_string(first) + "}\n\n";
            sink.write(frame.data(), frame.size());
            sink.done();
            return true;
          }
          if (cursor >= next_seq) {
            if (once || closed) {
              lock.unlock();
              sink.done();
              return true;
            }
            events_cv.wait_for(lock, config.keepalive, [&] { return closed || cursor < next_seq; });
            if (closed) {
              lock.unlock();
              sink.done();
              return true;
            }
            if (cursor >= next_seq) {
              lock.unlock();
              static constexpr char kKeepalive[] = ": keepalive\n\n";
              return sink.write(kKeepalive, sizeof(kKeepalive) - 1);
            }
          }
          std::string chunk;
          for (; cursor < next_seq && chunk.size() < (1u << 16); ++cursor) chunk += events[cursor - first].frame;
          lock.unlock();
          return sink.write(chunk.data(), chunk.size());
        });
  }
};

Service::Service(World world, Lexicon lexicon, ServiceConfig config)
    : impl_(std::make_unique<Impl>(std::move(world), std::move(lexicon), std::move(config))) {
  impl_->descriptor_dim = impl_->engine.world().signatures.config().descriptor_dim;
  std::size_t threads = impl_->config.threads;
  impl_->server.new_task_queue = [threads] { return new httplib::ThreadPool(threads); };
  impl_->routes();
}

Service::~Service() { stop(); }

int Service::start() {
  Impl& s = *impl_;
  if (s.config.port == 0) {
    s.port = s.server.bind_to_any_port(s.config.host);
  } else {
    s.port = s.server.bind_to_port(s.config.host, s.config.port) ? s.config.port : -1;
  }
  if (s.port < 0) {
    throw Error(ErrorCode::kIoFailure, "cannot bind " + s.config.host + ":" + std::to_string(s.config.port));
  }
  s.writer = std::thread([&s] { s.writer_loop(); });
  s.listener = std::thread([&s] { s.server.listen_after_bind(); });
  s.server.wait_until_ready();
  spdlog::info("listening on {}:{}", s.config.host, s.port);
  return s.port;
}

void Service::stop() {
  Impl& s = *impl_;
  {
    std::lock_guard lock(s.state_mutex);
    s.closed = true;
  }
  s.events_cv.notify_all();
  if (s.server.is_running()) s.server.stop();
  if (s.listener.joinable()) s.listener.join();
  {
    std::lock_guard lock(s.queue_mutex);
    s.stopping = true;
  }
  s.queue_cv.notify_all();
  if (s.writer.joinable()) s.writer.join();
}

Service::Snapshot Service::snapshot() const {
  std::lock_guard lock(impl_->state_mutex);
  return Snapshot{*impl_->graph, impl_->next_seq};
}

}  // namespace semem
