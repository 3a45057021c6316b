#include <csignal>
#include <future>
#include <iostream>
#include <thread>

#include <pthread.h>

#include "common.hpp"
#include "peerlens/service/server.hpp"

namespace peerlens::cli {
namespace {

class SignalMask {
 public:
  SignalMask() {
    sigemptyset(&set_);
    for (int s : {SIGINT, SIGTERM, SIGHUP}) sigaddset(&set_, s);
    pthread_sigmask(SIG_BLOCK, &set_, &previous_);
  }
  ~SignalMask() { pthread_sigmask(SIG_SETMASK, &previous_, nullptr); }
  int wait() const {
    int sig = 0;
    sigwait(&set_, &sig);
    return sig;
  }

 private:
  sigset_t set_{};
  sigset_t previous_{};
};

void reload(const std::string& path, service::ModelHandle& handle, const service::EventLog& log) {
  if (path.empty()) {
    log.event("reload_skipped", "no model path configured");
    return;
  }
  try {
    handle.set(std::make_shared<const estimator::TrainedModel>(estimator::load_model(path)));
    log.event("model_reloaded");
  } catch (const Error& e) {
    // the previous model stays in place
    log.event("model_reload_failed", std::string(code_name(e.code())));
  }
}

}  // namespace

int cmd_serve(const ServeOptions& o, std::ostream& err) {
  // Blocked before any server thread exists so that every thread inherits it.
  const SignalMask signals;
  try {
    auto config = resolve_config(o.backends);
    if (o.port) config.server.port = *o.port;
    if (o.host) config.server.host = *o.host;
    if (config.server.port < 0 || config.server.port > 65535) {
      throw CommandError(kExitConfig, "config error: --port must be in [0, 65535]");
    }

    auto log = std::make_shared<const service::EventLog>();
    std::string warning;
    service::Engine engine;
    try {
      engine = service::build_engine(config, &warning);
    } catch (const Error& e) {
      throw CommandError(kExitConfig, std::string("config error: ") + e.what());
    }
    if (!warning.empty()) log->event("model_load_failed", warning);
    if (o.backends.now) {
      const auto fixed = parse_now(*o.backends.now);
      engine.now = [fixed] { return fixed; };
    }
    const auto model = engine.model;
    auto analyzer = std::make_shared<const service::Analyzer>(std::move(engine));

    service::HttpService http(analyzer, log, service::HttpService::Options{config.server.threads});
    int port = 0;
    try {
      port = http.bind(config.server.host, config.server.port);
    } catch (const Error& e) {
      throw CommandError(kExitConfig, e.what());
    }
    log->event("listening", config.server.host + ":" + std::to_string(port));

    std::promise<void> done;
    auto finished = done.get_future();
    std::thread server([&] {
      http.run();
      done.set_value();
    });

    for (;;) {
      const int sig = signals.wait();
      if (sig == SIGHUP) {
        reload(config.model_path, *model, *log);
        continue;
      }
      log->event("shutdown", sig == SIGTERM ? "SIGTERM" : "SIGINT");
      break;
    }
    http.stop();
    if (finished.wait_for(std::chrono::seconds(config.server.drain_timeout_s)) != std::future_status::ready) {
      log->event("drain_timeout", std::to_string(config.server.drain_timeout_s) + "s");
      log->flush();
      std::_Exit(kExitBackend);
    }
    server.join();
    log->event("stopped");
    log->flush();
    return kExitOk;
  } catch (const CommandError& e) {
    err << e.what() << '\n';
    return e.exit_code();
  }
}

}  // namespace peerlens::cli
