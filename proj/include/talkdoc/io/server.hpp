#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <list>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

#include "talkdoc/io/engine_config.hpp"

namespace talkdoc::io {

/// Runs queued jobs in order on one thread. Used to keep a session's
/// utterances strictly sequential while interrupts bypass the queue.
class SerialWorker {
 public:
  SerialWorker();
  ~SerialWorker();

  SerialWorker(const SerialWorker&) = delete;
  SerialWorker& operator=(const SerialWorker&) = delete;

  void post(std::function<void()> job);
  /// Runs every queued job, then stops the thread.
  void drain();

 private:
  void run();

  std::mutex mu_;
  std::condition_variable cv_;
  std::deque<std::function<void()>> jobs_;
  bool closing_ = false;
  std::thread thread_;
};

class ServerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ServerOptions {
  std::string host = "127.0.0.1";
  std::uint16_t port = 0;  // 0 picks a free port
  /// Pause after each reading unit, giving interrupts time to arrive.
  std::chrono::milliseconds unit_delay{0};
  std::size_t max_line_bytes = 1 << 20;
};

/// Newline-delimited JSON session server; one session per connection.
class Server {
 public:
  Server(EngineConfig config, ServerOptions options);
  ~Server();

  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  /// Binds and starts accepting. Returns the bound port.
  std::uint16_t start();
  /// Closes the listener and all connections, then joins their threads.
  void stop();
  std::uint16_t port() const { return port_; }

 private:
  struct Connection;

  void accept_loop();
  void serve_connection(const std::shared_ptr<Connection>& conn);

  EngineConfig config_;
  ServerOptions options_;
  int listen_fd_ = -1;
  std::uint16_t port_ = 0;
  std::atomic<bool> running_{false};
  std::thread accept_thread_;
  std::mutex conns_mu_;
  std::list<std::shared_ptr<Connection>> conns_;
};

/// Default port: $TALKDOC_PORT when set and valid, else 7311.
std::uint16_t default_port();

}  // namespace talkdoc::io
