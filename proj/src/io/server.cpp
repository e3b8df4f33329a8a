#include "talkdoc/io/server.hpp"

#include <netdb.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstdlib>
#include <cstring>

#include "talkdoc/io/wire.hpp"

namespace talkdoc::io {

SerialWorker::SerialWorker() : thread_([this] { run(); }) {}

SerialWorker::~SerialWorker() { drain(); }

void SerialWorker::post(std::function<void()> job) {
  {
    std::lock_guard lock(mu_);
    jobs_.push_back(std::move(job));
  }
  cv_.notify_one();
}

void SerialWorker::drain() {
  {
    std::lock_guard lock(mu_);
    closing_ = true;
  }
  cv_.notify_one();
  if (thread_.joinable()) thread_.join();
}

void SerialWorker::run() {
  for (;;) {
    std::function<void()> job;
    {
      std::unique_lock lock(mu_);
      cv_.wait(lock, [this] { return closing_ || !jobs_.empty(); });
      if (jobs_.empty()) return;
      job = std::move(jobs_.front());
      jobs_.pop_front();
    }
    job();
  }
}

std::uint16_t default_port() {
  if (const char* env = std::getenv("TALKDOC_PORT")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0 && v < 65536) return static_cast<std::uint16_t>(v);
  }
  return 7311;
}

struct Server::Connection {
  int fd = -1;
  std::thread thread;
  std::mutex write_mu;
  std::atomic<bool> done{false};
};

namespace {

bool send_all(int fd, std::string_view data) {
  while (!data.empty()) {
    ssize_t n = ::send(fd, data.data(), data.size(), MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      return false;
    }
    data.remove_prefix(static_cast<std::size_t>(n));
  }
  return true;
}

}  // namespace

Server::Server(EngineConfig config, ServerOptions options) : config_(std::move(config)), options_(std::move(options)) {}

Server::~Server() { stop(); }

std::uint16_t Server::start() {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  hints.ai_flags = AI_PASSIVE | AI_NUMERICSERV;
  addrinfo* res = nullptr;
  const auto port_str = std::to_string(options_.port);
  if (int rc = ::getaddrinfo(options_.host.c_str(), port_str.c_str(), &hints, &res); rc != 0) {
    throw ServerError("cannot resolve host '" + options_.host + "': " + ::gai_strerror(rc));
  }
  std::string last_error = "no usable address";
  for (auto* ai = res; ai; ai = ai->ai_next) {
    int fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) continue;
    int one = 1;
    ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
    if (::bind(fd, ai->ai_addr, ai->ai_addrlen) == 0 && ::listen(fd, 16) == 0) {
      listen_fd_ = fd;
      break;
    }
    last_error = errno == EADDRINUSE ? "port " + port_str + " is busy" : std::strerror(errno);
    ::close(fd);
  }
  ::freeaddrinfo(res);
  if (listen_fd_ < 0) throw ServerError(last_error);

  sockaddr_storage addr{};
  socklen_t len = sizeof(addr);
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = addr.ss_family == AF_INET6 ? ntohs(reinterpret_cast<sockaddr_in6*>(&addr)->sin6_port)
                                     : ntohs(reinterpret_cast<sockaddr_in*>(&addr)->sin_port);
  running_ = true;
  accept_thread_ = std::thread([this] { accept_loop(); });
  return port_;
}

void Server::stop() {
  if (!running_.exchange(false)) return;
  ::shutdown(listen_fd_, SHUT_RDWR);
  ::close(listen_fd_);
  listen_fd_ = -1;
  if (accept_thread_.joinable()) accept_thread_.join();
  std::list<std::shared_ptr<Connection>> conns;
  {
    std::lock_guard lock(conns_mu_);
    conns.swap(conns_);
  }
  for (auto& c : conns) {
    ::shutdown(c->fd, SHUT_RDWR);
    if (c->thread.joinable()) c->thread.join();
    ::close(c->fd);
  }
}

void Server::accept_loop() {
  while (running_) {
    int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) {
      if (errno == EINTR) continue;
      if (!running_) return;
      continue;
    }
    auto conn = std::make_shared<Connection>();
    conn->fd = fd;
    std::lock_guard lock(conns_mu_);
    for (auto it = conns_.begin(); it != conns_.end();) {
      if ((*it)->done) {
        (*it)->thread.join();
        ::close((*it)->fd);
        it = conns_.erase(it);
      } else {
        ++it;
      }
    }
    conn->thread = std::thread([this, conn] { serve_connection(conn); });
    conns_.push_back(conn);
  }
}

void Server::serve_connection(const std::shared_ptr<Connection>& conn) {
  ProtocolHandler handler(config_);
  const auto delay = options_.unit_delay;
  ProtocolHandler::Emit emit = [conn, delay](const WireMessage& m) {
    {
      std::lock_guard lock(conn->write_mu);
      send_all(conn->fd, encode(m) + "\n");
    }
    if (delay.count() > 0 && std::holds_alternative<ReadingMsg>(m)) std::this_thread::sleep_for(delay);
  };

  {
    SerialWorker worker;
    std::string buffer;
    bool discarding = false;
    char chunk[4096];
    for (;;) {
      ssize_t n = ::recv(conn->fd, chunk, sizeof(chunk), 0);
      if (n < 0 && errno == EINTR) continue;
      if (n <= 0) break;
      buffer.append(chunk, static_cast<std::size_t>(n));
      std::size_t pos;
      while ((pos = buffer.find('\n')) != std::string::npos) {
        std::string line = buffer.substr(0, pos);
        buffer.erase(0, pos + 1);
        if (discarding) {
          discarding = false;
          continue;
        }
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        bool is_interrupt = false;
        try {
          is_interrupt = std::holds_alternative<InterruptMsg>(decode(line));
        } catch (const WireError&) {
        }
        if (is_interrupt) {
          handler.on_interrupt(emit);
        } else {
          worker.post([&handler, &emit, line = std::move(line)] { handler.on_line(line, emit); });
        }
      }
      if (buffer.size() > options_.max_line_bytes) {
        buffer.clear();
        discarding = true;
        emit(ErrorMsg{"line_too_long", "line exceeds the maximum length"});
      }
    }
    worker.drain();
  }
  ::shutdown(conn->fd, SHUT_RDWR);
  conn->done = true;
}

}  // namespace talkdoc::io
