#pragma once

#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include "talkdoc/dialogue.hpp"
#include "talkdoc/io/engine_config.hpp"

namespace talkdoc::io {

// Client -> server.
struct UtteranceMsg {
  std::string text;
  friend bool operator==(const UtteranceMsg&, const UtteranceMsg&) = default;
};
struct InterruptMsg {
  friend bool operator==(const InterruptMsg&, const InterruptMsg&) = default;
};
struct ExportMsg {
  ExportFormat format = ExportFormat::Markdown;
  friend bool operator==(const ExportMsg&, const ExportMsg&) = default;
};

// Server -> client.
struct ResponseMsg {
  ResponseKind kind = ResponseKind::Confirmation;
  std::string literal;
  std::string verbalized;
  friend bool operator==(const ResponseMsg&, const ResponseMsg&) = default;
};
struct ReadingMsg {
  std::size_t index = 0;
  std::size_t total = 0;
  std::string literal;
  std::string verbalized;
  friend bool operator==(const ReadingMsg&, const ReadingMsg&) = default;
};
struct DocumentMsg {
  ExportFormat format = ExportFormat::Markdown;
  std::string body;
  friend bool operator==(const DocumentMsg&, const DocumentMsg&) = default;
};
struct ErrorMsg {
  std::string code;
  std::string message;
  friend bool operator==(const ErrorMsg&, const ErrorMsg&) = default;
};

using WireMessage =
    std::variant<UtteranceMsg, InterruptMsg, ExportMsg, ResponseMsg, ReadingMsg, DocumentMsg, ErrorMsg>;

/// Decoding failure; `code` is the wire error code sent back to the client.
class WireError : public std::runtime_error {
 public:
  WireError(std::string code, const std::string& message) : std::runtime_error(message), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

/// One JSON object, no trailing newline.
std::string encode(const WireMessage& message);
WireMessage decode(std::string_view line);

WireMessage to_wire(const SystemResponse& response);

/// Per-connection protocol state: one session, fed line by line.
class ProtocolHandler {
 public:
  using Emit = std::function<void(const WireMessage&)>;

  explicit ProtocolHandler(const EngineConfig& config);

  /// Handles one client line. Never throws for bad input; every malformed
  /// line yields an ErrorMsg.
  void on_line(std::string_view line, const Emit& emit);

  /// Out-of-band interrupt. Emits `no_reading` when nothing is being read.
  void on_interrupt(const Emit& emit);

  Session& session() { return *session_; }

 private:
  std::unique_ptr<Session> session_;
};

}  // namespace talkdoc::io
