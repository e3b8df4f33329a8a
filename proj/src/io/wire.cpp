#include "talkdoc/io/wire.hpp"

#include <nlohmann/json.hpp>

namespace talkdoc::io {

using nlohmann::json;

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

std::string get_string(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string()) throw WireError("bad_field", std::string("field '") + key + "' must be a string");
  return it->get<std::string>();
}

std::size_t get_count(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_number_unsigned()) {
    throw WireError("bad_field", std::string("field '") + key + "' must be a non-negative integer");
  }
  return it->get<std::size_t>();
}

ExportFormat get_format(const json& j) {
  auto fmt = parse_export_format(get_string(j, "format"));
  if (!fmt) throw WireError("bad_format", "format must be 'markdown' or 'plain'");
  return *fmt;
}

}  // namespace

std::string encode(const WireMessage& message) {
  json j = std::visit(
      overloaded{
          [](const UtteranceMsg& m) { return json{{"type", "utterance"}, {"text", m.text}}; },
          [](const InterruptMsg&) { return json{{"type", "interrupt"}}; },
          [](const ExportMsg& m) { return json{{"type", "export"}, {"format", export_format_name(m.format)}}; },
          [](const ResponseMsg& m) {
            return json{{"type", "response"},
                        {"kind", response_kind_name(m.kind)},
                        {"literal", m.literal},
                        {"verbalized", m.verbalized}};
          },
          [](const ReadingMsg& m) {
            return json{{"type", "reading"},
                        {"index", m.index},
                        {"total", m.total},
                        {"literal", m.literal},
                        {"verbalized", m.verbalized}};
          },
          [](const DocumentMsg& m) {
            return json{{"type", "document"}, {"format", export_format_name(m.format)}, {"body", m.body}};
          },
          [](const ErrorMsg& m) { return json{{"type", "error"}, {"code", m.code}, {"message", m.message}}; },
      },
      message);
  // Invalid UTF-8 from a client is echoed with replacement characters
  // rather than aborting the connection.
  return j.dump(-1, ' ', false, json::error_handler_t::replace);
}

WireMessage decode(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    throw WireError("bad_json", "line is not valid JSON");
  }
  if (!j.is_object()) throw WireError("bad_json", "message must be a JSON object");
  auto type_it = j.find("type");
  if (type_it == j.end() || !type_it->is_string()) throw WireError("unknown_type", "message has no type");
  const auto type = type_it->get<std::string>();

  if (type == "utterance") return UtteranceMsg{get_string(j, "text")};
  if (type == "interrupt") return InterruptMsg{};
  if (type == "export") return ExportMsg{get_format(j)};
  if (type == "response") {
    auto kind = parse_response_kind(get_string(j, "kind"));
    if (!kind || *kind == ResponseKind::ReadingChunk) throw WireError("bad_field", "unknown response kind");
    return ResponseMsg{*kind, get_string(j, "literal"), get_string(j, "verbalized")};
  }
  if (type == "reading") {
    return ReadingMsg{get_count(j, "index"), get_count(j, "total"), get_string(j, "literal"),
                      get_string(j, "verbalized")};
  }
  if (type == "document") return DocumentMsg{get_format(j), get_string(j, "body")};
  if (type == "error") return ErrorMsg{get_string(j, "code"), get_string(j, "message")};
  throw WireError("unknown_type", "unknown message type '" + type + "'");
}

WireMessage to_wire(const SystemResponse& r) {
  if (r.kind == ResponseKind::ReadingChunk) return ReadingMsg{r.reading_index, r.reading_total, r.literal, r.verbalized};
  return ResponseMsg{r.kind, r.literal, r.verbalized};
}

ProtocolHandler::ProtocolHandler(const EngineConfig& config) : session_(config.make_session()) {}

void ProtocolHandler::on_interrupt(const Emit& emit) {
  if (!session_->request_interrupt()) emit(ErrorMsg{"no_reading", "No reading in progress"});
}

void ProtocolHandler::on_line(std::string_view line, const Emit& emit) {
  WireMessage msg;
  try {
    msg = decode(line);
  } catch (const WireError& e) {
    emit(ErrorMsg{e.code(), e.what()});
    return;
  }
  std::visit(overloaded{
                 [&](const UtteranceMsg& m) {
                   auto result = session_->handle_utterance(
                       m.text, [&](const SystemResponse& r) { emit(to_wire(r)); });
                   if (result.exported) emit(DocumentMsg{result.exported->format, result.exported->body});
                 },
                 [&](const InterruptMsg&) { on_interrupt(emit); },
                 [&](const ExportMsg& m) { emit(DocumentMsg{m.format, session_->export_document(m.format)}); },
                 [&](const auto&) { emit(ErrorMsg{"unexpected_type", "message type is server-to-client only"}); },
             },
             msg);
}

}  // namespace talkdoc::io
