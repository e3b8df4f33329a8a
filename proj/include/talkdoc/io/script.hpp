#pragma once

#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "talkdoc/intent.hpp"
#include "talkdoc/io/engine_config.hpp"

namespace talkdoc::io {

/// Golden dialogue script. Line-oriented:
///
///     # comment
///     U: Title «anti theft system»
///     S: Document title “Anti Theft System”
///     INTERRUPT AFTER 2        (applies to the next U: turn)
///     EXPORT markdown
///     ...expected body lines...
///     END
struct UserTurn {
  std::string text;
  int line = 0;
  std::optional<std::size_t> interrupt_after;  // reading units before the interrupt fires
};

struct ExpectResponse {
  std::string literal;
  int line = 0;
};

struct ExpectExport {
  ExportFormat format = ExportFormat::Markdown;
  std::string body;
  int line = 0;
};

using ScriptStep = std::variant<UserTurn, ExpectResponse, ExpectExport>;

struct ScriptCase {
  std::vector<ScriptStep> steps;
};

class ScriptParseError : public std::runtime_error {
 public:
  ScriptParseError(int line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

ScriptCase parse_script(std::istream& in);
ScriptCase parse_script_text(const std::string& text);
ScriptCase load_script(const std::string& path);

struct StepReport {
  enum class Kind { Turn, Export };
  Kind kind = Kind::Turn;
  int line = 0;
  std::string label;  // user text, or export format
  bool passed = false;
  std::string diff;   // unified diff, failing steps only
};

struct Report {
  std::string script;
  std::vector<StepReport> steps;
  std::size_t turns = 0;
  std::size_t turns_passed = 0;
  std::size_t exports = 0;
  std::size_t exports_passed = 0;

  bool passed() const { return turns == turns_passed && exports == exports_passed; }
  std::string to_text() const;
  std::string to_json() const;
};

/// Replays `script` against a fresh session and compares every response
/// literal and every export body byte for byte.
Report run_script(const ScriptCase& script, const EngineConfig& config = EngineConfig(),
                  const std::string& name = "<script>");
Report run_script_file(const std::string& path, const EngineConfig& config = EngineConfig());

/// Unified diff of two line lists with full context.
std::string unified_diff(const std::vector<std::string>& expected, const std::vector<std::string>& actual);

}  // namespace talkdoc::io
