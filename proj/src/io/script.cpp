#include "talkdoc/io/script.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace talkdoc::io {

namespace {

bool starts_with(std::string_view s, std::string_view prefix) { return s.substr(0, prefix.size()) == prefix; }

std::string_view trim_view(std::string_view s) {
  auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::string after_prefix(std::string_view line, std::string_view tag) {
  auto rest = line.substr(tag.size());
  if (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
  return std::string(rest);
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      lines.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) lines.push_back(std::move(cur));
  return lines;
}

}  // namespace

ScriptCase parse_script(std::istream& in) {
  ScriptCase script;
  std::string line;
  int lineno = 0;
  std::optional<std::size_t> pending_interrupt;
  int pending_interrupt_line = 0;
  bool awaiting_response = false;
  int last_turn_line = 0;

  auto next_line = [&]() -> bool {
    if (!std::getline(in, line)) return false;
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  };

  while (next_line()) {
    const auto body = trim_view(line);
    if (body.empty() || body.front() == '#') continue;

    if (starts_with(line, "U:")) {
      if (awaiting_response) throw ScriptParseError(last_turn_line, "user turn has no expected response");
      UserTurn turn{after_prefix(line, "U:"), lineno, pending_interrupt};
      pending_interrupt.reset();
      script.steps.emplace_back(std::move(turn));
      awaiting_response = true;
      last_turn_line = lineno;
      continue;
    }
    if (pending_interrupt) throw ScriptParseError(pending_interrupt_line, "INTERRUPT must precede a user turn");

    if (starts_with(line, "S:")) {
      if (script.steps.empty()) throw ScriptParseError(lineno, "expected response before any user turn");
      script.steps.emplace_back(ExpectResponse{after_prefix(line, "S:"), lineno});
      awaiting_response = false;
      continue;
    }
    if (awaiting_response) throw ScriptParseError(last_turn_line, "user turn has no expected response");

    if (starts_with(body, "INTERRUPT")) {
      std::istringstream fields{std::string(body)};
      std::string kw, after;
      long long n = -1;
      fields >> kw >> after >> n;
      if (kw != "INTERRUPT" || after != "AFTER" || n < 1 || !fields.eof()) {
        throw ScriptParseError(lineno, "expected 'INTERRUPT AFTER <units>'");
      }
      pending_interrupt = static_cast<std::size_t>(n);
      pending_interrupt_line = lineno;
      continue;
    }
    if (starts_with(body, "EXPORT")) {
      auto fmt_name = trim_view(body.substr(6));
      auto fmt = parse_export_format(fmt_name);
      if (!fmt) throw ScriptParseError(lineno, "unknown export format '" + std::string(fmt_name) + "'");
      ExpectExport exp{*fmt, {}, lineno};
      bool closed = false;
      while (next_line()) {
        if (line == "END") {
          closed = true;
          break;
        }
        exp.body += line;
        exp.body += '\n';
      }
      if (!closed) throw ScriptParseError(exp.line, "EXPORT block is missing END");
      script.steps.emplace_back(std::move(exp));
      continue;
    }
    throw ScriptParseError(lineno, "unrecognized line");
  }
  if (awaiting_response) throw ScriptParseError(last_turn_line, "user turn has no expected response");
  if (pending_interrupt) throw ScriptParseError(pending_interrupt_line, "INTERRUPT must precede a user turn");
  return script;
}

ScriptCase parse_script_text(const std::string& text) {
  std::istringstream in(text);
  return parse_script(in);
}

ScriptCase load_script(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read script '" + path + "'");
  return parse_script(in);
}

std::string unified_diff(const std::vector<std::string>& expected, const std::vector<std::string>& actual) {
  const auto n = expected.size();
  const auto m = actual.size();
  std::vector<std::vector<std::size_t>> lcs(n + 1, std::vector<std::size_t>(m + 1, 0));
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = m; j-- > 0;) {
      lcs[i][j] = expected[i] == actual[j] ? lcs[i + 1][j + 1] + 1 : std::max(lcs[i + 1][j], lcs[i][j + 1]);
    }
  }
  std::ostringstream out;
  out << "--- expected\n+++ actual\n";
  out << "@@ -" << (n ? 1 : 0) << "," << n << " +" << (m ? 1 : 0) << "," << m << " @@\n";
  std::size_t i = 0, j = 0;
  while (i < n || j < m) {
    if (i < n && j < m && expected[i] == actual[j]) {
      out << ' ' << expected[i++] << '\n';
      ++j;
    } else if (i < n && (j == m || lcs[i + 1][j] >= lcs[i][j + 1])) {
      out << '-' << expected[i++] << '\n';
    } else {
      out << '+' << actual[j++] << '\n';
    }
  }
  return out.str();
}

Report run_script(const ScriptCase& script, const EngineConfig& config, const std::string& name) {
  Report report;
  report.script = name;
  auto session = config.make_session();

  const auto& steps = script.steps;
  for (std::size_t k = 0; k < steps.size();) {
    if (const auto* turn = std::get_if<UserTurn>(&steps[k])) {
      std::size_t delivered = 0;
      Session::ResponseSink sink;
      if (turn->interrupt_after) {
        sink = [&](const SystemResponse& r) {
          if (r.kind == ResponseKind::ReadingChunk && ++delivered == *turn->interrupt_after) {
            session->request_interrupt();
          }
        };
      }
      auto result = session->handle_utterance(turn->text, sink);

      std::vector<std::string> expected;
      for (++k; k < steps.size(); ++k) {
        const auto* exp = std::get_if<ExpectResponse>(&steps[k]);
        if (!exp) break;
        expected.push_back(exp->literal);
      }
      std::vector<std::string> actual;
      for (const auto& r : result.responses) actual.push_back(r.literal);

      StepReport step{StepReport::Kind::Turn, turn->line, turn->text, expected == actual, {}};
      if (!step.passed) step.diff = unified_diff(expected, actual);
      ++report.turns;
      if (step.passed) ++report.turns_passed;
      report.steps.push_back(std::move(step));
    } else if (const auto* exp = std::get_if<ExpectExport>(&steps[k])) {
      const auto actual = session->export_document(exp->format);
      StepReport step{StepReport::Kind::Export, exp->line, std::string(export_format_name(exp->format)),
                      actual == exp->body, {}};
      if (!step.passed) step.diff = unified_diff(split_lines(exp->body), split_lines(actual));
      ++report.exports;
      if (step.passed) ++report.exports_passed;
      report.steps.push_back(std::move(step));
      ++k;
    } else {
      ++k;  // stray expectation; the parser rejects these
    }
  }
  return report;
}

Report run_script_file(const std::string& path, const EngineConfig& config) {
  return run_script(load_script(path), config, path);
}

std::string Report::to_text() const {
  std::ostringstream out;
  out << "script: " << script << '\n';
  std::size_t turn_no = 0, export_no = 0;
  for (const auto& s : steps) {
    if (s.kind == StepReport::Kind::Turn) {
      out << "turn " << ++turn_no << " (line " << s.line << "): " << (s.passed ? "PASS" : "FAIL") << "  " << s.label
          << '\n';
    } else {
      out << "export " << ++export_no << " (line " << s.line << ", " << s.label << "): " << (s.passed ? "PASS" : "FAIL")
          << '\n';
    }
    if (!s.passed) {
      std::istringstream diff(s.diff);
      for (std::string l; std::getline(diff, l);) out << "    " << l << '\n';
    }
  }
  out << "RESULT: " << (passed() ? "PASS" : "FAIL") << ", ";
  if (steps.empty()) {
    out << "0 steps\n";
    return out.str();
  }
  out << turns_passed << '/' << turns << " turns";
  if (exports > 0) out << ", " << exports_passed << '/' << exports << " exports";
  out << '\n';
  return out.str();
}

std::string Report::to_json() const {
  nlohmann::json steps_json = nlohmann::json::array();
  for (const auto& s : steps) {
    nlohmann::json j = {{"kind", s.kind == StepReport::Kind::Turn ? "turn" : "export"},
                        {"line", s.line},
                        {"label", s.label},
                        {"passed", s.passed}};
    if (!s.passed) j["diff"] = s.diff;
    steps_json.push_back(std::move(j));
  }
  nlohmann::json j = {{"script", script},
                      {"passed", passed()},
                      {"turns", turns},
                      {"turns_passed", turns_passed},
                      {"exports", exports},
                      {"exports_passed", exports_passed},
                      {"steps", std::move(steps_json)}};
  return j.dump(2) + "\n";
}

}  // namespace talkdoc::io
