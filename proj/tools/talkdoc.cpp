// talkdoc command-line front end: repl, run, serve, export.
//
// Exit codes: 0 success / all script steps passed, 1 script mismatch,
// 2 usage or I/O error.

#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "talkdoc/io/engine_config.hpp"
#include "talkdoc/io/repl.hpp"
#include "talkdoc/io/script.hpp"
#include "talkdoc/io/server.hpp"
#include "talkdoc/persistence.hpp"

namespace {

constexpr int kExitMismatch = 1;
constexpr int kExitUsage = 2;

volatile std::sig_atomic_t g_stop = 0;

void on_signal(int) { g_stop = 1; }

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

int main(int argc, char** argv) {
  using namespace talkdoc;

  CLI::App app{"Conversational document editing engine"};
  app.require_subcommand(1);

  std::string grammar_path;
  std::string keywords_path;
  app.add_option("--grammar", grammar_path, "Command grammar file (default: built in)");
  app.add_option("--keywords", keywords_path, "Spoken punctuation table (default: built in)");

  auto* repl = app.add_subcommand("repl", "Interactive session on stdin/stdout");
  int repl_delay_ms = 0;
  repl->add_option("--unit-delay-ms", repl_delay_ms, "Pause after each read-aloud unit")->check(CLI::NonNegativeNumber);

  auto* run = app.add_subcommand("run", "Replay a golden dialogue script");
  std::string script_path;
  std::string report_format = "text";
  run->add_option("script", script_path, "Script file")->required();
  run->add_option("--report", report_format, "Report format")->check(CLI::IsMember({"text", "json"}));

  auto* serve = app.add_subcommand("serve", "Serve sessions over newline-delimited JSON");
  int port = io::default_port();
  std::string host = "127.0.0.1";
  int serve_delay_ms = 0;
  serve->add_option("--port", port, "TCP port (default: $TALKDOC_PORT or 7311)")->check(CLI::Range(0, 65535));
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--unit-delay-ms", serve_delay_ms, "Pause after each read-aloud unit")
      ->check(CLI::NonNegativeNumber);

  auto* exp = app.add_subcommand("export", "Export a saved session document");
  std::string session_path;
  std::string format_name = "markdown";
  exp->add_option("session", session_path, "Saved session file")->required();
  exp->add_option("--format", format_name, "Output format")->check(CLI::IsMember({"markdown", "plain"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : kExitUsage;
  }

  try {
    auto config = io::EngineConfig::load(grammar_path, keywords_path);

    if (*repl) {
      io::ReplOptions opts;
      opts.unit_delay = std::chrono::milliseconds(repl_delay_ms);
      return io::run_repl(std::cin, std::cout, config, opts);
    }

    if (*run) {
      io::Report report;
      try {
        report = io::run_script_file(script_path, config);
      } catch (const io::ScriptParseError& e) {
        std::cerr << script_path << ": " << e.what() << '\n';
        return kExitUsage;
      }
      std::cout << (report_format == "json" ? report.to_json() : report.to_text());
      return report.passed() ? 0 : kExitMismatch;
    }

    if (*serve) {
      io::ServerOptions opts;
      opts.host = host;
      opts.port = static_cast<std::uint16_t>(port);
      opts.unit_delay = std::chrono::milliseconds(serve_delay_ms);
      io::Server server(std::move(config), opts);
      auto bound = server.start();
      std::cerr << "talkdoc: serving on " << host << ":" << bound << '\n';
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
      server.stop();
      return 0;
    }

    if (*exp) {
      auto doc = load_document(read_file(session_path));
      auto format = *parse_export_format(format_name);
      std::cout << (format == ExportFormat::Markdown ? export_markdown(doc) : export_plain(doc));
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "talkdoc: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
