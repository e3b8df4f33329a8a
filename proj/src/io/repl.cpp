#include "talkdoc/io/repl.hpp"

#include <fstream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>

#include "talkdoc/io/server.hpp"
#include "talkdoc/persistence.hpp"

namespace talkdoc::io {

namespace {

std::string meta_argument(const std::string& line, std::size_t command_len) {
  auto rest = line.substr(command_len);
  auto b = rest.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  auto e = rest.find_last_not_of(" \t");
  return rest.substr(b, e - b + 1);
}

}  // namespace

int run_repl(std::istream& in, std::ostream& out, const EngineConfig& config, const ReplOptions& options) {
  auto session = config.make_session();
  std::mutex out_mu;
  auto print = [&](const std::string& text) {
    std::lock_guard lock(out_mu);
    out << text << '\n' << std::flush;
  };

  SerialWorker worker;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line == ":quit") break;
    if (line == ":interrupt") {
      if (!session->request_interrupt()) print("# no reading in progress");
      continue;
    }
    worker.post([&, line] {
      if (line.rfind(":save", 0) == 0) {
        const auto path = meta_argument(line, 5);
        std::ofstream file(path);
        if (path.empty() || !(file << save_document(session->state().edit.document))) {
          print("# error: cannot write '" + path + "'");
        } else {
          print("# saved " + path);
        }
        return;
      }
      if (line.rfind(":load", 0) == 0) {
        const auto path = meta_argument(line, 5);
        try {
          std::ifstream file(path);
          if (!file) throw std::runtime_error("cannot read '" + path + "'");
          std::stringstream buf;
          buf << file.rdbuf();
          session->load_document(load_document(buf.str()));
          print("# loaded " + path);
        } catch (const std::exception& e) {
          print(std::string("# error: ") + e.what());
        }
        return;
      }
      if (!line.empty() && line.front() == ':') {
        print("# unknown command " + line);
        return;
      }
      auto result = session->handle_utterance(line, [&](const SystemResponse& r) {
        print("S: " + r.literal);
        if (r.kind == ResponseKind::ReadingChunk && options.unit_delay.count() > 0) {
          std::this_thread::sleep_for(options.unit_delay);
        }
      });
      if (result.exported) {
        print("EXPORT " + std::string(export_format_name(result.exported->format)) + "\n" + result.exported->body +
              "END");
      }
    });
  }
  worker.drain();
  return 0;
}

}  // namespace talkdoc::io
