#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "talkdoc/dialogue.hpp"
#include "talkdoc/io/engine_config.hpp"
#include "talkdoc/io/script.hpp"
#include "talkdoc/normalizer.hpp"
#include "talkdoc/persistence.hpp"

namespace py = pybind11;
using namespace talkdoc;

namespace {

ExportFormat format_arg(const std::string& name) {
  auto f = parse_export_format(name);
  if (!f) throw py::value_error("unknown export format '" + name + "'");
  return *f;
}

py::list token_list(const TokenList& tokens) {
  py::list out;
  for (const auto& t : tokens) out.append(py::make_tuple(t.is_word() ? "word" : "punct", t.text));
  return out;
}

TokenList from_token_list(const std::vector<std::pair<std::string, std::string>>& items) {
  TokenList out;
  for (const auto& [kind, text] : items) {
    if (kind == "word") {
      out.push_back(Token::word(text));
    } else if (kind == "punct" && text.size() == 1 && is_punct_mark(text[0])) {
      out.push_back(Token::punct(text[0]));
    } else {
      throw py::value_error("bad token ('" + kind + "', '" + text + "')");
    }
  }
  return out;
}

py::dict response_dict(const SystemResponse& r) {
  py::dict d;
  d["kind"] = std::string(response_kind_name(r.kind));
  d["literal"] = r.literal;
  d["verbalized"] = r.verbalized;
  if (r.kind == ResponseKind::ReadingChunk) {
    d["index"] = r.reading_index;
    d["total"] = r.reading_total;
  }
  return d;
}

class PySession {
 public:
  PySession() : session_(io::EngineConfig().make_session()) {}

  py::list handle(const std::string& utterance) {
    TurnResult result;
    {
      py::gil_scoped_release release;
      result = session_->handle_utterance(utterance);
    }
    py::list out;
    for (const auto& r : result.responses) out.append(response_dict(r));
    return out;
  }
  bool interrupt() { return session_->request_interrupt(); }
  std::string export_document(const std::string& format) const {
    return session_->export_document(format_arg(format));
  }
  std::string save() const { return save_document(session_->state().edit.document); }
  void load(const std::string& json) { session_->load_document(load_document(json)); }
  std::string mode() const { return session_->state().mode == Mode::Dictation ? "dictation" : "command"; }

 private:
  std::unique_ptr<Session> session_;
};

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Spoken-command document editor engine";

  m.def("tokenize", [](const std::string& raw) { return token_list(tokenize(raw)); }, py::arg("raw"),
        "Split an utterance into ('word'|'punct', text) tokens, mapping spoken punctuation.");
  m.def(
      "verbalize",
      [](const std::vector<std::pair<std::string, std::string>>& tokens, bool suppress_final) {
        return verbalize(from_token_list(tokens), suppress_final);
      },
      py::arg("tokens"), py::arg("suppress_final") = false);
  m.def(
      "render", [](const std::vector<std::pair<std::string, std::string>>& tokens) {
        return render_literal(from_token_list(tokens));
      },
      py::arg("tokens"));

  py::class_<PySession>(m, "Session")
      .def(py::init<>())
      .def("handle", &PySession::handle, py::arg("utterance"))
      .def("interrupt", &PySession::interrupt)
      .def("export", &PySession::export_document, py::arg("format") = "markdown")
      .def("save", &PySession::save)
      .def("load", &PySession::load, py::arg("json"))
      .def_property_readonly("mode", &PySession::mode);

  m.def(
      "run_script",
      [](const std::string& path, const std::string& report) {
        auto r = io::run_script_file(path);
        return py::make_tuple(r.passed(), report == "json" ? r.to_json() : r.to_text());
      },
      py::arg("path"), py::arg("report") = "text");

  py::register_exception<io::ScriptParseError>(m, "ScriptParseError", PyExc_ValueError);
  py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);
}
