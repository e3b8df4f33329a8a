#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "talkdoc/doc_model.hpp"
#include "talkdoc/edit.hpp"
#include "talkdoc/intent.hpp"
#include "talkdoc/normalizer.hpp"

namespace talkdoc {

enum class ResponseKind : std::uint8_t { Confirmation, Readback, ReadingChunk, Error };

std::string_view response_kind_name(ResponseKind kind);
std::optional<ResponseKind> parse_response_kind(std::string_view name);

struct SystemResponse {
  ResponseKind kind = ResponseKind::Confirmation;
  std::string literal;     // punctuation as characters
  std::string verbalized;  // speech-ready
  std::size_t reading_index = 0;  // ReadingChunk only
  std::size_t reading_total = 0;

  friend bool operator==(const SystemResponse&, const SystemResponse&) = default;
};

enum class ReadingScope : std::uint8_t { Sentence, Paragraph, Document, Headings };

struct ReadingUnit {
  SentenceSpan span;
  std::string literal;
  friend bool operator==(const ReadingUnit&, const ReadingUnit&) = default;
};

/// Units are rendered from `snapshot`; `next` is the next unit to deliver.
struct ReadingSession {
  ReadingScope scope = ReadingScope::Document;
  int scope_block_id = 0;  // Paragraph scope only
  std::vector<ReadingUnit> units;
  std::size_t next = 0;
  bool paused = false;
  Document snapshot;
};

struct LastReadback {
  SentenceSpan span;
  std::string literal;
};

struct SessionState {
  EditState edit;
  Mode mode = Mode::Command;
  bool post_readback = false;
  std::optional<ReadingSession> reading;
  std::optional<LastReadback> last_readback;
};

struct ExportPayload {
  ExportFormat format = ExportFormat::Markdown;
  std::string body;
};

struct TurnResult {
  std::vector<SystemResponse> responses;
  std::optional<ExportPayload> exported;
  std::string pattern;  // template that matched, for diagnostics
};

/// Builds a response whose verbalized form is derived from the literal text.
SystemResponse make_response(ResponseKind kind, std::string literal,
                             const KeywordTable& keywords = KeywordTable::defaults());

/// One conversational session: routes utterances through the NLU backend and
/// the edit engine, and produces readback.
///
/// handle_utterance() must be called from one thread at a time.
/// request_interrupt() may be called from any thread; it takes effect at the
/// next reading-unit boundary.
class Session {
 public:
  using ResponseSink = std::function<void(const SystemResponse&)>;

  explicit Session(std::shared_ptr<const NluBackend> nlu = nullptr,
                   KeywordTable keywords = KeywordTable::defaults());

  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  /// `sink`, when set, sees each response as it is produced.
  TurnResult handle_utterance(std::string_view raw, const ResponseSink& sink = {});

  /// Returns false when no reading is being delivered.
  bool request_interrupt();
  bool reading_in_progress() const { return delivering_.load(); }

  const SessionState& state() const { return state_; }
  std::string export_document(ExportFormat format) const;

  /// Replaces the document, moving focus to its end and clearing history.
  void load_document(Document document);

 private:
  class Turn;

  SessionState state_;
  std::shared_ptr<const NluBackend> nlu_;
  KeywordTable keywords_;
  std::atomic<bool> interrupt_{false};
  std::atomic<bool> delivering_{false};
};

/// Readback for an edit outcome (the confirmation rule). Updates
/// `state.last_readback` and moves focus to the end of what was read.
SystemResponse generate_readback(const EditOutcome& outcome, IntentKind intent, SessionState& state,
                                 const KeywordTable& keywords = KeywordTable::defaults());

/// Spoken rendering of one reading unit.
std::string render_unit(const Block& block, const SentenceSpan& span);

/// Units a read command covers, rendered from `doc`.
std::vector<ReadingUnit> build_reading_units(const Document& doc, ReadingScope scope, int scope_block_id,
                                             std::optional<SentenceSpan> sentence = std::nullopt);

}  // namespace talkdoc
