#include "talkdoc/dialogue.hpp"

#include <array>
#include <cctype>
#include <tuple>

namespace talkdoc {

namespace {

constexpr std::array<std::string_view, 4> kResponseKindNames = {"confirmation", "readback", "reading", "error"};

// Delimiters carry no speech; they are dropped before verbalizing.
std::string strip_delimiters(std::string_view text) {
  static constexpr std::array<std::string_view, 6> kAlways = {"\xC2\xAB", "\xC2\xBB", "\xE2\x80\x9C",
                                                              "\xE2\x80\x9D", "\xE2\x80\x98", "\""};
  static constexpr std::string_view kRightSingle = "\xE2\x80\x99";
  std::string out;
  for (std::size_t i = 0; i < text.size();) {
    bool skipped = false;
    for (auto d : kAlways) {
      if (text.substr(i, d.size()) == d) {
        i += d.size();
        skipped = true;
        break;
      }
    }
    if (skipped) continue;
    if (text.substr(i, kRightSingle.size()) == kRightSingle) {
      const auto after = i + kRightSingle.size();
      const bool apostrophe = after < text.size() && std::isalpha(static_cast<unsigned char>(text[after]));
      if (!apostrophe) {
        i = after;
        continue;
      }
    }
    out += text[i++];
  }
  return out;
}

std::string heading_readback(const Block& block) {
  const auto text = render_literal(block.tokens);
  if (block.type == BlockType::Title) return "Document title \xE2\x80\x9C" + text + "\xE2\x80\x9D";
  return "Heading " + std::to_string(block.level) + " \xC2\xAB" + text + "\xC2\xBB";
}

std::span<const Token> span_tokens(const Block& block, const SentenceSpan& span) {
  return std::span<const Token>(block.tokens).subspan(span.start, span.end - span.start);
}

// Moves focus to the end of `span` and remembers it as the last readback.
void record_readback(SessionState& state, const SentenceSpan& span, const std::string& literal) {
  if (auto idx = state.edit.document.index_of(span.block_id)) {
    state.edit.focus.block = *idx;
    state.edit.focus.offset = span.end;
  }
  state.last_readback = LastReadback{span, literal};
}

std::string error_text(const EditOutcome& outcome, IntentKind intent) {
  switch (outcome.reason) {
    case FailReason::NotFound:
      if (intent == IntentKind::JumpToHeading) return "Could not find heading \xC2\xAB" + outcome.detail + "\xC2\xBB";
      return "Could not find \xC2\xAB" + outcome.detail + "\xC2\xBB";
    case FailReason::NothingToUndo:
      return "Nothing to undo";
    case FailReason::EmptyText:
      return "Nothing to add";
    case FailReason::NothingThere:
      if (intent == IntentKind::InsertComment) return "Document is empty";
      if (intent == IntentKind::NavStartParagraph || intent == IntentKind::NavEndParagraph) {
        return "Not inside a paragraph";
      }
      return "Nothing there";
    case FailReason::None:
      break;
  }
  return "Command failed";
}

// Reads the smallest unit around a change: the whole block for titles,
// headings and list items, otherwise the sentence.
SystemResponse read_enclosing(const SentenceSpan& affected, SessionState& state, const KeywordTable& kw) {
  const auto& doc = state.edit.document;
  const Block* block = doc.find_block(affected.block_id);
  if (!block) return make_response(ResponseKind::Confirmation, "Nothing changed", kw);
  SentenceSpan span{block->id, 0, block->tokens.size()};
  std::string literal;
  if (block->is_heading_like()) {
    literal = heading_readback(*block);
  } else {
    if (block->type == BlockType::Paragraph) {
      auto spans = segment_sentences(*block);
      std::size_t idx = spans.size() - 1;
      if (affected.start < block->tokens.size()) idx = *sentence_at(*block, affected.start + 1);
      span = spans[idx];
    }
    literal = render_literal(span_tokens(*block, span));
  }
  record_readback(state, span, literal);
  return make_response(ResponseKind::Readback, literal, kw);
}

std::string_view removed_block_name(BlockType type) {
  switch (type) {
    case BlockType::Title: return "Title deleted";
    case BlockType::Heading: return "Heading deleted";
    case BlockType::Paragraph: return "Paragraph deleted";
    case BlockType::BulletItem:
    case BlockType::EnumItem: return "List item deleted";
  }
  return "Paragraph deleted";
}

}  // namespace

std::string_view response_kind_name(ResponseKind kind) { return kResponseKindNames[static_cast<std::size_t>(kind)]; }

std::optional<ResponseKind> parse_response_kind(std::string_view name) {
  for (std::size_t i = 0; i < kResponseKindNames.size(); ++i) {
    if (kResponseKindNames[i] == name) return static_cast<ResponseKind>(i);
  }
  return std::nullopt;
}

SystemResponse make_response(ResponseKind kind, std::string literal, const KeywordTable& keywords) {
  SystemResponse r;
  r.kind = kind;
  r.verbalized = verbalize(tokenize(strip_delimiters(literal), keywords), true, keywords);
  r.literal = std::move(literal);
  return r;
}

std::string render_unit(const Block& block, const SentenceSpan& span) {
  const auto text = render_literal(span_tokens(block, span));
  switch (block.type) {
    case BlockType::Title:
    case BlockType::Paragraph:
      return text;
    case BlockType::Heading:
      return "Heading " + std::to_string(block.level) + " " + text;
    case BlockType::BulletItem:
      return "Bullet " + text;
    case BlockType::EnumItem:
      return "Item " + std::to_string(block.index) + " " + text;
  }
  return text;
}

std::vector<ReadingUnit> build_reading_units(const Document& doc, ReadingScope scope, int scope_block_id,
                                             std::optional<SentenceSpan> sentence) {
  std::vector<ReadingUnit> units;
  auto add_block = [&](const Block& block) {
    for (const auto& span : segment_sentences(block)) units.push_back({span, render_unit(block, span)});
  };
  switch (scope) {
    case ReadingScope::Headings:
      for (const auto& block : doc.blocks) {
        if (block.is_heading_like()) add_block(block);
      }
      break;
    case ReadingScope::Document:
      for (const auto& block : doc.blocks) add_block(block);
      break;
    case ReadingScope::Paragraph:
      if (const Block* block = doc.find_block(scope_block_id)) add_block(*block);
      break;
    case ReadingScope::Sentence:
      if (sentence) {
        if (const Block* block = doc.find_block(sentence->block_id)) {
          units.push_back({*sentence, render_unit(*block, *sentence)});
        }
      }
      break;
  }
  return units;
}

SystemResponse generate_readback(const EditOutcome& outcome, IntentKind intent, SessionState& state,
                                 const KeywordTable& kw) {
  if (outcome.failed()) return make_response(ResponseKind::Error, error_text(outcome, intent), kw);

  switch (outcome.kind) {
    case OutcomeKind::NoOp:
      return make_response(ResponseKind::Confirmation, "Nothing changed", kw);
    case OutcomeKind::Navigated:
      switch (intent) {
        case IntentKind::NavStartParagraph: return make_response(ResponseKind::Confirmation, "Start of paragraph", kw);
        case IntentKind::NavEndParagraph: return make_response(ResponseKind::Confirmation, "End of paragraph", kw);
        case IntentKind::JumpToHeading: {
          const Block* heading = state.edit.document.find_block(outcome.affected->block_id);
          return make_response(ResponseKind::Confirmation,
                               "Jumped to heading \xC2\xAB" + render_literal(heading->tokens) + "\xC2\xBB", kw);
        }
        case IntentKind::SelectWord:
        case IntentKind::SelectSentence: {
          const auto& span = *outcome.affected;
          const Block* block = state.edit.document.find_block(span.block_id);
          const auto literal = "Selected \xC2\xAB" + render_literal(span_tokens(*block, span)) + "\xC2\xBB";
          record_readback(state, span, literal);
          return make_response(ResponseKind::Readback, literal, kw);
        }
        case IntentKind::StartBulletList: return make_response(ResponseKind::Confirmation, "Bullet list started", kw);
        case IntentKind::StartEnumeration: return make_response(ResponseKind::Confirmation, "Enumeration started", kw);
        case IntentKind::EndList: return make_response(ResponseKind::Confirmation, "List ended", kw);
        case IntentKind::NewParagraph: return make_response(ResponseKind::Confirmation, "New paragraph", kw);
        default: return make_response(ResponseKind::Confirmation, "Done", kw);
      }
    case OutcomeKind::Created:
    case OutcomeKind::Edited:
    case OutcomeKind::Deleted:
      break;
    case OutcomeKind::Failed:
      break;
  }

  if (intent == IntentKind::Undo) {
    return make_response(ResponseKind::Confirmation, "Undone \xC2\xAB" + outcome.detail + "\xC2\xBB", kw);
  }
  if (intent == IntentKind::InsertComment) {
    return make_response(ResponseKind::Confirmation,
                         "Comment inserted: " + state.edit.document.comments.back().text, kw);
  }
  if (!outcome.affected) {
    return make_response(ResponseKind::Confirmation, std::string(removed_block_name(outcome.removed_type)), kw);
  }
  if (intent == IntentKind::Dictate) {
    const auto& span = *outcome.affected;
    const Block* block = state.edit.document.find_block(span.block_id);
    auto tokens = span_tokens(*block, span);
    auto literal = render_literal(tokens);
    record_readback(state, span, literal);
    SystemResponse r;
    r.kind = ResponseKind::Readback;
    r.literal = std::move(literal);
    r.verbalized = verbalize(tokens, true, kw);
    return r;
  }
  if (outcome.kind == OutcomeKind::Created) {
    const Block* block = state.edit.document.find_block(outcome.affected->block_id);
    if (block && block->is_heading_like()) {
      auto literal = heading_readback(*block);
      record_readback(state, {block->id, 0, block->tokens.size()}, literal);
      return make_response(ResponseKind::Readback, std::move(literal), kw);
    }
  }
  return read_enclosing(*outcome.affected, state, kw);
}

// ---------------------------------------------------------------------------

class Session::Turn {
 public:
  Turn(Session& session, const ResponseSink& sink) : s_(session), sink_(sink) {}

  void emit(SystemResponse r) {
    if (sink_) sink_(r);
    result.responses.push_back(std::move(r));
  }
  void say(ResponseKind kind, std::string literal) { emit(make_response(kind, std::move(literal), s_.keywords_)); }
  void apply(const EditOutcome& outcome, IntentKind intent) {
    emit(generate_readback(outcome, intent, s_.state_, s_.keywords_));
  }

  void start_reading(ReadingScope scope);
  void deliver();
  void go_on();
  void stop();
  void repeat();

  TurnResult result;

 private:
  SessionState& st() { return s_.state_; }

  Session& s_;
  const ResponseSink& sink_;
};

void Session::Turn::start_reading(ReadingScope scope) {
  auto& state = st();
  const auto& doc = state.edit.document;
  state.reading.reset();
  if (doc.empty()) {
    say(ResponseKind::Error, "Document is empty");
    return;
  }
  ReadingSession reading;
  reading.scope = scope;
  reading.snapshot = doc;
  const auto& focus_block = doc.blocks[state.edit.focus.block];
  reading.scope_block_id = focus_block.id;
  std::optional<SentenceSpan> sentence;
  if (scope == ReadingScope::Sentence) {
    if (auto idx = sentence_at(focus_block, state.edit.focus.offset)) {
      sentence = segment_sentences(focus_block)[*idx];
    }
  }
  reading.units = build_reading_units(doc, scope, reading.scope_block_id, sentence);
  if (reading.units.empty()) {
    say(ResponseKind::Error, scope == ReadingScope::Headings ? "No headings" : "Nothing to read");
    return;
  }
  clear_selection(state.edit);
  state.reading = std::move(reading);
  deliver();
}

void Session::Turn::deliver() {
  auto& state = st();
  auto& reading = *state.reading;
  reading.paused = false;
  s_.interrupt_.store(false);
  s_.delivering_.store(true);
  const auto total = reading.units.size();
  while (reading.next < total) {
    const auto& unit = reading.units[reading.next];
    auto r = make_response(ResponseKind::ReadingChunk, unit.literal, s_.keywords_);
    r.reading_index = reading.next;
    r.reading_total = total;
    record_readback(state, unit.span, unit.literal);
    ++reading.next;
    emit(std::move(r));
    if (reading.next < total && s_.interrupt_.exchange(false)) {
      reading.paused = true;
      break;
    }
  }
  s_.delivering_.store(false);
  if (reading.paused) {
    say(ResponseKind::Confirmation, "Reading paused");
  } else {
    state.reading.reset();
    say(ResponseKind::Confirmation, "Reading finished");
  }
}

void Session::Turn::go_on() {
  auto& state = st();
  if (!state.reading || !state.reading->paused) {
    say(ResponseKind::Error, "Nothing to continue");
    return;
  }
  auto& reading = *state.reading;
  const auto& doc = state.edit.document;
  if (!(reading.snapshot == doc)) {
    // The document changed while paused: re-render the remaining units from
    // the live document, resuming after the last delivered one.
    const auto& last = reading.units[reading.next - 1].span;
    auto fresh = build_reading_units(doc, reading.scope, reading.scope_block_id);
    std::vector<ReadingUnit> remaining;
    if (auto last_block = doc.index_of(last.block_id)) {
      const auto resume = std::make_tuple(*last_block, last.end);
      for (auto& u : fresh) {
        if (std::make_tuple(*doc.index_of(u.span.block_id), u.span.start) >= resume) remaining.push_back(std::move(u));
      }
    } else {
      for (std::size_t i = std::min(reading.next, fresh.size()); i < fresh.size(); ++i) {
        remaining.push_back(std::move(fresh[i]));
      }
    }
    reading.units = std::move(remaining);
    reading.next = 0;
    reading.snapshot = doc;
    if (reading.units.empty()) {
      state.reading.reset();
      say(ResponseKind::Confirmation, "Reading finished");
      return;
    }
  }
  deliver();
}

void Session::Turn::stop() {
  auto& state = st();
  if (!state.reading) {
    say(ResponseKind::Error, "Nothing to stop");
    return;
  }
  state.reading->paused = true;
  say(ResponseKind::Confirmation, "Reading stopped");
}

void Session::Turn::repeat() {
  auto& state = st();
  const auto& doc = state.edit.document;
  if (!state.last_readback) {
    say(ResponseKind::Error, "Nothing to repeat");
    return;
  }
  const auto last = *state.last_readback;
  const Block* block = doc.find_block(last.span.block_id);
  if (!block || last.span.end > block->tokens.size()) {
    say(ResponseKind::Error, "Nothing to repeat");
    return;
  }
  record_readback(state, last.span, last.literal);
  say(ResponseKind::Readback, last.literal);
}

Session::Session(std::shared_ptr<const NluBackend> nlu, KeywordTable keywords)
    : nlu_(std::move(nlu)), keywords_(std::move(keywords)) {
  if (!nlu_) nlu_ = std::make_shared<TemplateMatcher>(Grammar::defaults(), keywords_);
}

bool Session::request_interrupt() {
  if (!delivering_.load()) return false;
  interrupt_.store(true);
  return true;
}

std::string Session::export_document(ExportFormat format) const {
  return format == ExportFormat::Markdown ? export_markdown(state_.edit.document) : export_plain(state_.edit.document);
}

void Session::load_document(Document document) {
  state_ = SessionState{};
  state_.edit.document = std::move(document);
  const auto& blocks = state_.edit.document.blocks;
  if (!blocks.empty()) state_.edit.focus = {blocks.size() - 1, blocks.back().tokens.size(), std::nullopt};
}

TurnResult Session::handle_utterance(std::string_view raw, const ResponseSink& sink) {
  Turn turn(*this, sink);
  auto utterance = make_utterance(std::string(raw), keywords_);
  const NluContext ctx{state_.mode, state_.post_readback};
  auto match = nlu_->parse(utterance, ctx);
  turn.result.pattern = match.pattern;
  if (!match.intent) {
    turn.say(ResponseKind::Error, "Command not recognized");
    return std::move(turn.result);
  }

  const Intent& intent = *match.intent;
  auto& edit = state_.edit;
  switch (intent.kind) {
    case IntentKind::SetTitle:
      turn.apply(add_structure_block(edit, BlockType::Title, 0, intent.text), intent.kind);
      break;
    case IntentKind::AddHeading:
      turn.apply(add_structure_block(edit, BlockType::Heading, intent.level, intent.text), intent.kind);
      break;
    case IntentKind::NewParagraph:
      turn.apply(new_paragraph(edit), intent.kind);
      break;
    case IntentKind::StartBulletList:
      turn.apply(begin_list(edit, ListMode::Bullet), intent.kind);
      break;
    case IntentKind::StartEnumeration:
      turn.apply(begin_list(edit, ListMode::Enumeration), intent.kind);
      break;
    case IntentKind::EndList:
      turn.apply(end_list(edit), intent.kind);
      break;
    case IntentKind::StartDictation:
      clear_selection(edit);
      turn.say(ResponseKind::Confirmation, "Dictation mode started");
      break;
    case IntentKind::StartCommandMode:
      clear_selection(edit);
      turn.say(ResponseKind::Confirmation, "Command mode started");
      break;
    case IntentKind::ReplaceContent:
      turn.apply(replace_content(edit, intent.target, intent.content), intent.kind);
      break;
    case IntentKind::InsertContent:
      turn.apply(insert_content(edit, intent.content, intent.relation, intent.anchor), intent.kind);
      break;
    case IntentKind::DeleteContent:
      turn.apply(delete_content(edit, intent.target), intent.kind);
      break;
    case IntentKind::MoveContent:
      turn.apply(move_content(edit, intent.target, intent.relation, intent.anchor), intent.kind);
      break;
    case IntentKind::DeleteLastWord:
      turn.apply(relative_edit(edit, EditUnit::Word, EditAction::Delete, EditScope::Last), intent.kind);
      break;
    case IntentKind::DeleteWord:
      turn.apply(relative_edit(edit, EditUnit::Word, EditAction::Delete, EditScope::AtFocus), intent.kind);
      break;
    case IntentKind::DeleteSentence:
      turn.apply(relative_edit(edit, EditUnit::Sentence, EditAction::Delete, EditScope::AtFocus), intent.kind);
      break;
    case IntentKind::SelectWord:
      turn.apply(relative_edit(edit, EditUnit::Word, EditAction::Select, EditScope::AtFocus), intent.kind);
      break;
    case IntentKind::SelectSentence:
      turn.apply(relative_edit(edit, EditUnit::Sentence, EditAction::Select, EditScope::AtFocus), intent.kind);
      break;
    case IntentKind::NavStartParagraph:
      turn.apply(navigate(edit, NavTarget::StartParagraph), intent.kind);
      break;
    case IntentKind::NavEndParagraph:
      turn.apply(navigate(edit, NavTarget::EndParagraph), intent.kind);
      break;
    case IntentKind::JumpToHeading:
      state_.reading.reset();
      turn.apply(navigate(edit, NavTarget::JumpToHeading, intent.text), intent.kind);
      break;
    case IntentKind::ReadSentence:
      turn.start_reading(ReadingScope::Sentence);
      break;
    case IntentKind::ReadParagraph:
      turn.start_reading(ReadingScope::Paragraph);
      break;
    case IntentKind::ReadDocument:
      turn.start_reading(ReadingScope::Document);
      break;
    case IntentKind::ReadHeadings:
      turn.start_reading(ReadingScope::Headings);
      break;
    case IntentKind::RepeatLastSentence:
      turn.repeat();
      break;
    case IntentKind::Stop:
      turn.stop();
      break;
    case IntentKind::GoOn:
      turn.go_on();
      break;
    case IntentKind::InsertComment:
      turn.apply(insert_comment(edit, render_literal(intent.text)), intent.kind);
      break;
    case IntentKind::Undo:
      turn.apply(undo_last(edit), intent.kind);
      break;
    case IntentKind::Export: {
      turn.result.exported = ExportPayload{intent.format, export_document(intent.format)};
      turn.say(ResponseKind::Confirmation,
               "Document exported as " + std::string(export_format_name(intent.format)));
      break;
    }
    case IntentKind::Dictate:
      turn.apply(append_dictation(edit, intent.text), intent.kind);
      break;
  }

  switch (intent.kind) {
    case IntentKind::StartDictation:
      state_.mode = Mode::Dictation;
      state_.post_readback = false;
      break;
    case IntentKind::StartCommandMode:
      state_.mode = Mode::Command;
      state_.post_readback = false;
      break;
    case IntentKind::Dictate:
      state_.mode = Mode::Dictation;
      state_.post_readback = true;
      break;
    default:
      break;
  }
  return std::move(turn.result);
}

}  // namespace talkdoc
