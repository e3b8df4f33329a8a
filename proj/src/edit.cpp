#include "talkdoc/edit.hpp"

#include <algorithm>

#include "talkdoc/normalizer.hpp"

namespace talkdoc {

namespace {

struct Working {
  Document doc;
  Focus focus;
};

EditOutcome failed(const EditState& state, FailReason reason, std::string detail = {}) {
  EditOutcome out;
  out.kind = OutcomeKind::Failed;
  out.reason = reason;
  out.focus = state.focus;
  out.detail = std::move(detail);
  return out;
}

std::string phrase_text(const Phrase& phrase) {
  std::string out;
  for (const auto& w : phrase) {
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

TokenList phrase_tokens(const Phrase& phrase) {
  TokenList out;
  out.reserve(phrase.size());
  for (const auto& w : phrase) out.push_back(Token::word(w));
  return out;
}

void renumber_enumerations(Document& doc) {
  int run = 0;
  for (auto& block : doc.blocks) {
    if (block.type == BlockType::EnumItem) {
      block.index = ++run;
    } else {
      run = 0;
    }
  }
}

void reanchor_comments(Document& doc) {
  for (auto& c : doc.comments) {
    if (c.orphaned) continue;
    const Block* block = doc.find_block(c.anchor.block_id);
    if (!block) {
      c.orphaned = true;
      continue;
    }
    auto count = static_cast<int>(segment_sentences(*block).size());
    if (count > 0 && c.anchor.sentence >= count) c.anchor.sentence = count - 1;
  }
}

void recase(Block& block) { block.tokens = apply_casing(std::move(block.tokens), block.type); }

// Records the pre-edit state on the undo stack and installs the edited one.
void commit(EditState& state, Working&& work, std::string label) {
  renumber_enumerations(work.doc);
  reanchor_comments(work.doc);
  work.focus.selection.reset();
  state.undo_stack.push_back({std::move(state.document), state.focus, std::move(label)});
  state.document = std::move(work.doc);
  state.focus = work.focus;
}

SentenceSpan insert_tokens(Working& work, std::size_t b, std::size_t at, const TokenList& tokens) {
  auto& block = work.doc.blocks[b];
  block.tokens.insert(block.tokens.begin() + static_cast<std::ptrdiff_t>(at), tokens.begin(), tokens.end());
  recase(block);
  work.focus = {b, at + tokens.size(), std::nullopt};
  return {block.id, at, at + tokens.size()};
}

struct Removal {
  std::optional<SentenceSpan> point;  // deletion point, unless the block vanished
  BlockType removed_type = BlockType::Paragraph;
};

// Erases tokens [s, e) of block b. A block left without tokens is removed.
Removal erase_tokens(Working& work, std::size_t b, std::size_t s, std::size_t e) {
  auto& block = work.doc.blocks[b];
  block.tokens.erase(block.tokens.begin() + static_cast<std::ptrdiff_t>(s),
                     block.tokens.begin() + static_cast<std::ptrdiff_t>(e));
  if (!block.tokens.empty()) {
    recase(block);
    work.focus = {b, s, std::nullopt};
    return {SentenceSpan{block.id, s, s}, block.type};
  }
  Removal r{std::nullopt, block.type};
  work.doc.blocks.erase(work.doc.blocks.begin() + static_cast<std::ptrdiff_t>(b));
  if (b > 0) {
    work.focus = {b - 1, work.doc.blocks[b - 1].tokens.size(), std::nullopt};
  } else {
    work.focus = {0, 0, std::nullopt};
  }
  return r;
}

EditOutcome deleted_outcome(const EditState& state, const Removal& r) {
  EditOutcome out;
  out.kind = OutcomeKind::Deleted;
  out.affected = r.point;
  out.removed_type = r.removed_type;
  out.focus = state.focus;
  return out;
}

EditOutcome changed(const EditState& state, OutcomeKind kind, SentenceSpan affected) {
  EditOutcome out;
  out.kind = kind;
  out.affected = affected;
  out.focus = state.focus;
  return out;
}

bool is_text_block(const Block& b) { return b.type == BlockType::Paragraph || b.is_list_item(); }

std::size_t insertion_index(const EditState& state) {
  return state.document.empty() ? 0 : state.focus.block + 1;
}

}  // namespace

EditOutcome add_structure_block(EditState& state, BlockType type, int level, const TokenList& text) {
  TokenList tokens;
  for (const auto& t : text) {
    if (!(type == BlockType::Title || type == BlockType::Heading) || !(t.is_punct() && t.mark() == '.')) {
      tokens.push_back(t);
    }
  }
  if (std::none_of(tokens.begin(), tokens.end(), [](const Token& t) { return t.is_word(); })) {
    return failed(state, FailReason::EmptyText);
  }

  Working work{state.document, state.focus};
  std::size_t at = 0;
  if (type == BlockType::Title && work.doc.has_title()) {
    work.doc.blocks.front().tokens = std::move(tokens);
  } else {
    Block block;
    block.id = work.doc.allocate_block_id();
    block.type = type;
    block.level = type == BlockType::Heading ? std::clamp(level, 1, 3) : 0;
    block.tokens = std::move(tokens);
    at = type == BlockType::Title ? 0 : work.doc.blocks.size();
    work.doc.blocks.insert(work.doc.blocks.begin() + static_cast<std::ptrdiff_t>(at), std::move(block));
  }
  auto& block = work.doc.blocks[at];
  recase(block);
  work.focus = {at, block.tokens.size(), std::nullopt};
  SentenceSpan span{block.id, 0, block.tokens.size()};

  state.list_mode = ListMode::None;
  state.paragraph_pending = false;
  commit(state, std::move(work), type == BlockType::Title ? "title" : "heading");
  return changed(state, OutcomeKind::Created, span);
}

EditOutcome append_dictation(EditState& state, const TokenList& tokens) {
  if (tokens.empty()) {
    EditOutcome out;
    out.focus = state.focus;
    return out;
  }
  Working work{state.document, state.focus};
  const bool in_text_block = !work.doc.empty() && is_text_block(work.doc.blocks[work.focus.block]);
  OutcomeKind kind = OutcomeKind::Edited;
  SentenceSpan span;
  if (state.list_mode != ListMode::None || state.paragraph_pending || !in_text_block) {
    Block block;
    block.id = work.doc.allocate_block_id();
    block.type = state.list_mode == ListMode::Bullet        ? BlockType::BulletItem
                 : state.list_mode == ListMode::Enumeration ? BlockType::EnumItem
                                                            : BlockType::Paragraph;
    const auto at = insertion_index(state);
    work.doc.blocks.insert(work.doc.blocks.begin() + static_cast<std::ptrdiff_t>(at), std::move(block));
    span = insert_tokens(work, at, 0, tokens);
    kind = OutcomeKind::Created;
  } else {
    span = insert_tokens(work, work.focus.block, work.focus.offset, tokens);
  }
  state.paragraph_pending = false;
  commit(state, std::move(work), "dictation");
  return changed(state, kind, span);
}

EditOutcome replace_content(EditState& state, const Phrase& old_phrase, const Phrase& new_phrase) {
  if (old_phrase.empty() || new_phrase.empty()) return failed(state, FailReason::EmptyText);
  auto match = find_content(state.document, state.focus.position(), old_phrase);
  if (!match) return failed(state, FailReason::NotFound, phrase_text(old_phrase));
  Working work{state.document, state.focus};
  auto& tokens = work.doc.blocks[match->block].tokens;
  tokens.erase(tokens.begin() + static_cast<std::ptrdiff_t>(match->start),
               tokens.begin() + static_cast<std::ptrdiff_t>(match->end));
  auto span = insert_tokens(work, match->block, match->start, phrase_tokens(new_phrase));
  commit(state, std::move(work), "replace");
  return changed(state, OutcomeKind::Edited, span);
}

EditOutcome insert_content(EditState& state, const Phrase& content, Relation relation, const Phrase& anchor) {
  if (content.empty() || anchor.empty()) return failed(state, FailReason::EmptyText);
  auto match = find_content(state.document, state.focus.position(), anchor);
  if (!match) return failed(state, FailReason::NotFound, phrase_text(anchor));
  Working work{state.document, state.focus};
  const auto at = relation == Relation::Before ? match->start : match->end;
  auto span = insert_tokens(work, match->block, at, phrase_tokens(content));
  commit(state, std::move(work), "insert");
  return changed(state, OutcomeKind::Edited, span);
}

EditOutcome delete_content(EditState& state, const Phrase& target) {
  if (target.empty()) return failed(state, FailReason::EmptyText);
  auto match = find_content(state.document, state.focus.position(), target);
  if (!match) return failed(state, FailReason::NotFound, phrase_text(target));
  Working work{state.document, state.focus};
  auto removal = erase_tokens(work, match->block, match->start, match->end);
  commit(state, std::move(work), "delete");
  return deleted_outcome(state, removal);
}

EditOutcome move_content(EditState& state, const Phrase& target, Relation relation, const Phrase& anchor) {
  if (target.empty() || anchor.empty()) return failed(state, FailReason::EmptyText);
  auto match = find_content(state.document, state.focus.position(), target);
  if (!match) return failed(state, FailReason::NotFound, phrase_text(target));
  Working work{state.document, state.focus};
  const auto& src = work.doc.blocks[match->block].tokens;
  TokenList moved(src.begin() + static_cast<std::ptrdiff_t>(match->start),
                  src.begin() + static_cast<std::ptrdiff_t>(match->end));
  erase_tokens(work, match->block, match->start, match->end);
  auto dest = find_content(work.doc, work.focus.position(), anchor);
  if (!dest) return failed(state, FailReason::NotFound, phrase_text(anchor));
  const auto at = relation == Relation::Before ? dest->start : dest->end;
  auto span = insert_tokens(work, dest->block, at, moved);
  commit(state, std::move(work), "move");
  return changed(state, OutcomeKind::Edited, span);
}

namespace {

struct UnitSpan {
  std::size_t block;
  std::size_t start;
  std::size_t end;
};

std::optional<UnitSpan> last_word(const Document& doc, Position focus) {
  for (std::size_t b = focus.block + 1; b-- > 0;) {
    const auto& tokens = doc.blocks[b].tokens;
    std::size_t limit = b == focus.block ? std::min(focus.offset, tokens.size()) : tokens.size();
    for (std::size_t i = limit; i-- > 0;) {
      if (tokens[i].is_word()) return UnitSpan{b, i, i + 1};
    }
  }
  return std::nullopt;
}

std::optional<UnitSpan> word_at(const Document& doc, Position focus) {
  const auto& tokens = doc.blocks[focus.block].tokens;
  if (focus.offset > 0 && focus.offset <= tokens.size() && tokens[focus.offset - 1].is_word()) {
    return UnitSpan{focus.block, focus.offset - 1, focus.offset};
  }
  if (focus.offset < tokens.size() && tokens[focus.offset].is_word()) {
    return UnitSpan{focus.block, focus.offset, focus.offset + 1};
  }
  return std::nullopt;
}

std::optional<UnitSpan> sentence_containing(const Document& doc, Position focus) {
  const auto& block = doc.blocks[focus.block];
  auto idx = sentence_at(block, focus.offset);
  if (!idx) return std::nullopt;
  auto spans = segment_sentences(block);
  return UnitSpan{focus.block, spans[*idx].start, spans[*idx].end};
}

std::optional<UnitSpan> last_sentence(const Document& doc, Position focus) {
  for (std::size_t b = focus.block + 1; b-- > 0;) {
    auto spans = segment_sentences(doc.blocks[b]);
    for (std::size_t i = spans.size(); i-- > 0;) {
      if (b != focus.block || spans[i].end <= focus.offset) return UnitSpan{b, spans[i].start, spans[i].end};
    }
  }
  return std::nullopt;
}

}  // namespace

EditOutcome relative_edit(EditState& state, EditUnit unit, EditAction action, EditScope scope) {
  std::optional<UnitSpan> span;
  if (action == EditAction::Delete && state.focus.selection) {
    const auto& sel = *state.focus.selection;
    span = UnitSpan{sel.block, sel.start, sel.end};
  } else if (!state.document.empty()) {
    const auto pos = state.focus.position();
    if (unit == EditUnit::Word) {
      span = scope == EditScope::Last ? last_word(state.document, pos) : word_at(state.document, pos);
    } else {
      span = scope == EditScope::Last ? last_sentence(state.document, pos)
                                      : sentence_containing(state.document, pos);
    }
  }
  if (!span) return failed(state, FailReason::NothingThere);

  if (action == EditAction::Select) {
    state.focus = {span->block, span->end, Selection{span->block, span->start, span->end}};
    return changed(state, OutcomeKind::Navigated,
                   {state.document.blocks[span->block].id, span->start, span->end});
  }
  Working work{state.document, state.focus};
  auto removal = erase_tokens(work, span->block, span->start, span->end);
  commit(state, std::move(work), unit == EditUnit::Word ? "delete word" : "delete sentence");
  return deleted_outcome(state, removal);
}

EditOutcome navigate(EditState& state, NavTarget target, const TokenList& heading) {
  if (target == NavTarget::JumpToHeading) {
    const auto query = to_lower(words_text(heading));
    if (query.empty()) return failed(state, FailReason::EmptyText);
    const auto& blocks = state.document.blocks;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      if (!blocks[b].is_heading_like()) continue;
      if (to_lower(words_text(blocks[b].tokens)).find(query) == std::string::npos) continue;
      if (b + 1 < blocks.size()) {
        state.focus = {b + 1, 0, std::nullopt};
      } else {
        state.focus = {b, blocks[b].tokens.size(), std::nullopt};
      }
      return changed(state, OutcomeKind::Navigated, {blocks[b].id, 0, blocks[b].tokens.size()});
    }
    return failed(state, FailReason::NotFound, words_text(heading));
  }
  if (state.document.empty() || !is_text_block(state.document.blocks[state.focus.block])) {
    return failed(state, FailReason::NothingThere);
  }
  const auto& block = state.document.blocks[state.focus.block];
  const auto offset = target == NavTarget::StartParagraph ? 0 : block.tokens.size();
  state.focus = {state.focus.block, offset, std::nullopt};
  return changed(state, OutcomeKind::Navigated, {block.id, offset, offset});
}

EditOutcome undo_last(EditState& state) {
  if (state.undo_stack.empty()) return failed(state, FailReason::NothingToUndo);
  auto snap = std::move(state.undo_stack.back());
  state.undo_stack.pop_back();
  state.document = std::move(snap.document);
  state.focus = snap.focus;
  EditOutcome out;
  out.kind = OutcomeKind::Edited;
  out.focus = state.focus;
  out.detail = std::move(snap.label);
  return out;
}

EditOutcome insert_comment(EditState& state, const std::string& text) {
  if (state.document.empty()) return failed(state, FailReason::NothingThere);
  if (text.empty()) return failed(state, FailReason::EmptyText);
  const auto& block = state.document.blocks[state.focus.block];
  auto idx = sentence_at(block, state.focus.offset);
  if (!idx) return failed(state, FailReason::NothingThere);
  auto span = segment_sentences(block)[*idx];

  Working work{state.document, state.focus};
  Comment c;
  c.id = work.doc.allocate_comment_id();
  c.anchor = {block.id, static_cast<int>(*idx)};
  c.text = text;
  work.doc.comments.push_back(std::move(c));
  commit(state, std::move(work), "comment");
  return changed(state, OutcomeKind::Created, span);
}

EditOutcome begin_list(EditState& state, ListMode mode) {
  state.list_mode = mode;
  state.paragraph_pending = false;
  clear_selection(state);
  EditOutcome out;
  out.kind = OutcomeKind::Navigated;
  out.focus = state.focus;
  return out;
}

EditOutcome end_list(EditState& state) {
  state.list_mode = ListMode::None;
  state.paragraph_pending = true;
  clear_selection(state);
  EditOutcome out;
  out.kind = OutcomeKind::Navigated;
  out.focus = state.focus;
  return out;
}

EditOutcome new_paragraph(EditState& state) {
  state.list_mode = ListMode::None;
  state.paragraph_pending = true;
  clear_selection(state);
  EditOutcome out;
  out.kind = OutcomeKind::Navigated;
  out.focus = state.focus;
  return out;
}

void clear_selection(EditState& state) { state.focus.selection.reset(); }

bool focus_in_range(const EditState& state) {
  const auto& doc = state.document;
  const auto& f = state.focus;
  if (doc.empty()) return f.block == 0 && f.offset == 0 && !f.selection;
  if (f.block >= doc.blocks.size() || f.offset > doc.blocks[f.block].tokens.size()) return false;
  if (f.selection) {
    const auto& s = *f.selection;
    if (s.block >= doc.blocks.size() || s.start >= s.end || s.end > doc.blocks[s.block].tokens.size()) {
      return false;
    }
  }
  return true;
}

}  // namespace talkdoc
