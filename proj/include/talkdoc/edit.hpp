#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "talkdoc/doc_model.hpp"
#include "talkdoc/intent.hpp"

namespace talkdoc {

struct Selection {
  std::size_t block = 0;
  std::size_t start = 0;
  std::size_t end = 0;
  friend bool operator==(const Selection&, const Selection&) = default;
};

/// The virtual cursor. On an empty document it rests at (0, 0).
struct Focus {
  std::size_t block = 0;
  std::size_t offset = 0;
  std::optional<Selection> selection;

  Position position() const { return {block, offset}; }
  friend bool operator==(const Focus&, const Focus&) = default;
};

enum class ListMode : std::uint8_t { None, Bullet, Enumeration };

struct Snapshot {
  Document document;
  Focus focus;
  std::string label;  // what the snapshotted command did, e.g. "insert"
};

/// Document plus cursor plus undo history. Value type; one writer at a time.
struct EditState {
  Document document;
  Focus focus;
  ListMode list_mode = ListMode::None;
  bool paragraph_pending = false;  // next dictation opens a new paragraph
  std::vector<Snapshot> undo_stack;
};

enum class OutcomeKind : std::uint8_t { Created, Edited, Deleted, Navigated, NoOp, Failed };
enum class FailReason : std::uint8_t { None, EmptyText, NotFound, NothingThere, NothingToUndo };

struct EditOutcome {
  OutcomeKind kind = OutcomeKind::NoOp;
  FailReason reason = FailReason::None;
  /// Changed range. Empty range marks a deletion point. Absent when the
  /// affected block was removed.
  std::optional<SentenceSpan> affected;
  Focus focus;
  std::string detail;  // missing phrase for NotFound, reverted label for undo
  BlockType removed_type = BlockType::Paragraph;

  bool failed() const { return kind == OutcomeKind::Failed; }
};

enum class EditUnit : std::uint8_t { Word, Sentence };
enum class EditAction : std::uint8_t { Delete, Select };
enum class EditScope : std::uint8_t { Last, AtFocus };
enum class NavTarget : std::uint8_t { StartParagraph, EndParagraph, JumpToHeading };

EditOutcome add_structure_block(EditState& state, BlockType type, int level, const TokenList& text);
EditOutcome append_dictation(EditState& state, const TokenList& tokens);
EditOutcome replace_content(EditState& state, const Phrase& old_phrase, const Phrase& new_phrase);
EditOutcome insert_content(EditState& state, const Phrase& content, Relation relation, const Phrase& anchor);
EditOutcome delete_content(EditState& state, const Phrase& target);
EditOutcome move_content(EditState& state, const Phrase& target, Relation relation, const Phrase& anchor);
EditOutcome relative_edit(EditState& state, EditUnit unit, EditAction action, EditScope scope);
EditOutcome navigate(EditState& state, NavTarget target, const TokenList& heading = {});
EditOutcome undo_last(EditState& state);
EditOutcome insert_comment(EditState& state, const std::string& text);

/// List and paragraph switches. They change how the next dictation is
/// placed but not the document itself, so they push no snapshot.
EditOutcome begin_list(EditState& state, ListMode mode);
EditOutcome end_list(EditState& state);
EditOutcome new_paragraph(EditState& state);

void clear_selection(EditState& state);

/// True when focus and selection index into the current document.
bool focus_in_range(const EditState& state);

}  // namespace talkdoc
