#pragma once

#include <bitset>
#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "talkdoc/doc_model.hpp"
#include "talkdoc/normalizer.hpp"

namespace talkdoc {

enum class IntentKind : std::uint8_t {
  SetTitle,
  AddHeading,
  NewParagraph,
  StartBulletList,
  StartEnumeration,
  EndList,
  StartDictation,
  StartCommandMode,
  ReplaceContent,
  InsertContent,
  DeleteContent,
  MoveContent,
  DeleteLastWord,
  DeleteWord,
  DeleteSentence,
  SelectWord,
  SelectSentence,
  NavStartParagraph,
  NavEndParagraph,
  JumpToHeading,
  ReadSentence,
  ReadParagraph,
  ReadDocument,
  ReadHeadings,
  RepeatLastSentence,
  Stop,
  GoOn,
  InsertComment,
  Undo,
  Export,
  Dictate,
};

inline constexpr std::size_t kIntentKindCount = static_cast<std::size_t>(IntentKind::Dictate) + 1;

std::string_view intent_name(IntentKind kind);
std::optional<IntentKind> parse_intent_name(std::string_view name);

enum class Relation : std::uint8_t { Before, After };
enum class ExportFormat : std::uint8_t { Markdown, Plain };

std::string_view export_format_name(ExportFormat format);
std::optional<ExportFormat> parse_export_format(std::string_view name);

/// Non-empty list of words, as spoken inside a content command.
using Phrase = std::vector<std::string>;

/// A recognized command. Only the slots relevant to `kind` are populated:
///
///   SetTitle, AddHeading, JumpToHeading, InsertComment, Dictate -> text
///   AddHeading                                                 -> level
///   ReplaceContent        -> target (old), content (new)
///   InsertContent         -> content, relation, anchor
///   DeleteContent         -> target
///   MoveContent           -> target, relation, anchor
///   Export                -> format
struct Intent {
  IntentKind kind = IntentKind::Dictate;
  TokenList text;
  int level = 0;
  Phrase target;
  Phrase content;
  Phrase anchor;
  Relation relation = Relation::Before;
  ExportFormat format = ExportFormat::Markdown;

  friend bool operator==(const Intent&, const Intent&) = default;
};

enum class Mode : std::uint8_t { Command, Dictation };

struct NluContext {
  Mode mode = Mode::Command;
  bool post_readback = false;
};

using IntentSet = std::bitset<kIntentKindCount>;

inline bool contains(const IntentSet& set, IntentKind kind) { return set.test(static_cast<std::size_t>(kind)); }

/// Intents that may be recognized in `ctx`.
IntentSet active_intents(const NluContext& ctx);

struct MatchResult {
  std::optional<Intent> intent;  // empty means NoMatch
  std::string pattern;           // template source, "<dictation>" or "<none>"

  bool matched() const { return intent.has_value(); }
};

enum class SlotType : std::uint8_t { Phrase, Text, Level, Format, Relation };

struct TemplateElement {
  bool is_slot = false;
  std::vector<std::string> keywords;  // lower-case alternatives, for keywords
  SlotType slot_type = SlotType::Phrase;
  std::string slot_name;
};

struct Template {
  IntentKind intent = IntentKind::SetTitle;
  std::vector<TemplateElement> elements;
  std::string source;
  int line = 0;
};

/// Command templates, one per line:
///
///     ReplaceContent: replace {old} with {new}
///
/// Keywords may list alternatives separated by `|`. Slot names select the
/// slot type: text, old, new, target, anchor, level, format, relation.
class Grammar {
 public:
  static Grammar parse(std::istream& in);
  static Grammar parse(std::string_view text);
  static Grammar load_file(const std::string& path);
  static const Grammar& defaults();
  static std::string_view default_source();

  const std::vector<Template>& templates() const { return templates_; }

 private:
  std::vector<Template> templates_;
};

/// Swappable interpretation backend. A remote NLU service would implement
/// the same call.
class NluBackend {
 public:
  virtual ~NluBackend() = default;
  virtual MatchResult parse(const Utterance& utterance, const NluContext& ctx) const = 0;
};

/// Deterministic keyword-template matcher.
class TemplateMatcher final : public NluBackend {
 public:
  explicit TemplateMatcher(Grammar grammar = Grammar::defaults(),
                           KeywordTable keywords = KeywordTable::defaults());

  MatchResult parse(const Utterance& utterance, const NluContext& ctx) const override;

  /// Indices of every template accepting the utterance, ignoring context.
  std::vector<std::size_t> accepting_templates(const Utterance& utterance) const;

  const Grammar& grammar() const { return grammar_; }

 private:
  struct Lexeme;
  std::vector<Lexeme> lex(std::string_view raw) const;
  std::optional<Intent> match(std::size_t template_index, const std::vector<Lexeme>& lexemes) const;

  Grammar grammar_;
  KeywordTable keywords_;
  // reserved_[t][k]: words a bare slot at element k of template t may not start with.
  std::vector<std::vector<std::vector<std::string>>> reserved_;
};

}  // namespace talkdoc
