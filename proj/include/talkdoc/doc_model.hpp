#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace talkdoc {

/// A single word or punctuation mark inside a block.
///
/// Words never contain whitespace or any of the six sentence marks; a punct
/// token holds exactly one of `, . ? ! ; :`.
struct Token {
  enum class Kind : std::uint8_t { Word, Punct };

  Kind kind = Kind::Word;
  std::string text;

  static Token word(std::string text) { return {Kind::Word, std::move(text)}; }
  static Token punct(char mark) { return {Kind::Punct, std::string(1, mark)}; }

  bool is_word() const { return kind == Kind::Word; }
  bool is_punct() const { return kind == Kind::Punct; }
  char mark() const { return is_punct() ? text.front() : '\0'; }

  friend bool operator==(const Token&, const Token&) = default;
};

using TokenList = std::vector<Token>;

/// The punctuation characters a Punct token may carry.
inline constexpr std::string_view kPunctMarks = ",.?!;:";

inline bool is_punct_mark(char c) { return kPunctMarks.find(c) != std::string_view::npos; }
inline bool is_sentence_end(char c) { return c == '.' || c == '?' || c == '!'; }

enum class BlockType : std::uint8_t { Title, Heading, Paragraph, BulletItem, EnumItem };

struct Block {
  int id = 0;
  BlockType type = BlockType::Paragraph;
  int level = 0;  // Heading only, 1..3
  int index = 0;  // EnumItem only, position within its run
  TokenList tokens;

  bool is_heading_like() const { return type == BlockType::Title || type == BlockType::Heading; }
  bool is_list_item() const { return type == BlockType::BulletItem || type == BlockType::EnumItem; }

  friend bool operator==(const Block&, const Block&) = default;
};

struct CommentAnchor {
  int block_id = 0;
  int sentence = 0;
  friend bool operator==(const CommentAnchor&, const CommentAnchor&) = default;
};

struct Comment {
  int id = 0;
  CommentAnchor anchor;
  std::string text;
  bool orphaned = false;  // anchor block was removed; kept but not exported

  friend bool operator==(const Comment&, const Comment&) = default;
};

/// Ordered blocks plus anchored comments. A Title block, when present, is
/// always the first block.
struct Document {
  std::vector<Block> blocks;
  std::vector<Comment> comments;
  int next_block_id = 1;
  int next_comment_id = 1;

  bool empty() const { return blocks.empty(); }
  std::optional<std::size_t> index_of(int block_id) const;
  const Block* find_block(int block_id) const;
  bool has_title() const { return !blocks.empty() && blocks.front().type == BlockType::Title; }

  /// Allocates the next monotonic block id.
  int allocate_block_id() { return next_block_id++; }
  int allocate_comment_id() { return next_comment_id++; }

  friend bool operator==(const Document&, const Document&) = default;
};

/// Half-open token range [start, end) inside one block.
struct SentenceSpan {
  int block_id = 0;
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - start; }
  friend bool operator==(const SentenceSpan&, const SentenceSpan&) = default;
};

/// A location between tokens: `offset` is the insertion point before token
/// `offset` in block `block`.
struct Position {
  std::size_t block = 0;
  std::size_t offset = 0;
  friend bool operator==(const Position&, const Position&) = default;
};

struct MatchSpan {
  std::size_t block = 0;  // block index
  std::size_t start = 0;
  std::size_t end = 0;
  friend bool operator==(const MatchSpan&, const MatchSpan&) = default;
};

struct OutlineEntry {
  int level = 0;  // 0 for the title
  std::string text;
  friend bool operator==(const OutlineEntry&, const OutlineEntry&) = default;
};

std::vector<SentenceSpan> segment_sentences(const Block& block);

/// Index of the sentence that contains `offset`, treating a sentence as
/// owning its end boundary (start < offset <= end). Offset 0 maps to the
/// first sentence. Empty when the block has no tokens.
std::optional<std::size_t> sentence_at(const Block& block, std::size_t offset);

std::vector<OutlineEntry> heading_outline(const Document& document);

/// Locates `phrase` (case-insensitive, words only) nearest to `focus`.
std::optional<MatchSpan> find_content(const Document& document, Position focus,
                                      std::span<const std::string> phrase);

/// Words joined by single spaces with punctuation attached to the preceding word.
std::string render_literal(std::span<const Token> tokens);
std::string words_text(std::span<const Token> tokens);

std::string export_markdown(const Document& document);
std::string export_plain(const Document& document);

bool iequals(std::string_view a, std::string_view b);
std::string to_lower(std::string_view s);

std::string_view block_type_name(BlockType type);
std::optional<BlockType> parse_block_type(std::string_view name);

}  // namespace talkdoc
