#pragma once

#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "talkdoc/doc_model.hpp"

namespace talkdoc {

/// Spoken punctuation vocabulary: spoken phrase -> mark.
///
/// Phrases are matched case-insensitively and longest first, so "question
/// mark" wins over any single-word entry.
class KeywordTable {
 public:
  struct Entry {
    std::vector<std::string> words;  // lower-case
    char mark;
  };

  KeywordTable() = default;
  explicit KeywordTable(std::vector<Entry> entries);

  /// The built-in English table (comma, period, semicolon, colon,
  /// question mark, exclamation mark).
  static const KeywordTable& defaults();

  /// Parses lines of the form `<spoken words...> <mark>`; `#` starts a comment.
  static KeywordTable parse(std::istream& in);
  static KeywordTable load_file(const std::string& path);

  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t longest() const { return longest_; }

  /// Spoken form used when verbalizing `mark`.
  std::string spoken(char mark) const;
  bool is_keyword_word(std::string_view word) const;

 private:
  std::vector<Entry> entries_;
  std::size_t longest_ = 0;
};

struct Utterance {
  std::string raw;
  TokenList tokens;
};

TokenList tokenize(std::string_view raw, const KeywordTable& table = KeywordTable::defaults());
Utterance make_utterance(std::string raw, const KeywordTable& table = KeywordTable::defaults());

/// Speech-ready rendering. With `suppress_final`, a trailing `.` or `?` is
/// dropped since prosody carries it; `!` is always spoken.
std::string verbalize(std::span<const Token> tokens, bool suppress_final,
                      const KeywordTable& table = KeywordTable::defaults());

TokenList apply_casing(TokenList tokens, BlockType type);

}  // namespace talkdoc
