#include "talkdoc/normalizer.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace talkdoc {

KeywordTable::KeywordTable(std::vector<Entry> entries) : entries_(std::move(entries)) {
  for (auto& e : entries_) {
    for (auto& w : e.words) w = to_lower(w);
  }
  std::stable_sort(entries_.begin(), entries_.end(),
                   [](const Entry& a, const Entry& b) { return a.words.size() > b.words.size(); });
  for (const auto& e : entries_) longest_ = std::max(longest_, e.words.size());
}

const KeywordTable& KeywordTable::defaults() {
  static const KeywordTable table({
      {{"comma"}, ','},
      {{"period"}, '.'},
      {{"semicolon"}, ';'},
      {{"colon"}, ':'},
      {{"question", "mark"}, '?'},
      {{"exclamation", "mark"}, '!'},
  });
  return table;
}

KeywordTable KeywordTable::parse(std::istream& in) {
  std::vector<Entry> entries;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos && hash == line.find_first_not_of(" \t")) continue;
    std::istringstream fields(line);
    std::vector<std::string> words;
    for (std::string w; fields >> w;) words.push_back(w);
    if (words.empty()) continue;
    const auto& mark = words.back();
    if (words.size() < 2 || mark.size() != 1 || !is_punct_mark(mark[0])) {
      throw std::runtime_error("keyword table line " + std::to_string(lineno) +
                               ": expected '<spoken words> <mark>'");
    }
    char m = mark[0];
    words.pop_back();
    entries.push_back({std::move(words), m});
  }
  return KeywordTable(std::move(entries));
}

KeywordTable KeywordTable::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read keyword table '" + path + "'");
  return parse(in);
}

std::string KeywordTable::spoken(char mark) const {
  // Prefer the shortest phrase for a mark so user additions like
  // "full stop" do not change the default readback.
  const Entry* best = nullptr;
  for (const auto& e : entries_) {
    if (e.mark == mark && (!best || e.words.size() < best->words.size())) best = &e;
  }
  if (!best) return std::string(1, mark);
  std::string out;
  for (const auto& w : best->words) {
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

bool KeywordTable::is_keyword_word(std::string_view word) const {
  return std::any_of(entries_.begin(), entries_.end(), [&](const Entry& e) {
    return e.words.size() == 1 && iequals(e.words.front(), word);
  });
}

namespace {

// Splits one whitespace-free chunk into words and punctuation marks.
void split_chunk(std::string_view chunk, TokenList& out) {
  std::string word;
  for (char c : chunk) {
    if (is_punct_mark(c)) {
      if (!word.empty()) out.push_back(Token::word(std::exchange(word, {})));
      out.push_back(Token::punct(c));
    } else {
      word += c;
    }
  }
  if (!word.empty()) out.push_back(Token::word(std::move(word)));
}

}  // namespace

TokenList tokenize(std::string_view raw, const KeywordTable& table) {
  TokenList pieces;
  std::size_t i = 0;
  while (i < raw.size()) {
    while (i < raw.size() && std::isspace(static_cast<unsigned char>(raw[i]))) ++i;
    std::size_t j = i;
    while (j < raw.size() && !std::isspace(static_cast<unsigned char>(raw[j]))) ++j;
    if (j > i) split_chunk(raw.substr(i, j - i), pieces);
    i = j;
  }

  TokenList out;
  out.reserve(pieces.size());
  for (std::size_t k = 0; k < pieces.size();) {
    bool replaced = false;
    if (pieces[k].is_word()) {
      for (const auto& entry : table.entries()) {
        const auto n = entry.words.size();
        if (k + n > pieces.size()) continue;
        bool hit = true;
        for (std::size_t m = 0; m < n && hit; ++m) {
          hit = pieces[k + m].is_word() && iequals(pieces[k + m].text, entry.words[m]);
        }
        if (hit) {
          out.push_back(Token::punct(entry.mark));
          k += n;
          replaced = true;
          break;
        }
      }
    }
    if (!replaced) out.push_back(std::move(pieces[k++]));
  }
  return out;
}

Utterance make_utterance(std::string raw, const KeywordTable& table) {
  auto tokens = tokenize(raw, table);
  return {std::move(raw), std::move(tokens)};
}

std::string verbalize(std::span<const Token> tokens, bool suppress_final, const KeywordTable& table) {
  std::size_t n = tokens.size();
  if (suppress_final && n > 0 && tokens[n - 1].is_punct() &&
      (tokens[n - 1].mark() == '.' || tokens[n - 1].mark() == '?')) {
    --n;
  }
  std::string out;
  for (std::size_t i = 0; i < n; ++i) {
    if (!out.empty()) out += ' ';
    out += tokens[i].is_word() ? tokens[i].text : table.spoken(tokens[i].mark());
  }
  return out;
}

namespace {

void capitalize(Token& tok) {
  if (!tok.text.empty()) {
    auto& c = tok.text.front();
    c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  }
}

}  // namespace

TokenList apply_casing(TokenList tokens, BlockType type) {
  switch (type) {
    case BlockType::Title:
      for (auto& tok : tokens) {
        if (tok.is_word()) capitalize(tok);
      }
      break;
    case BlockType::Heading:
      for (auto& tok : tokens) {
        if (tok.is_word()) {
          capitalize(tok);
          break;
        }
      }
      break;
    case BlockType::Paragraph:
    case BlockType::BulletItem:
    case BlockType::EnumItem: {
      bool sentence_start = true;
      for (auto& tok : tokens) {
        if (tok.is_word()) {
          if (sentence_start) capitalize(tok);
          sentence_start = false;
        } else if (is_sentence_end(tok.mark())) {
          sentence_start = true;
        }
      }
      break;
    }
  }
  return tokens;
}

}  // namespace talkdoc
