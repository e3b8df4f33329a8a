#include "talkdoc/doc_model.hpp"

#include <algorithm>
#include <cctype>
#include <tuple>

namespace talkdoc {

std::optional<std::size_t> Document::index_of(int block_id) const {
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (blocks[i].id == block_id) return i;
  }
  return std::nullopt;
}

const Block* Document::find_block(int block_id) const {
  auto idx = index_of(block_id);
  return idx ? &blocks[*idx] : nullptr;
}

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::vector<SentenceSpan> segment_sentences(const Block& block) {
  std::vector<SentenceSpan> spans;
  const auto n = block.tokens.size();
  if (n == 0) return spans;
  if (block.type != BlockType::Paragraph) {
    spans.push_back({block.id, 0, n});
    return spans;
  }
  std::size_t start = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& tok = block.tokens[i];
    if (tok.is_punct() && is_sentence_end(tok.mark())) {
      spans.push_back({block.id, start, i + 1});
      start = i + 1;
    }
  }
  if (start < n) spans.push_back({block.id, start, n});
  return spans;
}

std::optional<std::size_t> sentence_at(const Block& block, std::size_t offset) {
  auto spans = segment_sentences(block);
  if (spans.empty()) return std::nullopt;
  if (offset == 0) return 0;
  for (std::size_t i = 0; i < spans.size(); ++i) {
    if (spans[i].start < offset && offset <= spans[i].end) return i;
  }
  return spans.size() - 1;
}

std::vector<OutlineEntry> heading_outline(const Document& document) {
  std::vector<OutlineEntry> out;
  for (const auto& block : document.blocks) {
    if (block.type == BlockType::Title) {
      out.push_back({0, words_text(block.tokens)});
    } else if (block.type == BlockType::Heading) {
      out.push_back({block.level, words_text(block.tokens)});
    }
  }
  return out;
}

namespace {

bool matches_at(const TokenList& tokens, std::size_t start, std::span<const std::string> phrase) {
  if (start + phrase.size() > tokens.size()) return false;
  for (std::size_t k = 0; k < phrase.size(); ++k) {
    const auto& tok = tokens[start + k];
    if (!tok.is_word() || !iequals(tok.text, phrase[k])) return false;
  }
  return true;
}

}  // namespace

std::optional<MatchSpan> find_content(const Document& document, Position focus,
                                      std::span<const std::string> phrase) {
  if (phrase.empty()) return std::nullopt;
  // Ranking key: (block distance, token distance, lies after focus).
  using Key = std::tuple<std::size_t, std::size_t, bool>;
  std::optional<MatchSpan> best;
  Key best_key{};
  for (std::size_t b = 0; b < document.blocks.size(); ++b) {
    const auto& tokens = document.blocks[b].tokens;
    for (std::size_t s = 0; s + phrase.size() <= tokens.size(); ++s) {
      if (!matches_at(tokens, s, phrase)) continue;
      const std::size_t e = s + phrase.size();
      Key key;
      if (b == focus.block) {
        if (e <= focus.offset) {
          key = {0, focus.offset - e, false};
        } else if (s >= focus.offset) {
          key = {0, s - focus.offset, true};
        } else {
          key = {0, 0, false};
        }
      } else if (b < focus.block) {
        key = {focus.block - b, tokens.size() - e, false};
      } else {
        key = {b - focus.block, s, true};
      }
      if (!best || key < best_key) {
        best = MatchSpan{b, s, e};
        best_key = key;
      }
    }
  }
  return best;
}

std::string render_literal(std::span<const Token> tokens) {
  std::string out;
  for (const auto& tok : tokens) {
    if (tok.is_word() && !out.empty()) out += ' ';
    out += tok.text;
  }
  return out;
}

std::string words_text(std::span<const Token> tokens) {
  std::string out;
  for (const auto& tok : tokens) {
    if (!tok.is_word()) continue;
    if (!out.empty()) out += ' ';
    out += tok.text;
  }
  return out;
}

namespace {

std::string markdown_line(const Block& block) {
  const auto text = render_literal(block.tokens);
  switch (block.type) {
    case BlockType::Title:
      return "# " + text;
    case BlockType::Heading:
      return std::string(static_cast<std::size_t>(block.level + 1), '#') + " " + text;
    case BlockType::Paragraph:
      return text;
    case BlockType::BulletItem:
      return "- " + text;
    case BlockType::EnumItem:
      return std::to_string(block.index) + ". " + text;
  }
  return text;
}

template <typename LineFn>
std::string export_blocks(const Document& document, LineFn&& line_for) {
  std::string out;
  for (const auto& block : document.blocks) {
    if (block.tokens.empty()) continue;
    if (!out.empty()) out += '\n';
    out += line_for(block);
    out += '\n';
  }
  return out;
}

}  // namespace

std::string export_markdown(const Document& document) {
  return export_blocks(document, [&](const Block& block) {
    std::string line = markdown_line(block);
    for (const auto& comment : document.comments) {
      if (comment.orphaned || comment.anchor.block_id != block.id) continue;
      line += "\n<!-- comment: " + comment.text + " -->";
    }
    return line;
  });
}

std::string export_plain(const Document& document) {
  return export_blocks(document, [](const Block& block) { return render_literal(block.tokens); });
}

std::string_view block_type_name(BlockType type) {
  switch (type) {
    case BlockType::Title: return "title";
    case BlockType::Heading: return "heading";
    case BlockType::Paragraph: return "paragraph";
    case BlockType::BulletItem: return "bullet";
    case BlockType::EnumItem: return "enum";
  }
  return "paragraph";
}

std::optional<BlockType> parse_block_type(std::string_view name) {
  for (auto type : {BlockType::Title, BlockType::Heading, BlockType::Paragraph,
                    BlockType::BulletItem, BlockType::EnumItem}) {
    if (block_type_name(type) == name) return type;
  }
  return std::nullopt;
}

}  // namespace talkdoc
