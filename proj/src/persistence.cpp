#include "talkdoc/persistence.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace talkdoc {

using nlohmann::json;

json document_to_json(const Document& document) {
  json blocks = json::array();
  for (const auto& block : document.blocks) {
    json tokens = json::array();
    for (const auto& tok : block.tokens) {
      tokens.push_back(tok.is_word() ? json{{"w", tok.text}} : json{{"p", tok.text}});
    }
    json b = {{"id", block.id}, {"kind", block_type_name(block.type)}};
    if (block.type == BlockType::Heading) b["level"] = block.level;
    if (block.type == BlockType::EnumItem) b["index"] = block.index;
    b["tokens"] = std::move(tokens);
    blocks.push_back(std::move(b));
  }
  json comments = json::array();
  for (const auto& c : document.comments) {
    comments.push_back({{"id", c.id},
                        {"block", c.anchor.block_id},
                        {"sentence", c.anchor.sentence},
                        {"text", c.text},
                        {"orphaned", c.orphaned}});
  }
  return {{"version", kDocumentFormatVersion}, {"blocks", std::move(blocks)},
          {"comments", std::move(comments)}};
}

namespace {

const json& require(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw FormatError(where + ": missing field '" + key + "'");
  return *it;
}

int require_int(const json& obj, const char* key, const std::string& where) {
  const auto& v = require(obj, key, where);
  if (!v.is_number_integer()) throw FormatError(where + ": field '" + key + "' must be an integer");
  return v.get<int>();
}

Token parse_token(const json& t, const std::string& where) {
  if (!t.is_object() || t.size() != 1) throw FormatError(where + ": token must be {\"w\":..} or {\"p\":..}");
  if (auto w = t.find("w"); w != t.end()) {
    if (!w->is_string()) throw FormatError(where + ": word must be a string");
    auto text = w->get<std::string>();
    bool bad = text.empty() || std::any_of(text.begin(), text.end(), [](char c) {
                 return std::isspace(static_cast<unsigned char>(c)) || is_punct_mark(c);
               });
    if (bad) throw FormatError(where + ": invalid word '" + text + "'");
    return Token::word(std::move(text));
  }
  if (auto p = t.find("p"); p != t.end()) {
    if (!p->is_string()) throw FormatError(where + ": mark must be a string");
    auto mark = p->get<std::string>();
    if (mark.size() != 1 || !is_punct_mark(mark[0])) throw FormatError(where + ": invalid mark '" + mark + "'");
    return Token::punct(mark[0]);
  }
  throw FormatError(where + ": token must be {\"w\":..} or {\"p\":..}");
}

}  // namespace

Document document_from_json(const json& j) {
  if (!j.is_object()) throw FormatError("document must be a JSON object");
  if (require_int(j, "version", "document") != kDocumentFormatVersion) {
    throw FormatError("unsupported document version");
  }
  const auto& blocks = require(j, "blocks", "document");
  if (!blocks.is_array()) throw FormatError("document: 'blocks' must be an array");

  Document doc;
  std::set<int> ids;
  int max_id = 0;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const auto where = "block " + std::to_string(i);
    const auto& b = blocks[i];
    if (!b.is_object()) throw FormatError(where + ": must be an object");
    Block block;
    block.id = require_int(b, "id", where);
    if (block.id <= 0 || !ids.insert(block.id).second) throw FormatError(where + ": duplicate or invalid id");
    max_id = std::max(max_id, block.id);
    const auto& kind = require(b, "kind", where);
    auto type = kind.is_string() ? parse_block_type(kind.get<std::string>()) : std::nullopt;
    if (!type) throw FormatError(where + ": unknown kind");
    block.type = *type;
    if (block.type == BlockType::Title && i != 0) throw FormatError(where + ": title must be the first block");
    if (block.type == BlockType::Heading) {
      block.level = require_int(b, "level", where);
      if (block.level < 1 || block.level > 3) throw FormatError(where + ": heading level must be 1..3");
    }
    if (block.type == BlockType::EnumItem) {
      block.index = require_int(b, "index", where);
      if (block.index < 1) throw FormatError(where + ": enum index must be positive");
    }
    const auto& tokens = require(b, "tokens", where);
    if (!tokens.is_array()) throw FormatError(where + ": 'tokens' must be an array");
    for (const auto& t : tokens) block.tokens.push_back(parse_token(t, where));
    doc.blocks.push_back(std::move(block));
  }

  int max_comment = 0;
  if (auto it = j.find("comments"); it != j.end()) {
    if (!it->is_array()) throw FormatError("document: 'comments' must be an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const auto where = "comment " + std::to_string(i);
      const auto& c = (*it)[i];
      if (!c.is_object()) throw FormatError(where + ": must be an object");
      Comment comment;
      comment.id = require_int(c, "id", where);
      comment.anchor.block_id = require_int(c, "block", where);
      comment.anchor.sentence = require_int(c, "sentence", where);
      const auto& text = require(c, "text", where);
      if (!text.is_string()) throw FormatError(where + ": text must be a string");
      comment.text = text.get<std::string>();
      if (auto o = c.find("orphaned"); o != c.end() && o->is_boolean()) comment.orphaned = o->get<bool>();
      if (!comment.orphaned && !ids.contains(comment.anchor.block_id)) {
        throw FormatError(where + ": anchor block does not exist");
      }
      max_comment = std::max(max_comment, comment.id);
      doc.comments.push_back(std::move(comment));
    }
  }
  doc.next_block_id = max_id + 1;
  doc.next_comment_id = max_comment + 1;
  return doc;
}

std::string save_document(const Document& document) {
  return document_to_json(document).dump(2, ' ', false, json::error_handler_t::replace) + "\n";
}

Document load_document(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("invalid JSON: ") + e.what());
  }
  return document_from_json(j);
}

}  // namespace talkdoc
