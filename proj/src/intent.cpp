#include "talkdoc/intent.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "talkdoc/embedded_data.hpp"

namespace talkdoc {

namespace {

constexpr std::array<std::string_view, kIntentKindCount> kIntentNames = {
    "SetTitle",          "AddHeading",        "NewParagraph",      "StartBulletList",
    "StartEnumeration",  "EndList",           "StartDictation",    "StartCommandMode",
    "ReplaceContent",    "InsertContent",     "DeleteContent",     "MoveContent",
    "DeleteLastWord",    "DeleteWord",        "DeleteSentence",    "SelectWord",
    "SelectSentence",    "NavStartParagraph", "NavEndParagraph",   "JumpToHeading",
    "ReadSentence",      "ReadParagraph",     "ReadDocument",      "ReadHeadings",
    "RepeatLastSentence", "Stop",             "GoOn",              "InsertComment",
    "Undo",              "Export",            "Dictate",
};

constexpr std::array<std::string_view, 3> kConnectives = {"with", "before", "after"};

bool is_connective(std::string_view word) {
  return std::any_of(kConnectives.begin(), kConnectives.end(), [&](auto c) { return iequals(c, word); });
}

std::optional<int> parse_level(std::string_view word) {
  static const std::map<std::string, int> levels = {{"one", 1}, {"1", 1}, {"two", 2},
                                                    {"2", 2},   {"three", 3}, {"3", 3}};
  auto it = levels.find(to_lower(word));
  if (it == levels.end()) return std::nullopt;
  return it->second;
}

// Slots each intent's templates must provide.
std::vector<std::string> required_slots(IntentKind kind) {
  switch (kind) {
    case IntentKind::SetTitle:
    case IntentKind::JumpToHeading:
    case IntentKind::InsertComment: return {"text"};
    case IntentKind::AddHeading: return {"level", "text"};
    case IntentKind::ReplaceContent: return {"old", "new"};
    case IntentKind::InsertContent: return {"new", "relation", "anchor"};
    case IntentKind::DeleteContent: return {"target"};
    case IntentKind::MoveContent: return {"target", "relation", "anchor"};
    case IntentKind::Export: return {"format"};
    default: return {};
  }
}

std::optional<SlotType> slot_type_for(std::string_view name) {
  if (name == "text") return SlotType::Text;
  if (name == "old" || name == "new" || name == "target" || name == "anchor") return SlotType::Phrase;
  if (name == "level") return SlotType::Level;
  if (name == "format") return SlotType::Format;
  if (name == "relation") return SlotType::Relation;
  return std::nullopt;
}

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

bool captures_text(SlotType t) { return t == SlotType::Phrase || t == SlotType::Text; }

}  // namespace

std::string_view intent_name(IntentKind kind) { return kIntentNames[static_cast<std::size_t>(kind)]; }

std::optional<IntentKind> parse_intent_name(std::string_view name) {
  for (std::size_t i = 0; i < kIntentNames.size(); ++i) {
    if (kIntentNames[i] == name) return static_cast<IntentKind>(i);
  }
  return std::nullopt;
}

std::string_view export_format_name(ExportFormat format) {
  return format == ExportFormat::Markdown ? "markdown" : "plain";
}

std::optional<ExportFormat> parse_export_format(std::string_view name) {
  if (iequals(name, "markdown")) return ExportFormat::Markdown;
  if (iequals(name, "plain")) return ExportFormat::Plain;
  return std::nullopt;
}

IntentSet active_intents(const NluContext& ctx) {
  IntentSet set;
  if (ctx.mode == Mode::Command) {
    set.set();
    set.reset(static_cast<std::size_t>(IntentKind::Dictate));
  } else if (ctx.post_readback) {
    set.set();
  } else {
    for (auto k : {IntentKind::Dictate, IntentKind::StartCommandMode, IntentKind::Stop, IntentKind::Undo,
                   IntentKind::Export}) {
      set.set(static_cast<std::size_t>(k));
    }
  }
  return set;
}

// ---------------------------------------------------------------------------
// Grammar

Grammar Grammar::parse(std::istream& in) {
  Grammar g;
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& msg) {
    throw std::runtime_error("grammar line " + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    auto body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    auto colon = body.find(':');
    if (colon == std::string::npos) fail("expected 'Intent: pattern'");
    auto kind = parse_intent_name(trim(body.substr(0, colon)));
    if (!kind) fail("unknown intent '" + trim(body.substr(0, colon)) + "'");
    if (*kind == IntentKind::Dictate) fail("Dictate is the fallback and takes no template");

    Template t;
    t.intent = *kind;
    t.line = lineno;
    t.source = body;
    std::istringstream words(body.substr(colon + 1));
    for (std::string w; words >> w;) {
      TemplateElement el;
      if (w.front() == '{') {
        if (w.back() != '}' || w.size() < 3) fail("malformed slot '" + w + "'");
        el.is_slot = true;
        el.slot_name = w.substr(1, w.size() - 2);
        auto type = slot_type_for(el.slot_name);
        if (!type) fail("unknown slot '" + el.slot_name + "'");
        el.slot_type = *type;
        if (el.slot_type == SlotType::Relation) el.keywords = {"before", "after"};
      } else {
        std::istringstream alts(w);
        for (std::string a; std::getline(alts, a, '|');) {
          if (!a.empty()) el.keywords.push_back(to_lower(a));
        }
        if (el.keywords.empty()) fail("empty keyword");
      }
      t.elements.push_back(std::move(el));
    }
    if (t.elements.empty() || t.elements.front().is_slot) fail("template must start with a keyword");

    std::vector<std::string> names;
    for (std::size_t i = 0; i < t.elements.size(); ++i) {
      const auto& el = t.elements[i];
      if (!el.is_slot) continue;
      names.push_back(el.slot_name);
      if (captures_text(el.slot_type) && i + 1 < t.elements.size()) {
        const auto& next = t.elements[i + 1];
        if (next.is_slot && next.slot_type != SlotType::Relation) {
          fail("a phrase slot must be followed by a keyword");
        }
      }
    }
    auto required = required_slots(*kind);
    std::sort(names.begin(), names.end());
    std::sort(required.begin(), required.end());
    if (names != required) fail("slots do not match the intent's arguments");
    g.templates_.push_back(std::move(t));
  }
  return g;
}

Grammar Grammar::parse(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse(in);
}

Grammar Grammar::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read grammar '" + path + "'");
  return parse(in);
}

std::string_view Grammar::default_source() { return embedded::kCommandGrammar; }

const Grammar& Grammar::defaults() {
  static const Grammar g = parse(default_source());
  return g;
}

// ---------------------------------------------------------------------------
// Matching

struct TemplateMatcher::Lexeme {
  enum class Kind : std::uint8_t { Word, Punct, Quoted };
  Kind kind = Kind::Word;
  Token token;
  TokenList quoted;

  bool is_word(std::string_view w) const { return kind == Kind::Word && iequals(token.text, w); }
  bool is_word_in(const std::vector<std::string>& alts) const {
    return kind == Kind::Word &&
           std::any_of(alts.begin(), alts.end(), [&](const auto& a) { return iequals(token.text, a); });
  }
};

namespace {

struct Delimiter {
  std::string_view open;
  std::string_view close;
};

constexpr std::array<Delimiter, 4> kDelimiters = {{
    {"\xC2\xAB", "\xC2\xBB"},          // « »
    {"\xE2\x80\x9C", "\xE2\x80\x9D"},  // “ ”
    {"\"", "\""},
    {"\xE2\x80\x98", "\xE2\x80\x99"},  // ‘ ’
}};

bool boundary_after(std::string_view raw, std::size_t pos) {
  if (pos >= raw.size()) return true;
  auto c = static_cast<unsigned char>(raw[pos]);
  return std::isspace(c) || is_punct_mark(static_cast<char>(c));
}

}  // namespace

TemplateMatcher::TemplateMatcher(Grammar grammar, KeywordTable keywords)
    : grammar_(std::move(grammar)), keywords_(std::move(keywords)) {
  const auto& ts = grammar_.templates();
  reserved_.resize(ts.size());
  auto literal_prefix = [](const Template& t, std::size_t k) {
    if (t.elements.size() <= k) return false;
    return std::all_of(t.elements.begin(), t.elements.begin() + static_cast<std::ptrdiff_t>(k),
                       [](const auto& e) { return !e.is_slot; });
  };
  auto overlap = [](const TemplateElement& a, const TemplateElement& b) {
    return std::any_of(a.keywords.begin(), a.keywords.end(), [&](const auto& w) {
      return std::find(b.keywords.begin(), b.keywords.end(), w) != b.keywords.end();
    });
  };
  for (std::size_t t = 0; t < ts.size(); ++t) {
    reserved_[t].resize(ts[t].elements.size());
    for (std::size_t k = 0; k < ts[t].elements.size(); ++k) {
      if (!ts[t].elements[k].is_slot || !captures_text(ts[t].elements[k].slot_type)) continue;
      if (!literal_prefix(ts[t], k)) continue;
      for (std::size_t u = 0; u < ts.size(); ++u) {
        if (u == t || !literal_prefix(ts[u], k) || ts[u].elements[k].is_slot) continue;
        bool same_prefix = true;
        for (std::size_t i = 0; i < k && same_prefix; ++i) {
          same_prefix = overlap(ts[t].elements[i], ts[u].elements[i]);
        }
        if (!same_prefix) continue;
        auto& r = reserved_[t][k];
        for (const auto& w : ts[u].elements[k].keywords) {
          if (std::find(r.begin(), r.end(), w) == r.end()) r.push_back(w);
        }
      }
    }
  }
}

std::vector<TemplateMatcher::Lexeme> TemplateMatcher::lex(std::string_view raw) const {
  std::vector<Lexeme> out;
  auto flush_plain = [&](std::string_view text) {
    for (auto& tok : tokenize(text, keywords_)) {
      Lexeme lx;
      lx.kind = tok.is_word() ? Lexeme::Kind::Word : Lexeme::Kind::Punct;
      lx.token = std::move(tok);
      out.push_back(std::move(lx));
    }
  };

  std::size_t plain_start = 0;
  std::size_t i = 0;
  while (i < raw.size()) {
    bool word_start = i == 0 || std::isspace(static_cast<unsigned char>(raw[i - 1]));
    bool consumed = false;
    if (word_start) {
      for (const auto& d : kDelimiters) {
        if (raw.substr(i, d.open.size()) != d.open) continue;
        std::size_t from = i + d.open.size();
        std::size_t pos = raw.find(d.close, from);
        while (pos != std::string_view::npos && !boundary_after(raw, pos + d.close.size())) {
          pos = raw.find(d.close, pos + 1);
        }
        if (pos == std::string_view::npos) continue;
        flush_plain(raw.substr(plain_start, i - plain_start));
        Lexeme lx;
        lx.kind = Lexeme::Kind::Quoted;
        lx.quoted = tokenize(raw.substr(from, pos - from), keywords_);
        out.push_back(std::move(lx));
        i = pos + d.close.size();
        plain_start = i;
        consumed = true;
        break;
      }
    }
    if (!consumed) ++i;
  }
  flush_plain(raw.substr(plain_start));
  return out;
}

namespace {

struct Captures {
  std::map<std::string, TokenList> phrases;
  int level = 0;
  Relation relation = Relation::Before;
  ExportFormat format = ExportFormat::Markdown;
};

Phrase words_of(const TokenList& tokens) {
  Phrase out;
  for (const auto& t : tokens) {
    if (t.is_word()) out.push_back(t.text);
  }
  return out;
}

}  // namespace

std::optional<Intent> TemplateMatcher::match(std::size_t template_index, const std::vector<Lexeme>& lx) const {
  const auto& tmpl = grammar_.templates()[template_index];
  const auto& elements = tmpl.elements;
  const auto& reserved = reserved_[template_index];
  const bool has_connective = std::any_of(elements.begin(), elements.end(), [](const auto& e) {
    return (e.is_slot && e.slot_type == SlotType::Relation) ||
           (!e.is_slot && std::any_of(e.keywords.begin(), e.keywords.end(), is_connective));
  });

  Captures caps;
  auto skip_punct = [&](std::size_t i) {
    while (i < lx.size() && lx[i].kind == Lexeme::Kind::Punct) ++i;
    return i;
  };

  // Validates and stores a bare capture over lexemes [a, b).
  auto take_bare = [&](std::size_t k, std::size_t a, std::size_t b) -> bool {
    const auto& el = elements[k];
    const bool last = k + 1 == elements.size();
    while (b > a && lx[b - 1].kind == Lexeme::Kind::Punct) --b;
    TokenList tokens;
    for (std::size_t i = a; i < b; ++i) {
      if (lx[i].kind == Lexeme::Kind::Quoted) {
        if (el.slot_type != SlotType::Text || !last || has_connective) return false;
        tokens.insert(tokens.end(), lx[i].quoted.begin(), lx[i].quoted.end());
        continue;
      }
      if (lx[i].kind == Lexeme::Kind::Word && has_connective && is_connective(lx[i].token.text)) return false;
      tokens.push_back(lx[i].token);
    }
    auto first_word = std::find_if(tokens.begin(), tokens.end(), [](const Token& t) { return t.is_word(); });
    if (first_word == tokens.end()) return false;
    if (lx[a].kind == Lexeme::Kind::Word && lx[a].is_word_in(reserved[k])) return false;
    caps.phrases[el.slot_name] = std::move(tokens);
    return true;
  };

  std::size_t i = 0;
  for (std::size_t k = 0; k < elements.size(); ++k) {
    const auto& el = elements[k];
    i = skip_punct(i);
    if (!el.is_slot || el.slot_type == SlotType::Relation) {
      if (i >= lx.size() || !lx[i].is_word_in(el.keywords)) return std::nullopt;
      if (el.is_slot) caps.relation = lx[i].is_word("after") ? Relation::After : Relation::Before;
      ++i;
      continue;
    }
    if (i >= lx.size()) return std::nullopt;
    switch (el.slot_type) {
      case SlotType::Level: {
        auto level = lx[i].kind == Lexeme::Kind::Word ? parse_level(lx[i].token.text) : std::nullopt;
        if (!level) return std::nullopt;
        caps.level = *level;
        ++i;
        break;
      }
      case SlotType::Format: {
        auto fmt = lx[i].kind == Lexeme::Kind::Word ? parse_export_format(lx[i].token.text) : std::nullopt;
        if (!fmt) return std::nullopt;
        caps.format = *fmt;
        ++i;
        break;
      }
      case SlotType::Phrase:
      case SlotType::Text: {
        if (lx[i].kind == Lexeme::Kind::Quoted) {
          const auto& q = lx[i].quoted;
          if (std::none_of(q.begin(), q.end(), [](const Token& t) { return t.is_word(); })) return std::nullopt;
          caps.phrases[el.slot_name] = q;
          ++i;
          break;
        }
        if (k + 1 == elements.size()) {
          if (!take_bare(k, i, lx.size())) return std::nullopt;
          i = lx.size();
          break;
        }
        const auto& next = elements[k + 1];
        std::size_t j = i + 1;
        while (j < lx.size() && !lx[j].is_word_in(next.keywords)) ++j;
        if (j >= lx.size() || !take_bare(k, i, j)) return std::nullopt;
        i = j;
        break;
      }
      case SlotType::Relation:
        break;
    }
  }
  if (skip_punct(i) != lx.size()) return std::nullopt;

  Intent intent;
  intent.kind = tmpl.intent;
  intent.level = caps.level;
  intent.relation = caps.relation;
  intent.format = caps.format;
  auto text_slot = [&](const char* name) -> TokenList {
    auto it = caps.phrases.find(name);
    if (it == caps.phrases.end()) return {};
    TokenList t = it->second;
    while (!t.empty() && t.front().is_punct()) t.erase(t.begin());
    while (!t.empty() && t.back().is_punct()) t.pop_back();
    return t;
  };
  auto phrase_slot = [&](const char* name) { return words_of(caps.phrases[name]); };
  switch (tmpl.intent) {
    case IntentKind::SetTitle:
    case IntentKind::AddHeading:
    case IntentKind::JumpToHeading:
    case IntentKind::InsertComment:
      intent.text = text_slot("text");
      break;
    case IntentKind::ReplaceContent:
      intent.target = phrase_slot("old");
      intent.content = phrase_slot("new");
      break;
    case IntentKind::InsertContent:
      intent.content = phrase_slot("new");
      intent.anchor = phrase_slot("anchor");
      break;
    case IntentKind::DeleteContent:
      intent.target = phrase_slot("target");
      break;
    case IntentKind::MoveContent:
      intent.target = phrase_slot("target");
      intent.anchor = phrase_slot("anchor");
      break;
    default:
      break;
  }
  return intent;
}

namespace {

template <typename L>
void strip_please(std::vector<L>& lexemes) {
  if (lexemes.size() > 1 && lexemes.front().is_word("please")) lexemes.erase(lexemes.begin());
}

}  // namespace

MatchResult TemplateMatcher::parse(const Utterance& utterance, const NluContext& ctx) const {
  const auto active = active_intents(ctx);
  const bool plain_dictation = ctx.mode == Mode::Dictation && !ctx.post_readback;
  auto lexemes = lex(utterance.raw);
  if (!plain_dictation) strip_please(lexemes);

  const auto& ts = grammar_.templates();
  for (std::size_t t = 0; t < ts.size(); ++t) {
    if (!contains(active, ts[t].intent)) continue;
    if (auto intent = match(t, lexemes)) return {std::move(intent), ts[t].source};
  }
  if (contains(active, IntentKind::Dictate)) {
    Intent dictate;
    dictate.kind = IntentKind::Dictate;
    dictate.text = utterance.tokens;
    return {std::move(dictate), "<dictation>"};
  }
  return {std::nullopt, "<none>"};
}

std::vector<std::size_t> TemplateMatcher::accepting_templates(const Utterance& utterance) const {
  auto lexemes = lex(utterance.raw);
  strip_please(lexemes);
  std::vector<std::size_t> out;
  for (std::size_t t = 0; t < grammar_.templates().size(); ++t) {
    if (match(t, lexemes)) out.push_back(t);
  }
  return out;
}

}  // namespace talkdoc
