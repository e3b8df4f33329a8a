// Randomized property checks shared by the unit suites and the acceptance
// binary. Each returns how many cases were checked and the first failure.
#pragma once

#include <functional>
#include <sstream>
#include <string>

#include "support/gen.hpp"
#include "talkdoc/edit.hpp"
#include "talkdoc/normalizer.hpp"
#include "talkdoc/persistence.hpp"

namespace talkdoc::testing {

struct PropertyResult {
  int checked = 0;
  std::string failure;
  bool ok() const { return failure.empty(); }
};

// One randomly chosen mutating operation. Phrases are drawn from the document
// half the time so content commands usually hit. `before` runs right before
// the mutating call.
inline EditOutcome random_mutation(Gen& g, EditState& st, const std::function<void()>& before = [] {}) {
  auto doc_phrase = [&]() -> Phrase {
    if (!st.document.empty() && g.chance(0.6)) {
      const auto& b = st.document.blocks[g.index(st.document.blocks.size())];
      Phrase p;
      for (const auto& t : b.tokens) {
        if (!t.is_word()) continue;
        if (!p.empty() && g.chance(0.5)) break;
        p.push_back(t.text);
      }
      if (!p.empty()) return p;
    }
    return g.phrase(1, 2);
  };
  const auto rel = g.chance(0.5) ? Relation::Before : Relation::After;
  const int pick = g.range(0, 10);
  if (pick < 9) before();
  switch (pick) {
    case 0: {
      static const std::vector<BlockType> kTypes = {BlockType::Title, BlockType::Heading};
      return add_structure_block(st, g.pick(kTypes), g.range(1, 3), g.tokens(4));
    }
    case 1: return append_dictation(st, g.tokens(6));
    case 2: return replace_content(st, doc_phrase(), g.phrase(1, 3));
    case 3: return insert_content(st, g.phrase(1, 2), rel, doc_phrase());
    case 4: return delete_content(st, doc_phrase());
    case 5: return move_content(st, doc_phrase(), rel, doc_phrase());
    case 6: return relative_edit(st, EditUnit::Word, EditAction::Delete, g.chance(0.5) ? EditScope::Last : EditScope::AtFocus);
    case 7: return relative_edit(st, EditUnit::Sentence, EditAction::Delete, g.chance(0.5) ? EditScope::Last : EditScope::AtFocus);
    case 8: return insert_comment(st, "note " + g.word());
    case 9: {
      new_paragraph(st);
      before();
      return append_dictation(st, g.tokens(6));
    }
    default: {
      begin_list(st, g.chance(0.5) ? ListMode::Bullet : ListMode::Enumeration);
      before();
      return append_dictation(st, g.words(1, 3));
    }
  }
}

inline bool mutated(const EditOutcome& out) {
  return out.kind == OutcomeKind::Created || out.kind == OutcomeKind::Edited || out.kind == OutcomeKind::Deleted;
}

inline PropertyResult check_undo_inversion(std::uint64_t seed, int wanted) {
  Gen g(seed);
  PropertyResult r;
  for (int i = 0; r.checked < wanted; ++i) {
    EditState st = g.state();
    if (!st.document.empty() && g.chance(0.3)) {
      relative_edit(st, g.chance(0.5) ? EditUnit::Word : EditUnit::Sentence, EditAction::Select, EditScope::AtFocus);
    }
    Document doc;
    Focus focus;
    auto out = random_mutation(g, st, [&] {
      doc = st.document;
      focus = st.focus;
    });
    const auto where = "case " + std::to_string(i);
    if (!mutated(out)) {
      if (out.failed() && !(st.document == doc)) return {r.checked, where + ": failed op changed the document"};
      continue;
    }
    if (!focus_in_range(st)) return {r.checked, where + ": focus out of range"};
    if (undo_last(st).failed()) return {r.checked, where + ": undo failed"};
    if (!(st.document == doc)) return {r.checked, where + ": document not restored"};
    if (!(st.focus == focus)) return {r.checked, where + ": focus not restored"};
    ++r.checked;
  }
  return r;
}

// Replace-by-content against a splice oracle, and against the cursor path
// (move to the end of the target, delete word by word, dictate).
inline PropertyResult check_content_cursor(std::uint64_t seed, int wanted) {
  Gen g(seed);
  PropertyResult r;
  for (int i = 0; r.checked < wanted; ++i) {
    EditState st = g.state();
    if (st.document.empty()) continue;
    const auto b = g.index(st.document.blocks.size());
    const auto& block = st.document.blocks[b];
    if (!(block.type == BlockType::Paragraph || block.is_list_item())) continue;
    const auto s = g.index(block.tokens.size());
    std::size_t e = s;
    Phrase x;
    while (e < block.tokens.size() && block.tokens[e].is_word() && x.size() < 3) x.push_back(block.tokens[e++].text);
    if (x.empty() || block.tokens.size() == x.size()) continue;
    int occurrences = 0;
    for (const auto& bl : st.document.blocks) {
      for (std::size_t k = 0; k + x.size() <= bl.tokens.size(); ++k) {
        bool ok = true;
        for (std::size_t m = 0; m < x.size() && ok; ++m) {
          ok = bl.tokens[k + m].is_word() && to_lower(bl.tokens[k + m].text) == to_lower(x[m]);
        }
        occurrences += ok;
      }
    }
    if (occurrences != 1) continue;
    const Phrase y = g.phrase(1, 3);
    const auto where = "case " + std::to_string(i);

    Document oracle = st.document;
    auto& ob = oracle.blocks[b];
    ob.tokens.erase(ob.tokens.begin() + s, ob.tokens.begin() + e);
    for (std::size_t m = 0; m < y.size(); ++m) ob.tokens.insert(ob.tokens.begin() + s + m, Token::word(y[m]));
    ob.tokens = apply_casing(ob.tokens, ob.type);

    EditState content = st;
    auto out = replace_content(content, x, y);
    if (out.kind != OutcomeKind::Edited) return {r.checked, where + ": replace did not edit"};
    if (!(content.document.blocks[b].tokens == ob.tokens)) return {r.checked, where + ": differs from splice oracle"};
    if (!(content.focus == Focus{b, s + y.size(), std::nullopt})) return {r.checked, where + ": focus not after replacement"};
    ++r.checked;

    // Skipped at sentence starts: deleting there capitalizes the next word,
    // which a later insertion in front of it does not undo.
    bool sentence_start = true;
    for (std::size_t k = s; k-- > 0;) {
      const auto& t = block.tokens[k];
      if (t.is_word()) {
        sentence_start = false;
        break;
      }
      if (is_sentence_end(t.mark())) break;
    }
    if (sentence_start) continue;
    EditState cursor = st;
    cursor.focus = {b, e, std::nullopt};
    for (std::size_t m = 0; m < x.size(); ++m) {
      if (relative_edit(cursor, EditUnit::Word, EditAction::Delete, EditScope::Last).failed()) {
        return {r.checked, where + ": cursor delete failed"};
      }
    }
    TokenList ytok;
    for (const auto& w : y) ytok.push_back(Token::word(w));
    append_dictation(cursor, ytok);
    if (save_document(cursor.document) != save_document(content.document)) return {r.checked, where + ": cursor path differs"};
    if (!(cursor.focus == content.focus)) return {r.checked, where + ": cursor focus differs"};
  }
  return r;
}

inline std::vector<std::string> keyword_words() {
  std::vector<std::string> out;
  for (const auto& e : KeywordTable::defaults().entries()) out.insert(out.end(), e.words.begin(), e.words.end());
  return out;
}

inline TokenList lowered(TokenList t) {
  for (auto& tok : t) tok.text = to_lower(tok.text);
  return t;
}

// tokenize(verbalize(t)) == t up to case, for lists free of keyword words.
inline PropertyResult check_round_trip(std::uint64_t seed, int wanted) {
  Gen g(seed);
  PropertyResult r;
  const auto reserved = keyword_words();
  for (; r.checked < wanted; ++r.checked) {
    TokenList t;
    const int n = g.range(0, 15);
    for (int k = 0; k < n; ++k) {
      if (g.chance(0.3)) {
        t.push_back(Token::punct(g.mark()));
      } else {
        auto w = g.free_word(reserved);
        if (g.chance(0.3)) w[0] = static_cast<char>(w[0] - 'a' + 'A');
        t.push_back(Token::word(w));
      }
    }
    const auto spoken = verbalize(t, false);
    if (!(lowered(tokenize(spoken)) == lowered(t))) return {r.checked, "case " + std::to_string(r.checked) + ": " + spoken};
  }
  return r;
}

}  // namespace talkdoc::testing
