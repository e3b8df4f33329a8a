#include <gtest/gtest.h>

#include "support/gen.hpp"
#include "talkdoc/dialogue.hpp"
#include "talkdoc/normalizer.hpp"

namespace talkdoc {
namespace {

using testing::Gen;

const std::vector<std::pair<std::string, std::string>> kAntiTheft = {
    {"Title «anti theft system»", "Document title “Anti Theft System”"},
    {"Heading one «instructions»", "Heading 1 «Instructions»"},
    {"Replace «instructions» with «introduction»", "Heading 1 «Introduction»"},
    {"Dictation mode", "Dictation mode started"},
    {"This new system should achieve protection against burglary comma both in the absence and presence of "
     "residents period",
     "This new system should achieve protection against burglary, both in the absence and presence of residents."},
    {"Insert “control” before “system”",
     "This new control system should achieve protection against burglary, both in the absence and presence of "
     "residents."},
};

std::vector<std::string> literals(const TurnResult& r) {
  std::vector<std::string> out;
  for (const auto& resp : r.responses) out.push_back(resp.literal);
  return out;
}

std::vector<std::string> say(Session& s, std::string_view u) { return literals(s.handle_utterance(u)); }

void play_anti_theft(Session& s) {
  for (const auto& [u, _] : kAntiTheft) s.handle_utterance(u);
}

TEST(Session, AntiTheftReplay) {
  Session s;
  for (const auto& [u, expected] : kAntiTheft) {
    auto r = s.handle_utterance(u);
    ASSERT_EQ(r.responses.size(), 1u) << u;
    EXPECT_EQ(r.responses[0].literal, expected);
  }
  EXPECT_EQ(s.state().mode, Mode::Dictation);
  EXPECT_TRUE(s.state().post_readback);
}

TEST(Session, VerbalizedSuppressesFinalPeriod) {
  Session s;
  play_anti_theft(s);
  auto r = s.handle_utterance("read sentence");
  ASSERT_GE(r.responses.size(), 2u);
  EXPECT_EQ(r.responses[0].verbalized,
            "This new control system should achieve protection against burglary comma both in the absence and "
            "presence of residents");
  EXPECT_EQ(r.responses[0].kind, ResponseKind::ReadingChunk);
}

TEST(Session, InitialModeAndDictationSwitch) {
  Session s;
  EXPECT_EQ(s.state().mode, Mode::Command);
  EXPECT_EQ(say(s, "Dictation mode"), std::vector<std::string>{"Dictation mode started"});
  EXPECT_EQ(s.state().mode, Mode::Dictation);
  EXPECT_FALSE(s.state().post_readback);
}

TEST(Session, GoOnWithoutReading) {
  Session s;
  auto r = s.handle_utterance("go on");
  ASSERT_EQ(r.responses.size(), 1u);
  EXPECT_EQ(r.responses[0].kind, ResponseKind::Error);
  EXPECT_EQ(r.responses[0].literal, "Nothing to continue");
}

TEST(Session, AutoReturnToDictationAfterCommand) {
  Session s;
  play_anti_theft(s);
  say(s, "Replace «absence» with «presence»");
  EXPECT_TRUE(s.state().post_readback);
  EXPECT_EQ(say(s, "It works at night period"), std::vector<std::string>{"It works at night."});
  ASSERT_EQ(s.state().edit.document.blocks.size(), 3u);
  EXPECT_EQ(render_literal(s.state().edit.document.blocks[2].tokens),
            "This new control system should achieve protection against burglary, both in the presence and presence "
            "of residents. It works at night.");
}

TEST(Session, CommandModeRejectsFreeText) {
  Session s;
  auto r = s.handle_utterance("blue bicycle lights");
  ASSERT_EQ(r.responses.size(), 1u);
  EXPECT_EQ(r.responses[0].kind, ResponseKind::Error);
  EXPECT_EQ(r.responses[0].literal, "Command not recognized");
}

TEST(Session, ErrorTemplates) {
  Session s;
  EXPECT_EQ(say(s, "undo"), std::vector<std::string>{"Nothing to undo"});
  EXPECT_EQ(say(s, "read document"), std::vector<std::string>{"Document is empty"});
  play_anti_theft(s);
  EXPECT_EQ(say(s, "replace «zebra» with «horse»"), std::vector<std::string>{"Could not find «zebra»"});
  EXPECT_EQ(say(s, "jump to heading «conclusion»"), std::vector<std::string>{"Could not find heading «conclusion»"});
  EXPECT_EQ(say(s, "stop"), std::vector<std::string>{"Nothing to stop"});
}

TEST(Readback, NoOpTemplate) {
  SessionState st;
  EditOutcome out;
  out.kind = OutcomeKind::NoOp;
  auto r = generate_readback(out, IntentKind::Dictate, st);
  EXPECT_EQ(r.literal, "Nothing changed");
  EXPECT_EQ(r.kind, ResponseKind::Confirmation);
}

TEST(Readback, InsertReadsWholeSentence) {
  Session s;
  play_anti_theft(s);
  const auto& lr = s.state().last_readback;
  ASSERT_TRUE(lr);
  EXPECT_EQ(lr->span.start, 0u);
  EXPECT_EQ(lr->span.end, s.state().edit.document.blocks[2].tokens.size());
}

TEST(Reading, HeadingsOfAntiTheft) {
  Session s;
  play_anti_theft(s);
  EXPECT_EQ(say(s, "read headings"),
            (std::vector<std::string>{"Anti Theft System", "Heading 1 Introduction", "Reading finished"}));
}

TEST(Reading, StopThenRepeatGivesSameSentence) {
  Session s;
  for (auto u : {"Dictation mode", "One is here period", "Two is here period", "Three is here period"}) s.handle_utterance(u);
  std::size_t chunks = 0;
  auto r = s.handle_utterance("read document", [&](const SystemResponse& resp) {
    if (resp.kind == ResponseKind::ReadingChunk && ++chunks == 2) s.request_interrupt();
  });
  EXPECT_EQ(literals(r), (std::vector<std::string>{"One is here.", "Two is here.", "Reading paused"}));
  EXPECT_EQ(say(s, "stop"), std::vector<std::string>{"Reading stopped"});
  EXPECT_EQ(say(s, "repeat last sentence"), std::vector<std::string>{"Two is here."});
  EXPECT_EQ(say(s, "go on"), (std::vector<std::string>{"Three is here.", "Reading finished"}));
}

TEST(Reading, EmptyDocument) {
  Session s;
  EXPECT_EQ(say(s, "read document"), std::vector<std::string>{"Document is empty"});
}

TEST(Reading, InterruptOutsideReadingIsRefused) {
  Session s;
  EXPECT_FALSE(s.request_interrupt());
  EXPECT_FALSE(s.reading_in_progress());
}

TEST(Reading, ResumeAfterEditRebuildsFromLiveDocument) {
  Session s;
  for (auto u : {"Dictation mode", "One is here period", "Two is here period", "Three is here period"}) s.handle_utterance(u);
  std::size_t chunks = 0;
  s.handle_utterance("read document", [&](const SystemResponse& resp) {
    if (resp.kind == ResponseKind::ReadingChunk && ++chunks == 1) s.request_interrupt();
  });
  say(s, "replace «three» with «four»");
  EXPECT_EQ(say(s, "go on"), (std::vector<std::string>{"Two is here.", "Four is here.", "Reading finished"}));
}

// --- properties -------------------------------------------------------------

std::string random_utterance(Gen& g) {
  auto q = [&] { return "«" + g.word() + "»"; };
  switch (g.range(0, 24)) {
    case 0: return "title " + q();
    case 1: return "heading " + g.pick(std::vector<std::string>{"one", "two", "three"}) + " " + q();
    case 2: return "dictation mode";
    case 3: return "command mode";
    case 4: return "replace " + q() + " with " + q();
    case 5: return "insert " + q() + (g.chance(0.5) ? " before " : " after ") + q();
    case 6: return "delete " + q();
    case 7: return "move " + q() + " after " + q();
    case 8: return g.pick(std::vector<std::string>{"delete last word", "delete word", "delete sentence"});
    case 9: return g.pick(std::vector<std::string>{"select word", "select sentence"});
    case 10: return g.pick(std::vector<std::string>{"start of paragraph", "end of paragraph"});
    case 11: return "jump to heading " + q();
    case 12: return g.pick(std::vector<std::string>{"read sentence", "read paragraph", "read document", "read headings"});
    case 13: return g.pick(std::vector<std::string>{"stop", "go on", "repeat last sentence"});
    case 14: return "insert comment " + q();
    case 15: return "undo";
    case 16: return g.pick(std::vector<std::string>{"export markdown", "export plain"});
    case 17: return g.pick(std::vector<std::string>{"bullet list", "enumeration", "end list", "new paragraph"});
    default: {
      std::string s;
      const int n = g.range(1, 6);
      for (int i = 0; i < n; ++i) s += (i ? " " : "") + g.word();
      if (g.chance(0.6)) s += g.chance(0.5) ? " period" : " comma";
      return s;
    }
  }
}

bool is_reply(const SystemResponse& r) { return r.kind != ResponseKind::ReadingChunk; }

void check_focus_rule(const Session& s, const TurnResult& r) {
  const bool read_back = std::any_of(r.responses.begin(), r.responses.end(), [](const SystemResponse& x) {
    return x.kind == ResponseKind::Readback || x.kind == ResponseKind::ReadingChunk;
  });
  if (!read_back) return;
  const auto& st = s.state();
  ASSERT_TRUE(st.last_readback);
  auto b = st.edit.document.index_of(st.last_readback->span.block_id);
  ASSERT_TRUE(b);
  EXPECT_EQ(st.edit.focus.block, *b);
  EXPECT_EQ(st.edit.focus.offset, st.last_readback->span.end);
}

TEST(Property, OneReplyPerUtteranceAndFocusFollowsReadback) {
  Gen g(211);
  for (int run = 0; run < 200; ++run) {
    Session s;
    for (int k = 0; k < 30; ++k) {
      const auto u = random_utterance(g);
      std::size_t interrupt_at = g.chance(0.3) ? static_cast<std::size_t>(g.range(1, 3)) : 0;
      std::size_t chunks = 0;
      auto r = s.handle_utterance(u, [&](const SystemResponse& resp) {
        if (resp.kind == ResponseKind::ReadingChunk && ++chunks == interrupt_at) s.request_interrupt();
      });
      ASSERT_EQ(std::count_if(r.responses.begin(), r.responses.end(), is_reply), 1) << u;
      // The reply closes the turn.
      ASSERT_TRUE(is_reply(r.responses.back()));
      check_focus_rule(s, r);
      if (HasFailure()) return;
    }
  }
}

TEST(Property, Determinism) {
  Gen g(223);
  for (int run = 0; run < 100; ++run) {
    std::vector<std::string> transcript;
    for (int k = 0; k < 25; ++k) transcript.push_back(random_utterance(g));
    Session a, b;
    for (const auto& u : transcript) {
      ASSERT_EQ(a.handle_utterance(u).responses, b.handle_utterance(u).responses) << u;
    }
    EXPECT_EQ(a.export_document(ExportFormat::Markdown), b.export_document(ExportFormat::Markdown));
  }
}

// Exhaustive three-step enumeration over one representative per intent
// class, from several reachable starting states.
TEST(Property, ModeTransitionSafety) {
  const std::vector<std::string> alphabet = {
      "dictation mode", "command mode", "some words period", "replace «words» with «things»", "undo",
      "stop", "read document", "title «x»", "bullet list", "blue bicycle", "go on", "export plain"};
  const std::vector<std::vector<std::string>> prefixes = {
      {}, {"dictation mode"}, {"dictation mode", "hello there period"}, {"title «t»", "dictation mode", "a b"}};
  const TemplateMatcher nlu;
  int transitions = 0;
  for (const auto& prefix : prefixes) {
    for (const auto& a : alphabet) {
      for (const auto& b : alphabet) {
        for (const auto& c : alphabet) {
          Session s;
          for (const auto& p : prefix) s.handle_utterance(p);
          for (const auto* u : {&a, &b, &c}) {
            const auto before = s.state();
            const NluContext ctx{before.mode, before.post_readback};
            const auto match = nlu.parse(make_utterance(*u), ctx);
            s.handle_utterance(*u);
            const auto& after = s.state();
            ++transitions;
            ASSERT_TRUE(!after.post_readback || after.mode == Mode::Dictation);
            Mode mode = before.mode;
            bool pr = before.post_readback;
            if (match.matched()) {
              switch (match.intent->kind) {
                case IntentKind::StartDictation: mode = Mode::Dictation; pr = false; break;
                case IntentKind::StartCommandMode: mode = Mode::Command; pr = false; break;
                case IntentKind::Dictate: mode = Mode::Dictation; pr = true; break;
                default: break;
              }
            }
            ASSERT_EQ(after.mode, mode) << *u;
            ASSERT_EQ(after.post_readback, pr) << *u;
          }
        }
      }
    }
  }
  EXPECT_EQ(transitions, 4 * 12 * 12 * 12 * 3);
}

}  // namespace
}  // namespace talkdoc
