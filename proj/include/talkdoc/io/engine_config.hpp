#pragma once

#include <memory>
#include <string>

#include "talkdoc/dialogue.hpp"
#include "talkdoc/intent.hpp"
#include "talkdoc/normalizer.hpp"

namespace talkdoc::io {

/// Shared, immutable engine setup: the command grammar and the spoken
/// punctuation table. Sessions created from one config share the matcher.
class EngineConfig {
 public:
  EngineConfig();
  EngineConfig(Grammar grammar, KeywordTable keywords);

  /// Empty paths select the built-in defaults.
  static EngineConfig load(const std::string& grammar_path, const std::string& keywords_path);

  std::unique_ptr<Session> make_session() const;
  const KeywordTable& keywords() const { return keywords_; }

 private:
  KeywordTable keywords_;
  std::shared_ptr<const NluBackend> nlu_;
};

}  // namespace talkdoc::io
