#include "talkdoc/io/engine_config.hpp"

namespace talkdoc::io {

EngineConfig::EngineConfig() : EngineConfig(Grammar::defaults(), KeywordTable::defaults()) {}

EngineConfig::EngineConfig(Grammar grammar, KeywordTable keywords)
    : keywords_(std::move(keywords)),
      nlu_(std::make_shared<TemplateMatcher>(std::move(grammar), keywords_)) {}

EngineConfig EngineConfig::load(const std::string& grammar_path, const std::string& keywords_path) {
  auto grammar = grammar_path.empty() ? Grammar::defaults() : Grammar::load_file(grammar_path);
  auto keywords = keywords_path.empty() ? KeywordTable::defaults() : KeywordTable::load_file(keywords_path);
  return EngineConfig(std::move(grammar), std::move(keywords));
}

std::unique_ptr<Session> EngineConfig::make_session() const { return std::make_unique<Session>(nlu_, keywords_); }

}  // namespace talkdoc::io
