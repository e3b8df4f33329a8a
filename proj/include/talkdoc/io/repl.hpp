#pragma once

#include <chrono>
#include <istream>
#include <ostream>

#include "talkdoc/io/engine_config.hpp"

namespace talkdoc::io {

struct ReplOptions {
  std::chrono::milliseconds unit_delay{0};
};

/// Reads utterances line by line and prints each response as "S: <literal>".
///
/// Meta-commands: ":interrupt" (takes effect immediately), ":save <path>",
/// ":load <path>", ":quit". Exports print an EXPORT ... END block.
int run_repl(std::istream& in, std::ostream& out, const EngineConfig& config, const ReplOptions& options = {});

}  // namespace talkdoc::io
