#pragma once

#include <string>
#include <string_view>

#include "fpmc/lds.hpp"

namespace fpmc {

/// Line-oriented system format:
///
///   lds d=2 base=10 p=1 [tie=half-to-even]
///   10 0
///   1/2 10
///   init: 1 0
///
/// `#` starts a comment. The `init:` values may continue on following lines.
Lds parse_lds(std::string_view text);

std::string render_lds(const Lds& lds);

/// Reads a whole file; throws std::runtime_error if it cannot be opened.
std::string read_text_file(const std::string& path);

/// Splits on whitespace after stripping a trailing `#` comment.
std::vector<std::string> split_tokens(std::string_view line);

}  // namespace fpmc
