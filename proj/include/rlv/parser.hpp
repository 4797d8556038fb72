#pragma once

#include <string>
#include <variant>
#include <vector>

#include "rlv/module.hpp"

namespace rlv {

using ParseResult = std::variant<SourceModule, std::vector<Diagnostic>>;

/// Parses the textual `.rl` module format. On success the module is fully
/// resolved: command references exist, call targets are declared, assertion
/// arities fit their context. Sugared comparisons (<, >, >=, !=) are lowered
/// to the core operators and `-` always denotes truncated subtraction.
ParseResult parse_module(const std::string& text);

/// Convenience for tests and tools: parse or throw std::runtime_error with
/// formatted diagnostics.
SourceModule parse_module_or_throw(const std::string& text, const std::string& filename = "<input>");

}  // namespace rlv
