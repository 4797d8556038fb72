#pragma once

#include <string>

#include "rlv/module.hpp"

namespace rlv {

// Canonical source rendering; parse_module(pretty_print(m)) reproduces m.

std::string pretty_print(const SourceModule& m);
std::string pretty_print(const CommandPtr& c, int indent = 0);
std::string pretty_print_aexp(const ArithExprPtr& a);
std::string pretty_print_bexp(const BoolExprPtr& b);

/// Surface syntax for an assertion: state reads appear as at(e) / at(k, e).
std::string pretty_print_assertion(const Assertion& p);

}  // namespace rlv
