#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "rlv/formula.hpp"

namespace rlv {

/// A predicate over `arity` memory states: a formula whose state accesses go
/// through parameters 1..arity. Procedure contracts, loop invariants and
/// Hoare pre/postconditions have arity 1; relational assertions have the
/// arity of their goal.
struct Assertion {
  int arity = 1;
  FormulaPtr body;
};

inline bool equal(const Assertion& a, const Assertion& b) {
  return a.arity == b.arity && equal(a.body, b.body);
}

Assertion assertion_true(int arity = 1);

/// Well-formedness: parameters within 1..arity, all variables bound.
std::optional<ScopeError> assertion_check(const Assertion& p);

/// Applies an assertion to state terms, one per parameter.
/// Throws std::invalid_argument on arity mismatch.
FormulaPtr subst_states(const Assertion& p, const std::vector<StateTermPtr>& args);

/// Reindexes an n-ary assertion by a permutation `perm` of 1..n:
/// parameter i of the result reads what parameter perm[i-1] read before.
Assertion permute_params(const Assertion& p, const std::vector<int>& perm);

}  // namespace rlv
