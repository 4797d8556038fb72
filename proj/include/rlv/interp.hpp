#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rlv/ast.hpp"

namespace rlv {

/// Result of a fuel-bounded run: the final state, or out-of-fuel when no
/// derivation of the stated depth exists yet (the program may still diverge).
struct Outcome {
  std::optional<MemState> state;

  bool finished() const { return state.has_value(); }
  bool out_of_fuel() const { return !state.has_value(); }

  static Outcome final(MemState s) { return Outcome{std::move(s)}; }
  static Outcome fuel_exhausted() { return Outcome{std::nullopt}; }
};

Nat eval_aexp(const ArithExprPtr& a, const MemState& sigma);
bool eval_bexp(const BoolExprPtr& b, const MemState& sigma);

/// Big-step execution under procedure environment `psi`. Fuel counts rule
/// applications; annotations (assert, loop invariants) do not influence the
/// run. Requires every call target to be bound in `psi`.
Outcome exec(const CommandPtr& c, MemState sigma, const ProcEnv& psi, std::uint64_t fuel);

/// Truth value of an assertion at concrete states. Quantifier-free bodies
/// are decided exactly; quantifiers range over 0..bound and taint the
/// verdict as approximate.
struct AssertionValue {
  bool value;
  bool exact;
};

AssertionValue eval_assertion(const Assertion& p, const std::vector<MemState>& states,
                              std::uint64_t bound = 64);

/// Replaces calls by their bodies, `k` levels deep; calls at depth `k`
/// become a nonterminating loop. The result is call-free.
CommandPtr inline_k(const CommandPtr& c, std::uint64_t k, const ProcEnv& psi);

/// `while (true) inv (true) { skip }`, the inliner's cut-off filler.
CommandPtr diverge();

}  // namespace rlv
