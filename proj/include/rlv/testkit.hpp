#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "rlv/ast.hpp"
#include "rlv/relcheck.hpp"

namespace rlv {

/// Knobs for random program/state/assertion generation. Streams are
/// deterministic per seed.
struct GenConfig {
  std::uint32_t max_commands = 6;
  std::uint64_t max_address = 8;
  std::uint64_t max_literal = 32;
  bool allow_loops = false;
  bool allow_calls = false;
  std::uint64_t seed = 1;
};

/// Deterministic generator stream over one seed.
class Gen {
 public:
  explicit Gen(const GenConfig& cfg);

  const GenConfig& config() const { return cfg_; }

  std::uint64_t below(std::uint64_t n);  // uniform in [0, n), n >= 1

  CommandPtr command();
  ArithExprPtr aexp(unsigned depth);
  BoolExprPtr bexp(unsigned depth);
  /// Quantifier-free assertion over `arity` states.
  Assertion assertion(int arity);
  /// Random footprint over addresses 0..max_address, values 0..max_literal.
  MemState state();
  /// Alias-heavy variant: values stay within the address range, so stored
  /// values double as addresses.
  MemState aliasing_state();

 private:
  CommandPtr command_list(std::uint32_t budget, unsigned depth);
  CommandPtr atomic_command(unsigned depth, std::uint32_t budget);
  NatTermPtr assertion_term(int arity, unsigned depth);
  FormulaPtr assertion_formula(int arity, unsigned depth);

  GenConfig cfg_;
  std::mt19937_64 rng_;
};

/// First-command convenience per the generator contract.
CommandPtr gen_command(const GenConfig& cfg);

/// A generated Hoare goal plus initial states worth sampling (for goals
/// whose precondition pins an exact footprint).
struct HoareFuzzGoal {
  Assertion pre;
  CommandPtr cmd;
  Assertion post;
  std::vector<MemState> suggested;
  bool expected_valid = false;  // pinned goals are valid by construction
};

HoareFuzzGoal gen_hoare_goal(Gen& g);

struct RelFuzzGoal {
  RelationalGoal goal;
  std::vector<std::vector<MemState>> suggested;
  bool expected_valid = false;
};

RelFuzzGoal gen_rel_goal(Gen& g, int arity);

/// A counterexample found by sampling: initial states (one per command) and
/// the final states that falsify the postcondition.
struct OracleViolation {
  std::vector<MemState> initial;
  std::vector<MemState> final_states;
};

/// Samples initial states; wherever the precondition holds and execution
/// terminates within `fuel`, the postcondition is checked on the final
/// state. Returns the first violation, or nothing when all samples pass.
/// Pre/post must be quantifier-free.
std::optional<OracleViolation> hoare_oracle(const Assertion& pre, const CommandPtr& c,
                                            const Assertion& post, const ProcEnv& psi,
                                            std::uint64_t samples, std::uint64_t fuel,
                                            const GenConfig& sampling,
                                            const std::vector<MemState>& seeds = {});

/// n-ary analogue over state tuples; a sample counts only when every run
/// terminates.
std::optional<OracleViolation> rel_oracle(const RelationalGoal& g, const ProcEnv& psi,
                                          std::uint64_t samples, std::uint64_t fuel,
                                          const GenConfig& sampling,
                                          const std::vector<std::vector<MemState>>& seeds = {});

}  // namespace rlv
