#pragma once

#include <string>
#include <vector>

#include "rlv/vcgen.hpp"

namespace rlv {

/// An n-ary relational goal: n commands, each running in its own memory,
/// related by pre/post assertions of arity n.
struct RelationalGoal {
  std::string name;
  std::vector<CommandPtr> commands;
  Assertion pre;
  Assertion post;
  Span where;
};

/// Main relational condition: folds the per-command condition generator over
/// the command sequence, peeling from the last command, so the final
/// continuation receives one post-state per command.
FormulaPtr tr(const std::vector<CommandPtr>& cs, const std::vector<StateTermPtr>& ss, const ContractEnv& phi,
              const Assertion& post, StateNamer& names, Generator gen = Generator::Naive);

/// Auxiliary relational condition: conjunction of the per-command auxiliary
/// conditions, one per initial state.
FormulaPtr tar(const std::vector<CommandPtr>& cs, const std::vector<StateTermPtr>& ss, const ContractEnv& phi,
               StateNamer& names, Generator gen = Generator::Naive);

/// Full condition set for a relational goal: contract conditions, auxiliary
/// conditions, and the main relational condition, split per conjunct.
std::vector<VC> relational_vcs(const RelationalGoal& g, const ContractEnv& phi, const ProcEnv& psi,
                               Generator gen = Generator::Naive);

/// Instantiates a declared relational goal against its module.
RelationalGoal resolve_relational_goal(const RelGoalDecl& decl, const SourceModule& m);

}  // namespace rlv
