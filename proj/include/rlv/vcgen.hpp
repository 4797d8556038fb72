#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rlv/ast.hpp"
#include "rlv/module.hpp"

namespace rlv {

/// Deterministic source of state-variable names: s0, s1, ... Every formula
/// produced for one goal draws from a single namer, so regenerating a goal
/// yields byte-identical output.
class StateNamer {
 public:
  std::string fresh() { return "s" + std::to_string(next_++); }

 private:
  std::uint64_t next_ = 0;
};

/// Which hypothesis of the soundness theorem a condition instantiates.
enum class VcKind { Tf, Ta, Tc, Tar, Tr };

const char* vc_kind_name(VcKind k);

struct VcOrigin {
  VcKind kind;
  std::string scope;  // procedure (Tf) or goal (others)
  Span where;
};

/// A single closed verification condition, ready for a solver.
struct VC {
  std::string name;
  FormulaPtr formula;
  VcOrigin origin;
};

enum class Generator { Naive, Optimized };

/// Main verification condition: the weakest hypothesis chain under which an
/// execution of `c` from `s` makes `post` hold, assuming annotations hold.
FormulaPtr tc(const CommandPtr& c, const StateTermPtr& s, const ContractEnv& phi, const Assertion& post,
              StateNamer& names);

/// Linear-size variant of `tc`: logically equivalent, but each conditional
/// names its post-state once instead of copying the continuation per branch.
FormulaPtr tc_opt(const CommandPtr& c, const StateTermPtr& s, const ContractEnv& phi, const Assertion& post,
                  StateNamer& names);

/// Auxiliary conditions: asserted formulas, callee preconditions, and loop
/// invariant establishment and preservation, lifted to the initial state.
FormulaPtr ta(const CommandPtr& c, const StateTermPtr& s, const ContractEnv& phi, StateNamer& names,
              Generator gen = Generator::Naive);

/// Contract conditions: each declared procedure body meets its contract.
/// Requires phi and psi to have identical key sets.
FormulaPtr tf(const ContractEnv& phi, const ProcEnv& psi, StateNamer& names, Generator gen = Generator::Naive);

/// Continuation form of the main condition generator. The continuation is
/// only ever applied to fresh state variables, so the result stays
/// first-order. This is the primitive `tc`, `tc_opt` and the relational
/// generator fold over.
using StateCont = std::function<FormulaPtr(const StateTermPtr&)>;
FormulaPtr tc_cont(const CommandPtr& c, const StateTermPtr& s, const ContractEnv& phi, StateNamer& names,
                   Generator gen, const StateCont& k);

/// Splits a formula into independently provable conjuncts, descending under
/// universal binders and implication hypotheses.
std::vector<FormulaPtr> split_conjuncts(const FormulaPtr& f);

/// The full set of conditions for {pre} c {post} under (phi, psi):
/// contract conditions, then auxiliary, then the main condition, each
/// split into one VC per conjunct.
std::vector<VC> hoare_vcs(const Assertion& pre, const CommandPtr& c, const Assertion& post,
                          const ContractEnv& phi, const ProcEnv& psi, const std::string& goal_name,
                          Generator gen = Generator::Naive, Span where = {});

}  // namespace rlv
