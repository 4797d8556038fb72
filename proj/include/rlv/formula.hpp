#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rlv/nat.hpp"

namespace rlv {

// First-order formulas over natural numbers and memory states. This is the
// carrier for verification conditions: state update appears as an explicit
// write term and state equality is a primitive atom, eliminated only when a
// formula is serialized for a solver.

enum class ArithOp { Add, Mul, Monus };
enum class CmpOp { Le, Eq };

struct NatTerm;
struct StateTerm;
struct Formula;

using NatTermPtr = std::shared_ptr<const NatTerm>;
using StateTermPtr = std::shared_ptr<const StateTerm>;
using FormulaPtr = std::shared_ptr<const Formula>;

struct NatTerm {
  struct Lit {
    Nat value;
  };
  struct Var {
    std::string name;
  };
  /// Value of `state` at address `addr`.
  struct Read {
    StateTermPtr state;
    NatTermPtr addr;
  };
  struct Bin {
    ArithOp op;
    NatTermPtr lhs, rhs;
  };
  std::variant<Lit, Var, Read, Bin> node;
};

struct StateTerm {
  struct Var {
    std::string name;
  };
  /// Distinguished state parameter of an assertion, 1-based.
  struct Param {
    int index;
  };
  /// `state` with `addr` rebound to `value`.
  struct Write {
    StateTermPtr state;
    NatTermPtr addr;
    NatTermPtr value;
  };
  std::variant<Var, Param, Write> node;
};

struct Formula {
  struct BoolLit {
    bool value;
  };
  struct Cmp {
    CmpOp op;
    NatTermPtr lhs, rhs;
  };
  /// Extensional equality of two states.
  struct StateEq {
    StateTermPtr lhs, rhs;
  };
  struct Not {
    FormulaPtr body;
  };
  struct And {
    FormulaPtr lhs, rhs;
  };
  struct Or {
    FormulaPtr lhs, rhs;
  };
  struct Implies {
    FormulaPtr lhs, rhs;
  };
  struct QuantNat {
    bool is_forall;
    std::string var;
    FormulaPtr body;
  };
  struct ForallState {
    std::string var;
    FormulaPtr body;
  };
  std::variant<BoolLit, Cmp, StateEq, Not, And, Or, Implies, QuantNat, ForallState> node;
};

// Term and formula builders.

NatTermPtr t_lit(Nat value);
NatTermPtr t_var(std::string name);
NatTermPtr t_read(StateTermPtr state, NatTermPtr addr);
NatTermPtr t_bin(ArithOp op, NatTermPtr lhs, NatTermPtr rhs);

StateTermPtr s_var(std::string name);
StateTermPtr s_param(int index);
StateTermPtr s_write(StateTermPtr state, NatTermPtr addr, NatTermPtr value);

FormulaPtr f_bool(bool value);
FormulaPtr f_true();
FormulaPtr f_false();
FormulaPtr f_cmp(CmpOp op, NatTermPtr lhs, NatTermPtr rhs);
FormulaPtr f_state_eq(StateTermPtr lhs, StateTermPtr rhs);
FormulaPtr f_not(FormulaPtr body);
FormulaPtr f_and(FormulaPtr lhs, FormulaPtr rhs);
FormulaPtr f_or(FormulaPtr lhs, FormulaPtr rhs);
FormulaPtr f_implies(FormulaPtr lhs, FormulaPtr rhs);
FormulaPtr f_forall_nat(std::string var, FormulaPtr body);
FormulaPtr f_exists_nat(std::string var, FormulaPtr body);
FormulaPtr f_forall_state(std::string var, FormulaPtr body);

/// Left-associated conjunction of `fs`; True for the empty list.
FormulaPtr f_conj(const std::vector<FormulaPtr>& fs);

// Structural equality (alpha-sensitive: bound names must match).
bool equal(const NatTermPtr& a, const NatTermPtr& b);
bool equal(const StateTermPtr& a, const StateTermPtr& b);
bool equal(const FormulaPtr& a, const FormulaPtr& b);

/// Total node count over the term/formula tree.
std::size_t node_count(const FormulaPtr& f);

bool is_trivially_true(const FormulaPtr& f);

/// Scope defect found by well-formedness checking.
struct ScopeError {
  std::string message;   // human-readable description
  std::string symbol;    // offending variable or parameter
  std::size_t position;  // preorder node index within the checked tree
};

/// Checks that every natural variable is bound, every state variable is
/// bound, and every state parameter index lies in 1..arity.
std::optional<ScopeError> check_scopes(const FormulaPtr& f, int arity);

/// A formula is closed when it has no free variables and no parameters.
inline bool is_closed(const FormulaPtr& f) { return !check_scopes(f, 0).has_value(); }

/// Capture-avoiding substitution of state parameters 1..n by `args`.
/// Binders in `f` that would capture a free variable of an argument are
/// renamed deterministically.
FormulaPtr subst_params(const FormulaPtr& f, const std::vector<StateTermPtr>& args);

/// Collects the names of free state variables of `f` in first-occurrence order.
std::vector<std::string> free_state_vars(const FormulaPtr& f);

// Plain-text rendering (for reports and golden tests; never parsed back).
std::string to_string(const NatTermPtr& t);
std::string to_string(const StateTermPtr& s);
std::string to_string(const FormulaPtr& f);

}  // namespace rlv
