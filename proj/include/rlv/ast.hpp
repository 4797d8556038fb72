#pragma once

#include <map>
#include <memory>
#include <string>
#include <variant>

#include "rlv/assertion.hpp"
#include "rlv/nat.hpp"

namespace rlv {

/// Address of a program location: location i lives at address i.
struct Addr {
  Nat value;
};

inline bool operator==(const Addr& a, const Addr& b) { return a.value == b.value; }

struct ArithExpr;
struct BoolExpr;
struct Command;

using ArithExprPtr = std::shared_ptr<const ArithExpr>;
using BoolExprPtr = std::shared_ptr<const BoolExpr>;
using CommandPtr = std::shared_ptr<const Command>;

struct ArithExpr {
  struct Const {
    Nat value;
  };
  struct Loc {
    Addr addr;
  };
  struct Deref {
    Addr addr;
  };
  struct AddrOf {
    Addr addr;
  };
  struct Bin {
    ArithOp op;
    ArithExprPtr lhs, rhs;
  };
  std::variant<Const, Loc, Deref, AddrOf, Bin> node;
};

enum class BoolConn { And, Or };

struct BoolExpr {
  struct Lit {
    bool value;
  };
  struct Cmp {
    CmpOp op;
    ArithExprPtr lhs, rhs;
  };
  struct Logic {
    BoolConn op;
    BoolExprPtr lhs, rhs;
  };
  struct Not {
    BoolExprPtr body;
  };
  std::variant<Lit, Cmp, Logic, Not> node;
};

struct Command {
  struct Skip {};
  /// x_i := e
  struct Assign {
    Addr target;
    ArithExprPtr value;
  };
  /// *x_i := e — writes at the address stored in x_i.
  struct IndirectAssign {
    Addr target;
    ArithExprPtr value;
  };
  struct Seq {
    CommandPtr first, second;
  };
  struct Assert {
    Assertion pred;
  };
  struct If {
    BoolExprPtr cond;
    CommandPtr then_branch, else_branch;
  };
  /// Loops always carry an invariant annotation.
  struct While {
    BoolExprPtr cond;
    Assertion invariant;
    CommandPtr body;
  };
  struct Call {
    std::string proc;
  };
  std::variant<Skip, Assign, IndirectAssign, Seq, Assert, If, While, Call> node;
};

ArithExprPtr a_const(Nat value);
ArithExprPtr a_loc(Nat addr);
ArithExprPtr a_deref(Nat addr);
ArithExprPtr a_addr_of(Nat addr);
ArithExprPtr a_bin(ArithOp op, ArithExprPtr lhs, ArithExprPtr rhs);

BoolExprPtr b_lit(bool value);
BoolExprPtr b_cmp(CmpOp op, ArithExprPtr lhs, ArithExprPtr rhs);
BoolExprPtr b_logic(BoolConn op, BoolExprPtr lhs, BoolExprPtr rhs);
BoolExprPtr b_not(BoolExprPtr body);

CommandPtr c_skip();
CommandPtr c_assign(Nat addr, ArithExprPtr value);
CommandPtr c_indirect_assign(Nat addr, ArithExprPtr value);
CommandPtr c_seq(CommandPtr first, CommandPtr second);
CommandPtr c_assert(Assertion pred);
CommandPtr c_if(BoolExprPtr cond, CommandPtr then_branch, CommandPtr else_branch);
CommandPtr c_while(BoolExprPtr cond, Assertion invariant, CommandPtr body);
CommandPtr c_call(std::string proc);

/// Sequences a non-empty list of commands left to right.
CommandPtr c_seq_all(const std::vector<CommandPtr>& cmds);

bool equal(const ArithExprPtr& a, const ArithExprPtr& b);
bool equal(const BoolExprPtr& a, const BoolExprPtr& b);
bool equal(const CommandPtr& a, const CommandPtr& b);

/// Number of command nodes (sequence/branch structure included).
std::size_t command_size(const CommandPtr& c);

bool contains_loop(const CommandPtr& c);
bool contains_call(const CommandPtr& c);

/// Total memory state: explicit finite footprint, every other address holds 0.
/// Values are immutable; updates build a new state.
class MemState {
 public:
  MemState() = default;
  explicit MemState(std::map<Nat, Nat> bindings) : bindings_(std::move(bindings)) {}

  const Nat& lookup(const Nat& addr) const {
    auto it = bindings_.find(addr);
    return it == bindings_.end() ? zero_ : it->second;
  }

  /// The explicit footprint, including entries that happen to hold 0.
  const std::map<Nat, Nat>& bindings() const { return bindings_; }

  friend MemState mem_update(const MemState& sigma, const Nat& addr, const Nat& value);

  /// Semantic equality: states agree as total functions.
  friend bool operator==(const MemState& a, const MemState& b);

 private:
  std::map<Nat, Nat> bindings_;
  inline static const Nat zero_ = Nat(0);
};

/// sigma[addr/value]: rebinds one address, leaves the rest untouched.
MemState mem_update(const MemState& sigma, const Nat& addr, const Nat& value);

/// Procedure bodies, keyed by name.
using ProcEnv = std::map<std::string, CommandPtr>;

struct Contract {
  Assertion pre;
  Assertion post;
};

/// Procedure contracts, keyed by name. Paired ProcEnv/ContractEnv are
/// expected to have identical key sets.
using ContractEnv = std::map<std::string, Contract>;

/// True when every `call` in `c` targets a procedure bound in `procs`.
bool calls_bound(const CommandPtr& c, const ProcEnv& procs);

}  // namespace rlv
