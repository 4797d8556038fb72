#include <stdexcept>
#include <vector>

#include "rlv/ast.hpp"
#include "rlv/module.hpp"

namespace rlv {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

ArithExprPtr a_const(Nat value) { return std::make_shared<ArithExpr>(ArithExpr{ArithExpr::Const{std::move(value)}}); }
ArithExprPtr a_loc(Nat addr) { return std::make_shared<ArithExpr>(ArithExpr{ArithExpr::Loc{Addr{std::move(addr)}}}); }
ArithExprPtr a_deref(Nat addr) { return std::make_shared<ArithExpr>(ArithExpr{ArithExpr::Deref{Addr{std::move(addr)}}}); }
ArithExprPtr a_addr_of(Nat addr) {
  return std::make_shared<ArithExpr>(ArithExpr{ArithExpr::AddrOf{Addr{std::move(addr)}}});
}
ArithExprPtr a_bin(ArithOp op, ArithExprPtr lhs, ArithExprPtr rhs) {
  return std::make_shared<ArithExpr>(ArithExpr{ArithExpr::Bin{op, std::move(lhs), std::move(rhs)}});
}

BoolExprPtr b_lit(bool value) { return std::make_shared<BoolExpr>(BoolExpr{BoolExpr::Lit{value}}); }
BoolExprPtr b_cmp(CmpOp op, ArithExprPtr lhs, ArithExprPtr rhs) {
  return std::make_shared<BoolExpr>(BoolExpr{BoolExpr::Cmp{op, std::move(lhs), std::move(rhs)}});
}
BoolExprPtr b_logic(BoolConn op, BoolExprPtr lhs, BoolExprPtr rhs) {
  return std::make_shared<BoolExpr>(BoolExpr{BoolExpr::Logic{op, std::move(lhs), std::move(rhs)}});
}
BoolExprPtr b_not(BoolExprPtr body) { return std::make_shared<BoolExpr>(BoolExpr{BoolExpr::Not{std::move(body)}}); }

CommandPtr c_skip() {
  static const CommandPtr skip = std::make_shared<Command>(Command{Command::Skip{}});
  return skip;
}
CommandPtr c_assign(Nat addr, ArithExprPtr value) {
  return std::make_shared<Command>(Command{Command::Assign{Addr{std::move(addr)}, std::move(value)}});
}
CommandPtr c_indirect_assign(Nat addr, ArithExprPtr value) {
  return std::make_shared<Command>(Command{Command::IndirectAssign{Addr{std::move(addr)}, std::move(value)}});
}
CommandPtr c_seq(CommandPtr first, CommandPtr second) {
  return std::make_shared<Command>(Command{Command::Seq{std::move(first), std::move(second)}});
}
CommandPtr c_assert(Assertion pred) { return std::make_shared<Command>(Command{Command::Assert{std::move(pred)}}); }
CommandPtr c_if(BoolExprPtr cond, CommandPtr then_branch, CommandPtr else_branch) {
  return std::make_shared<Command>(
      Command{Command::If{std::move(cond), std::move(then_branch), std::move(else_branch)}});
}
CommandPtr c_while(BoolExprPtr cond, Assertion invariant, CommandPtr body) {
  return std::make_shared<Command>(Command{Command::While{std::move(cond), std::move(invariant), std::move(body)}});
}
CommandPtr c_call(std::string proc) { return std::make_shared<Command>(Command{Command::Call{std::move(proc)}}); }

CommandPtr c_seq_all(const std::vector<CommandPtr>& cmds) {
  if (cmds.empty()) throw std::invalid_argument("empty command sequence");
  CommandPtr acc = cmds.front();
  for (std::size_t i = 1; i < cmds.size(); ++i) acc = c_seq(acc, cmds[i]);
  return acc;
}

bool equal(const ArithExprPtr& a, const ArithExprPtr& b) {
  if (a == b) return true;
  if (!a || !b || a->node.index() != b->node.index()) return false;
  return std::visit(overloaded{
                        [&](const ArithExpr::Const& x) { return x.value == std::get<ArithExpr::Const>(b->node).value; },
                        [&](const ArithExpr::Loc& x) { return x.addr == std::get<ArithExpr::Loc>(b->node).addr; },
                        [&](const ArithExpr::Deref& x) { return x.addr == std::get<ArithExpr::Deref>(b->node).addr; },
                        [&](const ArithExpr::AddrOf& x) { return x.addr == std::get<ArithExpr::AddrOf>(b->node).addr; },
                        [&](const ArithExpr::Bin& x) {
                          const auto& y = std::get<ArithExpr::Bin>(b->node);
                          return x.op == y.op && equal(x.lhs, y.lhs) && equal(x.rhs, y.rhs);
                        },
                    },
                    a->node);
}

bool equal(const BoolExprPtr& a, const BoolExprPtr& b) {
  if (a == b) return true;
  if (!a || !b || a->node.index() != b->node.index()) return false;
  return std::visit(overloaded{
                        [&](const BoolExpr::Lit& x) { return x.value == std::get<BoolExpr::Lit>(b->node).value; },
                        [&](const BoolExpr::Cmp& x) {
                          const auto& y = std::get<BoolExpr::Cmp>(b->node);
                          return x.op == y.op && equal(x.lhs, y.lhs) && equal(x.rhs, y.rhs);
                        },
                        [&](const BoolExpr::Logic& x) {
                          const auto& y = std::get<BoolExpr::Logic>(b->node);
                          return x.op == y.op && equal(x.lhs, y.lhs) && equal(x.rhs, y.rhs);
                        },
                        [&](const BoolExpr::Not& x) { return equal(x.body, std::get<BoolExpr::Not>(b->node).body); },
                    },
                    a->node);
}

bool equal(const CommandPtr& a, const CommandPtr& b) {
  if (a == b) return true;
  if (!a || !b || a->node.index() != b->node.index()) return false;
  return std::visit(
      overloaded{
          [&](const Command::Skip&) { return true; },
          [&](const Command::Assign& x) {
            const auto& y = std::get<Command::Assign>(b->node);
            return x.target == y.target && equal(x.value, y.value);
          },
          [&](const Command::IndirectAssign& x) {
            const auto& y = std::get<Command::IndirectAssign>(b->node);
            return x.target == y.target && equal(x.value, y.value);
          },
          [&](const Command::Seq& x) {
            const auto& y = std::get<Command::Seq>(b->node);
            return equal(x.first, y.first) && equal(x.second, y.second);
          },
          [&](const Command::Assert& x) { return equal(x.pred, std::get<Command::Assert>(b->node).pred); },
          [&](const Command::If& x) {
            const auto& y = std::get<Command::If>(b->node);
            return equal(x.cond, y.cond) && equal(x.then_branch, y.then_branch) && equal(x.else_branch, y.else_branch);
          },
          [&](const Command::While& x) {
            const auto& y = std::get<Command::While>(b->node);
            return equal(x.cond, y.cond) && equal(x.invariant, y.invariant) && equal(x.body, y.body);
          },
          [&](const Command::Call& x) { return x.proc == std::get<Command::Call>(b->node).proc; },
      },
      a->node);
}

std::size_t command_size(const CommandPtr& c) {
  return 1 + std::visit(overloaded{
                            [](const Command::Seq& s) { return command_size(s.first) + command_size(s.second); },
                            [](const Command::If& i) {
                              return command_size(i.then_branch) + command_size(i.else_branch);
                            },
                            [](const Command::While& w) { return command_size(w.body); },
                            [](const auto&) -> std::size_t { return 0; },
                        },
                        c->node);
}

bool contains_loop(const CommandPtr& c) {
  return std::visit(overloaded{
                        [](const Command::While&) { return true; },
                        [](const Command::Seq& s) { return contains_loop(s.first) || contains_loop(s.second); },
                        [](const Command::If& i) {
                          return contains_loop(i.then_branch) || contains_loop(i.else_branch);
                        },
                        [](const auto&) { return false; },
                    },
                    c->node);
}

bool contains_call(const CommandPtr& c) {
  return std::visit(overloaded{
                        [](const Command::Call&) { return true; },
                        [](const Command::Seq& s) { return contains_call(s.first) || contains_call(s.second); },
                        [](const Command::If& i) {
                          return contains_call(i.then_branch) || contains_call(i.else_branch);
                        },
                        [](const Command::While& w) { return contains_call(w.body); },
                        [](const auto&) { return false; },
                    },
                    c->node);
}

MemState mem_update(const MemState& sigma, const Nat& addr, const Nat& value) {
  if (sgn(value) < 0 || sgn(addr) < 0) throw std::invalid_argument("memory cells hold naturals");
  MemState next = sigma;
  next.bindings_[addr] = value;
  return next;
}

bool operator==(const MemState& a, const MemState& b) {
  // States are total functions; explicit zero entries do not distinguish them.
  auto next_nonzero = [](auto it, auto end) {
    while (it != end && sgn(it->second) == 0) ++it;
    return it;
  };
  auto ia = a.bindings_.begin(), ea = a.bindings_.end();
  auto ib = b.bindings_.begin(), eb = b.bindings_.end();
  ia = next_nonzero(ia, ea);
  ib = next_nonzero(ib, eb);
  while (ia != ea && ib != eb) {
    if (ia->first != ib->first || ia->second != ib->second) return false;
    ia = next_nonzero(++ia, ea);
    ib = next_nonzero(++ib, eb);
  }
  return ia == ea && ib == eb;
}

bool calls_bound(const CommandPtr& c, const ProcEnv& procs) {
  return std::visit(overloaded{
                        [&](const Command::Call& call) { return procs.count(call.proc) > 0; },
                        [&](const Command::Seq& s) {
                          return calls_bound(s.first, procs) && calls_bound(s.second, procs);
                        },
                        [&](const Command::If& i) {
                          return calls_bound(i.then_branch, procs) && calls_bound(i.else_branch, procs);
                        },
                        [&](const Command::While& w) { return calls_bound(w.body, procs); },
                        [&](const auto&) { return true; },
                    },
                    c->node);
}

// ---------------------------------------------------------------------------
// Assertions

Assertion assertion_true(int arity) { return Assertion{arity, f_true()}; }

std::optional<ScopeError> assertion_check(const Assertion& p) {
  if (p.arity < 0) return ScopeError{"negative assertion arity", "", 0};
  if (!p.body) return ScopeError{"assertion without a body", "", 0};
  return check_scopes(p.body, p.arity);
}

FormulaPtr subst_states(const Assertion& p, const std::vector<StateTermPtr>& args) {
  if (args.size() != static_cast<std::size_t>(p.arity))
    throw std::invalid_argument("assertion of arity " + std::to_string(p.arity) + " applied to " +
                                std::to_string(args.size()) + " states");
  return subst_params(p.body, args);
}

Assertion permute_params(const Assertion& p, const std::vector<int>& perm) {
  std::vector<StateTermPtr> args;
  args.reserve(perm.size());
  for (int ix : perm) args.push_back(s_param(ix));
  return Assertion{p.arity, subst_states(p, args)};
}

// ---------------------------------------------------------------------------
// Modules

std::string format_diagnostic(const std::string& file, const Diagnostic& d) {
  return file + ":" + std::to_string(d.where.line) + ":" + std::to_string(d.where.col) + ": " + d.message;
}

const HoareGoal* SourceModule::find_hoare(const std::string& name) const {
  for (const auto& g : hoare_goals)
    if (g.name == name) return &g;
  return nullptr;
}

const RelGoalDecl* SourceModule::find_relation(const std::string& name) const {
  for (const auto& g : rel_goals)
    if (g.name == name) return &g;
  return nullptr;
}

bool equal(const SourceModule& a, const SourceModule& b) {
  auto eq_cmds = [](const std::map<std::string, CommandPtr>& x, const std::map<std::string, CommandPtr>& y) {
    if (x.size() != y.size()) return false;
    for (auto ix = x.begin(), iy = y.begin(); ix != x.end(); ++ix, ++iy)
      if (ix->first != iy->first || !equal(ix->second, iy->second)) return false;
    return true;
  };
  if (!eq_cmds(a.procs, b.procs) || !eq_cmds(a.commands, b.commands)) return false;
  if (a.contracts.size() != b.contracts.size()) return false;
  for (auto ix = a.contracts.begin(), iy = b.contracts.begin(); ix != a.contracts.end(); ++ix, ++iy) {
    if (ix->first != iy->first || !equal(ix->second.pre, iy->second.pre) || !equal(ix->second.post, iy->second.post))
      return false;
  }
  if (a.hoare_goals.size() != b.hoare_goals.size() || a.rel_goals.size() != b.rel_goals.size()) return false;
  for (std::size_t i = 0; i < a.hoare_goals.size(); ++i) {
    const auto& x = a.hoare_goals[i];
    const auto& y = b.hoare_goals[i];
    if (x.name != y.name || x.cmd != y.cmd || !equal(x.pre, y.pre) || !equal(x.post, y.post)) return false;
  }
  for (std::size_t i = 0; i < a.rel_goals.size(); ++i) {
    const auto& x = a.rel_goals[i];
    const auto& y = b.rel_goals[i];
    if (x.name != y.name || x.cmds != y.cmds || !equal(x.pre, y.pre) || !equal(x.post, y.post)) return false;
  }
  return true;
}

}  // namespace rlv
