#include "rlv/vcgen.hpp"

#include <functional>
#include <stdexcept>

namespace rlv {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

const char* vc_kind_name(VcKind k) {
  switch (k) {
    case VcKind::Tf: return "tf";
    case VcKind::Ta: return "ta";
    case VcKind::Tc: return "tc";
    case VcKind::Tar: return "tar";
    default: return "tr";
  }
}

// ---------------------------------------------------------------------------
// Expression translation: program expressions become terms over a state.

NatTermPtr aexp_term(const ArithExprPtr& a, const StateTermPtr& s) {
  return std::visit(overloaded{
                        [&](const ArithExpr::Const& c) { return t_lit(c.value); },
                        [&](const ArithExpr::Loc& l) { return t_read(s, t_lit(l.addr.value)); },
                        [&](const ArithExpr::Deref& d) {
                          return t_read(s, t_read(s, t_lit(d.addr.value)));
                        },
                        [&](const ArithExpr::AddrOf& d) { return t_lit(d.addr.value); },
                        [&](const ArithExpr::Bin& b) {
                          return t_bin(b.op, aexp_term(b.lhs, s), aexp_term(b.rhs, s));
                        },
                    },
                    a->node);
}

FormulaPtr bexp_formula(const BoolExprPtr& b, const StateTermPtr& s) {
  return std::visit(overloaded{
                        [&](const BoolExpr::Lit& l) { return f_bool(l.value); },
                        [&](const BoolExpr::Cmp& c) {
                          return f_cmp(c.op, aexp_term(c.lhs, s), aexp_term(c.rhs, s));
                        },
                        [&](const BoolExpr::Logic& l) {
                          auto lhs = bexp_formula(l.lhs, s);
                          auto rhs = bexp_formula(l.rhs, s);
                          return l.op == BoolConn::And ? f_and(lhs, rhs) : f_or(lhs, rhs);
                        },
                        [&](const BoolExpr::Not& n) { return f_not(bexp_formula(n.body, s)); },
                    },
                    b->node);
}

namespace {

using Cont = std::function<FormulaPtr(const StateTermPtr&)>;

const Contract& contract_of(const ContractEnv& phi, const std::string& name) {
  auto it = phi.find(name);
  if (it == phi.end()) throw std::invalid_argument("no contract for procedure '" + name + "'");
  return it->second;
}

struct VcgContext {
  const ContractEnv& phi;
  StateNamer& names;
  bool optimized;

  FormulaPtr tc_k(const CommandPtr& c, const StateTermPtr& s, const Cont& k) {
    return std::visit(
        overloaded{
            [&](const Command::Skip&) {
              StateTermPtr next = s_var(names.fresh());
              return f_forall_state(var_name(next), f_implies(f_state_eq(next, s), k(next)));
            },
            [&](const Command::Assign& a) {
              StateTermPtr upd = s_write(s, t_lit(a.target.value), aexp_term(a.value, s));
              StateTermPtr next = s_var(names.fresh());
              return f_forall_state(var_name(next), f_implies(f_state_eq(next, upd), k(next)));
            },
            [&](const Command::IndirectAssign& a) {
              StateTermPtr upd =
                  s_write(s, t_read(s, t_lit(a.target.value)), aexp_term(a.value, s));
              StateTermPtr next = s_var(names.fresh());
              return f_forall_state(var_name(next), f_implies(f_state_eq(next, upd), k(next)));
            },
            [&](const Command::Assert& a) {
              StateTermPtr next = s_var(names.fresh());
              return f_forall_state(
                  var_name(next),
                  f_implies(f_and(f_state_eq(next, s), subst_states(a.pred, {s})), k(next)));
            },
            [&](const Command::Seq& sq) {
              return tc_k(sq.first, s, [&](const StateTermPtr& mid) { return tc_k(sq.second, mid, k); });
            },
            [&](const Command::If& br) {
              if (optimized) return tc_if_joined(br, s, k);
              // sequence the branches explicitly: fresh names must be drawn
              // then-branch first
              FormulaPtr then_part = f_implies(bexp_formula(br.cond, s), tc_k(br.then_branch, s, k));
              FormulaPtr else_part =
                  f_implies(f_not(bexp_formula(br.cond, s)), tc_k(br.else_branch, s, k));
              return f_and(then_part, else_part);
            },
            [&](const Command::Call& call) {
              const Contract& k2 = contract_of(phi, call.proc);
              StateTermPtr next = s_var(names.fresh());
              return f_implies(subst_states(k2.pre, {s}),
                               f_forall_state(var_name(next),
                                              f_implies(subst_states(k2.post, {next}), k(next))));
            },
            [&](const Command::While& w) {
              StateTermPtr next = s_var(names.fresh());
              return f_implies(
                  subst_states(w.invariant, {s}),
                  f_forall_state(var_name(next),
                                 f_implies(f_and(subst_states(w.invariant, {next}),
                                                 f_not(bexp_formula(w.cond, next))),
                                           k(next))));
            },
        },
        c->node);
  }

  /// One join state per conditional: the continuation is materialized once,
  /// guarded by a disjunction of per-branch reachability formulas.
  FormulaPtr tc_if_joined(const Command::If& br, const StateTermPtr& s, const Cont& k) {
    StateTermPtr join = s_var(names.fresh());
    auto reaches = [&](const CommandPtr& branch) {
      return f_not(tc_k(branch, s, [&](const StateTermPtr& out) { return f_not(f_state_eq(out, join)); }));
    };
    FormulaPtr cond = bexp_formula(br.cond, s);
    FormulaPtr from_then = f_and(cond, reaches(br.then_branch));
    FormulaPtr from_else = f_and(f_not(bexp_formula(br.cond, s)), reaches(br.else_branch));
    return f_forall_state(var_name(join), f_implies(f_or(from_then, from_else), k(join)));
  }

  FormulaPtr ta_f(const CommandPtr& c, const StateTermPtr& s) {
    return std::visit(
        overloaded{
            [&](const Command::Assert& a) { return subst_states(a.pred, {s}); },
            [&](const Command::Seq& sq) {
              FormulaPtr head = ta_f(sq.first, s);
              FormulaPtr rest = tc_k(sq.first, s, [&](const StateTermPtr& mid) { return ta_f(sq.second, mid); });
              return f_and(head, rest);
            },
            [&](const Command::If& br) {
              FormulaPtr then_part = f_implies(bexp_formula(br.cond, s), ta_f(br.then_branch, s));
              FormulaPtr else_part = f_implies(f_not(bexp_formula(br.cond, s)), ta_f(br.else_branch, s));
              return f_and(then_part, else_part);
            },
            [&](const Command::Call& call) { return subst_states(contract_of(phi, call.proc).pre, {s}); },
            [&](const Command::While& w) {
              FormulaPtr establish = subst_states(w.invariant, {s});
              StateTermPtr it1 = s_var(names.fresh());
              FormulaPtr keep_aux = f_forall_state(
                  var_name(it1), f_implies(f_and(subst_states(w.invariant, {it1}), bexp_formula(w.cond, it1)),
                                           ta_f(w.body, it1)));
              StateTermPtr it2 = s_var(names.fresh());
              FormulaPtr preserve = f_forall_state(
                  var_name(it2),
                  f_implies(f_and(subst_states(w.invariant, {it2}), bexp_formula(w.cond, it2)),
                            tc_k(w.body, it2,
                                 [&](const StateTermPtr& out) { return subst_states(w.invariant, {out}); })));
              return f_and(f_and(establish, keep_aux), preserve);
            },
            [&](const auto&) { return f_true(); },  // skip and assignments
        },
        c->node);
  }

  static const std::string& var_name(const StateTermPtr& v) { return std::get<StateTerm::Var>(v->node).name; }
};

}  // namespace

FormulaPtr tc_cont(const CommandPtr& c, const StateTermPtr& s, const ContractEnv& phi, StateNamer& names,
                   Generator gen, const StateCont& k) {
  VcgContext ctx{phi, names, gen == Generator::Optimized};
  return ctx.tc_k(c, s, k);
}

FormulaPtr tc(const CommandPtr& c, const StateTermPtr& s, const ContractEnv& phi, const Assertion& post,
              StateNamer& names) {
  VcgContext ctx{phi, names, false};
  return ctx.tc_k(c, s, [&](const StateTermPtr& out) { return subst_states(post, {out}); });
}

FormulaPtr tc_opt(const CommandPtr& c, const StateTermPtr& s, const ContractEnv& phi, const Assertion& post,
                  StateNamer& names) {
  VcgContext ctx{phi, names, true};
  return ctx.tc_k(c, s, [&](const StateTermPtr& out) { return subst_states(post, {out}); });
}

FormulaPtr ta(const CommandPtr& c, const StateTermPtr& s, const ContractEnv& phi, StateNamer& names,
              Generator gen) {
  VcgContext ctx{phi, names, gen == Generator::Optimized};
  return ctx.ta_f(c, s);
}

FormulaPtr tf(const ContractEnv& phi, const ProcEnv& psi, StateNamer& names, Generator gen) {
  if (phi.size() != psi.size()) throw std::invalid_argument("contract and procedure key sets differ");
  for (const auto& [name, _] : phi)
    if (!psi.count(name)) throw std::invalid_argument("contract without procedure: '" + name + "'");
  VcgContext ctx{phi, names, gen == Generator::Optimized};
  std::vector<FormulaPtr> conjuncts;
  for (const auto& [name, contract] : phi) {
    const CommandPtr& body = psi.at(name);
    StateTermPtr s0 = s_var(names.fresh());
    FormulaPtr aux = ctx.ta_f(body, s0);
    FormulaPtr main = ctx.tc_k(body, s0, [&](const StateTermPtr& out) {
      return subst_states(contract.post, {out});
    });
    conjuncts.push_back(f_forall_state(VcgContext::var_name(s0),
                                       f_implies(subst_states(contract.pre, {s0}), f_and(aux, main))));
  }
  return f_conj(conjuncts);
}

namespace {

/// An if-branch case split: (g => A) && (!g => B). Kept as one query; the
/// two parts are halves of one case analysis, not independent obligations,
/// and splitting them doubles the query count per nesting level.
bool is_branch_pair(const Formula::And& a) {
  const auto* l = std::get_if<Formula::Implies>(&a.lhs->node);
  const auto* r = std::get_if<Formula::Implies>(&a.rhs->node);
  if (!l || !r) return false;
  const auto* neg = std::get_if<Formula::Not>(&r->lhs->node);
  return neg && equal(neg->body, l->lhs);
}

}  // namespace

std::vector<FormulaPtr> split_conjuncts(const FormulaPtr& f) {
  std::vector<FormulaPtr> out;
  std::visit(overloaded{
                 [&](const Formula::And& a) {
                   if (is_branch_pair(a)) {
                     out.push_back(f);
                     return;
                   }
                   for (auto& piece : split_conjuncts(a.lhs)) out.push_back(std::move(piece));
                   for (auto& piece : split_conjuncts(a.rhs)) out.push_back(std::move(piece));
                 },
                 [&](const Formula::Implies& i) {
                   for (auto& piece : split_conjuncts(i.rhs)) out.push_back(f_implies(i.lhs, piece));
                 },
                 [&](const Formula::ForallState& q) {
                   for (auto& piece : split_conjuncts(q.body)) out.push_back(f_forall_state(q.var, piece));
                 },
                 [&](const Formula::QuantNat& q) {
                   if (q.is_forall) {
                     for (auto& piece : split_conjuncts(q.body))
                       out.push_back(f_forall_nat(q.var, piece));
                   } else {
                     out.push_back(f);
                   }
                 },
                 [&](const auto&) { out.push_back(f); },
             },
             f->node);
  return out;
}

namespace {

void check_goal_inputs(const Assertion& pre, const Assertion& post, int arity, const ContractEnv& phi,
                       const ProcEnv& psi) {
  if (pre.arity != arity || post.arity != arity)
    throw std::invalid_argument("goal assertions must have arity " + std::to_string(arity));
  if (auto err = assertion_check(pre))
    throw std::invalid_argument("ill-formed precondition: " + err->message);
  if (auto err = assertion_check(post))
    throw std::invalid_argument("ill-formed postcondition: " + err->message);
  if (phi.size() != psi.size()) throw std::invalid_argument("contract and procedure key sets differ");
  for (const auto& [name, body] : psi) {
    if (!phi.count(name)) throw std::invalid_argument("procedure without contract: '" + name + "'");
    if (!calls_bound(body, psi))
      throw std::invalid_argument("procedure '" + name + "' calls an undeclared procedure");
  }
}

void push_split(std::vector<VC>& vcs, const FormulaPtr& whole, VcKind kind, const std::string& scope,
                const std::string& goal, Span where) {
  std::size_t i = 0;
  // counter continues across procedures within one kind group
  for (auto& existing : vcs)
    if (existing.origin.kind == kind) ++i;
  for (auto& piece : split_conjuncts(whole)) {
    std::string name = goal + "." + vc_kind_name(kind) + "." + std::to_string(i++);
    vcs.push_back(VC{std::move(name), piece, VcOrigin{kind, scope, where}});
  }
}

}  // namespace

std::vector<VC> hoare_vcs(const Assertion& pre, const CommandPtr& c, const Assertion& post,
                          const ContractEnv& phi, const ProcEnv& psi, const std::string& goal_name,
                          Generator gen, Span where) {
  check_goal_inputs(pre, post, 1, phi, psi);
  if (!calls_bound(c, psi)) throw std::invalid_argument("goal command calls an undeclared procedure");

  StateNamer names;
  VcgContext ctx{phi, names, gen == Generator::Optimized};
  std::vector<VC> vcs;

  for (const auto& [name, contract] : phi) {
    StateTermPtr s0 = s_var(names.fresh());
    FormulaPtr aux = ctx.ta_f(psi.at(name), s0);
    FormulaPtr main = ctx.tc_k(psi.at(name), s0, [&](const StateTermPtr& out) {
      return subst_states(contract.post, {out});
    });
    FormulaPtr whole = f_forall_state(VcgContext::var_name(s0),
                                      f_implies(subst_states(contract.pre, {s0}), f_and(aux, main)));
    push_split(vcs, whole, VcKind::Tf, name, goal_name, where);
  }

  {
    StateTermPtr s0 = s_var(names.fresh());
    FormulaPtr whole = f_forall_state(VcgContext::var_name(s0),
                                      f_implies(subst_states(pre, {s0}), ctx.ta_f(c, s0)));
    push_split(vcs, whole, VcKind::Ta, goal_name, goal_name, where);
  }

  {
    StateTermPtr s0 = s_var(names.fresh());
    FormulaPtr main = ctx.tc_k(c, s0, [&](const StateTermPtr& out) { return subst_states(post, {out}); });
    FormulaPtr whole =
        f_forall_state(VcgContext::var_name(s0), f_implies(subst_states(pre, {s0}), main));
    push_split(vcs, whole, VcKind::Tc, goal_name, goal_name, where);
  }

  return vcs;
}

}  // namespace rlv
