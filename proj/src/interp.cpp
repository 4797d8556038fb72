#include "rlv/interp.hpp"

#include <map>
#include <stdexcept>
#include <string>

namespace rlv {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

Nat eval_aexp(const ArithExprPtr& a, const MemState& sigma) {
  return std::visit(overloaded{
                        [&](const ArithExpr::Const& c) { return c.value; },
                        [&](const ArithExpr::Loc& l) { return sigma.lookup(l.addr.value); },
                        [&](const ArithExpr::Deref& d) { return sigma.lookup(sigma.lookup(d.addr.value)); },
                        [&](const ArithExpr::AddrOf& d) { return d.addr.value; },
                        [&](const ArithExpr::Bin& b) {
                          Nat l = eval_aexp(b.lhs, sigma);
                          Nat r = eval_aexp(b.rhs, sigma);
                          switch (b.op) {
                            case ArithOp::Add: return Nat(l + r);
                            case ArithOp::Mul: return Nat(l * r);
                            default: return monus(l, r);
                          }
                        },
                    },
                    a->node);
}

bool eval_bexp(const BoolExprPtr& b, const MemState& sigma) {
  return std::visit(overloaded{
                        [&](const BoolExpr::Lit& l) { return l.value; },
                        [&](const BoolExpr::Cmp& c) {
                          Nat l = eval_aexp(c.lhs, sigma);
                          Nat r = eval_aexp(c.rhs, sigma);
                          return c.op == CmpOp::Le ? l <= r : l == r;
                        },
                        [&](const BoolExpr::Logic& l) {
                          return l.op == BoolConn::And ? eval_bexp(l.lhs, sigma) && eval_bexp(l.rhs, sigma)
                                                       : eval_bexp(l.lhs, sigma) || eval_bexp(l.rhs, sigma);
                        },
                        [&](const BoolExpr::Not& n) { return !eval_bexp(n.body, sigma); },
                    },
                    b->node);
}

namespace {

std::optional<MemState> run(const CommandPtr& c, MemState sigma, const ProcEnv& psi, std::uint64_t& fuel) {
  if (fuel == 0) return std::nullopt;
  --fuel;
  if (std::holds_alternative<Command::Skip>(c->node)) return sigma;
  if (const auto* a = std::get_if<Command::Assign>(&c->node)) {
    Nat v = eval_aexp(a->value, sigma);
    return mem_update(sigma, a->target.value, v);
  }
  if (const auto* a = std::get_if<Command::IndirectAssign>(&c->node)) {
    Nat v = eval_aexp(a->value, sigma);
    Nat addr = sigma.lookup(a->target.value);
    return mem_update(sigma, addr, v);
  }
  if (const auto* s = std::get_if<Command::Seq>(&c->node)) {
    auto mid = run(s->first, std::move(sigma), psi, fuel);
    if (!mid) return std::nullopt;
    return run(s->second, std::move(*mid), psi, fuel);
  }
  if (std::holds_alternative<Command::Assert>(c->node)) return sigma;  // annotations have no effect
  if (const auto* i = std::get_if<Command::If>(&c->node)) {
    return eval_bexp(i->cond, sigma) ? run(i->then_branch, std::move(sigma), psi, fuel)
                                     : run(i->else_branch, std::move(sigma), psi, fuel);
  }
  if (const auto* w = std::get_if<Command::While>(&c->node)) {
    for (;;) {
      if (!eval_bexp(w->cond, sigma)) return sigma;
      auto next = run(w->body, std::move(sigma), psi, fuel);
      if (!next) return std::nullopt;
      sigma = std::move(*next);
      if (fuel == 0) return std::nullopt;
      --fuel;  // the next unfolding of the loop rule
    }
  }
  const auto& call = std::get<Command::Call>(c->node);
  auto it = psi.find(call.proc);
  if (it == psi.end()) throw std::invalid_argument("call to undeclared procedure '" + call.proc + "'");
  return run(it->second, std::move(sigma), psi, fuel);
}

}  // namespace

Outcome exec(const CommandPtr& c, MemState sigma, const ProcEnv& psi, std::uint64_t fuel) {
  auto result = run(c, std::move(sigma), psi, fuel);
  return result ? Outcome::final(std::move(*result)) : Outcome::fuel_exhausted();
}

// ---------------------------------------------------------------------------
// Assertion evaluation

namespace {

bool has_nat_quantifier(const FormulaPtr& f) {
  return std::visit(overloaded{
                        [](const Formula::QuantNat&) { return true; },
                        [](const Formula::Not& n) { return has_nat_quantifier(n.body); },
                        [](const Formula::And& a) { return has_nat_quantifier(a.lhs) || has_nat_quantifier(a.rhs); },
                        [](const Formula::Or& o) { return has_nat_quantifier(o.lhs) || has_nat_quantifier(o.rhs); },
                        [](const Formula::Implies& i) {
                          return has_nat_quantifier(i.lhs) || has_nat_quantifier(i.rhs);
                        },
                        [](const Formula::ForallState& q) { return has_nat_quantifier(q.body); },
                        [](const auto&) { return false; },
                    },
                    f->node);
}

struct Evaluator {
  const std::vector<MemState>& states;
  std::uint64_t bound;
  std::map<std::string, Nat> nat_env;

  Nat eval(const NatTermPtr& t) {
    return std::visit(overloaded{
                          [&](const NatTerm::Lit& l) { return l.value; },
                          [&](const NatTerm::Var& v) {
                            auto it = nat_env.find(v.name);
                            if (it == nat_env.end())
                              throw std::logic_error("unbound variable '" + v.name + "' in evaluation");
                            return it->second;
                          },
                          [&](const NatTerm::Read& r) {
                            MemState s = eval_state(r.state);
                            return s.lookup(eval(r.addr));
                          },
                          [&](const NatTerm::Bin& b) {
                            Nat l = eval(b.lhs);
                            Nat r = eval(b.rhs);
                            switch (b.op) {
                              case ArithOp::Add: return Nat(l + r);
                              case ArithOp::Mul: return Nat(l * r);
                              default: return monus(l, r);
                            }
                          },
                      },
                      t->node);
  }

  MemState eval_state(const StateTermPtr& s) {
    return std::visit(overloaded{
                          [&](const StateTerm::Var& v) -> MemState {
                            throw std::logic_error("state variable '" + v.name + "' in concrete evaluation");
                          },
                          [&](const StateTerm::Param& p) -> MemState {
                            if (p.index < 1 || static_cast<std::size_t>(p.index) > states.size())
                              throw std::invalid_argument("state parameter out of range");
                            return states[static_cast<std::size_t>(p.index) - 1];
                          },
                          [&](const StateTerm::Write& w) -> MemState {
                            MemState base = eval_state(w.state);
                            return mem_update(base, eval(w.addr), eval(w.value));
                          },
                      },
                      s->node);
  }

  bool eval(const FormulaPtr& f) {
    return std::visit(
        overloaded{
            [&](const Formula::BoolLit& b) { return b.value; },
            [&](const Formula::Cmp& c) {
              Nat l = eval(c.lhs);
              Nat r = eval(c.rhs);
              return c.op == CmpOp::Le ? l <= r : l == r;
            },
            [&](const Formula::StateEq& e) { return eval_state(e.lhs) == eval_state(e.rhs); },
            [&](const Formula::Not& n) { return !eval(n.body); },
            [&](const Formula::And& a) { return eval(a.lhs) && eval(a.rhs); },
            [&](const Formula::Or& o) { return eval(o.lhs) || eval(o.rhs); },
            [&](const Formula::Implies& i) { return !eval(i.lhs) || eval(i.rhs); },
            [&](const Formula::QuantNat& q) {
              auto saved = nat_env.find(q.var) != nat_env.end() ? std::optional<Nat>(nat_env[q.var])
                                                                : std::nullopt;
              bool result = q.is_forall;
              for (Nat n(0); n <= Nat(static_cast<unsigned long>(bound)); ++n) {
                nat_env[q.var] = n;
                bool v = eval(q.body);
                if (q.is_forall && !v) {
                  result = false;
                  break;
                }
                if (!q.is_forall && v) {
                  result = true;
                  break;
                }
              }
              if (saved)
                nat_env[q.var] = *saved;
              else
                nat_env.erase(q.var);
              return result;
            },
            [&](const Formula::ForallState&) -> bool {
              throw std::logic_error("state quantifier in concrete evaluation");
            },
        },
        f->node);
  }
};

}  // namespace

AssertionValue eval_assertion(const Assertion& p, const std::vector<MemState>& states, std::uint64_t bound) {
  if (states.size() != static_cast<std::size_t>(p.arity))
    throw std::invalid_argument("assertion of arity " + std::to_string(p.arity) + " evaluated at " +
                                std::to_string(states.size()) + " states");
  Evaluator ev{states, bound, {}};
  bool value = ev.eval(p.body);
  return AssertionValue{value, !has_nat_quantifier(p.body)};
}

// ---------------------------------------------------------------------------
// k-inliner

CommandPtr diverge() { return c_while(b_lit(true), assertion_true(), c_skip()); }

CommandPtr inline_k(const CommandPtr& c, std::uint64_t k, const ProcEnv& psi) {
  return std::visit(
      overloaded{
          [&](const Command::Seq& s) { return c_seq(inline_k(s.first, k, psi), inline_k(s.second, k, psi)); },
          [&](const Command::If& i) {
            return c_if(i.cond, inline_k(i.then_branch, k, psi), inline_k(i.else_branch, k, psi));
          },
          [&](const Command::While& w) { return c_while(w.cond, w.invariant, inline_k(w.body, k, psi)); },
          [&](const Command::Call& call) {
            if (k == 0) return diverge();
            auto it = psi.find(call.proc);
            if (it == psi.end()) throw std::invalid_argument("call to undeclared procedure '" + call.proc + "'");
            return inline_k(it->second, k - 1, psi);
          },
          [&](const auto&) { return c; },
      },
      c->node);
}

}  // namespace rlv
