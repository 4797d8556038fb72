#include "rlv/formula.hpp"

#include <map>
#include <set>
#include <sstream>
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

NatTermPtr t_lit(Nat value) { return std::make_shared<NatTerm>(NatTerm{NatTerm::Lit{std::move(value)}}); }
NatTermPtr t_var(std::string name) { return std::make_shared<NatTerm>(NatTerm{NatTerm::Var{std::move(name)}}); }
NatTermPtr t_read(StateTermPtr state, NatTermPtr addr) {
  return std::make_shared<NatTerm>(NatTerm{NatTerm::Read{std::move(state), std::move(addr)}});
}
NatTermPtr t_bin(ArithOp op, NatTermPtr lhs, NatTermPtr rhs) {
  return std::make_shared<NatTerm>(NatTerm{NatTerm::Bin{op, std::move(lhs), std::move(rhs)}});
}

StateTermPtr s_var(std::string name) { return std::make_shared<StateTerm>(StateTerm{StateTerm::Var{std::move(name)}}); }
StateTermPtr s_param(int index) { return std::make_shared<StateTerm>(StateTerm{StateTerm::Param{index}}); }
StateTermPtr s_write(StateTermPtr state, NatTermPtr addr, NatTermPtr value) {
  return std::make_shared<StateTerm>(StateTerm{StateTerm::Write{std::move(state), std::move(addr), std::move(value)}});
}

FormulaPtr f_bool(bool value) { return std::make_shared<Formula>(Formula{Formula::BoolLit{value}}); }
FormulaPtr f_true() {
  static const FormulaPtr t = f_bool(true);
  return t;
}
FormulaPtr f_false() {
  static const FormulaPtr f = f_bool(false);
  return f;
}
FormulaPtr f_cmp(CmpOp op, NatTermPtr lhs, NatTermPtr rhs) {
  return std::make_shared<Formula>(Formula{Formula::Cmp{op, std::move(lhs), std::move(rhs)}});
}
FormulaPtr f_state_eq(StateTermPtr lhs, StateTermPtr rhs) {
  return std::make_shared<Formula>(Formula{Formula::StateEq{std::move(lhs), std::move(rhs)}});
}
FormulaPtr f_not(FormulaPtr body) { return std::make_shared<Formula>(Formula{Formula::Not{std::move(body)}}); }
FormulaPtr f_and(FormulaPtr lhs, FormulaPtr rhs) {
  return std::make_shared<Formula>(Formula{Formula::And{std::move(lhs), std::move(rhs)}});
}
FormulaPtr f_or(FormulaPtr lhs, FormulaPtr rhs) {
  return std::make_shared<Formula>(Formula{Formula::Or{std::move(lhs), std::move(rhs)}});
}
FormulaPtr f_implies(FormulaPtr lhs, FormulaPtr rhs) {
  return std::make_shared<Formula>(Formula{Formula::Implies{std::move(lhs), std::move(rhs)}});
}
FormulaPtr f_forall_nat(std::string var, FormulaPtr body) {
  return std::make_shared<Formula>(Formula{Formula::QuantNat{true, std::move(var), std::move(body)}});
}
FormulaPtr f_exists_nat(std::string var, FormulaPtr body) {
  return std::make_shared<Formula>(Formula{Formula::QuantNat{false, std::move(var), std::move(body)}});
}
FormulaPtr f_forall_state(std::string var, FormulaPtr body) {
  return std::make_shared<Formula>(Formula{Formula::ForallState{std::move(var), std::move(body)}});
}

FormulaPtr f_conj(const std::vector<FormulaPtr>& fs) {
  if (fs.empty()) return f_true();
  FormulaPtr acc = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) acc = f_and(acc, fs[i]);
  return acc;
}

// ---------------------------------------------------------------------------
// Structural equality

bool equal(const NatTermPtr& a, const NatTermPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->node.index() != b->node.index()) return false;
  return std::visit(
      overloaded{
          [&](const NatTerm::Lit& x) { return x.value == std::get<NatTerm::Lit>(b->node).value; },
          [&](const NatTerm::Var& x) { return x.name == std::get<NatTerm::Var>(b->node).name; },
          [&](const NatTerm::Read& x) {
            const auto& y = std::get<NatTerm::Read>(b->node);
            return equal(x.state, y.state) && equal(x.addr, y.addr);
          },
          [&](const NatTerm::Bin& x) {
            const auto& y = std::get<NatTerm::Bin>(b->node);
            return x.op == y.op && equal(x.lhs, y.lhs) && equal(x.rhs, y.rhs);
          },
      },
      a->node);
}

bool equal(const StateTermPtr& a, const StateTermPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->node.index() != b->node.index()) return false;
  return std::visit(
      overloaded{
          [&](const StateTerm::Var& x) { return x.name == std::get<StateTerm::Var>(b->node).name; },
          [&](const StateTerm::Param& x) { return x.index == std::get<StateTerm::Param>(b->node).index; },
          [&](const StateTerm::Write& x) {
            const auto& y = std::get<StateTerm::Write>(b->node);
            return equal(x.state, y.state) && equal(x.addr, y.addr) && equal(x.value, y.value);
          },
      },
      a->node);
}

bool equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->node.index() != b->node.index()) return false;
  return std::visit(
      overloaded{
          [&](const Formula::BoolLit& x) { return x.value == std::get<Formula::BoolLit>(b->node).value; },
          [&](const Formula::Cmp& x) {
            const auto& y = std::get<Formula::Cmp>(b->node);
            return x.op == y.op && equal(x.lhs, y.lhs) && equal(x.rhs, y.rhs);
          },
          [&](const Formula::StateEq& x) {
            const auto& y = std::get<Formula::StateEq>(b->node);
            return equal(x.lhs, y.lhs) && equal(x.rhs, y.rhs);
          },
          [&](const Formula::Not& x) { return equal(x.body, std::get<Formula::Not>(b->node).body); },
          [&](const Formula::And& x) {
            const auto& y = std::get<Formula::And>(b->node);
            return equal(x.lhs, y.lhs) && equal(x.rhs, y.rhs);
          },
          [&](const Formula::Or& x) {
            const auto& y = std::get<Formula::Or>(b->node);
            return equal(x.lhs, y.lhs) && equal(x.rhs, y.rhs);
          },
          [&](const Formula::Implies& x) {
            const auto& y = std::get<Formula::Implies>(b->node);
            return equal(x.lhs, y.lhs) && equal(x.rhs, y.rhs);
          },
          [&](const Formula::QuantNat& x) {
            const auto& y = std::get<Formula::QuantNat>(b->node);
            return x.is_forall == y.is_forall && x.var == y.var && equal(x.body, y.body);
          },
          [&](const Formula::ForallState& x) {
            const auto& y = std::get<Formula::ForallState>(b->node);
            return x.var == y.var && equal(x.body, y.body);
          },
      },
      a->node);
}

// ---------------------------------------------------------------------------
// Node counting

namespace {

std::size_t count_nodes(const NatTermPtr& t);

std::size_t count_nodes(const StateTermPtr& s) {
  return 1 + std::visit(overloaded{
                            [](const StateTerm::Var&) -> std::size_t { return 0; },
                            [](const StateTerm::Param&) -> std::size_t { return 0; },
                            [](const StateTerm::Write& w) {
                              return count_nodes(w.state) + count_nodes(w.addr) + count_nodes(w.value);
                            },
                        },
                        s->node);
}

std::size_t count_nodes(const NatTermPtr& t) {
  return 1 + std::visit(overloaded{
                            [](const NatTerm::Lit&) -> std::size_t { return 0; },
                            [](const NatTerm::Var&) -> std::size_t { return 0; },
                            [](const NatTerm::Read& r) { return count_nodes(r.state) + count_nodes(r.addr); },
                            [](const NatTerm::Bin& b) { return count_nodes(b.lhs) + count_nodes(b.rhs); },
                        },
                        t->node);
}

}  // namespace

std::size_t node_count(const FormulaPtr& f) {
  return 1 + std::visit(overloaded{
                            [](const Formula::BoolLit&) -> std::size_t { return 0; },
                            [](const Formula::Cmp& c) { return count_nodes(c.lhs) + count_nodes(c.rhs); },
                            [](const Formula::StateEq& e) { return count_nodes(e.lhs) + count_nodes(e.rhs); },
                            [](const Formula::Not& n) { return node_count(n.body); },
                            [](const Formula::And& a) { return node_count(a.lhs) + node_count(a.rhs); },
                            [](const Formula::Or& o) { return node_count(o.lhs) + node_count(o.rhs); },
                            [](const Formula::Implies& i) { return node_count(i.lhs) + node_count(i.rhs); },
                            [](const Formula::QuantNat& q) { return node_count(q.body); },
                            [](const Formula::ForallState& q) { return node_count(q.body); },
                        },
                        f->node);
}

bool is_trivially_true(const FormulaPtr& f) {
  return std::visit(overloaded{
                        [](const Formula::BoolLit& b) { return b.value; },
                        [](const Formula::And& a) { return is_trivially_true(a.lhs) && is_trivially_true(a.rhs); },
                        [](const Formula::Implies& i) { return is_trivially_true(i.rhs); },
                        [](const Formula::QuantNat& q) { return is_trivially_true(q.body); },
                        [](const Formula::ForallState& q) { return is_trivially_true(q.body); },
                        [](const auto&) { return false; },
                    },
                    f->node);
}

// ---------------------------------------------------------------------------
// Scope checking

namespace {

struct ScopeWalk {
  int arity = 0;
  std::set<std::string> nat_vars;
  std::set<std::string> state_vars;
  std::size_t index = 0;
  std::optional<ScopeError> error;

  void fail(const std::string& msg, const std::string& sym) {
    if (!error) error = ScopeError{msg, sym, index};
  }

  void walk(const NatTermPtr& t) {
    if (error) return;
    ++index;
    std::visit(overloaded{
                   [](const NatTerm::Lit&) {},
                   [&](const NatTerm::Var& v) {
                     if (!nat_vars.count(v.name)) fail("unbound variable '" + v.name + "'", v.name);
                   },
                   [&](const NatTerm::Read& r) {
                     walk(r.state);
                     walk(r.addr);
                   },
                   [&](const NatTerm::Bin& b) {
                     walk(b.lhs);
                     walk(b.rhs);
                   },
               },
               t->node);
  }

  void walk(const StateTermPtr& s) {
    if (error) return;
    ++index;
    std::visit(overloaded{
                   [&](const StateTerm::Var& v) {
                     if (!state_vars.count(v.name)) fail("unbound state variable '" + v.name + "'", v.name);
                   },
                   [&](const StateTerm::Param& p) {
                     if (p.index < 1 || p.index > arity)
                       fail("state parameter " + std::to_string(p.index) + " out of range for arity " +
                                std::to_string(arity),
                            "#" + std::to_string(p.index));
                   },
                   [&](const StateTerm::Write& w) {
                     walk(w.state);
                     walk(w.addr);
                     walk(w.value);
                   },
               },
               s->node);
  }

  void walk(const FormulaPtr& f) {
    if (error) return;
    ++index;
    std::visit(overloaded{
                   [](const Formula::BoolLit&) {},
                   [&](const Formula::Cmp& c) {
                     walk(c.lhs);
                     walk(c.rhs);
                   },
                   [&](const Formula::StateEq& e) {
                     walk(e.lhs);
                     walk(e.rhs);
                   },
                   [&](const Formula::Not& n) { walk(n.body); },
                   [&](const Formula::And& a) {
                     walk(a.lhs);
                     walk(a.rhs);
                   },
                   [&](const Formula::Or& o) {
                     walk(o.lhs);
                     walk(o.rhs);
                   },
                   [&](const Formula::Implies& i) {
                     walk(i.lhs);
                     walk(i.rhs);
                   },
                   [&](const Formula::QuantNat& q) {
                     bool added = nat_vars.insert(q.var).second;
                     walk(q.body);
                     if (added) nat_vars.erase(q.var);
                   },
                   [&](const Formula::ForallState& q) {
                     bool added = state_vars.insert(q.var).second;
                     walk(q.body);
                     if (added) state_vars.erase(q.var);
                   },
               },
               f->node);
  }
};

}  // namespace

std::optional<ScopeError> check_scopes(const FormulaPtr& f, int arity) {
  ScopeWalk w;
  w.arity = arity;
  w.walk(f);
  return w.error;
}

// ---------------------------------------------------------------------------
// Free variables

namespace {

struct FreeVars {
  std::set<std::string> bound_nat, bound_state;
  std::vector<std::string> state_order;
  std::set<std::string> state_seen;
  std::vector<std::string> nat_order;
  std::set<std::string> nat_seen;

  void note_state(const std::string& n) {
    if (!bound_state.count(n) && state_seen.insert(n).second) state_order.push_back(n);
  }
  void note_nat(const std::string& n) {
    if (!bound_nat.count(n) && nat_seen.insert(n).second) nat_order.push_back(n);
  }

  void walk(const NatTermPtr& t) {
    std::visit(overloaded{
                   [](const NatTerm::Lit&) {},
                   [&](const NatTerm::Var& v) { note_nat(v.name); },
                   [&](const NatTerm::Read& r) {
                     walk(r.state);
                     walk(r.addr);
                   },
                   [&](const NatTerm::Bin& b) {
                     walk(b.lhs);
                     walk(b.rhs);
                   },
               },
               t->node);
  }
  void walk(const StateTermPtr& s) {
    std::visit(overloaded{
                   [&](const StateTerm::Var& v) { note_state(v.name); },
                   [](const StateTerm::Param&) {},
                   [&](const StateTerm::Write& w) {
                     walk(w.state);
                     walk(w.addr);
                     walk(w.value);
                   },
               },
               s->node);
  }
  void walk(const FormulaPtr& f) {
    std::visit(overloaded{
                   [](const Formula::BoolLit&) {},
                   [&](const Formula::Cmp& c) {
                     walk(c.lhs);
                     walk(c.rhs);
                   },
                   [&](const Formula::StateEq& e) {
                     walk(e.lhs);
                     walk(e.rhs);
                   },
                   [&](const Formula::Not& n) { walk(n.body); },
                   [&](const Formula::And& a) {
                     walk(a.lhs);
                     walk(a.rhs);
                   },
                   [&](const Formula::Or& o) {
                     walk(o.lhs);
                     walk(o.rhs);
                   },
                   [&](const Formula::Implies& i) {
                     walk(i.lhs);
                     walk(i.rhs);
                   },
                   [&](const Formula::QuantNat& q) {
                     bool added = bound_nat.insert(q.var).second;
                     walk(q.body);
                     if (added) bound_nat.erase(q.var);
                   },
                   [&](const Formula::ForallState& q) {
                     bool added = bound_state.insert(q.var).second;
                     walk(q.body);
                     if (added) bound_state.erase(q.var);
                   },
               },
               f->node);
  }
};

}  // namespace

std::vector<std::string> free_state_vars(const FormulaPtr& f) {
  FreeVars fv;
  fv.walk(f);
  return fv.state_order;
}

// ---------------------------------------------------------------------------
// Parameter substitution

namespace {

struct NameScan {
  std::set<std::string> names;
  void walk(const NatTermPtr& t) {
    std::visit(overloaded{
                   [](const NatTerm::Lit&) {},
                   [&](const NatTerm::Var& v) { names.insert(v.name); },
                   [&](const NatTerm::Read& r) {
                     walk(r.state);
                     walk(r.addr);
                   },
                   [&](const NatTerm::Bin& b) {
                     walk(b.lhs);
                     walk(b.rhs);
                   },
               },
               t->node);
  }
  void walk(const StateTermPtr& s) {
    std::visit(overloaded{
                   [&](const StateTerm::Var& v) { names.insert(v.name); },
                   [](const StateTerm::Param&) {},
                   [&](const StateTerm::Write& w) {
                     walk(w.state);
                     walk(w.addr);
                     walk(w.value);
                   },
               },
               s->node);
  }
  void walk(const FormulaPtr& f) {
    std::visit(overloaded{
                   [](const Formula::BoolLit&) {},
                   [&](const Formula::Cmp& c) {
                     walk(c.lhs);
                     walk(c.rhs);
                   },
                   [&](const Formula::StateEq& e) {
                     walk(e.lhs);
                     walk(e.rhs);
                   },
                   [&](const Formula::Not& n) { walk(n.body); },
                   [&](const Formula::And& a) {
                     walk(a.lhs);
                     walk(a.rhs);
                   },
                   [&](const Formula::Or& o) {
                     walk(o.lhs);
                     walk(o.rhs);
                   },
                   [&](const Formula::Implies& i) {
                     walk(i.lhs);
                     walk(i.rhs);
                   },
                   [&](const Formula::QuantNat& q) {
                     names.insert(q.var);
                     walk(q.body);
                   },
                   [&](const Formula::ForallState& q) {
                     names.insert(q.var);
                     walk(q.body);
                   },
               },
               f->node);
  }
};

struct Subst {
  const std::vector<StateTermPtr>& args;
  std::set<std::string> avoid_state;  // free state vars of the arguments
  std::set<std::string> avoid_nat;    // free nat vars of the arguments
  std::set<std::string> used;         // every name occurring anywhere
  std::map<std::string, std::string> state_ren;
  std::map<std::string, std::string> nat_ren;
  int rename_counter = 0;

  Subst(const FormulaPtr& f, const std::vector<StateTermPtr>& a) : args(a) {
    FreeVars fv;
    for (const auto& arg : a) fv.walk(arg);
    avoid_state.insert(fv.state_order.begin(), fv.state_order.end());
    avoid_nat.insert(fv.nat_order.begin(), fv.nat_order.end());
    NameScan ns;
    ns.walk(f);
    for (const auto& arg : a) ns.walk(arg);
    used = std::move(ns.names);
  }

  std::string fresh(const std::string& base, const std::set<std::string>& avoid) {
    std::string name;
    do {
      name = base + "~" + std::to_string(++rename_counter);
    } while (avoid.count(name) || used.count(name));
    used.insert(name);
    return name;
  }

  NatTermPtr walk(const NatTermPtr& t) {
    return std::visit(overloaded{
                          [&](const NatTerm::Lit&) { return t; },
                          [&](const NatTerm::Var& v) {
                            auto it = nat_ren.find(v.name);
                            return it == nat_ren.end() ? t : t_var(it->second);
                          },
                          [&](const NatTerm::Read& r) { return t_read(walk(r.state), walk(r.addr)); },
                          [&](const NatTerm::Bin& b) { return t_bin(b.op, walk(b.lhs), walk(b.rhs)); },
                      },
                      t->node);
  }

  StateTermPtr walk(const StateTermPtr& s) {
    return std::visit(overloaded{
                          [&](const StateTerm::Var& v) {
                            auto it = state_ren.find(v.name);
                            return it == state_ren.end() ? s : s_var(it->second);
                          },
                          [&](const StateTerm::Param& p) {
                            if (p.index < 1 || static_cast<std::size_t>(p.index) > args.size())
                              throw std::invalid_argument("state parameter " + std::to_string(p.index) +
                                                          " has no argument");
                            return args[static_cast<std::size_t>(p.index) - 1];
                          },
                          [&](const StateTerm::Write& w) {
                            return s_write(walk(w.state), walk(w.addr), walk(w.value));
                          },
                      },
                      s->node);
  }

  FormulaPtr walk(const FormulaPtr& f) {
    return std::visit(
        overloaded{
            [&](const Formula::BoolLit&) { return f; },
            [&](const Formula::Cmp& c) { return f_cmp(c.op, walk(c.lhs), walk(c.rhs)); },
            [&](const Formula::StateEq& e) { return f_state_eq(walk(e.lhs), walk(e.rhs)); },
            [&](const Formula::Not& n) { return f_not(walk(n.body)); },
            [&](const Formula::And& a) { return f_and(walk(a.lhs), walk(a.rhs)); },
            [&](const Formula::Or& o) { return f_or(walk(o.lhs), walk(o.rhs)); },
            [&](const Formula::Implies& i) { return f_implies(walk(i.lhs), walk(i.rhs)); },
            [&](const Formula::QuantNat& q) {
              auto saved = nat_ren;
              std::string name = q.var;
              if (avoid_nat.count(name)) {
                name = fresh(name, avoid_nat);
                nat_ren[q.var] = name;
              } else {
                nat_ren.erase(q.var);  // binder shadows any outer renaming
              }
              auto body = walk(q.body);
              nat_ren = std::move(saved);
              return q.is_forall ? f_forall_nat(name, body) : f_exists_nat(name, body);
            },
            [&](const Formula::ForallState& q) {
              auto saved = state_ren;
              std::string name = q.var;
              if (avoid_state.count(name)) {
                name = fresh(name, avoid_state);
                state_ren[q.var] = name;
              } else {
                state_ren.erase(q.var);
              }
              auto body = walk(q.body);
              state_ren = std::move(saved);
              return f_forall_state(name, body);
            },
        },
        f->node);
  }
};

}  // namespace

FormulaPtr subst_params(const FormulaPtr& f, const std::vector<StateTermPtr>& args) {
  Subst s(f, args);
  return s.walk(f);
}

// ---------------------------------------------------------------------------
// Rendering

namespace {

// Term precedence: sum = 1, product = 2, atom = 3.
void print_term(std::ostream& os, const NatTermPtr& t, int min_prec);

void print_state(std::ostream& os, const StateTermPtr& s) {
  std::visit(overloaded{
                 [&](const StateTerm::Var& v) { os << v.name; },
                 [&](const StateTerm::Param& p) { os << '#' << p.index; },
                 [&](const StateTerm::Write& w) {
                   print_state(os, w.state);
                   os << '[';
                   print_term(os, w.addr, 0);
                   os << " := ";
                   print_term(os, w.value, 0);
                   os << ']';
                 },
             },
             s->node);
}

void print_term(std::ostream& os, const NatTermPtr& t, int min_prec) {
  std::visit(overloaded{
                 [&](const NatTerm::Lit& l) { os << l.value.get_str(); },
                 [&](const NatTerm::Var& v) { os << v.name; },
                 [&](const NatTerm::Read& r) {
                   print_state(os, r.state);
                   os << '(';
                   print_term(os, r.addr, 0);
                   os << ')';
                 },
                 [&](const NatTerm::Bin& b) {
                   int prec = b.op == ArithOp::Mul ? 2 : 1;
                   bool paren = prec < min_prec;
                   if (paren) os << '(';
                   print_term(os, b.lhs, prec);
                   os << (b.op == ArithOp::Add ? " + " : b.op == ArithOp::Mul ? " * " : " - ");
                   print_term(os, b.rhs, prec + 1);
                   if (paren) os << ')';
                 },
             },
             t->node);
}

// Formula precedence: quantifier body = 0, -> = 1, || = 2, && = 3, ! = 4, atom = 5.
void print_formula(std::ostream& os, const FormulaPtr& f, int min_prec) {
  std::visit(overloaded{
                 [&](const Formula::BoolLit& b) { os << (b.value ? "true" : "false"); },
                 [&](const Formula::Cmp& c) {
                   print_term(os, c.lhs, 0);
                   os << (c.op == CmpOp::Le ? " <= " : " = ");
                   print_term(os, c.rhs, 0);
                 },
                 [&](const Formula::StateEq& e) {
                   print_state(os, e.lhs);
                   os << " = ";
                   print_state(os, e.rhs);
                 },
                 [&](const Formula::Not& n) {
                   os << '!';
                   print_formula(os, n.body, 4);
                 },
                 [&](const Formula::And& a) {
                   bool paren = 3 < min_prec;
                   if (paren) os << '(';
                   print_formula(os, a.lhs, 3);
                   os << " && ";
                   print_formula(os, a.rhs, 4);
                   if (paren) os << ')';
                 },
                 [&](const Formula::Or& o) {
                   bool paren = 2 < min_prec;
                   if (paren) os << '(';
                   print_formula(os, o.lhs, 2);
                   os << " || ";
                   print_formula(os, o.rhs, 3);
                   if (paren) os << ')';
                 },
                 [&](const Formula::Implies& i) {
                   bool paren = 1 < min_prec;
                   if (paren) os << '(';
                   print_formula(os, i.lhs, 2);
                   os << " -> ";
                   print_formula(os, i.rhs, 1);
                   if (paren) os << ')';
                 },
                 [&](const Formula::QuantNat& q) {
                   bool paren = 0 < min_prec;
                   if (paren) os << '(';
                   os << (q.is_forall ? "forall " : "exists ") << q.var << ". ";
                   print_formula(os, q.body, 0);
                   if (paren) os << ')';
                 },
                 [&](const Formula::ForallState& q) {
                   bool paren = 0 < min_prec;
                   if (paren) os << '(';
                   os << "forall " << q.var << ". ";
                   print_formula(os, q.body, 0);
                   if (paren) os << ')';
                 },
             },
             f->node);
}

}  // namespace

std::string to_string(const NatTermPtr& t) {
  std::ostringstream os;
  print_term(os, t, 0);
  return os.str();
}

std::string to_string(const StateTermPtr& s) {
  std::ostringstream os;
  print_state(os, s);
  return os.str();
}

std::string to_string(const FormulaPtr& f) {
  std::ostringstream os;
  print_formula(os, f, 0);
  return os.str();
}

}  // namespace rlv
