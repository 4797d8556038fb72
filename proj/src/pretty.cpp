#include "rlv/pretty.hpp"

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

// Arithmetic expressions: sum = 1, product = 2, atom = 3.
void print_aexp(std::ostream& os, const ArithExprPtr& a, int min_prec) {
  std::visit(overloaded{
                 [&](const ArithExpr::Const& c) { os << c.value.get_str(); },
                 [&](const ArithExpr::Loc& l) { os << 'x' << l.addr.value.get_str(); },
                 [&](const ArithExpr::Deref& d) { os << "*x" << d.addr.value.get_str(); },
                 [&](const ArithExpr::AddrOf& d) { os << "&x" << d.addr.value.get_str(); },
                 [&](const ArithExpr::Bin& b) {
                   int prec = b.op == ArithOp::Mul ? 2 : 1;
                   bool paren = prec < min_prec;
                   if (paren) os << '(';
                   print_aexp(os, b.lhs, prec);
                   os << (b.op == ArithOp::Add ? " + " : b.op == ArithOp::Mul ? " * " : " - ");
                   print_aexp(os, b.rhs, prec + 1);
                   if (paren) os << ')';
                 },
             },
             a->node);
}

// Boolean expressions: or = 1, and = 2, unit = 3.
void print_bexp(std::ostream& os, const BoolExprPtr& b, int min_prec) {
  std::visit(overloaded{
                 [&](const BoolExpr::Lit& l) { os << (l.value ? "true" : "false"); },
                 [&](const BoolExpr::Cmp& c) {
                   print_aexp(os, c.lhs, 0);
                   os << (c.op == CmpOp::Le ? " <= " : " = ");
                   print_aexp(os, c.rhs, 0);
                 },
                 [&](const BoolExpr::Logic& l) {
                   int prec = l.op == BoolConn::And ? 2 : 1;
                   bool paren = prec < min_prec;
                   if (paren) os << '(';
                   print_bexp(os, l.lhs, prec);
                   os << (l.op == BoolConn::And ? " && " : " || ");
                   print_bexp(os, l.rhs, prec + 1);
                   if (paren) os << ')';
                 },
                 [&](const BoolExpr::Not& n) {
                   os << '!';
                   bool atom = std::holds_alternative<BoolExpr::Lit>(n.body->node);
                   if (!atom) os << '(';
                   print_bexp(os, n.body, 0);
                   if (!atom) os << ')';
                 },
             },
             b->node);
}

// Assertion terms in surface syntax: sum = 1, product = 2, atom = 3.
void print_assert_term(std::ostream& os, const NatTermPtr& t, int arity, int min_prec) {
  std::visit(
      overloaded{
          [&](const NatTerm::Lit& l) { os << l.value.get_str(); },
          [&](const NatTerm::Var& v) { os << v.name; },
          [&](const NatTerm::Read& r) {
            const auto* p = std::get_if<StateTerm::Param>(&r.state->node);
            if (!p) throw std::logic_error("assertion reads memory through a non-parameter state");
            if (arity == 1 && p->index == 1) {
              os << "at(";
            } else {
              os << "at(" << p->index << ", ";
            }
            print_assert_term(os, r.addr, arity, 0);
            os << ')';
          },
          [&](const NatTerm::Bin& b) {
            int prec = b.op == ArithOp::Mul ? 2 : 1;
            bool paren = prec < min_prec;
            if (paren) os << '(';
            print_assert_term(os, b.lhs, arity, prec);
            os << (b.op == ArithOp::Add ? " + " : b.op == ArithOp::Mul ? " * " : " - ");
            print_assert_term(os, b.rhs, arity, prec + 1);
            if (paren) os << ')';
          },
      },
      t->node);
}

// Assertion formulas: -> = 1 (right assoc), || = 2, && = 3, unit = 4.
void print_assert_formula(std::ostream& os, const FormulaPtr& f, int arity, int min_prec) {
  std::visit(
      overloaded{
          [&](const Formula::BoolLit& b) { os << (b.value ? "true" : "false"); },
          [&](const Formula::Cmp& c) {
            print_assert_term(os, c.lhs, arity, 0);
            os << (c.op == CmpOp::Le ? " <= " : " = ");
            print_assert_term(os, c.rhs, arity, 0);
          },
          [&](const Formula::StateEq&) -> void {
            throw std::logic_error("state equality has no surface syntax");
          },
          [&](const Formula::Not& n) {
            os << '!';
            bool atom = std::holds_alternative<Formula::BoolLit>(n.body->node);
            if (!atom) os << '(';
            print_assert_formula(os, n.body, arity, 0);
            if (!atom) os << ')';
          },
          [&](const Formula::And& a) {
            bool paren = 3 < min_prec;
            if (paren) os << '(';
            print_assert_formula(os, a.lhs, arity, 3);
            os << " && ";
            print_assert_formula(os, a.rhs, arity, 4);
            if (paren) os << ')';
          },
          [&](const Formula::Or& o) {
            bool paren = 2 < min_prec;
            if (paren) os << '(';
            print_assert_formula(os, o.lhs, arity, 2);
            os << " || ";
            print_assert_formula(os, o.rhs, arity, 3);
            if (paren) os << ')';
          },
          [&](const Formula::Implies& i) {
            bool paren = 1 < min_prec;
            if (paren) os << '(';
            print_assert_formula(os, i.lhs, arity, 2);
            os << " -> ";
            print_assert_formula(os, i.rhs, arity, 1);
            if (paren) os << ')';
          },
          [&](const Formula::QuantNat& q) {
            bool paren = 0 < min_prec;
            if (paren) os << '(';
            os << (q.is_forall ? "forall " : "exists ") << q.var << ". ";
            print_assert_formula(os, q.body, arity, 0);
            if (paren) os << ')';
          },
          [&](const Formula::ForallState&) -> void {
            throw std::logic_error("state quantifier has no surface syntax");
          },
      },
      f->node);
}

void indent_to(std::ostream& os, int indent) {
  for (int i = 0; i < indent; ++i) os << ' ';
}

void flatten_seq(const CommandPtr& c, std::vector<CommandPtr>& out) {
  if (const auto* s = std::get_if<Command::Seq>(&c->node)) {
    flatten_seq(s->first, out);
    flatten_seq(s->second, out);
  } else {
    out.push_back(c);
  }
}

void print_cmd(std::ostream& os, const CommandPtr& c, int indent);

void print_block(std::ostream& os, const CommandPtr& body, int indent) {
  os << "{\n";
  std::vector<CommandPtr> cmds;
  flatten_seq(body, cmds);
  for (std::size_t i = 0; i < cmds.size(); ++i) {
    indent_to(os, indent + 2);
    print_cmd(os, cmds[i], indent + 2);
    if (i + 1 < cmds.size()) os << ';';
    os << '\n';
  }
  indent_to(os, indent);
  os << '}';
}

void print_cmd(std::ostream& os, const CommandPtr& c, int indent) {
  std::visit(overloaded{
                 [&](const Command::Skip&) { os << "skip"; },
                 [&](const Command::Assign& a) {
                   os << 'x' << a.target.value.get_str() << " := ";
                   print_aexp(os, a.value, 0);
                 },
                 [&](const Command::IndirectAssign& a) {
                   os << "*x" << a.target.value.get_str() << " := ";
                   print_aexp(os, a.value, 0);
                 },
                 [&](const Command::Seq& s) {
                   // only reachable when a sequence is printed standalone
                   print_cmd(os, s.first, indent);
                   os << ";\n";
                   indent_to(os, indent);
                   print_cmd(os, s.second, indent);
                 },
                 [&](const Command::Assert& a) {
                   os << "assert (";
                   print_assert_formula(os, a.pred.body, a.pred.arity, 0);
                   os << ')';
                 },
                 [&](const Command::If& i) {
                   os << "if (";
                   print_bexp(os, i.cond, 0);
                   os << ") ";
                   print_block(os, i.then_branch, indent);
                   os << " else ";
                   print_block(os, i.else_branch, indent);
                 },
                 [&](const Command::While& w) {
                   os << "while (";
                   print_bexp(os, w.cond, 0);
                   os << ") inv (";
                   print_assert_formula(os, w.invariant.body, w.invariant.arity, 0);
                   os << ") ";
                   print_block(os, w.body, indent);
                 },
                 [&](const Command::Call& call) { os << "call " << call.proc; },
             },
             c->node);
}

}  // namespace

std::string pretty_print_aexp(const ArithExprPtr& a) {
  std::ostringstream os;
  print_aexp(os, a, 0);
  return os.str();
}

std::string pretty_print_bexp(const BoolExprPtr& b) {
  std::ostringstream os;
  print_bexp(os, b, 0);
  return os.str();
}

std::string pretty_print_assertion(const Assertion& p) {
  std::ostringstream os;
  print_assert_formula(os, p.body, p.arity, 0);
  return os.str();
}

std::string pretty_print(const CommandPtr& c, int indent) {
  std::ostringstream os;
  print_cmd(os, c, indent);
  return os.str();
}

std::string pretty_print(const SourceModule& m) {
  std::ostringstream os;
  bool first = true;
  auto gap = [&] {
    if (!first) os << '\n';
    first = false;
  };
  for (const auto& [name, body] : m.procs) {
    gap();
    const Contract& k = m.contracts.at(name);
    os << "proc " << name << "\n  pre (";
    print_assert_formula(os, k.pre.body, k.pre.arity, 0);
    os << ")\n  post (";
    print_assert_formula(os, k.post.body, k.post.arity, 0);
    os << ")\n";
    print_block(os, body, 0);
    os << '\n';
  }
  for (const auto& [name, body] : m.commands) {
    gap();
    os << "command " << name << " ";
    print_block(os, body, 0);
    os << '\n';
  }
  for (const auto& g : m.hoare_goals) {
    gap();
    os << "hoare " << g.name << "\n  pre (";
    print_assert_formula(os, g.pre.body, g.pre.arity, 0);
    os << ")\n  cmd " << g.cmd << "\n  post (";
    print_assert_formula(os, g.post.body, g.post.arity, 0);
    os << ")\n";
  }
  for (const auto& g : m.rel_goals) {
    gap();
    os << "relation " << g.name << " on (";
    for (std::size_t i = 0; i < g.cmds.size(); ++i) {
      if (i) os << ", ";
      os << g.cmds[i];
    }
    os << ")\n  pre (";
    print_assert_formula(os, g.pre.body, g.pre.arity, 0);
    os << ")\n  post (";
    print_assert_formula(os, g.post.body, g.post.arity, 0);
    os << ")\n";
  }
  return os.str();
}

}  // namespace rlv
