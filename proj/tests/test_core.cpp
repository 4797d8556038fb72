#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "rlv/ast.hpp"
#include "rlv/interp.hpp"

using namespace rlv;

TEST_CASE("update binds the written address") {
  MemState empty;
  MemState s = mem_update(empty, Nat(1), Nat(5));
  CHECK(s.lookup(Nat(1)) == Nat(5));
}

TEST_CASE("update leaves other addresses alone") {
  MemState s = mem_update(MemState{}, Nat(2), Nat(9));
  MemState t = mem_update(s, Nat(1), Nat(5));
  CHECK(t.lookup(Nat(2)) == Nat(9));
  CHECK(t.lookup(Nat(1)) == Nat(5));
}

TEST_CASE("last write wins") {
  MemState s = mem_update(mem_update(MemState{}, Nat(1), Nat(5)), Nat(1), Nat(7));
  CHECK(s.lookup(Nat(1)) == Nat(7));
}

TEST_CASE("update does not mutate its input") {
  MemState s = mem_update(MemState{}, Nat(3), Nat(4));
  MemState t = mem_update(s, Nat(3), Nat(9));
  CHECK(s.lookup(Nat(3)) == Nat(4));
  CHECK(t.lookup(Nat(3)) == Nat(9));
}

TEST_CASE("unbound addresses read as zero") {
  MemState s;
  CHECK(s.lookup(Nat("123456789123456789123456789")) == Nat(0));
}

TEST_CASE("update/lookup laws over random triples") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 2000; ++i) {
    MemState s;
    for (int k = 0; k < 5; ++k) s = mem_update(s, Nat(rng() % 32), Nat(rng() % 100));
    Nat addr(rng() % 32), val(rng() % 100);
    MemState t = mem_update(s, addr, val);
    CHECK(t.lookup(addr) == val);
    Nat other(rng() % 32);
    if (other != addr) CHECK(t.lookup(other) == s.lookup(other));
  }
}

TEST_CASE("state equality ignores explicit zero entries") {
  MemState a = mem_update(MemState{}, Nat(4), Nat(0));
  MemState b;
  CHECK(a == b);
  MemState c = mem_update(MemState{}, Nat(4), Nat(1));
  CHECK_FALSE(a == c);
}

TEST_CASE("monus truncates at zero") {
  CHECK(monus(Nat(5), Nat(2)) == Nat(3));
  CHECK(monus(Nat(2), Nat(5)) == Nat(0));
  CHECK(monus(Nat(5), Nat(5)) == Nat(0));
  for (unsigned a = 0; a <= 64; ++a)
    for (unsigned b = 0; b <= 64; ++b) {
      Nat expect = a >= b ? Nat(a - b) : Nat(0);
      CHECK(monus(Nat(a), Nat(b)) == expect);
    }
}

TEST_CASE("assertion well-formedness") {
  // arity 2, reads both parameters
  Assertion two{2, f_cmp(CmpOp::Eq, t_read(s_param(1), t_lit(Nat(0))), t_read(s_param(2), t_lit(Nat(0))))};
  CHECK_FALSE(assertion_check(two).has_value());

  // arity 1, reads parameter 2
  Assertion bad{1, f_cmp(CmpOp::Eq, t_read(s_param(2), t_lit(Nat(0))), t_lit(Nat(1)))};
  auto err = assertion_check(bad);
  REQUIRE(err.has_value());
  CHECK(err->symbol == "#2");

  Assertion quantified{0, f_forall_nat("v", f_cmp(CmpOp::Le, t_var("v"), t_var("v")))};
  CHECK_FALSE(assertion_check(quantified).has_value());

  Assertion unbound{0, f_cmp(CmpOp::Le, t_var("v"), t_var("v"))};
  CHECK(assertion_check(unbound).has_value());
}

TEST_CASE("state substitution realizes application") {
  // (λs. s(3) = 2) applied to a state variable
  Assertion p{1, f_cmp(CmpOp::Eq, t_read(s_param(1), t_lit(Nat(3))), t_lit(Nat(2)))};
  FormulaPtr applied = subst_states(p, {s_var("m0")});
  FormulaPtr expect = f_cmp(CmpOp::Eq, t_read(s_var("m0"), t_lit(Nat(3))), t_lit(Nat(2)));
  CHECK(equal(applied, expect));
}

TEST_CASE("arity-0 assertions are applied to nothing") {
  Assertion p{0, f_bool(true)};
  CHECK(equal(subst_states(p, {}), f_true()));
  Assertion q{2, f_bool(true)};
  CHECK_THROWS_AS(subst_states(q, {s_var("a")}), std::invalid_argument);
}

TEST_CASE("substitution distributes over conjunction") {
  FormulaPtr lhs = f_cmp(CmpOp::Eq, t_read(s_param(1), t_lit(Nat(1))), t_lit(Nat(4)));
  FormulaPtr rhs = f_cmp(CmpOp::Le, t_lit(Nat(0)), t_read(s_param(1), t_lit(Nat(2))));
  Assertion both{1, f_and(lhs, rhs)};
  Assertion left{1, lhs};
  Assertion right{1, rhs};
  std::vector<StateTermPtr> arg{s_var("w")};
  CHECK(equal(subst_states(both, arg), f_and(subst_states(left, arg), subst_states(right, arg))));
}

TEST_CASE("substitution avoids capture by state binders") {
  // body: forall w. w = #1  — substituting the state variable w must rename
  // the binder, not capture the argument.
  Assertion p{1, f_forall_state("w", f_state_eq(s_var("w"), s_param(1)))};
  FormulaPtr applied = subst_states(p, {s_var("w")});
  const auto* q = std::get_if<Formula::ForallState>(&applied->node);
  REQUIRE(q != nullptr);
  CHECK(q->var != "w");
  const auto* eq = std::get_if<Formula::StateEq>(&q->body->node);
  REQUIRE(eq != nullptr);
  CHECK(std::get<StateTerm::Var>(eq->lhs->node).name == q->var);
  CHECK(std::get<StateTerm::Var>(eq->rhs->node).name == "w");
}

TEST_CASE("parameter permutation swaps reads") {
  Assertion p{2, f_cmp(CmpOp::Eq, t_read(s_param(1), t_lit(Nat(3))), t_read(s_param(2), t_lit(Nat(3))))};
  Assertion swapped = permute_params(p, {2, 1});
  FormulaPtr expect =
      f_cmp(CmpOp::Eq, t_read(s_param(2), t_lit(Nat(3))), t_read(s_param(1), t_lit(Nat(3))));
  CHECK(equal(swapped.body, expect));
}

TEST_CASE("node_count counts terms and connectives") {
  FormulaPtr f = f_and(f_bool(true), f_cmp(CmpOp::Eq, t_lit(Nat(1)), t_lit(Nat(2))));
  // and, true, cmp, lit, lit
  CHECK(node_count(f) == 5);
}
