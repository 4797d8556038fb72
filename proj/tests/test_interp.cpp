#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "rlv/interp.hpp"
#include "rlv/parser.hpp"
#include "rlv/testkit.hpp"

using namespace rlv;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

SourceModule corpus(const std::string& name) {
  return parse_module_or_throw(slurp(std::string(RLV_CORPUS_DIR) + "/" + name));
}

MemState state_of(std::initializer_list<std::pair<unsigned long, unsigned long>> pairs) {
  MemState s;
  for (auto [a, v] : pairs) s = mem_update(s, Nat(a), Nat(v));
  return s;
}

}  // namespace

TEST_CASE("expression evaluation") {
  MemState s = state_of({{1, 10}, {10, 7}, {2, 2}, {3, 5}});
  CHECK(eval_aexp(a_const(Nat(5)), s) == Nat(5));
  CHECK(eval_aexp(a_deref(Nat(1)), s) == Nat(7));
  CHECK(eval_aexp(a_bin(ArithOp::Monus, a_loc(Nat(2)), a_loc(Nat(3))), s) == Nat(0));
  CHECK(eval_aexp(a_addr_of(Nat(7)), s) == Nat(7));
}

TEST_CASE("boolean evaluation") {
  MemState s = state_of({{1, 3}, {2, 3}});
  CHECK(eval_bexp(b_lit(true), s));
  CHECK(eval_bexp(b_cmp(CmpOp::Le, a_loc(Nat(1)), a_loc(Nat(2))), s));
  MemState zero = state_of({{1, 0}});
  CHECK_FALSE(eval_bexp(b_not(b_cmp(CmpOp::Eq, a_loc(Nat(1)), a_const(Nat(0)))), zero));
}

TEST_CASE("the scratch-variable swap runs as expected") {
  SourceModule m = corpus("swap.rl");
  MemState s = state_of({{1, 10}, {2, 20}, {10, 5}, {20, 7}});
  Outcome o = exec(m.commands.at("s1"), s, {}, 100);
  REQUIRE(o.finished());
  CHECK(*o.state == state_of({{1, 10}, {2, 20}, {3, 5}, {10, 7}, {20, 5}}));
}

TEST_CASE("the arithmetic swap runs as expected") {
  SourceModule m = corpus("swap.rl");
  MemState s = state_of({{1, 10}, {2, 20}, {10, 5}, {20, 7}});
  Outcome o = exec(m.commands.at("s2"), s, {}, 100);
  REQUIRE(o.finished());
  CHECK(*o.state == state_of({{1, 10}, {2, 20}, {10, 7}, {20, 5}}));
}

TEST_CASE("recursive multiplication leaves x2 = x3 * x4") {
  SourceModule m = corpus("mult.rl");
  Outcome o = exec(m.commands.at("c_rec"), state_of({{3, 3}, {4, 2}}), m.procs, 1000);
  REQUIRE(o.finished());
  CHECK(o.state->lookup(Nat(2)) == Nat(6));
  CHECK(*o.state == state_of({{2, 6}, {3, 3}, {4, 2}}));
}

TEST_CASE("an endless loop runs out of fuel") {
  Outcome o = exec(diverge(), MemState{}, {}, 50);
  CHECK(o.out_of_fuel());
}

TEST_CASE("fuel monotonicity on sampled programs") {
  GenConfig cfg;
  cfg.seed = 11;
  cfg.allow_loops = true;
  Gen g(cfg);
  for (int i = 0; i < 60; ++i) {
    CommandPtr c = g.command();
    MemState s = g.state();
    Outcome base = exec(c, s, {}, 64);
    if (!base.finished()) continue;
    for (std::uint64_t extra : {1, 7, 1000}) {
      Outcome more = exec(c, s, {}, 64 + extra);
      REQUIRE(more.finished());
      CHECK(*more.state == *base.state);
    }
  }
}

TEST_CASE("execution is deterministic") {
  GenConfig cfg;
  cfg.seed = 12;
  Gen g(cfg);
  for (int i = 0; i < 40; ++i) {
    CommandPtr c = g.command();
    MemState s = g.state();
    Outcome a = exec(c, s, {}, 512);
    Outcome b = exec(c, s, {}, 512);
    REQUIRE(a.finished() == b.finished());
    if (a.finished()) CHECK(*a.state == *b.state);
  }
}

TEST_CASE("assert behaves as skip") {
  Assertion p{1, f_cmp(CmpOp::Eq, t_read(s_param(1), t_lit(Nat(9))), t_lit(Nat(1)))};
  MemState s = state_of({{5, 5}});
  Outcome via_assert = exec(c_assert(p), s, {}, 10);
  Outcome via_skip = exec(c_skip(), s, {}, 10);
  REQUIRE(via_assert.finished());
  REQUIRE(via_skip.finished());
  CHECK(*via_assert.state == *via_skip.state);
  CHECK(*via_assert.state == s);
}

TEST_CASE("assertion evaluation at concrete states") {
  Assertion p{1, f_cmp(CmpOp::Eq, t_read(s_param(1), t_lit(Nat(3))), t_lit(Nat(2)))};
  AssertionValue v = eval_assertion(p, {state_of({{3, 2}})});
  CHECK(v.value);
  CHECK(v.exact);
}

TEST_CASE("the swap relational precondition holds on the running example") {
  SourceModule m = corpus("swap.rl");
  const Assertion& pre = m.rel_goals[0].pre;
  MemState s1 = state_of({{1, 10}, {2, 20}, {10, 5}, {20, 7}});
  MemState s2 = state_of({{1, 8}, {2, 9}, {8, 5}, {9, 7}});
  AssertionValue v = eval_assertion(pre, {s1, s2});
  CHECK(v.value);
  CHECK(v.exact);
  // breaking the agreement on *x1 falsifies it
  MemState s2_bad = state_of({{1, 8}, {2, 9}, {8, 6}, {9, 7}});
  CHECK_FALSE(eval_assertion(pre, {s1, s2_bad}).value);
}

TEST_CASE("bounded quantifiers taint the verdict") {
  Assertion p{0, f_forall_nat("v", f_cmp(CmpOp::Le, t_lit(Nat(0)), t_var("v")))};
  AssertionValue v = eval_assertion(p, {}, 10);
  CHECK(v.value);
  CHECK_FALSE(v.exact);
}

TEST_CASE("inlining zero levels replaces a call by divergence") {
  ProcEnv psi;
  psi["y1"] = c_skip();
  CommandPtr inlined = inline_k(c_call("y1"), 0, psi);
  CHECK(equal(inlined, diverge()));
  CHECK(equal(inline_k(c_skip(), 17, psi), c_skip()));
}

TEST_CASE("inlined recursion reproduces the direct run") {
  SourceModule m = corpus("mult.rl");
  CommandPtr c = m.commands.at("c_rec");
  MemState s = state_of({{3, 3}, {4, 2}});
  Outcome direct = exec(c, s, m.procs, 1000);
  REQUIRE(direct.finished());

  CommandPtr cut5 = inline_k(c, 5, m.procs);
  CHECK_FALSE(contains_call(cut5));
  Outcome inlined = exec(cut5, s, {}, 100000);
  REQUIRE(inlined.finished());
  CHECK(*inlined.state == *direct.state);

  // below the recursion depth the cut loop is reached and the run diverges
  Outcome cut_short = exec(inline_k(c, 2, m.procs), s, {}, 100000);
  CHECK(cut_short.out_of_fuel());
}

TEST_CASE("inliner adequacy on the recursive corpus program") {
  SourceModule m = corpus("mult.rl");
  CommandPtr c = m.commands.at("c_rec");
  std::size_t max_body = 0;
  for (const auto& [name, body] : m.procs) max_body = std::max(max_body, command_size(body));
  GenConfig cfg;
  cfg.seed = 13;
  cfg.max_address = 4;
  cfg.max_literal = 9;
  Gen g(cfg);
  for (int i = 0; i < 30; ++i) {
    MemState s = g.state();
    std::uint64_t fuel = 400;
    Outcome direct = exec(c, s, m.procs, fuel);
    if (!direct.finished()) continue;
    Outcome inlined = exec(inline_k(c, fuel, m.procs), s, {}, fuel * (max_body + 1));
    REQUIRE(inlined.finished());
    CHECK(*inlined.state == *direct.state);
  }
}
