#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "rlv/driver.hpp"
#include "rlv/parser.hpp"
#include "rlv/relcheck.hpp"
#include "rlv/vcgen.hpp"

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

std::string trimmed(std::string s) {
  while (!s.empty() && (s.back() == '\n' || s.back() == ' ')) s.pop_back();
  return s;
}

// at(1) = v over the goal state
Assertion loc1_is(unsigned long v) {
  return Assertion{1, f_cmp(CmpOp::Eq, t_read(s_param(1), t_lit(Nat(1))), t_lit(Nat(v)))};
}

Assertion inv_is_seven() {
  return Assertion{1, f_cmp(CmpOp::Eq, t_read(s_param(1), t_lit(Nat(1))), t_lit(Nat(7)))};
}

FormulaPtr apply1(const Assertion& p, const StateTermPtr& s) { return subst_states(p, {s}); }

void flatten_and(const FormulaPtr& f, std::vector<FormulaPtr>& out) {
  if (const auto* a = std::get_if<Formula::And>(&f->node)) {
    flatten_and(a->lhs, out);
    flatten_and(a->rhs, out);
  } else {
    out.push_back(f);
  }
}

}  // namespace

TEST_CASE("golden formula for skip-then-assign") {
  StateNamer names;
  StateTermPtr s0 = s_var(names.fresh());
  CommandPtr c = c_seq(c_skip(), c_assign(Nat(1), a_const(Nat(2))));
  FormulaPtr f = tc(c, s0, {}, loc1_is(2), names);
  std::string golden = trimmed(slurp(std::string(RLV_GOLDEN_DIR) + "/ex3_tc.txt"));
  CHECK(to_string(f) == golden);
}

TEST_CASE("main condition, case by case") {
  ContractEnv phi;

  SUBCASE("skip introduces an equal fresh state") {
    StateNamer names;
    StateTermPtr s0 = s_var(names.fresh());
    FormulaPtr got = tc(c_skip(), s0, phi, loc1_is(2), names);
    FormulaPtr expect = f_forall_state(
        "s1", f_implies(f_state_eq(s_var("s1"), s0), apply1(loc1_is(2), s_var("s1"))));
    CHECK(equal(got, expect));
  }

  SUBCASE("assignment constrains the fresh state to the update") {
    StateNamer names;
    StateTermPtr s0 = s_var(names.fresh());
    FormulaPtr got = tc(c_assign(Nat(2), a_loc(Nat(3))), s0, phi, loc1_is(2), names);
    StateTermPtr upd = s_write(s0, t_lit(Nat(2)), t_read(s0, t_lit(Nat(3))));
    FormulaPtr expect = f_forall_state(
        "s1", f_implies(f_state_eq(s_var("s1"), upd), apply1(loc1_is(2), s_var("s1"))));
    CHECK(equal(got, expect));
  }

  SUBCASE("indirect assignment writes at the stored address") {
    StateNamer names;
    StateTermPtr s0 = s_var(names.fresh());
    FormulaPtr got = tc(c_indirect_assign(Nat(2), a_const(Nat(5))), s0, phi, loc1_is(2), names);
    StateTermPtr upd = s_write(s0, t_read(s0, t_lit(Nat(2))), t_lit(Nat(5)));
    FormulaPtr expect = f_forall_state(
        "s1", f_implies(f_state_eq(s_var("s1"), upd), apply1(loc1_is(2), s_var("s1"))));
    CHECK(equal(got, expect));
  }

  SUBCASE("assert adds its formula as a hypothesis on the old state") {
    StateNamer names;
    StateTermPtr s0 = s_var(names.fresh());
    Assertion p = inv_is_seven();
    FormulaPtr got = tc(c_assert(p), s0, phi, loc1_is(2), names);
    FormulaPtr expect = f_forall_state(
        "s1", f_implies(f_and(f_state_eq(s_var("s1"), s0), apply1(p, s0)),
                        apply1(loc1_is(2), s_var("s1"))));
    CHECK(equal(got, expect));
  }

  SUBCASE("call assumes the precondition and continues from the postcondition") {
    SourceModule m = corpus("mult.rl");
    StateNamer names;
    StateTermPtr s0 = s_var(names.fresh());
    Assertion f = loc1_is(2);
    FormulaPtr got = tc(c_call("y1"), s0, m.contracts, f, names);
    const Contract& k = m.contracts.at("y1");
    FormulaPtr expect = f_implies(
        apply1(k.pre, s0), f_forall_state("s1", f_implies(apply1(k.post, s_var("s1")),
                                                          apply1(f, s_var("s1")))));
    CHECK(equal(got, expect));
  }

  SUBCASE("while assumes the invariant and the negated guard afterwards") {
    StateNamer names;
    StateTermPtr s0 = s_var(names.fresh());
    Assertion inv = inv_is_seven();
    BoolExprPtr guard = b_cmp(CmpOp::Le, a_loc(Nat(1)), a_const(Nat(0)));
    FormulaPtr got = tc(c_while(guard, inv, c_skip()), s0, phi, loc1_is(2), names);
    FormulaPtr guard_s1 = f_cmp(CmpOp::Le, t_read(s_var("s1"), t_lit(Nat(1))), t_lit(Nat(0)));
    FormulaPtr expect = f_implies(
        apply1(inv, s0),
        f_forall_state("s1", f_implies(f_and(apply1(inv, s_var("s1")), f_not(guard_s1)),
                                       apply1(loc1_is(2), s_var("s1")))));
    CHECK(equal(got, expect));
  }

  SUBCASE("branches guard both continuations") {
    StateNamer names;
    StateTermPtr s0 = s_var(names.fresh());
    BoolExprPtr guard = b_cmp(CmpOp::Eq, a_loc(Nat(1)), a_const(Nat(0)));
    FormulaPtr got = tc(c_if(guard, c_skip(), c_skip()), s0, phi, loc1_is(2), names);
    FormulaPtr g0 = f_cmp(CmpOp::Eq, t_read(s0, t_lit(Nat(1))), t_lit(Nat(0)));
    auto skip_to = [&](const std::string& v) {
      return f_forall_state(v, f_implies(f_state_eq(s_var(v), s0), apply1(loc1_is(2), s_var(v))));
    };
    FormulaPtr expect = f_and(f_implies(g0, skip_to("s1")), f_implies(f_not(g0), skip_to("s2")));
    CHECK(equal(got, expect));
  }
}

TEST_CASE("auxiliary condition, case by case") {
  ContractEnv phi;

  SUBCASE("skip and assignments carry no obligations") {
    StateNamer names;
    StateTermPtr s0 = s_var(names.fresh());
    CHECK(equal(ta(c_skip(), s0, phi, names), f_true()));
    CHECK(equal(ta(c_assign(Nat(1), a_const(Nat(0))), s0, phi, names), f_true()));
    CHECK(equal(ta(c_indirect_assign(Nat(1), a_const(Nat(0))), s0, phi, names), f_true()));
  }

  SUBCASE("assert yields its own formula") {
    StateNamer names;
    StateTermPtr s0 = s_var(names.fresh());
    Assertion p = inv_is_seven();
    CHECK(equal(ta(c_assert(p), s0, phi, names), apply1(p, s0)));
  }

  SUBCASE("call yields the callee precondition") {
    SourceModule m = corpus("mult.rl");
    StateNamer names;
    StateTermPtr s0 = s_var(names.fresh());
    CHECK(equal(ta(c_call("y1"), s0, m.contracts, names), apply1(m.contracts.at("y1").pre, s0)));
  }

  SUBCASE("while yields establishment, body obligations, and preservation") {
    StateNamer names;
    StateTermPtr s0 = s_var(names.fresh());
    Assertion inv = inv_is_seven();
    BoolExprPtr guard = b_cmp(CmpOp::Le, a_loc(Nat(1)), a_const(Nat(0)));
    FormulaPtr got = ta(c_while(guard, inv, c_skip()), s0, phi, names);
    auto guard_at = [&](const std::string& v) {
      return f_cmp(CmpOp::Le, t_read(s_var(v), t_lit(Nat(1))), t_lit(Nat(0)));
    };
    FormulaPtr establish = apply1(inv, s0);
    FormulaPtr keep = f_forall_state(
        "s1", f_implies(f_and(apply1(inv, s_var("s1")), guard_at("s1")), f_true()));
    FormulaPtr preserve = f_forall_state(
        "s2", f_implies(f_and(apply1(inv, s_var("s2")), guard_at("s2")),
                        f_forall_state("s3", f_implies(f_state_eq(s_var("s3"), s_var("s2")),
                                                       apply1(inv, s_var("s3"))))));
    FormulaPtr expect = f_and(f_and(establish, keep), preserve);
    CHECK(equal(got, expect));
  }

  SUBCASE("sequencing threads the first command's final state") {
    StateNamer names;
    StateTermPtr s0 = s_var(names.fresh());
    Assertion p = inv_is_seven();
    FormulaPtr got = ta(c_seq(c_skip(), c_assert(p)), s0, phi, names);
    FormulaPtr expect =
        f_and(f_true(), f_forall_state("s1", f_implies(f_state_eq(s_var("s1"), s0),
                                                       apply1(p, s_var("s1")))));
    CHECK(equal(got, expect));
  }
}

TEST_CASE("contract conditions") {
  SUBCASE("no procedures, no conditions") {
    StateNamer names;
    CHECK(equal(tf({}, {}, names), f_true()));
  }

  SUBCASE("key set mismatch is rejected") {
    StateNamer names;
    ContractEnv phi;
    phi["y"] = Contract{assertion_true(), assertion_true()};
    CHECK_THROWS_AS(tf(phi, {}, names), std::invalid_argument);
    ProcEnv psi;
    psi["z"] = c_skip();
    CHECK_THROWS_AS(tf(phi, psi, names), std::invalid_argument);
  }

  SUBCASE("one conjunct per procedure") {
    SourceModule m = corpus("mult.rl");
    StateNamer names;
    FormulaPtr f = tf(m.contracts, m.procs, names);
    const auto* top = std::get_if<Formula::ForallState>(&f->node);
    REQUIRE(top != nullptr);  // single procedure, no conjunction wrapper
    CHECK(top->var == "s0");
  }
}

TEST_CASE("goal conditions are grouped, named, and deterministic") {
  SourceModule m = corpus("mult.rl");
  const HoareGoal& g = m.hoare_goals[0];
  std::vector<VC> vcs = build_hoare_vcs(m, g, Generator::Naive);
  REQUIRE(!vcs.empty());
  bool saw_tf = false, saw_ta = false, saw_tc = false;
  for (const auto& vc : vcs) {
    CHECK(vc.name.rfind("mult_ok.", 0) == 0);
    CHECK(!check_scopes(vc.formula, 0).has_value());
    saw_tf |= vc.origin.kind == VcKind::Tf;
    saw_ta |= vc.origin.kind == VcKind::Ta;
    saw_tc |= vc.origin.kind == VcKind::Tc;
  }
  CHECK(saw_tf);
  CHECK(saw_ta);
  CHECK(saw_tc);

  std::vector<VC> again = build_hoare_vcs(m, g, Generator::Naive);
  REQUIRE(again.size() == vcs.size());
  for (std::size_t i = 0; i < vcs.size(); ++i) {
    CHECK(vcs[i].name == again[i].name);
    CHECK(equal(vcs[i].formula, again[i].formula));
    CHECK(to_string(vcs[i].formula) == to_string(again[i].formula));
  }
}

TEST_CASE("trivial goals produce trivially valid conditions") {
  std::vector<VC> vcs = hoare_vcs(assertion_true(), c_skip(), assertion_true(), {}, {}, "g");
  for (const auto& vc : vcs) CHECK(is_trivially_true(vc.formula));
}

TEST_CASE("splitting distributes over obligations but not case analysis") {
  FormulaPtr a = f_cmp(CmpOp::Eq, t_lit(Nat(0)), t_lit(Nat(0)));
  FormulaPtr b = f_cmp(CmpOp::Le, t_lit(Nat(0)), t_lit(Nat(1)));
  CHECK(split_conjuncts(f_and(a, b)).size() == 2);
  CHECK(split_conjuncts(f_forall_state("s", f_implies(a, f_and(a, b)))).size() == 2);

  // (g => A) && (!g => B) is one case analysis
  FormulaPtr branch = f_and(f_implies(a, b), f_implies(f_not(a), b));
  CHECK(split_conjuncts(branch).size() == 1);

  // existentials are opaque
  FormulaPtr ex = f_exists_nat("v", f_and(a, b));
  CHECK(split_conjuncts(ex).size() == 1);
}

TEST_CASE("optimized generator matches the naive one on join-free commands") {
  StateNamer n1, n2;
  StateTermPtr a = s_var(n1.fresh());
  StateTermPtr b = s_var(n2.fresh());
  FormulaPtr naive = tc(c_skip(), a, {}, loc1_is(2), n1);
  FormulaPtr opt = tc_opt(c_skip(), b, {}, loc1_is(2), n2);
  CHECK(equal(naive, opt));
}

TEST_CASE("optimized generator stays linear on a conditional ladder") {
  auto ladder = [](int n) {
    std::vector<CommandPtr> cmds;
    for (int i = 1; i <= n; ++i) {
      BoolExprPtr guard = b_cmp(CmpOp::Le, a_loc(Nat(1)), a_const(Nat(static_cast<unsigned long>(i))));
      cmds.push_back(c_if(guard, c_assign(Nat(2), a_bin(ArithOp::Add, a_loc(Nat(2)), a_const(Nat(1)))),
                          c_assign(Nat(3), a_bin(ArithOp::Add, a_loc(Nat(3)), a_const(Nat(1))))));
    }
    return c_seq_all(cmds);
  };
  Assertion post{1, f_cmp(CmpOp::Eq,
                          t_bin(ArithOp::Add, t_read(s_param(1), t_lit(Nat(2))),
                                t_read(s_param(1), t_lit(Nat(3)))),
                          t_lit(Nat(12)))};
  CommandPtr c = ladder(12);

  StateNamer n1;
  StateTermPtr s0 = s_var(n1.fresh());
  FormulaPtr naive = tc(c, s0, {}, post, n1);
  StateNamer n2;
  StateTermPtr t0 = s_var(n2.fresh());
  FormulaPtr opt = tc_opt(c, t0, {}, post, n2);

  CHECK(node_count(naive) >= (std::size_t{1} << 12));
  CHECK(node_count(opt) <= 1200);
}

TEST_CASE("relational generator, basis and fold") {
  ContractEnv phi;

  SUBCASE("no commands: the relational postcondition itself") {
    StateNamer names;
    Assertion q0{0, f_bool(false)};
    FormulaPtr got = tr({}, {}, phi, q0, names);
    CHECK(equal(got, f_false()));
  }

  SUBCASE("two skips peel from the last command") {
    StateNamer names;
    StateTermPtr s0 = s_var(names.fresh());
    StateTermPtr s1 = s_var(names.fresh());
    Assertion q{2, f_cmp(CmpOp::Eq, t_read(s_param(1), t_lit(Nat(0))),
                         t_read(s_param(2), t_lit(Nat(0))))};
    FormulaPtr got = tr({c_skip(), c_skip()}, {s0, s1}, phi, q, names);
    // second command first: s2 is its post-state, then s3 for the first
    FormulaPtr inner = f_cmp(CmpOp::Eq, t_read(s_var("s3"), t_lit(Nat(0))),
                             t_read(s_var("s2"), t_lit(Nat(0))));
    FormulaPtr expect = f_forall_state(
        "s2", f_implies(f_state_eq(s_var("s2"), s1),
                        f_forall_state("s3", f_implies(f_state_eq(s_var("s3"), s0), inner))));
    CHECK(equal(got, expect));
  }

  SUBCASE("auxiliary conditions conjoin per command") {
    StateNamer names;
    StateTermPtr s0 = s_var(names.fresh());
    StateTermPtr s1 = s_var(names.fresh());
    CHECK(equal(tar({}, {}, phi, names), f_true()));
    FormulaPtr two_skips = tar({c_skip(), c_skip()}, {s0, s1}, phi, names);
    CHECK(equal(two_skips, f_and(f_true(), f_true())));

    StateNamer names2;
    StateTermPtr t0 = s_var(names2.fresh());
    StateTermPtr t1 = s_var(names2.fresh());
    Assertion p = inv_is_seven();
    FormulaPtr got = tar({c_assert(p), c_skip()}, {t0, t1}, phi, names2);
    CHECK(equal(got, f_and(apply1(p, t0), f_true())));
  }
}

TEST_CASE("per-command auxiliary conditions restructure as a cons") {
  // commands without fresh-name allocation keep both routes comparable
  ContractEnv phi;
  Assertion pa = inv_is_seven();
  Assertion pb = loc1_is(3);
  std::vector<CommandPtr> cs = {c_assert(pa), c_skip(), c_assert(pb)};

  StateNamer n1;
  std::vector<StateTermPtr> ss = {s_var(n1.fresh()), s_var(n1.fresh()), s_var(n1.fresh())};
  FormulaPtr whole = tar(cs, ss, phi, n1);

  StateNamer n2;
  FormulaPtr last = ta(cs[2], ss[2], phi, n2);
  FormulaPtr prefix = tar({cs[0], cs[1]}, {ss[0], ss[1]}, phi, n2);

  std::vector<FormulaPtr> flat_whole, flat_cons;
  flatten_and(whole, flat_whole);
  flatten_and(f_and(last, prefix), flat_cons);
  REQUIRE(flat_whole.size() == flat_cons.size());
  // same conjuncts as multisets
  std::vector<std::string> a, b;
  for (const auto& f : flat_whole) a.push_back(to_string(f));
  for (const auto& f : flat_cons) b.push_back(to_string(f));
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  CHECK(a == b);
}

TEST_CASE("the swap relational condition chains all six updates") {
  SourceModule m = corpus("swap.rl");
  RelationalGoal goal = resolve_relational_goal(m.rel_goals[0], m);
  StateNamer names;
  std::vector<StateTermPtr> ss = {s_var(names.fresh()), s_var(names.fresh())};
  FormulaPtr f = tr(goal.commands, ss, {}, goal.post, names);

  // collect the chain of universal binders
  std::vector<std::string> binders;
  FormulaPtr cur = f;
  for (;;) {
    if (const auto* q = std::get_if<Formula::ForallState>(&cur->node)) {
      binders.push_back(q->var);
      cur = q->body;
    } else if (const auto* imp = std::get_if<Formula::Implies>(&cur->node)) {
      cur = imp->rhs;
    } else {
      break;
    }
  }
  CHECK(binders == std::vector<std::string>{"s2", "s3", "s4", "s5", "s6", "s7"});
  // the innermost formula is the postcondition applied to the final states:
  // s7 from the first program, s4 from the second
  FormulaPtr expect = subst_states(goal.post, {s_var("s7"), s_var("s4")});
  CHECK(equal(cur, expect));
}

TEST_CASE("relational goal conditions group like the unary ones") {
  SourceModule m = corpus("swap.rl");
  std::vector<VC> vcs = build_rel_vcs(m, m.rel_goals[0], Generator::Naive);
  bool saw_tar = false, saw_tr = false;
  for (const auto& vc : vcs) {
    CHECK(!check_scopes(vc.formula, 0).has_value());
    saw_tar |= vc.origin.kind == VcKind::Tar;
    saw_tr |= vc.origin.kind == VcKind::Tr;
  }
  CHECK(saw_tar);
  CHECK(saw_tr);
  StateNamer names;
  CHECK_THROWS_AS(tr({c_skip()}, {}, {}, assertion_true(1), names), std::invalid_argument);
}
