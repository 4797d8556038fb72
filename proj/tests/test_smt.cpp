#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "rlv/driver.hpp"
#include "rlv/interp.hpp"
#include "rlv/parser.hpp"
#include "rlv/smt.hpp"

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

bool solver_available() { return find_solver(SolverConfig::from_env()).has_value(); }

VC forall_true_vc() {
  return VC{"t", f_forall_state("s0", f_true()), VcOrigin{VcKind::Tc, "t", {}}};
}

}  // namespace

TEST_CASE("scripts declare states, axioms, monus, and the negated condition") {
  std::string script = emit_smt(forall_true_vc());
  CHECK(script.find("(set-logic ALL)") == 0);
  CHECK(script.find("(define-fun monus ((a Int) (b Int)) Int (ite (<= b a) (- a b) 0))") !=
        std::string::npos);
  CHECK(script.find("(declare-const s0 (Array Int Int))") != std::string::npos);
  CHECK(script.find("(assert (forall ((i!0 Int)) (<= 0 (select s0 i!0))))") != std::string::npos);
  CHECK(script.find("(assert (not true))") != std::string::npos);
  CHECK(script.find("(check-sat)") != std::string::npos);
  CHECK(script.find("(get-model)") != std::string::npos);
}

TEST_CASE("quantified naturals carry their nonnegativity constraint") {
  FormulaPtr body = f_forall_nat("v", f_cmp(CmpOp::Le, t_lit(Nat(0)), t_var("v")));
  VC vc{"q", f_forall_state("s0", body), VcOrigin{VcKind::Tc, "q", {}}};
  std::string script = emit_smt(vc);
  CHECK(script.find("(forall ((v!0 Int)) (=> (<= 0 v!0)") != std::string::npos);
  FormulaPtr ex = f_exists_nat("w", f_cmp(CmpOp::Eq, t_var("w"), t_lit(Nat(3))));
  VC vc2{"q2", f_forall_state("s0", ex), VcOrigin{VcKind::Tc, "q2", {}}};
  CHECK(emit_smt(vc2).find("(exists ((v!0 Int)) (and (<= 0 v!0)") != std::string::npos);
}

TEST_CASE("open formulas are rejected") {
  VC open{"bad", f_state_eq(s_var("loose"), s_var("loose")), VcOrigin{VcKind::Tc, "", {}}};
  CHECK_THROWS_AS(emit_smt(open), std::logic_error);
  VC param{"bad2", f_state_eq(s_param(1), s_param(1)), VcOrigin{VcKind::Tc, "", {}}};
  CHECK_THROWS_AS(emit_smt(param), std::logic_error);
}

TEST_CASE("emission is deterministic") {
  SourceModule m = corpus("swap.rl");
  auto vcs1 = build_rel_vcs(m, m.rel_goals[0], Generator::Naive);
  auto vcs2 = build_rel_vcs(m, m.rel_goals[0], Generator::Naive);
  REQUIRE(vcs1.size() == vcs2.size());
  for (std::size_t i = 0; i < vcs1.size(); ++i) CHECK(emit_smt(vcs1[i]) == emit_smt(vcs2[i]));
}

TEST_CASE("model parsing") {
  SUBCASE("constant array gives an empty footprint") {
    std::string out = "sat\n(\n (define-fun s0 () (Array Int Int) ((as const (Array Int Int)) 0))\n)\n";
    auto r = parse_model(out, {"s0"});
    REQUIRE(!r.error);
    CHECK(r.fragments.at("s0").bindings().empty());
    CHECK(r.arrays.at("s0").base == Nat(0));
  }

  SUBCASE("store chains become footprints, outermost write winning") {
    std::string out =
        "sat\n(\n (define-fun s0 () (Array Int Int)"
        " (store (store ((as const (Array Int Int)) 0) 1 9) 1 5))\n)\n";
    auto r = parse_model(out, {"s0"});
    REQUIRE(!r.error);
    CHECK(r.fragments.at("s0").lookup(Nat(1)) == Nat(5));
  }

  SUBCASE("let bindings are resolved") {
    std::string out =
        "sat\n(\n (define-fun s0 () (Array Int Int)"
        " (let ((a!1 (store ((as const (Array Int Int)) 0) 2 7)))"
        " (store a!1 3 8)))\n)\n";
    auto r = parse_model(out, {"s0"});
    REQUIRE(!r.error);
    CHECK(r.fragments.at("s0").lookup(Nat(2)) == Nat(7));
    CHECK(r.fragments.at("s0").lookup(Nat(3)) == Nat(8));
  }

  SUBCASE("as-array function definitions are walked") {
    std::string out =
        "sat\n(model\n (define-fun s0 () (Array Int Int) (_ as-array k!0))\n"
        " (define-fun k!0 ((x!0 Int)) Int (ite (= x!0 2) 7 (ite (= 5 x!0) 1 0)))\n)\n";
    auto r = parse_model(out, {"s0"});
    REQUIRE(!r.error);
    CHECK(r.fragments.at("s0").lookup(Nat(2)) == Nat(7));
    CHECK(r.fragments.at("s0").lookup(Nat(5)) == Nat(1));
    CHECK(r.arrays.at("s0").base == Nat(0));
  }

  SUBCASE("negative values violate the nonnegativity axiom") {
    std::string out =
        "sat\n(\n (define-fun s0 () (Array Int Int)"
        " (store ((as const (Array Int Int)) 0) 1 (- 5)))\n)\n";
    auto r = parse_model(out, {"s0"});
    REQUIRE(r.error.has_value());
    CHECK(r.error->find("negative") != std::string::npos);
  }

  SUBCASE("missing definitions default to the zero state") {
    auto r = parse_model("sat\n(\n)\n", {"s9"});
    REQUIRE(!r.error);
    CHECK(r.fragments.at("s9").bindings().empty());
  }
}

TEST_CASE("countermodel concretization chases addresses") {
  ArrayModel model;
  model.base = Nat(0);
  model.entries[Nat(1)] = Nat(10);
  model.entries[Nat(10)] = Nat(5);
  MemState s = concretize_state(model, {Nat(1)});
  CHECK(s.lookup(Nat(1)) == Nat(10));
  CHECK(s.lookup(Nat(10)) == Nat(5));
  // the value 5 was chased as an address as well
  CHECK(s.bindings().count(Nat(5)) == 1);
}

TEST_CASE("a valid condition is unsat for the solver" * doctest::skip(!solver_available())) {
  // the skip-then-assign condition under a trivial precondition
  StateNamer names;
  StateTermPtr s0 = s_var(names.fresh());
  CommandPtr c = c_seq(c_skip(), c_assign(Nat(1), a_const(Nat(2))));
  Assertion post{1, f_cmp(CmpOp::Eq, t_read(s_param(1), t_lit(Nat(1))), t_lit(Nat(2)))};
  FormulaPtr f = tc(c, s0, {}, post, names);
  VC vc{"ex3", f_forall_state("s0", f), VcOrigin{VcKind::Tc, "ex3", {}}};
  Verdict v = solve(vc, SolverConfig::from_env());
  CHECK(v.kind == VerdictKind::Valid);
  CHECK_FALSE(v.trivial);
}

TEST_CASE("the raw script of a tautology answers unsat" * doctest::skip(!solver_available())) {
  std::string script = emit_smt(forall_true_vc());
  SolverConfig cfg = SolverConfig::from_env();
  auto exe = find_solver(cfg);
  REQUIRE(exe.has_value());
  ProcessResult pr = run_process(*exe, cfg.extra_args, script, 30.0);
  CHECK(pr.out.find("unsat") != std::string::npos);
}

TEST_CASE("an invalid condition yields a runnable countermodel" * doctest::skip(!solver_available())) {
  // {true} x1 := 1 {at(1) = 2}
  Assertion post{1, f_cmp(CmpOp::Eq, t_read(s_param(1), t_lit(Nat(1))), t_lit(Nat(2)))};
  CommandPtr c = c_assign(Nat(1), a_const(Nat(1)));
  std::vector<VC> vcs = hoare_vcs(assertion_true(), c, post, {}, {}, "refute");
  SolverConfig cfg = SolverConfig::from_env();
  bool found_invalid = false;
  for (const auto& vc : vcs) {
    Verdict v = solve(vc, cfg);
    if (v.kind != VerdictKind::Invalid) continue;
    found_invalid = true;
    REQUIRE(!emit_statevars(vc).empty());
    std::string init = emit_statevars(vc).front();
    REQUIRE(v.arrays.count(init) == 1);
    MemState sigma = concretize_state(v.arrays.at(init), literal_seeds({c}, {&post}));
    Outcome o = exec(c, sigma, {}, 100);
    REQUIRE(o.finished());
    CHECK_FALSE(eval_assertion(post, {*o.state}).value);
  }
  CHECK(found_invalid);
}

TEST_CASE("timeouts surface as unknown" * doctest::skip(!solver_available())) {
  SolverConfig cfg = SolverConfig::from_env();
  cfg.timeout_seconds = 0.01;  // expires during solver startup
  // a nonlinear search problem so even a fast solver cannot answer instantly
  FormulaPtr hard = f_forall_nat(
      "a", f_forall_nat("b", f_forall_nat("c", f_not(f_cmp(
               CmpOp::Eq,
               t_bin(ArithOp::Mul, t_bin(ArithOp::Mul, t_var("a"), t_var("a")), t_var("a")),
               t_bin(ArithOp::Add,
                     t_bin(ArithOp::Mul, t_bin(ArithOp::Mul, t_var("b"), t_var("b")), t_var("b")),
                     t_lit(Nat(1))))))));
  VC vc{"hard", f_forall_state("s0", hard), VcOrigin{VcKind::Tc, "hard", {}}};
  Verdict v = solve(vc, cfg);
  CHECK(v.kind == VerdictKind::Unknown);
  CHECK(v.reason == UnknownReason::Timeout);
}

TEST_CASE("batched solving preserves order and verdicts" * doctest::skip(!solver_available())) {
  Assertion good{1, f_cmp(CmpOp::Eq, t_read(s_param(1), t_lit(Nat(1))), t_lit(Nat(1)))};
  Assertion bad{1, f_cmp(CmpOp::Eq, t_read(s_param(1), t_lit(Nat(1))), t_lit(Nat(2)))};
  CommandPtr c = c_assign(Nat(1), a_const(Nat(1)));
  std::vector<VC> vcs;
  for (auto& vc : hoare_vcs(assertion_true(), c, good, {}, {}, "good")) vcs.push_back(vc);
  for (auto& vc : hoare_vcs(assertion_true(), c, bad, {}, {}, "bad")) vcs.push_back(vc);
  for (auto& vc : hoare_vcs(assertion_true(), c_skip(), good, {}, {}, "weird")) vcs.push_back(vc);

  SolverConfig cfg = SolverConfig::from_env();
  std::vector<Verdict> batched = solve_many(vcs, cfg);
  REQUIRE(batched.size() == vcs.size());
  for (std::size_t i = 0; i < vcs.size(); ++i) {
    Verdict individual = solve(vcs[i], cfg);
    CAPTURE(vcs[i].name);
    CHECK(individual.kind == batched[i].kind);
  }
}

TEST_CASE("missing solver executables are reported") {
  SolverConfig cfg;
  cfg.executable = "definitely-not-a-solver-9871";
  CHECK_FALSE(find_solver(cfg).has_value());
  Verdict v = solve(forall_true_vc(), cfg);
  CHECK(v.trivial);  // the tautology never reaches the solver
  VC real{"r", f_forall_state("s0", f_cmp(CmpOp::Eq, t_read(s_var("s0"), t_lit(Nat(0))), t_lit(Nat(0)))),
          VcOrigin{VcKind::Tc, "r", {}}};
  Verdict v2 = solve(real, cfg);
  CHECK(v2.kind == VerdictKind::Unknown);
  CHECK(v2.reason == UnknownReason::ParseFailure);
}
