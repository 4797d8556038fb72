#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "rlv/parser.hpp"
#include "rlv/pretty.hpp"

using namespace rlv;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<Diagnostic> expect_diags(const std::string& text) {
  ParseResult r = parse_module(text);
  auto* ds = std::get_if<std::vector<Diagnostic>>(&r);
  REQUIRE(ds != nullptr);
  REQUIRE(!ds->empty());
  return *ds;
}

const char* kRecursive = R"(
proc y1
  pre (at(2) = at(3) * (at(4) - at(1)) && 0 <= at(1) && at(1) <= at(4))
  post (at(2) = at(3) * at(4))
{
  if (x1 > 0) {
    x2 := x2 + x3;
    x1 := x1 - 1;
    call y1
  } else {
    skip
  }
}
)";

}  // namespace

TEST_CASE("parses the recursive procedure with its contract") {
  SourceModule m = parse_module_or_throw(kRecursive);
  REQUIRE(m.procs.size() == 1);
  REQUIRE(m.contracts.count("y1") == 1);
  const auto* branch = std::get_if<Command::If>(&m.procs.at("y1")->node);
  REQUIRE(branch != nullptr);
  // x1 > 0 desugars to !(x1 <= 0)
  const auto* guard = std::get_if<BoolExpr::Not>(&branch->cond->node);
  REQUIRE(guard != nullptr);
  const auto* cmp = std::get_if<BoolExpr::Cmp>(&guard->body->node);
  REQUIRE(cmp != nullptr);
  CHECK(cmp->op == CmpOp::Le);
}

TEST_CASE("parses a single named command") {
  SourceModule m = parse_module_or_throw("command c { skip }");
  REQUIRE(m.commands.size() == 1);
  CHECK(equal(m.commands.at("c"), c_skip()));
}

TEST_CASE("unknown procedure in call is a diagnostic") {
  auto ds = expect_diags("command c { call nowhere }");
  CHECK(ds[0].message.find("unknown procedure") != std::string::npos);
  CHECK(ds[0].where.line == 1);
}

TEST_CASE("unknown command reference in a goal") {
  auto ds = expect_diags("hoare g pre (true) cmd missing post (true)");
  CHECK(ds[0].message.find("unknown command") != std::string::npos);
}

TEST_CASE("duplicate names are rejected") {
  auto ds = expect_diags("command c { skip }\ncommand c { skip }");
  CHECK(ds[0].message.find("duplicate") != std::string::npos);
}

TEST_CASE("state index beyond arity is rejected") {
  auto ds = expect_diags("command c { skip }\nhoare g pre (at(2, 1) = 0) cmd c post (true)");
  CHECK(ds[0].message.find("arity") != std::string::npos);
}

TEST_CASE("relational arity matches the command count") {
  const char* text =
      "command a { skip }\ncommand b { skip }\n"
      "relation r on (a, b) pre (at(2, 1) = at(1, 1)) post (true)";
  SourceModule m = parse_module_or_throw(text);
  CHECK(m.rel_goals[0].pre.arity == 2);
}

TEST_CASE("unbound variables in assertions are diagnosed") {
  auto ds = expect_diags("command c { skip }\nhoare g pre (v = 0) cmd c post (true)");
  CHECK(ds[0].message.find("unbound variable 'v'") != std::string::npos);
}

TEST_CASE("comparison sugar lowers to core operators") {
  SourceModule gt = parse_module_or_throw("command c { if (x1 > x2) { skip } else { skip } }");
  SourceModule not_le = parse_module_or_throw("command c { if (!(x1 <= x2)) { skip } else { skip } }");
  CHECK(equal(gt.commands.at("c"), not_le.commands.at("c")));

  SourceModule lt = parse_module_or_throw("command c { if (x1 < x2) { skip } else { skip } }");
  SourceModule flipped = parse_module_or_throw("command c { if (!(x2 <= x1)) { skip } else { skip } }");
  CHECK(equal(lt.commands.at("c"), flipped.commands.at("c")));

  SourceModule ne = parse_module_or_throw("command c { if (x1 != 0) { skip } else { skip } }");
  SourceModule negated_eq = parse_module_or_throw("command c { if (!(x1 = 0)) { skip } else { skip } }");
  CHECK(equal(ne.commands.at("c"), negated_eq.commands.at("c")));
}

TEST_CASE("subtraction is truncated subtraction") {
  SourceModule m = parse_module_or_throw("command c { x1 := x2 - 3 }");
  const auto* a = std::get_if<Command::Assign>(&m.commands.at("c")->node);
  REQUIRE(a != nullptr);
  const auto* bin = std::get_if<ArithExpr::Bin>(&a->value->node);
  REQUIRE(bin != nullptr);
  CHECK(bin->op == ArithOp::Monus);
}

TEST_CASE("operator precedence and parentheses") {
  SourceModule m1 = parse_module_or_throw("command c { x1 := x2 + x3 * 2 }");
  SourceModule m2 = parse_module_or_throw("command c { x1 := x2 + (x3 * 2) }");
  SourceModule m3 = parse_module_or_throw("command c { x1 := (x2 + x3) * 2 }");
  CHECK(equal(m1.commands.at("c"), m2.commands.at("c")));
  CHECK_FALSE(equal(m1.commands.at("c"), m3.commands.at("c")));
}

TEST_CASE("quantifier scope extends to the right") {
  SourceModule m = parse_module_or_throw(
      "command c { skip }\nhoare g pre (forall v. v <= 1 && v = 0 -> true) cmd c post (true)");
  const auto* q = std::get_if<Formula::QuantNat>(&m.hoare_goals[0].pre.body->node);
  REQUIRE(q != nullptr);
  CHECK(std::get_if<Formula::Implies>(&q->body->node) != nullptr);
}

TEST_CASE("diagnostics carry line and column") {
  ParseResult r = parse_module("command c {\n  x1 := ;\n}");
  auto* ds = std::get_if<std::vector<Diagnostic>>(&r);
  REQUIRE(ds != nullptr);
  REQUIRE(!ds->empty());
  CHECK((*ds)[0].where.line == 2);
  CHECK(format_diagnostic("f.rl", (*ds)[0]).rfind("f.rl:2:", 0) == 0);
}

TEST_CASE("corpus files round-trip through the pretty printer") {
  for (const char* name : {"swap.rl", "mult.rl", "refute.rl", "swap_aliased.rl", "loop_sum.rl",
                           "deref.rl", "assert_seq.rl", "ladder8.rl", "noninterference.rl"}) {
    CAPTURE(name);
    SourceModule m = parse_module_or_throw(slurp(std::string(RLV_CORPUS_DIR) + "/" + name));
    std::string printed = pretty_print(m);
    SourceModule again = parse_module_or_throw(printed);
    CHECK(equal(m, again));
    // a second print is byte-stable
    CHECK(pretty_print(again) == printed);
  }
}

TEST_CASE("empty module round-trips") {
  SourceModule m = parse_module_or_throw("");
  CHECK(pretty_print(m).empty());
  SourceModule again = parse_module_or_throw(pretty_print(m));
  CHECK(equal(m, again));
}

TEST_CASE("relational goals may be empty") {
  SourceModule m = parse_module_or_throw("relation r on () pre (true) post (false)");
  CHECK(m.rel_goals[0].cmds.empty());
  CHECK(m.rel_goals[0].pre.arity == 0);
}

TEST_CASE("assertions reject bare locations") {
  auto ds = expect_diags("command c { skip }\nhoare g pre (x1 = 0) cmd c post (true)");
  CHECK(ds[0].message.find("at(") != std::string::npos);
}
