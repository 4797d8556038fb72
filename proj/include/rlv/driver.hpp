#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rlv/module.hpp"
#include "rlv/relcheck.hpp"
#include "rlv/smt.hpp"
#include "rlv/testkit.hpp"
#include "rlv/vcgen.hpp"

namespace rlv {

struct CheckOptions {
  Generator generator = Generator::Naive;
  SolverConfig solver = SolverConfig::from_env();
  std::uint64_t fuel = 10000;
  unsigned jobs = 1;
  bool confirm = true;  // run countermodels through the interpreter
};

enum class GoalStatus { Proved, NotProved, Refuted, Error };

const char* goal_status_name(GoalStatus s);

struct VcRow {
  std::string name;
  VcKind kind;
  Verdict verdict;
};

/// Outcome of checking one goal: per-condition verdicts plus an overall
/// status. Refuted requires an interpreter-confirmed countermodel.
struct RunReport {
  std::string goal;
  GoalStatus status = GoalStatus::Error;
  std::vector<VcRow> rows;
  std::string message;
  std::vector<MemState> countermodel;   // initial state per command
  std::vector<MemState> counterfinal;   // matching final states
  double seconds = 0.0;
};

RunReport check_hoare_goal(const SourceModule& m, const HoareGoal& g, const CheckOptions& opts);
RunReport check_rel_goal(const SourceModule& m, const RelGoalDecl& g, const CheckOptions& opts);

std::string render_report_text(const RunReport& r);
std::string render_report_json(const RunReport& r);

/// Builds the conditions of a goal without solving (emit-smt path).
std::vector<VC> build_hoare_vcs(const SourceModule& m, const HoareGoal& g, Generator gen);
std::vector<VC> build_rel_vcs(const SourceModule& m, const RelGoalDecl& g, Generator gen);

/// Materializes a model array into a runnable state: model entries plus the
/// closure of `seed` addresses under lookup (values double as addresses).
MemState concretize_state(const ArrayModel& model, std::vector<Nat> seeds);

/// Address and value literals appearing in commands and assertions; used to
/// seed countermodel concretization.
std::vector<Nat> literal_seeds(const std::vector<CommandPtr>& cmds, const std::vector<const Assertion*>& asserts);

// -- bulk differential testing ------------------------------------------------

struct FuzzOptions {
  GenConfig gen;
  std::uint64_t hoare_goals = 0;
  std::uint64_t rel_goals = 0;
  std::uint64_t oracle_samples = 64;
  std::uint64_t fuel = 4096;
  SolverConfig solver = SolverConfig::from_env();
  Generator generator = Generator::Naive;
  std::size_t goals_per_batch = 32;
  std::string dump_dir;  // when set, goals are written out as .rl files
};

struct FuzzStats {
  std::uint64_t goals = 0;
  std::uint64_t all_valid = 0;
  std::uint64_t not_proved = 0;
  std::uint64_t with_unknowns = 0;
  std::uint64_t oracle_violations = 0;
  std::uint64_t soundness_bugs = 0;  // all VCs valid yet the oracle found a violation
  std::vector<std::string> bug_reports;
};

FuzzStats fuzz_hoare(const FuzzOptions& opts);
FuzzStats fuzz_rel(const FuzzOptions& opts, const std::vector<int>& arities);

/// Renders a generated Hoare goal as a standalone module (for corpus dumps).
std::string dump_hoare_goal(const HoareFuzzGoal& g, const std::string& name);
std::string dump_rel_goal(const RelFuzzGoal& g, const std::string& name);

}  // namespace rlv
