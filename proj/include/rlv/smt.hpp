#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rlv/vcgen.hpp"

namespace rlv {

/// How to reach the external SMT-LIB 2 solver. The script is fed to the
/// solver's standard input; any conformant solver works. The default
/// executable is taken from RLV_SOLVER, falling back to "z3".
struct SolverConfig {
  std::string executable;
  std::vector<std::string> extra_args = {"-in"};
  double timeout_seconds = 10.0;
  std::string logic = "ALL";
  std::uint64_t per_check_millis = 0;  // soft per-check budget in batch scripts (0 = none)

  static SolverConfig from_env();
};

/// Resolves the configured executable against PATH; empty when missing.
std::optional<std::string> find_solver(const SolverConfig& cfg);

enum class VerdictKind { Valid, Invalid, Unknown };
enum class UnknownReason { None, Timeout, SolverUnknown, ParseFailure };

/// Array value extracted from a solver model: explicit entries over a
/// constant base (the base covers every other index).
struct ArrayModel {
  Nat base = Nat(0);
  std::map<Nat, Nat> entries;

  Nat lookup(const Nat& addr) const {
    auto it = entries.find(addr);
    return it == entries.end() ? base : it->second;
  }
};

struct Verdict {
  VerdictKind kind = VerdictKind::Unknown;
  UnknownReason reason = UnknownReason::None;
  /// Countermodel footprints for the state variables free at the top of the
  /// condition (only for Invalid).
  std::map<std::string, MemState> model;
  std::map<std::string, ArrayModel> arrays;
  std::string solver_output;  // captured output on failure paths
  double seconds = 0.0;
  bool trivial = false;  // condition discharged without a solver call
};

const char* verdict_name(VerdictKind k);

/// Deterministic SMT-LIB 2 script for one condition: naturals as integers
/// with nonnegativity constraints at every binder, states as integer arrays,
/// truncated subtraction as a defined function, the condition asserted
/// negated. Throws std::logic_error if the formula is not closed.
std::string emit_smt(const VC& vc, const std::string& logic = "ALL");

/// The state variables emit_smt declares for `vc` (its outermost universal
/// state prefix), in declaration order.
std::vector<std::string> emit_statevars(const VC& vc);

/// Discharges one condition in its own solver process.
Verdict solve(const VC& vc, const SolverConfig& cfg);

/// Discharges a batch in a single solver process, scripts separated by
/// (reset). Trades the per-process isolation of solve() for startup cost;
/// used by the bulk fuzzing paths.
std::vector<Verdict> solve_many(const std::vector<VC>& vcs, const SolverConfig& cfg);

struct ModelParseResult {
  std::map<std::string, MemState> fragments;
  std::map<std::string, ArrayModel> arrays;
  std::optional<std::string> error;
};

/// Extracts array bindings for `statevars` from a sat response.
ModelParseResult parse_model(const std::string& solver_output, const std::vector<std::string>& statevars);

/// Runs a process with `input` on stdin, capturing stdout/stderr.
struct ProcessResult {
  bool spawn_failed = false;
  bool timed_out = false;
  int exit_code = -1;
  std::string out;
  std::string err;
};

ProcessResult run_process(const std::string& exe, const std::vector<std::string>& args,
                          const std::string& input, double timeout_seconds);

}  // namespace rlv
