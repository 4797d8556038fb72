#include "rlv/driver.hpp"

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "rlv/interp.hpp"
#include "rlv/pretty.hpp"

namespace rlv {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

const char* goal_status_name(GoalStatus s) {
  switch (s) {
    case GoalStatus::Proved: return "Proved";
    case GoalStatus::NotProved: return "NotProved";
    case GoalStatus::Refuted: return "Refuted";
    default: return "Error";
  }
}

std::vector<VC> build_hoare_vcs(const SourceModule& m, const HoareGoal& g, Generator gen) {
  auto it = m.commands.find(g.cmd);
  if (it == m.commands.end()) throw std::invalid_argument("unknown command '" + g.cmd + "'");
  return hoare_vcs(g.pre, it->second, g.post, m.contracts, m.procs, g.name, gen, g.where);
}

std::vector<VC> build_rel_vcs(const SourceModule& m, const RelGoalDecl& g, Generator gen) {
  RelationalGoal goal = resolve_relational_goal(g, m);
  return relational_vcs(goal, m.contracts, m.procs, gen);
}

namespace {

std::vector<Verdict> solve_all(const std::vector<VC>& vcs, const SolverConfig& solver, unsigned jobs) {
  std::vector<Verdict> verdicts(vcs.size());
  if (jobs <= 1 || vcs.size() <= 1) {
    for (std::size_t i = 0; i < vcs.size(); ++i) verdicts[i] = solve(vcs[i], solver);
    return verdicts;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= vcs.size()) return;
      verdicts[i] = solve(vcs[i], solver);
    }
  };
  std::vector<std::thread> pool;
  unsigned n = std::min<unsigned>(jobs, static_cast<unsigned>(vcs.size()));
  pool.reserve(n);
  for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return verdicts;
}

void collect_literals(const ArithExprPtr& a, std::vector<Nat>& out) {
  std::visit(overloaded{
                 [&](const ArithExpr::Const& c) { out.push_back(c.value); },
                 [&](const ArithExpr::Loc& l) { out.push_back(l.addr.value); },
                 [&](const ArithExpr::Deref& d) { out.push_back(d.addr.value); },
                 [&](const ArithExpr::AddrOf& d) { out.push_back(d.addr.value); },
                 [&](const ArithExpr::Bin& b) {
                   collect_literals(b.lhs, out);
                   collect_literals(b.rhs, out);
                 },
             },
             a->node);
}

void collect_literals(const BoolExprPtr& b, std::vector<Nat>& out) {
  std::visit(overloaded{
                 [](const BoolExpr::Lit&) {},
                 [&](const BoolExpr::Cmp& c) {
                   collect_literals(c.lhs, out);
                   collect_literals(c.rhs, out);
                 },
                 [&](const BoolExpr::Logic& l) {
                   collect_literals(l.lhs, out);
                   collect_literals(l.rhs, out);
                 },
                 [&](const BoolExpr::Not& n) { collect_literals(n.body, out); },
             },
             b->node);
}

void collect_literals(const FormulaPtr& f, std::vector<Nat>& out);

void collect_literals(const NatTermPtr& t, std::vector<Nat>& out) {
  std::visit(overloaded{
                 [&](const NatTerm::Lit& l) { out.push_back(l.value); },
                 [](const NatTerm::Var&) {},
                 [&](const NatTerm::Read& r) { collect_literals(r.addr, out); },
                 [&](const NatTerm::Bin& b) {
                   collect_literals(b.lhs, out);
                   collect_literals(b.rhs, out);
                 },
             },
             t->node);
}

void collect_literals(const FormulaPtr& f, std::vector<Nat>& out) {
  std::visit(overloaded{
                 [](const Formula::BoolLit&) {},
                 [&](const Formula::Cmp& c) {
                   collect_literals(c.lhs, out);
                   collect_literals(c.rhs, out);
                 },
                 [](const Formula::StateEq&) {},
                 [&](const Formula::Not& n) { collect_literals(n.body, out); },
                 [&](const Formula::And& a) {
                   collect_literals(a.lhs, out);
                   collect_literals(a.rhs, out);
                 },
                 [&](const Formula::Or& o) {
                   collect_literals(o.lhs, out);
                   collect_literals(o.rhs, out);
                 },
                 [&](const Formula::Implies& i) {
                   collect_literals(i.lhs, out);
                   collect_literals(i.rhs, out);
                 },
                 [&](const Formula::QuantNat& q) { collect_literals(q.body, out); },
                 [&](const Formula::ForallState& q) { collect_literals(q.body, out); },
             },
             f->node);
}

void collect_literals(const CommandPtr& c, std::vector<Nat>& out) {
  std::visit(overloaded{
                 [](const Command::Skip&) {},
                 [&](const Command::Assign& a) {
                   out.push_back(a.target.value);
                   collect_literals(a.value, out);
                 },
                 [&](const Command::IndirectAssign& a) {
                   out.push_back(a.target.value);
                   collect_literals(a.value, out);
                 },
                 [&](const Command::Seq& s) {
                   collect_literals(s.first, out);
                   collect_literals(s.second, out);
                 },
                 [&](const Command::Assert& a) { collect_literals(a.pred.body, out); },
                 [&](const Command::If& i) {
                   collect_literals(i.cond, out);
                   collect_literals(i.then_branch, out);
                   collect_literals(i.else_branch, out);
                 },
                 [&](const Command::While& w) {
                   collect_literals(w.cond, out);
                   collect_literals(w.invariant.body, out);
                   collect_literals(w.body, out);
                 },
                 [](const Command::Call&) {},
             },
             c->node);
}

}  // namespace

std::vector<Nat> literal_seeds(const std::vector<CommandPtr>& cmds,
                               const std::vector<const Assertion*>& asserts) {
  std::vector<Nat> out;
  for (const auto& c : cmds) collect_literals(c, out);
  for (const auto* a : asserts)
    if (a) collect_literals(a->body, out);
  return out;
}

MemState concretize_state(const ArrayModel& model, std::vector<Nat> seeds) {
  MemState state(model.entries);
  std::set<Nat> visited;
  for (const auto& [addr, value] : model.entries) {
    seeds.push_back(addr);
    seeds.push_back(value);
  }
  std::size_t guard = 0;
  while (!seeds.empty() && guard++ < 4096) {
    Nat addr = seeds.back();
    seeds.pop_back();
    if (sgn(addr) < 0 || !visited.insert(addr).second) continue;
    Nat value = model.lookup(addr);
    state = mem_update(state, addr, value);
    seeds.push_back(value);  // stored values may themselves be addresses
  }
  return state;
}

namespace {

bool quantifier_free(const Assertion& a) {
  struct Scan {
    bool found = false;
    void walk(const FormulaPtr& f) {
      if (found) return;
      std::visit(overloaded{
                     [&](const Formula::QuantNat&) { found = true; },
                     [&](const Formula::ForallState& q) { walk(q.body); },
                     [&](const Formula::Not& n) { walk(n.body); },
                     [&](const Formula::And& x) {
                       walk(x.lhs);
                       walk(x.rhs);
                     },
                     [&](const Formula::Or& x) {
                       walk(x.lhs);
                       walk(x.rhs);
                     },
                     [&](const Formula::Implies& x) {
                       walk(x.lhs);
                       walk(x.rhs);
                     },
                     [](const auto&) {},
                 },
                 f->node);
    }
  } scan;
  scan.walk(a.body);
  return !scan.found;
}

struct Confirmation {
  std::vector<MemState> initial;
  std::vector<MemState> final_states;
};

/// Replays an Invalid condition's model: extract one initial state per
/// command, execute, and accept only when the postcondition really fails.
std::optional<Confirmation> confirm_counterexample(const std::vector<CommandPtr>& cmds, const Assertion& pre,
                                                   const Assertion& post, const VC& vc, const Verdict& verdict,
                                                   std::uint64_t fuel) {
  for (const auto& c : cmds)
    if (contains_loop(c) || contains_call(c)) return std::nullopt;
  if (!quantifier_free(pre) || !quantifier_free(post)) return std::nullopt;

  std::vector<std::string> statevars = emit_statevars(vc);
  if (statevars.size() < cmds.size()) return std::nullopt;
  std::vector<Nat> seeds = literal_seeds(cmds, {&pre, &post});

  std::vector<MemState> initial;
  for (std::size_t i = 0; i < cmds.size(); ++i) {
    auto it = verdict.arrays.find(statevars[i]);
    initial.push_back(it == verdict.arrays.end() ? MemState{} : concretize_state(it->second, seeds));
  }
  if (!eval_assertion(pre, initial).value) return std::nullopt;
  std::vector<MemState> finals;
  for (std::size_t i = 0; i < cmds.size(); ++i) {
    Outcome o = exec(cmds[i], initial[i], {}, fuel);
    if (o.out_of_fuel()) return std::nullopt;
    finals.push_back(std::move(*o.state));
  }
  if (eval_assertion(post, finals).value) return std::nullopt;
  return Confirmation{std::move(initial), std::move(finals)};
}

RunReport run_goal(const std::string& name, const std::vector<CommandPtr>& cmds, const Assertion& pre,
                   const Assertion& post, std::vector<VC> vcs, const CheckOptions& opts) {
  RunReport report;
  report.goal = name;
  auto start = std::chrono::steady_clock::now();

  std::vector<Verdict> verdicts = solve_all(vcs, opts.solver, opts.jobs);
  bool all_valid = true;
  bool any_invalid = false;
  for (std::size_t i = 0; i < vcs.size(); ++i) {
    report.rows.push_back(VcRow{vcs[i].name, vcs[i].origin.kind, verdicts[i]});
    if (verdicts[i].kind != VerdictKind::Valid) all_valid = false;
    if (verdicts[i].kind == VerdictKind::Invalid) any_invalid = true;
  }

  if (all_valid) {
    report.status = GoalStatus::Proved;
  } else {
    report.status = GoalStatus::NotProved;
    if (any_invalid && opts.confirm) {
      for (std::size_t i = 0; i < vcs.size(); ++i) {
        if (verdicts[i].kind != VerdictKind::Invalid) continue;
        VcKind k = vcs[i].origin.kind;
        if (k != VcKind::Tc && k != VcKind::Ta && k != VcKind::Tr && k != VcKind::Tar) continue;
        if (auto hit = confirm_counterexample(cmds, pre, post, vcs[i], verdicts[i], opts.fuel)) {
          report.status = GoalStatus::Refuted;
          report.countermodel = std::move(hit->initial);
          report.counterfinal = std::move(hit->final_states);
          break;
        }
      }
    }
  }
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace

RunReport check_hoare_goal(const SourceModule& m, const HoareGoal& g, const CheckOptions& opts) {
  RunReport report;
  report.goal = g.name;
  try {
    std::vector<VC> vcs = build_hoare_vcs(m, g, opts.generator);
    return run_goal(g.name, {m.commands.at(g.cmd)}, g.pre, g.post, std::move(vcs), opts);
  } catch (const std::exception& e) {
    report.status = GoalStatus::Error;
    report.message = e.what();
    return report;
  }
}

RunReport check_rel_goal(const SourceModule& m, const RelGoalDecl& g, const CheckOptions& opts) {
  RunReport report;
  report.goal = g.name;
  try {
    RelationalGoal goal = resolve_relational_goal(g, m);
    std::vector<VC> vcs = relational_vcs(goal, m.contracts, m.procs, opts.generator);
    return run_goal(g.name, goal.commands, goal.pre, goal.post, std::move(vcs), opts);
  } catch (const std::exception& e) {
    report.status = GoalStatus::Error;
    report.message = e.what();
    return report;
  }
}

// ---------------------------------------------------------------------------
// Report rendering

namespace {

std::string verdict_cell(const Verdict& v) {
  switch (v.kind) {
    case VerdictKind::Valid: return v.trivial ? "valid (trivial)" : "valid";
    case VerdictKind::Invalid: return "invalid";
    default:
      switch (v.reason) {
        case UnknownReason::Timeout: return "unknown (timeout)";
        case UnknownReason::ParseFailure: return "unknown (solver output unusable)";
        default: return "unknown";
      }
  }
}

std::string state_str(const MemState& s) {
  std::string out = "{";
  bool first = true;
  for (const auto& [a, v] : s.bindings()) {
    if (!first) out += ", ";
    first = false;
    out += a.get_str() + "=" + v.get_str();
  }
  return out + "}";
}

}  // namespace

std::string render_report_text(const RunReport& r) {
  std::ostringstream os;
  if (r.status == GoalStatus::Error) {
    os << "goal " << r.goal << ": error: " << r.message << "\n";
    return os.str();
  }
  std::size_t width = 12;
  for (const auto& row : r.rows) width = std::max(width, row.name.size());
  os << std::left << std::setw(static_cast<int>(width + 2)) << "vc" << std::setw(6) << "kind"
     << std::setw(34) << "verdict" << "time\n";
  for (const auto& row : r.rows) {
    std::ostringstream t;
    t << std::fixed << std::setprecision(2) << row.verdict.seconds << "s";
    os << std::left << std::setw(static_cast<int>(width + 2)) << row.name << std::setw(6)
       << vc_kind_name(row.kind) << std::setw(34) << verdict_cell(row.verdict) << t.str() << "\n";
  }
  os << "goal " << r.goal << ": " << goal_status_name(r.status) << std::fixed << std::setprecision(2)
     << " (" << r.seconds << "s)\n";
  if (r.status == GoalStatus::Refuted) {
    os << "countermodel (confirmed by execution):\n";
    for (std::size_t i = 0; i < r.countermodel.size(); ++i) {
      os << "  initial " << (i + 1) << ": " << state_str(r.countermodel[i]) << "\n";
      os << "  final   " << (i + 1) << ": " << state_str(r.counterfinal[i]) << "\n";
    }
  }
  return os.str();
}

std::string render_report_json(const RunReport& r) {
  nlohmann::json j;
  j["goal"] = r.goal;
  j["status"] = goal_status_name(r.status);
  j["seconds"] = r.seconds;
  if (!r.message.empty()) j["error"] = r.message;
  j["vcs"] = nlohmann::json::array();
  for (const auto& row : r.rows) {
    nlohmann::json v;
    v["name"] = row.name;
    v["kind"] = vc_kind_name(row.kind);
    v["verdict"] = verdict_name(row.verdict.kind);
    v["trivial"] = row.verdict.trivial;
    v["seconds"] = row.verdict.seconds;
    if (row.verdict.kind == VerdictKind::Unknown) {
      const char* reason = row.verdict.reason == UnknownReason::Timeout          ? "timeout"
                           : row.verdict.reason == UnknownReason::ParseFailure  ? "parse-failure"
                           : row.verdict.reason == UnknownReason::SolverUnknown ? "solver-says-unknown"
                                                                                : "none";
      v["reason"] = reason;
    }
    j["vcs"].push_back(std::move(v));
  }
  auto states_json = [](const std::vector<MemState>& states) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& s : states) {
      nlohmann::json m = nlohmann::json::object();
      for (const auto& [a, v] : s.bindings()) m[a.get_str()] = v.get_str();
      arr.push_back(std::move(m));
    }
    return arr;
  };
  if (r.status == GoalStatus::Refuted) {
    j["countermodel"] = states_json(r.countermodel);
    j["counterfinal"] = states_json(r.counterfinal);
  }
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Bulk differential testing

std::string dump_hoare_goal(const HoareFuzzGoal& g, const std::string& name) {
  SourceModule m;
  m.commands["c0"] = g.cmd;
  m.hoare_goals.push_back(HoareGoal{name, g.pre, "c0", g.post, {}});
  return pretty_print(m);
}

std::string dump_rel_goal(const RelFuzzGoal& g, const std::string& name) {
  SourceModule m;
  RelGoalDecl decl;
  decl.name = name;
  decl.pre = g.goal.pre;
  decl.post = g.goal.post;
  for (std::size_t i = 0; i < g.goal.commands.size(); ++i) {
    std::string cname = "c" + std::to_string(i);
    m.commands[cname] = g.goal.commands[i];
    decl.cmds.push_back(cname);
  }
  m.rel_goals.push_back(std::move(decl));
  return pretty_print(m);
}

namespace {

void maybe_dump(const std::string& dir, const std::string& filename, const std::string& text) {
  if (dir.empty()) return;
  std::filesystem::create_directories(dir);
  std::ofstream out(dir + "/" + filename, std::ios::binary);
  out << text;
}

struct GoalVerdicts {
  bool all_valid = true;
  bool any_unknown = false;
};

GoalVerdicts summarize(const std::vector<Verdict>& verdicts, std::size_t begin, std::size_t end) {
  GoalVerdicts gv;
  for (std::size_t i = begin; i < end; ++i) {
    if (verdicts[i].kind != VerdictKind::Valid) gv.all_valid = false;
    if (verdicts[i].kind == VerdictKind::Unknown) gv.any_unknown = true;
  }
  return gv;
}

}  // namespace

FuzzStats fuzz_hoare(const FuzzOptions& opts) {
  FuzzStats stats;
  Gen g(opts.gen);
  std::uint64_t produced = 0;
  while (produced < opts.hoare_goals) {
    std::uint64_t batch = std::min<std::uint64_t>(opts.goals_per_batch, opts.hoare_goals - produced);
    std::vector<HoareFuzzGoal> goals;
    std::vector<VC> all_vcs;
    std::vector<std::pair<std::size_t, std::size_t>> ranges;
    for (std::uint64_t k = 0; k < batch; ++k) {
      HoareFuzzGoal goal = gen_hoare_goal(g);
      std::string name = "h" + std::to_string(produced + k);
      maybe_dump(opts.dump_dir, name + ".rl", dump_hoare_goal(goal, name));
      std::size_t begin = all_vcs.size();
      for (auto& vc : hoare_vcs(goal.pre, goal.cmd, goal.post, {}, {}, name, opts.generator))
        all_vcs.push_back(std::move(vc));
      ranges.emplace_back(begin, all_vcs.size());
      goals.push_back(std::move(goal));
    }
    SolverConfig solver = opts.solver;
    solver.per_check_millis = static_cast<std::uint64_t>(solver.timeout_seconds * 1000);
    std::vector<Verdict> verdicts = solve_many(all_vcs, solver);

    for (std::uint64_t k = 0; k < batch; ++k) {
      const HoareFuzzGoal& goal = goals[k];
      GoalVerdicts gv = summarize(verdicts, ranges[k].first, ranges[k].second);
      ++stats.goals;
      if (gv.all_valid)
        ++stats.all_valid;
      else
        ++stats.not_proved;
      if (gv.any_unknown) ++stats.with_unknowns;

      GenConfig sampling = opts.gen;
      sampling.seed = opts.gen.seed * 1000003 + produced + k;
      auto violation = hoare_oracle(goal.pre, goal.cmd, goal.post, {}, opts.oracle_samples, opts.fuel,
                                    sampling, goal.suggested);
      if (violation) {
        ++stats.oracle_violations;
        if (gv.all_valid) {
          ++stats.soundness_bugs;
          stats.bug_reports.push_back("goal h" + std::to_string(produced + k) +
                                      ": all conditions valid but execution violates the postcondition\n" +
                                      dump_hoare_goal(goal, "h" + std::to_string(produced + k)));
        }
      }
    }
    produced += batch;
  }
  return stats;
}

FuzzStats fuzz_rel(const FuzzOptions& opts, const std::vector<int>& arities) {
  FuzzStats stats;
  Gen g(opts.gen);
  std::uint64_t produced = 0;
  while (produced < opts.rel_goals) {
    std::uint64_t batch = std::min<std::uint64_t>(opts.goals_per_batch, opts.rel_goals - produced);
    std::vector<RelFuzzGoal> goals;
    std::vector<VC> all_vcs;
    std::vector<std::pair<std::size_t, std::size_t>> ranges;
    for (std::uint64_t k = 0; k < batch; ++k) {
      int arity = arities.empty() ? 2 : arities[(produced + k) % arities.size()];
      RelFuzzGoal goal = gen_rel_goal(g, arity);
      goal.goal.name = "r" + std::to_string(produced + k);
      maybe_dump(opts.dump_dir, goal.goal.name + ".rl", dump_rel_goal(goal, goal.goal.name));
      std::size_t begin = all_vcs.size();
      for (auto& vc : relational_vcs(goal.goal, {}, {}, opts.generator)) all_vcs.push_back(std::move(vc));
      ranges.emplace_back(begin, all_vcs.size());
      goals.push_back(std::move(goal));
    }
    SolverConfig solver = opts.solver;
    solver.per_check_millis = static_cast<std::uint64_t>(solver.timeout_seconds * 1000);
    std::vector<Verdict> verdicts = solve_many(all_vcs, solver);

    for (std::uint64_t k = 0; k < batch; ++k) {
      const RelFuzzGoal& goal = goals[k];
      GoalVerdicts gv = summarize(verdicts, ranges[k].first, ranges[k].second);
      ++stats.goals;
      if (gv.all_valid)
        ++stats.all_valid;
      else
        ++stats.not_proved;
      if (gv.any_unknown) ++stats.with_unknowns;

      GenConfig sampling = opts.gen;
      sampling.seed = opts.gen.seed * 2000003 + produced + k;
      auto violation =
          rel_oracle(goal.goal, {}, opts.oracle_samples, opts.fuel, sampling, goal.suggested);
      if (violation) {
        ++stats.oracle_violations;
        if (gv.all_valid) {
          ++stats.soundness_bugs;
          stats.bug_reports.push_back("goal " + goal.goal.name +
                                      ": all conditions valid but execution violates the postcondition\n" +
                                      dump_rel_goal(goal, goal.goal.name));
        }
      }
    }
    produced += batch;
  }
  return stats;
}

}  // namespace rlv
