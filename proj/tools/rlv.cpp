#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "rlv/driver.hpp"
#include "rlv/interp.hpp"
#include "rlv/parser.hpp"
#include "rlv/pretty.hpp"

namespace {

using namespace rlv;

std::optional<SourceModule> load_module(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << path << ": cannot open file\n";
    return std::nullopt;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  ParseResult r = parse_module(buf.str());
  if (auto* m = std::get_if<SourceModule>(&r)) return std::move(*m);
  for (const auto& d : std::get<std::vector<Diagnostic>>(r))
    std::cerr << format_diagnostic(path, d) << "\n";
  return std::nullopt;
}

struct CommonFlags {
  std::string solver;
  double timeout = 10.0;
  std::string vcgen = "naive";
  std::uint64_t fuel = 10000;
  unsigned jobs = 1;
  bool json = false;

  void attach(CLI::App* cmd, bool with_json = true) {
    cmd->add_option("--solver", solver, "solver executable (default: $RLV_SOLVER or z3)");
    cmd->add_option("--timeout", timeout, "per-condition solver timeout in seconds")->check(CLI::PositiveNumber);
    cmd->add_option("--vcgen", vcgen, "condition generator: naive or opt")
        ->check(CLI::IsMember({"naive", "opt"}));
    cmd->add_option("--fuel", fuel, "interpreter fuel for countermodel confirmation");
    cmd->add_option("--jobs", jobs, "parallel solver processes")->check(CLI::PositiveNumber);
    if (with_json) cmd->add_flag("--json", json, "machine-readable report");
  }

  CheckOptions to_options() const {
    CheckOptions opts;
    opts.generator = vcgen == "opt" ? Generator::Optimized : Generator::Naive;
    opts.solver = SolverConfig::from_env();
    if (!solver.empty()) opts.solver.executable = solver;
    opts.solver.timeout_seconds = timeout;
    opts.fuel = fuel;
    opts.jobs = jobs;
    return opts;
  }
};

int require_solver(const SolverConfig& cfg) {
  if (!find_solver(cfg)) {
    std::cerr << "solver '" << cfg.executable << "' not found (set --solver or RLV_SOLVER)\n";
    return 2;
  }
  return 0;
}

int report_exit(const RunReport& report, bool json) {
  if (report.status == GoalStatus::Error) {
    std::cerr << "error: " << report.message << "\n";
    return 2;
  }
  std::cout << (json ? render_report_json(report) : render_report_text(report));
  return report.status == GoalStatus::Proved ? 0 : 1;
}

int cmd_check(const std::string& file, const std::string& goal, const CommonFlags& flags, bool relational) {
  auto m = load_module(file);
  if (!m) return 2;
  CheckOptions opts = flags.to_options();
  if (int rc = require_solver(opts.solver)) return rc;
  if (relational) {
    const RelGoalDecl* g = m->find_relation(goal);
    if (!g) {
      std::cerr << file << ": no relational goal named '" << goal << "'\n";
      return 2;
    }
    return report_exit(check_rel_goal(*m, *g, opts), flags.json);
  }
  const HoareGoal* g = m->find_hoare(goal);
  if (!g) {
    std::cerr << file << ": no hoare goal named '" << goal << "'\n";
    return 2;
  }
  return report_exit(check_hoare_goal(*m, *g, opts), flags.json);
}

int cmd_run(const std::string& file, const std::string& name, const std::string& mem, std::uint64_t fuel) {
  auto m = load_module(file);
  if (!m) return 2;
  CommandPtr cmd;
  if (auto it = m->commands.find(name); it != m->commands.end())
    cmd = it->second;
  else if (auto pit = m->procs.find(name); pit != m->procs.end())
    cmd = pit->second;
  else {
    std::cerr << file << ": no command or procedure named '" << name << "'\n";
    return 2;
  }
  MemState sigma;
  if (!mem.empty()) {
    std::stringstream ss(mem);
    std::string pair;
    while (std::getline(ss, pair, ',')) {
      auto eq = pair.find('=');
      auto numeric = [](const std::string& s) {
        if (s.empty()) return false;
        for (char c : s)
          if (!std::isdigit(static_cast<unsigned char>(c))) return false;
        return true;
      };
      if (eq == std::string::npos || !numeric(pair.substr(0, eq)) || !numeric(pair.substr(eq + 1))) {
        std::cerr << "--mem expects addr=value pairs separated by commas, got '" << pair << "'\n";
        return 2;
      }
      sigma = mem_update(sigma, Nat(pair.substr(0, eq)), Nat(pair.substr(eq + 1)));
    }
  }
  Outcome o = exec(cmd, sigma, m->procs, fuel);
  if (o.out_of_fuel()) {
    std::cout << "out of fuel after " << fuel << " steps\n";
    return 1;
  }
  bool first = true;
  for (const auto& [a, v] : o.state->bindings()) {
    if (!first) std::cout << ' ';
    first = false;
    std::cout << a.get_str() << '=' << v.get_str();
  }
  std::cout << "\n";
  return 0;
}

int cmd_emit(const std::string& file, const std::string& goal, const std::string& outdir,
             const CommonFlags& flags) {
  auto m = load_module(file);
  if (!m) return 2;
  Generator gen = flags.vcgen == "opt" ? Generator::Optimized : Generator::Naive;
  std::vector<VC> vcs;
  try {
    if (const HoareGoal* g = m->find_hoare(goal))
      vcs = build_hoare_vcs(*m, *g, gen);
    else if (const RelGoalDecl* g2 = m->find_relation(goal))
      vcs = build_rel_vcs(*m, *g2, gen);
    else {
      std::cerr << file << ": no goal named '" << goal << "'\n";
      return 2;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  std::error_code ec;
  std::filesystem::create_directories(outdir, ec);
  if (ec) {
    std::cerr << outdir << ": cannot create directory: " << ec.message() << "\n";
    return 2;
  }
  for (const auto& vc : vcs) {
    std::string path = outdir + "/" + vc.name + ".smt2";
    std::ofstream out(path, std::ios::binary);
    if (!out) {
      std::cerr << path << ": cannot write\n";
      return 2;
    }
    out << emit_smt(vc);
  }
  std::cout << "wrote " << vcs.size() << " conditions to " << outdir << "\n";
  return 0;
}

int cmd_fuzz(std::uint64_t seed, std::uint64_t hoare_count, std::uint64_t rel_count,
             std::uint64_t samples, std::uint32_t max_cmds, std::uint64_t max_address,
             std::uint64_t max_literal, const std::string& dump, const CommonFlags& flags) {
  FuzzOptions opts;
  opts.gen.seed = seed;
  opts.gen.max_commands = max_cmds;
  opts.gen.max_address = max_address;
  opts.gen.max_literal = max_literal;
  opts.hoare_goals = hoare_count;
  opts.rel_goals = rel_count;
  opts.oracle_samples = samples;
  opts.fuel = flags.fuel;
  opts.generator = flags.vcgen == "opt" ? Generator::Optimized : Generator::Naive;
  opts.solver = SolverConfig::from_env();
  if (!flags.solver.empty()) opts.solver.executable = flags.solver;
  opts.solver.timeout_seconds = flags.timeout;
  opts.dump_dir = dump;
  if (int rc = require_solver(opts.solver)) return rc;

  FuzzStats h = fuzz_hoare(opts);
  FuzzStats r = fuzz_rel(opts, {1, 2, 3});
  auto show = [](const char* label, const FuzzStats& s) {
    std::cout << label << ": " << s.goals << " goals, " << s.all_valid << " fully valid, " << s.not_proved
              << " not proved, " << s.with_unknowns << " with unknowns, " << s.oracle_violations
              << " oracle violations, " << s.soundness_bugs << " soundness bugs\n";
  };
  show("hoare", h);
  show("relational", r);
  for (const auto& bug : h.bug_reports) std::cerr << bug << "\n";
  for (const auto& bug : r.bug_reports) std::cerr << bug << "\n";
  return h.soundness_bugs + r.soundness_bugs == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rlv: a deductive verifier with relational goals over a pointer-aliasing while-language"};
  app.require_subcommand(1);

  std::string file, goal, outdir, mem, dump;
  CommonFlags check_flags, rcheck_flags, emit_flags, fuzz_flags;
  std::uint64_t run_fuel = 10000;
  std::uint64_t seed = 1, hoare_count = 100, rel_count = 30, samples = 64;
  std::uint32_t max_cmds = 6;
  std::uint64_t max_address = 8, max_literal = 32;

  CLI::App* check = app.add_subcommand("check", "prove a hoare goal");
  check->add_option("file", file)->required();
  check->add_option("goal", goal)->required();
  check_flags.attach(check);

  CLI::App* rcheck = app.add_subcommand("rcheck", "prove a relational goal");
  rcheck->add_option("file", file)->required();
  rcheck->add_option("goal", goal)->required();
  rcheck_flags.attach(rcheck);

  CLI::App* run = app.add_subcommand("run", "execute a named command");
  run->add_option("file", file)->required();
  run->add_option("command", goal)->required();
  run->add_option("--mem", mem, "initial state as addr=value,... (default: all zero)");
  run->add_option("--fuel", run_fuel, "execution fuel");

  CLI::App* emit = app.add_subcommand("emit-smt", "write one .smt2 script per condition");
  emit->add_option("file", file)->required();
  emit->add_option("goal", goal)->required();
  emit->add_option("outdir", outdir)->required();
  emit_flags.attach(emit, /*with_json=*/false);

  CLI::App* fuzz = app.add_subcommand("fuzz", "differential soundness testing against the interpreter");
  fuzz->add_option("--seed", seed, "generator seed");
  fuzz->add_option("--hoare", hoare_count, "number of hoare goals");
  fuzz->add_option("--rel", rel_count, "number of relational goals");
  fuzz->add_option("--samples", samples, "oracle samples per goal");
  fuzz->add_option("--max-commands", max_cmds, "program size bound");
  fuzz->add_option("--max-address", max_address, "address range bound");
  fuzz->add_option("--max-literal", max_literal, "literal bound");
  fuzz->add_option("--dump", dump, "write generated goals to this directory");
  fuzz_flags.attach(fuzz, /*with_json=*/false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (check->parsed()) return cmd_check(file, goal, check_flags, false);
    if (rcheck->parsed()) return cmd_check(file, goal, rcheck_flags, true);
    if (run->parsed()) return cmd_run(file, goal, mem, run_fuel);
    if (emit->parsed()) return cmd_emit(file, goal, outdir, emit_flags);
    if (fuzz->parsed())
      return cmd_fuzz(seed, hoare_count, rel_count, samples, max_cmds, max_address, max_literal, dump,
                      fuzz_flags);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
