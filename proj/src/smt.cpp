#include "rlv/smt.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <set>
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

}  // namespace

const char* verdict_name(VerdictKind k) {
  switch (k) {
    case VerdictKind::Valid: return "valid";
    case VerdictKind::Invalid: return "invalid";
    default: return "unknown";
  }
}

SolverConfig SolverConfig::from_env() {
  SolverConfig cfg;
  const char* env = std::getenv("RLV_SOLVER");
  cfg.executable = env && *env ? env : "z3";
  return cfg;
}

std::optional<std::string> find_solver(const SolverConfig& cfg) {
  const std::string& exe = cfg.executable;
  if (exe.find('/') != std::string::npos)
    return access(exe.c_str(), X_OK) == 0 ? std::optional<std::string>(exe) : std::nullopt;
  const char* path = std::getenv("PATH");
  if (!path) return std::nullopt;
  std::stringstream ss(path);
  std::string dir;
  while (std::getline(ss, dir, ':')) {
    if (dir.empty()) continue;
    std::string full = dir + "/" + exe;
    if (access(full.c_str(), X_OK) == 0) return full;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Emission

namespace {

bool symbol_ok(const std::string& s) {
  if (s.empty()) return false;
  auto head = [](char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; };
  auto rest = [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '~' || c == '!' || c == '.';
  };
  if (!head(s[0])) return false;
  for (char c : s)
    if (!rest(c)) return false;
  return true;
}

struct Emitter {
  std::ostringstream os;
  std::map<std::string, std::string> nat_ren;  // alpha-rename bound naturals to v!k
  std::uint64_t nat_counter = 0;
  std::set<std::string> state_scope;

  void term(const NatTermPtr& t) {
    std::visit(overloaded{
                   [&](const NatTerm::Lit& l) { os << l.value.get_str(); },
                   [&](const NatTerm::Var& v) {
                     auto it = nat_ren.find(v.name);
                     if (it == nat_ren.end()) throw std::logic_error("unbound variable in emission: " + v.name);
                     os << it->second;
                   },
                   [&](const NatTerm::Read& r) {
                     os << "(select ";
                     state(r.state);
                     os << ' ';
                     term(r.addr);
                     os << ')';
                   },
                   [&](const NatTerm::Bin& b) {
                     os << (b.op == ArithOp::Add ? "(+ " : b.op == ArithOp::Mul ? "(* " : "(monus ");
                     term(b.lhs);
                     os << ' ';
                     term(b.rhs);
                     os << ')';
                   },
               },
               t->node);
  }

  void state(const StateTermPtr& s) {
    std::visit(overloaded{
                   [&](const StateTerm::Var& v) {
                     if (!state_scope.count(v.name))
                       throw std::logic_error("unbound state variable in emission: " + v.name);
                     os << v.name;
                   },
                   [&](const StateTerm::Param& p) {
                     throw std::logic_error("open formula: parameter #" + std::to_string(p.index));
                   },
                   [&](const StateTerm::Write& w) {
                     os << "(store ";
                     state(w.state);
                     os << ' ';
                     term(w.addr);
                     os << ' ';
                     term(w.value);
                     os << ')';
                   },
               },
               s->node);
  }

  void nonneg_axiom(const std::string& name) {
    os << "(forall ((i!0 Int)) (<= 0 (select " << name << " i!0)))";
  }

  void formula(const FormulaPtr& f) {
    std::visit(
        overloaded{
            [&](const Formula::BoolLit& b) { os << (b.value ? "true" : "false"); },
            [&](const Formula::Cmp& c) {
              os << (c.op == CmpOp::Le ? "(<= " : "(= ");
              term(c.lhs);
              os << ' ';
              term(c.rhs);
              os << ')';
            },
            [&](const Formula::StateEq& e) {
              os << "(= ";
              state(e.lhs);
              os << ' ';
              state(e.rhs);
              os << ')';
            },
            [&](const Formula::Not& n) {
              os << "(not ";
              formula(n.body);
              os << ')';
            },
            [&](const Formula::And& a) {
              os << "(and ";
              formula(a.lhs);
              os << ' ';
              formula(a.rhs);
              os << ')';
            },
            [&](const Formula::Or& o) {
              os << "(or ";
              formula(o.lhs);
              os << ' ';
              formula(o.rhs);
              os << ')';
            },
            [&](const Formula::Implies& i) {
              os << "(=> ";
              formula(i.lhs);
              os << ' ';
              formula(i.rhs);
              os << ')';
            },
            [&](const Formula::QuantNat& q) {
              std::string fresh = "v!" + std::to_string(nat_counter++);
              auto saved = nat_ren;
              nat_ren[q.var] = fresh;
              if (q.is_forall) {
                os << "(forall ((" << fresh << " Int)) (=> (<= 0 " << fresh << ") ";
                formula(q.body);
                os << "))";
              } else {
                os << "(exists ((" << fresh << " Int)) (and (<= 0 " << fresh << ") ";
                formula(q.body);
                os << "))";
              }
              nat_ren = std::move(saved);
            },
            [&](const Formula::ForallState& q) {
              if (!symbol_ok(q.var)) throw std::logic_error("state variable not emittable: " + q.var);
              if (state_scope.count(q.var))
                throw std::logic_error("shadowed state variable in emission: " + q.var);
              state_scope.insert(q.var);
              os << "(forall ((" << q.var << " (Array Int Int))) (=> ";
              nonneg_axiom(q.var);
              os << ' ';
              formula(q.body);
              os << "))";
              state_scope.erase(q.var);
            },
        },
        f->node);
  }
};

struct EmitParts {
  std::vector<std::string> statevars;
  FormulaPtr matrix;
};

EmitParts peel(const VC& vc) {
  EmitParts parts;
  FormulaPtr f = vc.formula;
  while (const auto* q = std::get_if<Formula::ForallState>(&f->node)) {
    parts.statevars.push_back(q->var);
    f = q->body;
  }
  parts.matrix = f;
  return parts;
}

void emit_into(std::ostringstream& os, const VC& vc, const std::string& logic) {
  if (check_scopes(vc.formula, 0))
    throw std::logic_error("condition '" + vc.name + "' is not closed");
  EmitParts parts = peel(vc);
  os << "(set-logic " << logic << ")\n";
  os << "; vc " << vc.name << "\n";
  os << "(define-fun monus ((a Int) (b Int)) Int (ite (<= b a) (- a b) 0))\n";
  Emitter em;
  for (const auto& name : parts.statevars) {
    if (!symbol_ok(name)) throw std::logic_error("state variable not emittable: " + name);
    if (!em.state_scope.insert(name).second)
      throw std::logic_error("duplicate top-level state variable: " + name);
    os << "(declare-const " << name << " (Array Int Int))\n";
    os << "(assert (forall ((i!0 Int)) (<= 0 (select " << name << " i!0))))\n";
  }
  em.os << "(assert (not ";
  em.formula(parts.matrix);
  em.os << "))\n";
  os << em.os.str();
  os << "(check-sat)\n(get-model)\n";
}

}  // namespace

std::string emit_smt(const VC& vc, const std::string& logic) {
  std::ostringstream os;
  emit_into(os, vc, logic);
  return os.str();
}

std::vector<std::string> emit_statevars(const VC& vc) { return peel(vc).statevars; }

// ---------------------------------------------------------------------------
// Process driving

ProcessResult run_process(const std::string& exe, const std::vector<std::string>& args,
                          const std::string& input, double timeout_seconds) {
  ProcessResult result;
  int in_pipe[2], out_pipe[2], err_pipe[2];
  if (pipe(in_pipe) != 0 || pipe(out_pipe) != 0 || pipe(err_pipe) != 0) {
    result.spawn_failed = true;
    result.err = "pipe() failed";
    return result;
  }
  pid_t pid = fork();
  if (pid < 0) {
    result.spawn_failed = true;
    result.err = "fork() failed";
    return result;
  }
  if (pid == 0) {
    dup2(in_pipe[0], 0);
    dup2(out_pipe[1], 1);
    dup2(err_pipe[1], 2);
    close(in_pipe[0]);
    close(in_pipe[1]);
    close(out_pipe[0]);
    close(out_pipe[1]);
    close(err_pipe[0]);
    close(err_pipe[1]);
    std::vector<char*> argv;
    argv.push_back(const_cast<char*>(exe.c_str()));
    for (const auto& a : args) argv.push_back(const_cast<char*>(a.c_str()));
    argv.push_back(nullptr);
    execvp(exe.c_str(), argv.data());
    const char* msg = "exec failed\n";
    ssize_t ignored = write(2, msg, std::strlen(msg));
    (void)ignored;
    _exit(127);
  }
  close(in_pipe[0]);
  close(out_pipe[1]);
  close(err_pipe[1]);

  fcntl(in_pipe[1], F_SETFL, O_NONBLOCK);
  fcntl(out_pipe[0], F_SETFL, O_NONBLOCK);
  fcntl(err_pipe[0], F_SETFL, O_NONBLOCK);
  // the child may exit before reading all input
  signal(SIGPIPE, SIG_IGN);

  auto deadline = std::chrono::steady_clock::now() + std::chrono::duration<double>(timeout_seconds);
  std::size_t written = 0;
  bool in_open = true, out_open = true, err_open = true;
  char buf[65536];

  while (out_open || err_open || in_open) {
    auto now = std::chrono::steady_clock::now();
    if (now >= deadline) {
      kill(pid, SIGKILL);
      result.timed_out = true;
      break;
    }
    int remaining_ms =
        static_cast<int>(std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count()) + 1;

    struct pollfd fds[3];
    int nfds = 0;
    int in_ix = -1, out_ix = -1, err_ix = -1;
    if (in_open) {
      in_ix = nfds;
      fds[nfds++] = {in_pipe[1], POLLOUT, 0};
    }
    if (out_open) {
      out_ix = nfds;
      fds[nfds++] = {out_pipe[0], POLLIN, 0};
    }
    if (err_open) {
      err_ix = nfds;
      fds[nfds++] = {err_pipe[0], POLLIN, 0};
    }
    int rc = poll(fds, static_cast<nfds_t>(nfds), remaining_ms > 200 ? 200 : remaining_ms);
    if (rc < 0 && errno != EINTR) break;

    if (in_ix >= 0 && (fds[in_ix].revents & (POLLOUT | POLLERR | POLLHUP))) {
      if (written >= input.size() || (fds[in_ix].revents & (POLLERR | POLLHUP))) {
        close(in_pipe[1]);
        in_open = false;
      } else {
        ssize_t n = write(in_pipe[1], input.data() + written, input.size() - written);
        if (n > 0) written += static_cast<std::size_t>(n);
        if (n < 0 && errno != EAGAIN && errno != EINTR) {
          close(in_pipe[1]);
          in_open = false;
        }
        if (written >= input.size()) {
          close(in_pipe[1]);
          in_open = false;
        }
      }
    }
    auto drain = [&](int ix, int fd, bool& open, std::string& sink) {
      if (ix < 0 || !(fds[ix].revents & (POLLIN | POLLHUP | POLLERR))) return;
      for (;;) {
        ssize_t n = read(fd, buf, sizeof buf);
        if (n > 0) {
          sink.append(buf, static_cast<std::size_t>(n));
          continue;
        }
        if (n == 0) {
          close(fd);
          open = false;
        } else if (errno != EAGAIN && errno != EINTR) {
          close(fd);
          open = false;
        }
        break;
      }
    };
    drain(out_ix, out_pipe[0], out_open, result.out);
    drain(err_ix, err_pipe[0], err_open, result.err);
  }

  if (in_open) close(in_pipe[1]);
  if (out_open) close(out_pipe[0]);
  if (err_open) close(err_pipe[0]);

  int status = 0;
  waitpid(pid, &status, 0);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  if (result.exit_code == 127 && result.err.find("exec failed") != std::string::npos)
    result.spawn_failed = true;
  return result;
}

// ---------------------------------------------------------------------------
// Solver output parsing

namespace {

struct SExpr {
  std::string atom;  // empty for lists
  std::vector<SExpr> items;
  bool is_list = false;

  bool is_atom(const char* s) const { return !is_list && atom == s; }
};

struct SexprParser {
  const std::string& text;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size()) {
      char c = text[pos];
      if (c == ';') {
        while (pos < text.size() && text[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos;
      } else {
        break;
      }
    }
  }

  std::optional<SExpr> next() {
    skip_ws();
    if (pos >= text.size()) return std::nullopt;
    char c = text[pos];
    if (c == '(') {
      ++pos;
      SExpr list;
      list.is_list = true;
      for (;;) {
        skip_ws();
        if (pos >= text.size()) return std::nullopt;  // unbalanced
        if (text[pos] == ')') {
          ++pos;
          return list;
        }
        auto item = next();
        if (!item) return std::nullopt;
        list.items.push_back(std::move(*item));
      }
    }
    if (c == ')') {
      ++pos;  // stray close; treat as empty atom
      return SExpr{")", {}, false};
    }
    if (c == '"') {
      std::size_t j = pos + 1;
      std::string s = "\"";
      while (j < text.size()) {
        s += text[j];
        if (text[j] == '"') {
          if (j + 1 < text.size() && text[j + 1] == '"') {
            s += '"';
            j += 2;
            continue;
          }
          ++j;
          break;
        }
        ++j;
      }
      pos = j;
      return SExpr{s, {}, false};
    }
    std::size_t j = pos;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j])) && text[j] != '(' &&
           text[j] != ')' && text[j] != ';')
      ++j;
    SExpr a{text.substr(pos, j - pos), {}, false};
    pos = j;
    return a;
  }
};

bool parse_int(const SExpr& e, Nat& out) {
  if (!e.is_list) {
    const std::string& s = e.atom;
    if (s.empty()) return false;
    for (char c : s)
      if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    out = Nat(s);
    return true;
  }
  if (e.items.size() == 2 && e.items[0].is_atom("-")) {
    Nat inner;
    if (!parse_int(e.items[1], inner)) return false;
    out = -inner;
    return true;
  }
  return false;
}

struct DefineFun {
  std::vector<std::string> params;
  const SExpr* body = nullptr;
};

using Defines = std::map<std::string, DefineFun>;
using LetEnv = std::map<std::string, const SExpr*>;

bool eval_int_expr(const SExpr& e, Nat& out) { return parse_int(e, out); }

std::optional<std::string> eval_ite_chain(const SExpr& body, const std::string& param, ArrayModel& model);

std::optional<std::string> eval_array_expr(const SExpr& e, const Defines& defs, LetEnv lets,
                                           ArrayModel& model) {
  if (!e.is_list) {
    if (auto lit = lets.find(e.atom); lit != lets.end()) return eval_array_expr(*lit->second, defs, lets, model);
    auto it = defs.find(e.atom);
    if (it == defs.end()) return "unrecognized array term '" + e.atom + "'";
    if (it->second.params.empty()) return eval_array_expr(*it->second.body, defs, lets, model);
    return eval_ite_chain(*it->second.body, it->second.params[0], model);
  }
  if (!e.items.empty() && e.items[0].is_atom("let") && e.items.size() == 3 && e.items[1].is_list) {
    for (const auto& binding : e.items[1].items)
      if (binding.is_list && binding.items.size() == 2 && !binding.items[0].is_list)
        lets[binding.items[0].atom] = &binding.items[1];
    return eval_array_expr(e.items[2], defs, lets, model);
  }
  if (!e.items.empty() && e.items[0].is_atom("store") && e.items.size() == 4) {
    auto err = eval_array_expr(e.items[1], defs, lets, model);
    if (err) return err;
    Nat addr, val;
    if (!eval_int_expr(e.items[2], addr) || !eval_int_expr(e.items[3], val))
      return std::optional<std::string>("non-constant store in model");
    model.entries[addr] = val;  // outer stores shadow inner ones
    return std::nullopt;
  }
  if (!e.items.empty() && e.items[0].is_list && e.items[0].items.size() >= 2 &&
      e.items[0].items[0].is_atom("as") && e.items[0].items[1].is_atom("const") && e.items.size() == 2) {
    Nat base;
    if (!eval_int_expr(e.items[1], base)) return std::optional<std::string>("non-constant array base");
    model.base = base;
    return std::nullopt;
  }
  if (e.items.size() == 3 && e.items[0].is_atom("_") && e.items[1].is_atom("as-array")) {
    auto it = defs.find(e.items[2].atom);
    if (it == defs.end()) return "as-array references unknown function " + e.items[2].atom;
    if (it->second.params.size() != 1) return std::optional<std::string>("as-array function arity != 1");
    return eval_ite_chain(*it->second.body, it->second.params[0], model);
  }
  if (!e.items.empty() && e.items[0].is_atom("lambda") && e.items.size() == 3 && e.items[1].is_list &&
      e.items[1].items.size() == 1 && e.items[1].items[0].is_list && !e.items[1].items[0].items.empty()) {
    return eval_ite_chain(e.items[2], e.items[1].items[0].items[0].atom, model);
  }
  return std::optional<std::string>("unrecognized array term");
}

std::optional<std::string> eval_ite_chain(const SExpr& body, const std::string& param, ArrayModel& model) {
  const SExpr* cur = &body;
  for (;;) {
    Nat leaf;
    if (eval_int_expr(*cur, leaf)) {
      model.base = leaf;
      return std::nullopt;
    }
    if (cur->is_list && cur->items.size() == 4 && cur->items[0].is_atom("ite")) {
      const SExpr& cond = cur->items[1];
      Nat key, val;
      if (cond.is_list && cond.items.size() == 3 && cond.items[0].is_atom("=")) {
        const SExpr& a = cond.items[1];
        const SExpr& b = cond.items[2];
        bool ok = false;
        if (!a.is_list && a.atom == param)
          ok = parse_int(b, key);
        else if (!b.is_list && b.atom == param)
          ok = parse_int(a, key);
        if (ok && parse_int(cur->items[2], val)) {
          if (!model.entries.count(key)) model.entries[key] = val;
          cur = &cur->items[3];
          continue;
        }
      }
      return std::optional<std::string>("unsupported ite shape in model");
    }
    return std::optional<std::string>("unsupported array body in model");
  }
}

void collect_defines(const SExpr& e, Defines& defs) {
  if (!e.is_list) return;
  if (e.items.size() >= 5 && e.items[0].is_atom("define-fun") && !e.items[1].is_list) {
    DefineFun df;
    if (e.items[2].is_list) {
      for (const auto& p : e.items[2].items)
        if (p.is_list && !p.items.empty()) df.params.push_back(p.items[0].atom);
    }
    df.body = &e.items.back();
    defs[e.items[1].atom] = df;
    return;
  }
  for (const auto& item : e.items) collect_defines(item, defs);
}

}  // namespace

ModelParseResult parse_model(const std::string& solver_output, const std::vector<std::string>& statevars) {
  ModelParseResult result;
  SexprParser p{solver_output};
  std::vector<SExpr> top;
  while (auto e = p.next()) top.push_back(std::move(*e));

  Defines defs;
  for (const auto& e : top) collect_defines(e, defs);

  for (const auto& name : statevars) {
    auto it = defs.find(name);
    if (it == defs.end()) {
      // a variable the solver left unconstrained defaults to the zero state
      result.arrays[name] = ArrayModel{};
      result.fragments[name] = MemState{};
      continue;
    }
    ArrayModel model;
    std::optional<std::string> err;
    if (it->second.params.empty())
      err = eval_array_expr(*it->second.body, defs, {}, model);
    else
      err = eval_ite_chain(*it->second.body, it->second.params[0], model);
    if (err) {
      result.error = "model for " + name + ": " + *err;
      return result;
    }
    if (sgn(model.base) < 0) {
      result.error = "model for " + name + ": negative base value " + model.base.get_str() +
                     " violates the nonnegativity axiom";
      return result;
    }
    std::map<Nat, Nat> clean;
    for (const auto& [addr, val] : model.entries) {
      if (sgn(addr) < 0) continue;  // outside the address space, never read
      if (sgn(val) < 0) {
        result.error = "model for " + name + ": negative value " + val.get_str() + " at address " +
                       addr.get_str() + " violates the nonnegativity axiom";
        return result;
      }
      clean[addr] = val;
    }
    model.entries = std::move(clean);
    result.arrays[name] = model;
    result.fragments[name] = MemState(result.arrays[name].entries);
  }
  return result;
}

// ---------------------------------------------------------------------------
// solve / solve_many

namespace {

std::string first_status_token(const std::string& out) {
  std::stringstream ss(out);
  std::string line;
  while (std::getline(ss, line)) {
    // trim
    std::size_t b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    std::size_t e = line.find_last_not_of(" \t\r");
    std::string t = line.substr(b, e - b + 1);
    if (t == "sat" || t == "unsat" || t == "unknown") return t;
  }
  return "";
}

Verdict classify(const VC& vc, const ProcessResult& pr, double seconds) {
  Verdict v;
  v.seconds = seconds;
  if (pr.spawn_failed) {
    v.kind = VerdictKind::Unknown;
    v.reason = UnknownReason::ParseFailure;
    v.solver_output = "solver could not be started: " + pr.err;
    return v;
  }
  if (pr.timed_out) {
    v.kind = VerdictKind::Unknown;
    v.reason = UnknownReason::Timeout;
    return v;
  }
  std::string status = first_status_token(pr.out);
  if (status == "unsat") {
    v.kind = VerdictKind::Valid;
    return v;
  }
  if (status == "unknown") {
    v.kind = VerdictKind::Unknown;
    v.reason = UnknownReason::SolverUnknown;
    return v;
  }
  if (status == "sat") {
    v.kind = VerdictKind::Invalid;
    auto parsed = parse_model(pr.out, emit_statevars(vc));
    if (parsed.error) {
      v.kind = VerdictKind::Unknown;
      v.reason = UnknownReason::ParseFailure;
      v.solver_output = *parsed.error + "\n" + pr.out;
      return v;
    }
    v.model = std::move(parsed.fragments);
    v.arrays = std::move(parsed.arrays);
    return v;
  }
  v.kind = VerdictKind::Unknown;
  v.reason = UnknownReason::ParseFailure;
  v.solver_output = pr.out + pr.err;
  return v;
}

}  // namespace

Verdict solve(const VC& vc, const SolverConfig& cfg) {
  if (is_trivially_true(vc.formula)) {
    Verdict v;
    v.kind = VerdictKind::Valid;
    v.trivial = true;
    return v;
  }
  std::string script = emit_smt(vc, cfg.logic);
  auto start = std::chrono::steady_clock::now();
  ProcessResult pr = run_process(cfg.executable, cfg.extra_args, script, cfg.timeout_seconds);
  double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return classify(vc, pr, seconds);
}

std::vector<Verdict> solve_many(const std::vector<VC>& vcs, const SolverConfig& cfg) {
  std::vector<Verdict> verdicts(vcs.size());
  std::vector<std::size_t> pending;  // indices that need the solver
  std::ostringstream script;
  for (std::size_t i = 0; i < vcs.size(); ++i) {
    if (is_trivially_true(vcs[i].formula)) {
      verdicts[i].kind = VerdictKind::Valid;
      verdicts[i].trivial = true;
      continue;
    }
    if (!pending.empty()) script << "(reset)\n";
    if (cfg.per_check_millis > 0)
      script << "(set-option :timeout " << cfg.per_check_millis << ")\n";
    emit_into(script, vcs[i], cfg.logic);
    pending.push_back(i);
  }
  if (pending.empty()) return verdicts;

  double budget = cfg.timeout_seconds * static_cast<double>(pending.size());
  auto start = std::chrono::steady_clock::now();
  ProcessResult pr = run_process(cfg.executable, cfg.extra_args, script.str(), budget);
  double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (pr.spawn_failed) {
    for (auto ix : pending) {
      verdicts[ix].kind = VerdictKind::Unknown;
      verdicts[ix].reason = UnknownReason::ParseFailure;
      verdicts[ix].solver_output = "solver could not be started: " + pr.err;
    }
    return verdicts;
  }

  // Walk the concatenated output: one sat/unsat/unknown token per check, with
  // model or error s-expressions interleaved.
  SexprParser sp{pr.out};
  std::vector<std::pair<std::string, std::string>> answers;  // status, model text
  std::function<void(const SExpr&, std::string&)> render = [&](const SExpr& x, std::string& out) {
    if (!x.is_list) {
      out += x.atom;
      out += ' ';
      return;
    }
    out += '(';
    for (const auto& item : x.items) render(item, out);
    out += ") ";
  };
  while (auto e = sp.next()) {
    if (!e->is_list && (e->atom == "sat" || e->atom == "unsat" || e->atom == "unknown")) {
      answers.emplace_back(e->atom, "");
    } else if (e->is_list && !answers.empty()) {
      if (!e->items.empty() && e->items[0].is_atom("error")) continue;
      if (answers.back().first == "sat" && answers.back().second.empty()) {
        std::string text;
        render(*e, text);
        answers.back().second = std::move(text);
      }
    }
  }

  for (std::size_t k = 0; k < pending.size(); ++k) {
    std::size_t ix = pending[k];
    Verdict& v = verdicts[ix];
    v.seconds = seconds / static_cast<double>(pending.size());
    if (k >= answers.size()) {
      v.kind = VerdictKind::Unknown;
      v.reason = pr.timed_out ? UnknownReason::Timeout : UnknownReason::ParseFailure;
      if (v.reason == UnknownReason::ParseFailure) v.solver_output = pr.out + pr.err;
      continue;
    }
    const auto& [status, model_text] = answers[k];
    if (status == "unsat") {
      v.kind = VerdictKind::Valid;
    } else if (status == "unknown") {
      v.kind = VerdictKind::Unknown;
      v.reason = UnknownReason::SolverUnknown;
    } else {
      v.kind = VerdictKind::Invalid;
      auto parsed = parse_model(model_text, emit_statevars(vcs[ix]));
      if (parsed.error) {
        v.kind = VerdictKind::Unknown;
        v.reason = UnknownReason::ParseFailure;
        v.solver_output = *parsed.error;
      } else {
        v.model = std::move(parsed.fragments);
        v.arrays = std::move(parsed.arrays);
      }
    }
  }
  return verdicts;
}

}  // namespace rlv
