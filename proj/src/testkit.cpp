#include "rlv/testkit.hpp"

#include <algorithm>

#include "rlv/interp.hpp"

namespace rlv {

Gen::Gen(const GenConfig& cfg) : cfg_(cfg), rng_(cfg.seed) {}

std::uint64_t Gen::below(std::uint64_t n) { return n <= 1 ? 0 : rng_() % n; }

ArithExprPtr Gen::aexp(unsigned depth) {
  if (depth > 0 && below(3) == 0) {
    static const ArithOp ops[] = {ArithOp::Add, ArithOp::Add, ArithOp::Monus, ArithOp::Monus, ArithOp::Mul};
    ArithOp op = ops[below(5)];
    return a_bin(op, aexp(depth - 1), aexp(depth - 1));
  }
  switch (below(8)) {
    case 0:
    case 1:
    case 2: return a_const(nat_of(below(cfg_.max_literal + 1)));
    case 3:
    case 4:
    case 5: return a_loc(nat_of(below(cfg_.max_address + 1)));
    case 6: return a_deref(nat_of(below(cfg_.max_address + 1)));
    default: return a_addr_of(nat_of(below(cfg_.max_address + 1)));
  }
}

BoolExprPtr Gen::bexp(unsigned depth) {
  if (depth > 0) {
    switch (below(6)) {
      case 0: return b_logic(BoolConn::And, bexp(depth - 1), bexp(depth - 1));
      case 1: return b_logic(BoolConn::Or, bexp(depth - 1), bexp(depth - 1));
      case 2: return b_not(bexp(depth - 1));
      default: break;
    }
  }
  if (below(8) == 0) return b_lit(below(2) == 0);
  CmpOp op = below(2) == 0 ? CmpOp::Le : CmpOp::Eq;
  return b_cmp(op, aexp(1), aexp(1));
}

CommandPtr Gen::atomic_command(unsigned depth, std::uint32_t budget) {
  for (;;) {
    switch (below(12)) {
      case 0:
        return c_skip();
      case 1:
      case 2:
      case 3:
      case 4:
        return c_assign(nat_of(below(cfg_.max_address + 1)), aexp(2));
      case 5:
      case 6:
        return c_indirect_assign(nat_of(below(cfg_.max_address + 1)), aexp(2));
      case 7:
        return c_assert(assertion(1));
      case 8:
      case 9:
        if (depth > 0)
          return c_if(bexp(1), command_list(std::max<std::uint32_t>(1, budget / 2), depth - 1),
                      command_list(std::max<std::uint32_t>(1, budget / 2), depth - 1));
        break;
      case 10:
        if (cfg_.allow_loops && depth > 0)
          // generated loops carry the trivial invariant; real invariants live
          // in the curated corpus
          return c_while(bexp(1), assertion_true(), command_list(std::max<std::uint32_t>(1, budget / 2), depth - 1));
        break;
      default:
        break;
    }
  }
}

CommandPtr Gen::command_list(std::uint32_t budget, unsigned depth) {
  std::uint32_t count = 1 + static_cast<std::uint32_t>(below(budget));
  std::vector<CommandPtr> cmds;
  cmds.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) cmds.push_back(atomic_command(depth, budget));
  return c_seq_all(cmds);
}

CommandPtr Gen::command() {
  if (cfg_.max_commands == 0) return c_skip();
  return command_list(cfg_.max_commands, 2);
}

NatTermPtr Gen::assertion_term(int arity, unsigned depth) {
  if (arity > 0 && below(2) == 0) {
    int param = 1 + static_cast<int>(below(static_cast<std::uint64_t>(arity)));
    NatTermPtr addr = depth > 0 && below(4) == 0 ? assertion_term(arity, 0)
                                                 : t_lit(nat_of(below(cfg_.max_address + 1)));
    return t_read(s_param(param), addr);
  }
  if (depth > 0 && below(3) == 0) {
    static const ArithOp ops[] = {ArithOp::Add, ArithOp::Monus, ArithOp::Mul};
    return t_bin(ops[below(3)], assertion_term(arity, depth - 1), assertion_term(arity, depth - 1));
  }
  return t_lit(nat_of(below(cfg_.max_literal + 1)));
}

FormulaPtr Gen::assertion_formula(int arity, unsigned depth) {
  if (depth > 0) {
    switch (below(6)) {
      case 0: return f_and(assertion_formula(arity, depth - 1), assertion_formula(arity, depth - 1));
      case 1: return f_or(assertion_formula(arity, depth - 1), assertion_formula(arity, depth - 1));
      case 2: return f_not(assertion_formula(arity, depth - 1));
      default: break;
    }
  }
  if (below(10) == 0) return f_bool(below(4) != 0);
  CmpOp op = below(2) == 0 ? CmpOp::Le : CmpOp::Eq;
  return f_cmp(op, assertion_term(arity, 1), assertion_term(arity, 1));
}

Assertion Gen::assertion(int arity) { return Assertion{arity, assertion_formula(arity, 2)}; }

MemState Gen::state() {
  MemState s;
  for (std::uint64_t a = 0; a <= cfg_.max_address; ++a)
    if (below(3) != 0) s = mem_update(s, nat_of(a), nat_of(below(cfg_.max_literal + 1)));
  return s;
}

MemState Gen::aliasing_state() {
  MemState s;
  for (std::uint64_t a = 0; a <= cfg_.max_address; ++a)
    if (below(4) != 0) s = mem_update(s, nat_of(a), nat_of(below(cfg_.max_address + 1)));
  return s;
}

CommandPtr gen_command(const GenConfig& cfg) {
  Gen g(cfg);
  return g.command();
}

// ---------------------------------------------------------------------------
// Goal generation

namespace {

/// Pins the whole observable footprint: at(k, i) = sigma(i) for i in 0..max.
FormulaPtr pin_state(int param, const MemState& sigma, std::uint64_t max_address) {
  std::vector<FormulaPtr> eqs;
  for (std::uint64_t a = 0; a <= max_address; ++a) {
    Nat value = sigma.lookup(nat_of(a));
    eqs.push_back(f_cmp(CmpOp::Eq, t_read(s_param(param), t_lit(nat_of(a))), t_lit(value)));
  }
  return f_conj(eqs);
}

/// A pinned initial state keeps every cell within the address range so that
/// dereferences never escape the pinned window.
MemState pinned_state(Gen& g) {
  MemState s;
  const GenConfig& cfg = g.config();
  for (std::uint64_t a = 0; a <= cfg.max_address; ++a)
    s = mem_update(s, nat_of(a), nat_of(g.below(cfg.max_address + 1)));
  return s;
}

FormulaPtr observed_facts(int param, const MemState& final_state, Gen& g) {
  std::vector<FormulaPtr> eqs;
  std::uint64_t picks = 1 + g.below(3);
  for (std::uint64_t i = 0; i < picks; ++i) {
    std::uint64_t a = g.below(g.config().max_address + 1);
    eqs.push_back(
        f_cmp(CmpOp::Eq, t_read(s_param(param), t_lit(nat_of(a))), t_lit(final_state.lookup(nat_of(a)))));
  }
  return f_conj(eqs);
}

}  // namespace

HoareFuzzGoal gen_hoare_goal(Gen& g) {
  HoareFuzzGoal out;
  out.cmd = g.command();
  std::uint64_t mode = g.below(10);
  Outcome pinned_run = Outcome::fuel_exhausted();
  MemState pinned_sigma;
  if (mode < 4) {
    pinned_sigma = pinned_state(g);
    pinned_run = exec(out.cmd, pinned_sigma, {}, 1u << 20);
  }
  if (mode < 4 && pinned_run.finished()) {
    // valid-by-construction: pin the initial footprint, state facts observed
    // after actually running the command
    out.pre = Assertion{1, pin_state(1, pinned_sigma, g.config().max_address)};
    out.post = Assertion{1, observed_facts(1, *pinned_run.state, g)};
    out.suggested.push_back(pinned_sigma);
    out.expected_valid = true;
  } else if (mode < 9) {
    out.pre = g.assertion(1);
    out.post = g.assertion(1);
  } else {
    out.pre = g.assertion(1);
    out.post = assertion_true(1);
    out.expected_valid = true;
  }
  return out;
}

RelFuzzGoal gen_rel_goal(Gen& g, int arity) {
  RelFuzzGoal out;
  out.goal.name = "fuzz";
  for (int i = 0; i < arity; ++i) out.goal.commands.push_back(g.command());
  std::uint64_t mode = g.below(10);
  bool pin_ok = mode < 4 && arity > 0;
  std::vector<MemState> initials, finals;
  if (pin_ok) {
    for (int i = 0; i < arity; ++i) {
      MemState sigma = pinned_state(g);
      Outcome o = exec(out.goal.commands[static_cast<std::size_t>(i)], sigma, {}, 1u << 20);
      if (!o.finished()) {
        pin_ok = false;
        break;
      }
      initials.push_back(std::move(sigma));
      finals.push_back(std::move(*o.state));
    }
  }
  if (pin_ok) {
    std::vector<FormulaPtr> pre_parts, post_parts;
    for (int i = 0; i < arity; ++i) {
      pre_parts.push_back(pin_state(i + 1, initials[static_cast<std::size_t>(i)], g.config().max_address));
      post_parts.push_back(observed_facts(i + 1, finals[static_cast<std::size_t>(i)], g));
    }
    // a couple of cross-state facts when they happen to hold
    if (arity >= 2) {
      for (std::uint64_t tries = 0; tries < 2; ++tries) {
        std::uint64_t a = g.below(g.config().max_address + 1);
        std::uint64_t b = g.below(g.config().max_address + 1);
        if (finals[0].lookup(nat_of(a)) == finals[1].lookup(nat_of(b)))
          post_parts.push_back(f_cmp(CmpOp::Eq, t_read(s_param(1), t_lit(nat_of(a))),
                                     t_read(s_param(2), t_lit(nat_of(b)))));
      }
    }
    out.goal.pre = Assertion{arity, f_conj(pre_parts)};
    out.goal.post = Assertion{arity, f_conj(post_parts)};
    out.suggested.push_back(initials);
    out.expected_valid = true;
  } else if (mode < 9) {
    out.goal.pre = g.assertion(arity);
    out.goal.post = g.assertion(arity);
  } else {
    out.goal.pre = g.assertion(arity);
    out.goal.post = assertion_true(arity);
    out.expected_valid = true;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Oracles

std::optional<OracleViolation> hoare_oracle(const Assertion& pre, const CommandPtr& c,
                                            const Assertion& post, const ProcEnv& psi,
                                            std::uint64_t samples, std::uint64_t fuel,
                                            const GenConfig& sampling, const std::vector<MemState>& seeds) {
  Gen g(sampling);
  auto try_state = [&](const MemState& sigma) -> std::optional<OracleViolation> {
    if (!eval_assertion(pre, {sigma}).value) return std::nullopt;
    Outcome o = exec(c, sigma, psi, fuel);
    if (o.out_of_fuel()) return std::nullopt;  // partial correctness: unfinished runs prove nothing
    if (eval_assertion(post, {*o.state}).value) return std::nullopt;
    return OracleViolation{{sigma}, {*o.state}};
  };
  for (const auto& sigma : seeds)
    if (auto v = try_state(sigma)) return v;
  for (std::uint64_t i = 0; i < samples; ++i) {
    MemState sigma = i % 2 == 0 ? g.state() : g.aliasing_state();
    if (auto v = try_state(sigma)) return v;
  }
  return std::nullopt;
}

std::optional<OracleViolation> rel_oracle(const RelationalGoal& g, const ProcEnv& psi,
                                          std::uint64_t samples, std::uint64_t fuel,
                                          const GenConfig& sampling,
                                          const std::vector<std::vector<MemState>>& seeds) {
  Gen sampler(sampling);
  std::size_t n = g.commands.size();
  auto try_tuple = [&](const std::vector<MemState>& sigmas) -> std::optional<OracleViolation> {
    if (sigmas.size() != n) return std::nullopt;
    if (!eval_assertion(g.pre, sigmas).value) return std::nullopt;
    std::vector<MemState> finals;
    finals.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      Outcome o = exec(g.commands[i], sigmas[i], psi, fuel);
      if (o.out_of_fuel()) return std::nullopt;
      finals.push_back(std::move(*o.state));
    }
    if (eval_assertion(g.post, finals).value) return std::nullopt;
    return OracleViolation{sigmas, finals};
  };
  for (const auto& tuple : seeds)
    if (auto v = try_tuple(tuple)) return v;
  for (std::uint64_t i = 0; i < samples; ++i) {
    std::vector<MemState> sigmas;
    sigmas.reserve(n);
    for (std::size_t k = 0; k < n; ++k)
      sigmas.push_back(i % 2 == 0 ? sampler.state() : sampler.aliasing_state());
    if (auto v = try_tuple(sigmas)) return v;
  }
  return std::nullopt;
}

}  // namespace rlv
