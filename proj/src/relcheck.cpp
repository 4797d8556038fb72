#include "rlv/relcheck.hpp"

#include <functional>
#include <stdexcept>

namespace rlv {

namespace {

using RelCont = std::function<FormulaPtr(const std::vector<StateTermPtr>&)>;

/// Def-by-induction fold: the last command is handled first, its post-state
/// joins the tuple handed to the continuation once the prefix is done.
FormulaPtr tr_fold(const std::vector<CommandPtr>& cs, const std::vector<StateTermPtr>& ss,
                   const ContractEnv& phi, StateNamer& names, Generator gen, std::size_t n,
                   const RelCont& k) {
  if (n == 0) return k({});
  const CommandPtr& last = cs[n - 1];
  return tc_cont(last, ss[n - 1], phi, names, gen, [&](const StateTermPtr& out) {
    return tr_fold(cs, ss, phi, names, gen, n - 1, [&](const std::vector<StateTermPtr>& prefix) {
      std::vector<StateTermPtr> outs = prefix;
      outs.push_back(out);
      return k(outs);
    });
  });
}

}  // namespace

FormulaPtr tr(const std::vector<CommandPtr>& cs, const std::vector<StateTermPtr>& ss, const ContractEnv& phi,
              const Assertion& post, StateNamer& names, Generator gen) {
  if (cs.size() != ss.size()) throw std::invalid_argument("command/state sequence length mismatch");
  if (post.arity != static_cast<int>(cs.size()))
    throw std::invalid_argument("relational assertion arity does not match command count");
  return tr_fold(cs, ss, phi, names, gen, cs.size(),
                 [&](const std::vector<StateTermPtr>& outs) { return subst_states(post, outs); });
}

FormulaPtr tar(const std::vector<CommandPtr>& cs, const std::vector<StateTermPtr>& ss, const ContractEnv& phi,
               StateNamer& names, Generator gen) {
  if (cs.size() != ss.size()) throw std::invalid_argument("command/state sequence length mismatch");
  std::vector<FormulaPtr> parts;
  parts.reserve(cs.size());
  for (std::size_t i = 0; i < cs.size(); ++i) parts.push_back(ta(cs[i], ss[i], phi, names, gen));
  return f_conj(parts);
}

namespace {

void push_split_rel(std::vector<VC>& vcs, const FormulaPtr& whole, VcKind kind, const std::string& scope,
                    const std::string& goal, Span where) {
  std::size_t i = 0;
  for (auto& existing : vcs)
    if (existing.origin.kind == kind) ++i;
  for (auto& piece : split_conjuncts(whole)) {
    std::string name = goal + "." + vc_kind_name(kind) + "." + std::to_string(i++);
    vcs.push_back(VC{std::move(name), piece, VcOrigin{kind, scope, where}});
  }
}

}  // namespace

std::vector<VC> relational_vcs(const RelationalGoal& g, const ContractEnv& phi, const ProcEnv& psi,
                               Generator gen) {
  int n = static_cast<int>(g.commands.size());
  if (g.pre.arity != n || g.post.arity != n)
    throw std::invalid_argument("relational goal '" + g.name + "' has assertion arity != command count");
  if (auto err = assertion_check(g.pre))
    throw std::invalid_argument("ill-formed relational precondition: " + err->message);
  if (auto err = assertion_check(g.post))
    throw std::invalid_argument("ill-formed relational postcondition: " + err->message);
  if (phi.size() != psi.size()) throw std::invalid_argument("contract and procedure key sets differ");
  for (const auto& [name, body] : psi) {
    if (!phi.count(name)) throw std::invalid_argument("procedure without contract: '" + name + "'");
    if (!calls_bound(body, psi))
      throw std::invalid_argument("procedure '" + name + "' calls an undeclared procedure");
  }
  for (const auto& c : g.commands)
    if (!calls_bound(c, psi)) throw std::invalid_argument("goal command calls an undeclared procedure");

  StateNamer names;
  std::vector<VC> vcs;

  for (const auto& [name, contract] : phi) {
    StateTermPtr s0 = s_var(names.fresh());
    const std::string& s0name = std::get<StateTerm::Var>(s0->node).name;
    FormulaPtr aux = ta(psi.at(name), s0, phi, names, gen);
    FormulaPtr main = tc_cont(psi.at(name), s0, phi, names, gen,
                              [&](const StateTermPtr& out) { return subst_states(contract.post, {out}); });
    FormulaPtr whole =
        f_forall_state(s0name, f_implies(subst_states(contract.pre, {s0}), f_and(aux, main)));
    push_split_rel(vcs, whole, VcKind::Tf, name, g.name, g.where);
  }

  auto quantified_over_tuple = [&](const std::function<FormulaPtr(const std::vector<StateTermPtr>&)>& body) {
    std::vector<StateTermPtr> states;
    std::vector<std::string> bound;
    for (int i = 0; i < n; ++i) {
      states.push_back(s_var(names.fresh()));
      bound.push_back(std::get<StateTerm::Var>(states.back()->node).name);
    }
    FormulaPtr inner = body(states);
    for (int i = n - 1; i >= 0; --i) inner = f_forall_state(bound[static_cast<std::size_t>(i)], inner);
    return inner;
  };

  FormulaPtr aux = quantified_over_tuple([&](const std::vector<StateTermPtr>& states) {
    return f_implies(subst_states(g.pre, states), tar(g.commands, states, phi, names, gen));
  });
  push_split_rel(vcs, aux, VcKind::Tar, g.name, g.name, g.where);

  FormulaPtr main = quantified_over_tuple([&](const std::vector<StateTermPtr>& states) {
    return f_implies(subst_states(g.pre, states), tr(g.commands, states, phi, g.post, names, gen));
  });
  push_split_rel(vcs, main, VcKind::Tr, g.name, g.name, g.where);

  return vcs;
}

RelationalGoal resolve_relational_goal(const RelGoalDecl& decl, const SourceModule& m) {
  RelationalGoal g;
  g.name = decl.name;
  g.pre = decl.pre;
  g.post = decl.post;
  g.where = decl.where;
  for (const auto& ref : decl.cmds) {
    auto it = m.commands.find(ref);
    if (it == m.commands.end()) throw std::invalid_argument("unknown command '" + ref + "'");
    g.commands.push_back(it->second);
  }
  return g;
}

}  // namespace rlv
