#pragma once

#include <string>
#include <vector>

#include "rlv/ast.hpp"

namespace rlv {

struct Span {
  int line = 0;
  int col = 0;
};

struct Diagnostic {
  Span where;
  std::string message;
};

std::string format_diagnostic(const std::string& file, const Diagnostic& d);

/// A named Hoare goal: {pre} commands[cmd] {post}.
struct HoareGoal {
  std::string name;
  Assertion pre;   // arity 1
  std::string cmd;  // reference into SourceModule::commands
  Assertion post;  // arity 1
  Span where;
};

/// A named relational goal over n command references.
struct RelGoalDecl {
  std::string name;
  std::vector<std::string> cmds;
  Assertion pre;   // arity n
  Assertion post;  // arity n
  Span where;
};

/// One verification session: procedures with contracts, named commands,
/// and the goals stated over them. Fully resolved: every reference is
/// checked before a SourceModule is produced.
struct SourceModule {
  ProcEnv procs;
  ContractEnv contracts;
  std::map<std::string, CommandPtr> commands;
  std::vector<HoareGoal> hoare_goals;
  std::vector<RelGoalDecl> rel_goals;

  const HoareGoal* find_hoare(const std::string& name) const;
  const RelGoalDecl* find_relation(const std::string& name) const;
};

bool equal(const SourceModule& a, const SourceModule& b);

}  // namespace rlv
