#include "rlv/parser.hpp"

#include <cctype>
#include <set>
#include <stdexcept>

namespace rlv {

namespace {

enum class Tok {
  Ident,
  Loc,   // xN
  Num,
  Assign,  // :=
  Semi,
  LBrace,
  RBrace,
  LParen,
  RParen,
  Comma,
  Dot,
  Star,
  Amp,
  Plus,
  Minus,
  Le,
  Lt,
  Ge,
  Gt,
  Eq,
  Ne,
  Bang,
  AndAnd,
  OrOr,
  Arrow,  // ->
  End,
};

struct Token {
  Tok kind;
  std::string text;
  Nat num;  // for Num and Loc
  Span span;
};

struct ParseAbort {
  Diagnostic diag;
};

[[noreturn]] void fail(Span where, std::string msg) { throw ParseAbort{Diagnostic{where, std::move(msg)}}; }

const std::set<std::string> kKeywords = {"skip", "assert", "if",   "else",    "while", "inv",  "call",
                                         "true", "false",  "forall", "exists", "at",    "proc", "pre",
                                         "post", "command", "hoare", "cmd",    "relation", "on"};

std::vector<Token> lex(const std::string& text) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto here = [&] { return Span{line, col}; };
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (text[i + k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    i += n;
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
      std::size_t j = i;
      while (j < text.size() && text[j] != '\n') ++j;
      advance(j - i);
      continue;
    }
    Span sp = here();
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      std::string digits = text.substr(i, j - i);
      out.push_back(Token{Tok::Num, digits, Nat(digits), sp});
      advance(j - i);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_'))
        ++j;
      std::string word = text.substr(i, j - i);
      bool is_loc = word.size() > 1 && word[0] == 'x';
      for (std::size_t k = 1; is_loc && k < word.size(); ++k)
        if (!std::isdigit(static_cast<unsigned char>(word[k]))) is_loc = false;
      if (is_loc)
        out.push_back(Token{Tok::Loc, word, Nat(word.substr(1)), sp});
      else
        out.push_back(Token{Tok::Ident, word, Nat(0), sp});
      advance(j - i);
      continue;
    }
    auto two = [&](char a, char b) { return c == a && i + 1 < text.size() && text[i + 1] == b; };
    if (two(':', '=')) {
      out.push_back(Token{Tok::Assign, ":=", Nat(0), sp});
      advance(2);
    } else if (two('<', '=')) {
      out.push_back(Token{Tok::Le, "<=", Nat(0), sp});
      advance(2);
    } else if (two('>', '=')) {
      out.push_back(Token{Tok::Ge, ">=", Nat(0), sp});
      advance(2);
    } else if (two('!', '=')) {
      out.push_back(Token{Tok::Ne, "!=", Nat(0), sp});
      advance(2);
    } else if (two('&', '&')) {
      out.push_back(Token{Tok::AndAnd, "&&", Nat(0), sp});
      advance(2);
    } else if (two('|', '|')) {
      out.push_back(Token{Tok::OrOr, "||", Nat(0), sp});
      advance(2);
    } else if (two('-', '>')) {
      out.push_back(Token{Tok::Arrow, "->", Nat(0), sp});
      advance(2);
    } else {
      Tok k;
      switch (c) {
        case ';': k = Tok::Semi; break;
        case '{': k = Tok::LBrace; break;
        case '}': k = Tok::RBrace; break;
        case '(': k = Tok::LParen; break;
        case ')': k = Tok::RParen; break;
        case ',': k = Tok::Comma; break;
        case '.': k = Tok::Dot; break;
        case '*': k = Tok::Star; break;
        case '&': k = Tok::Amp; break;
        case '+': k = Tok::Plus; break;
        case '-': k = Tok::Minus; break;
        case '<': k = Tok::Lt; break;
        case '>': k = Tok::Gt; break;
        case '=': k = Tok::Eq; break;
        case '!': k = Tok::Bang; break;
        default:
          fail(sp, std::string("unexpected character '") + c + "'");
      }
      out.push_back(Token{k, std::string(1, c), Nat(0), sp});
      advance(1);
    }
  }
  out.push_back(Token{Tok::End, "<eof>", Nat(0), here()});
  return out;
}

bool is_cmp(Tok t) {
  return t == Tok::Le || t == Tok::Lt || t == Tok::Ge || t == Tok::Gt || t == Tok::Eq || t == Tok::Ne;
}

struct CallSite {
  std::string target;
  Span span;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  SourceModule run() {
    SourceModule m;
    while (peek().kind != Tok::End) {
      const Token& t = peek();
      if (t.kind != Tok::Ident) fail(t.span, "expected a declaration (proc, command, hoare, relation)");
      if (t.text == "proc")
        parse_proc(m);
      else if (t.text == "command")
        parse_command_decl(m);
      else if (t.text == "hoare")
        parse_hoare(m);
      else if (t.text == "relation")
        parse_relation(m);
      else
        fail(t.span, "unknown declaration '" + t.text + "'");
    }
    resolve(m);
    if (!diags_.empty()) throw ParseAbort{diags_.front()};  // replaced by full list by caller
    return m;
  }

  const std::vector<Diagnostic>& diagnostics() const { return diags_; }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::vector<Diagnostic> diags_;
  std::vector<CallSite> call_sites_;
  std::vector<std::pair<std::string, Span>> cmd_refs_;
  std::set<std::string> body_names_;  // procs and commands share one namespace
  std::vector<std::string> quant_stack_;

  const Token& peek(std::size_t off = 0) const { return toks_[std::min(pos_ + off, toks_.size() - 1)]; }
  const Token& next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }

  const Token& expect(Tok kind, const std::string& what) {
    if (peek().kind != kind) fail(peek().span, "expected " + what + ", found '" + peek().text + "'");
    return toks_[pos_++];
  }

  void expect_kw(const std::string& kw) {
    if (peek().kind != Tok::Ident || peek().text != kw)
      fail(peek().span, "expected '" + kw + "', found '" + peek().text + "'");
    ++pos_;
  }

  std::string expect_name(const std::string& what) {
    const Token& t = peek();
    if (t.kind == Tok::Loc) fail(t.span, what + " must not look like a location (x<number>)");
    if (t.kind != Tok::Ident) fail(t.span, "expected " + what + ", found '" + t.text + "'");
    if (kKeywords.count(t.text)) fail(t.span, "'" + t.text + "' is a keyword and cannot name a " + what);
    ++pos_;
    return t.text;
  }

  // -- declarations ---------------------------------------------------------

  void declare_body_name(const std::string& name, Span sp) {
    if (!body_names_.insert(name).second) diags_.push_back({sp, "duplicate name '" + name + "'"});
  }

  void parse_proc(SourceModule& m) {
    expect_kw("proc");
    Span sp = peek().span;
    std::string name = expect_name("procedure name");
    declare_body_name(name, sp);
    expect_kw("pre");
    Assertion pre = parse_paren_assertion(1);
    expect_kw("post");
    Assertion post = parse_paren_assertion(1);
    CommandPtr body = parse_block();
    m.procs[name] = body;
    m.contracts[name] = Contract{std::move(pre), std::move(post)};
  }

  void parse_command_decl(SourceModule& m) {
    expect_kw("command");
    Span sp = peek().span;
    std::string name = expect_name("command name");
    declare_body_name(name, sp);
    m.commands[name] = parse_block();
  }

  void parse_hoare(SourceModule& m) {
    expect_kw("hoare");
    Span sp = peek().span;
    std::string name = expect_name("goal name");
    for (const auto& g : m.hoare_goals)
      if (g.name == name) diags_.push_back({sp, "duplicate name '" + name + "'"});
    expect_kw("pre");
    Assertion pre = parse_paren_assertion(1);
    expect_kw("cmd");
    Span ref_sp = peek().span;
    std::string cmd = expect_name("command name");
    cmd_refs_.emplace_back(cmd, ref_sp);
    expect_kw("post");
    Assertion post = parse_paren_assertion(1);
    m.hoare_goals.push_back(HoareGoal{name, std::move(pre), cmd, std::move(post), sp});
  }

  void parse_relation(SourceModule& m) {
    expect_kw("relation");
    Span sp = peek().span;
    std::string name = expect_name("goal name");
    for (const auto& g : m.rel_goals)
      if (g.name == name) diags_.push_back({sp, "duplicate name '" + name + "'"});
    expect_kw("on");
    expect(Tok::LParen, "'('");
    std::vector<std::string> cmds;
    if (peek().kind != Tok::RParen) {
      for (;;) {
        Span ref_sp = peek().span;
        cmds.push_back(expect_name("command name"));
        cmd_refs_.emplace_back(cmds.back(), ref_sp);
        if (peek().kind != Tok::Comma) break;
        ++pos_;
      }
    }
    expect(Tok::RParen, "')'");
    int arity = static_cast<int>(cmds.size());
    expect_kw("pre");
    Assertion pre = parse_paren_assertion(arity);
    expect_kw("post");
    Assertion post = parse_paren_assertion(arity);
    m.rel_goals.push_back(RelGoalDecl{name, std::move(cmds), std::move(pre), std::move(post), sp});
  }

  void resolve(SourceModule& m) {
    for (const auto& cs : call_sites_)
      if (!m.procs.count(cs.target)) diags_.push_back({cs.span, "unknown procedure '" + cs.target + "'"});
    for (const auto& [name, sp] : cmd_refs_)
      if (!m.commands.count(name)) diags_.push_back({sp, "unknown command '" + name + "'"});
  }

  // -- commands --------------------------------------------------------------

  CommandPtr parse_block() {
    expect(Tok::LBrace, "'{'");
    if (peek().kind == Tok::RBrace) {
      ++pos_;
      return c_skip();
    }
    std::vector<CommandPtr> cmds;
    cmds.push_back(parse_cmd());
    while (peek().kind == Tok::Semi) {
      ++pos_;
      if (peek().kind == Tok::RBrace) break;  // tolerate a trailing separator
      cmds.push_back(parse_cmd());
    }
    expect(Tok::RBrace, "'}' or ';'");
    return c_seq_all(cmds);
  }

  CommandPtr parse_cmd() {
    const Token& t = peek();
    if (t.kind == Tok::Loc) {
      Nat addr = t.num;
      ++pos_;
      expect(Tok::Assign, "':='");
      return c_assign(addr, parse_aexp());
    }
    if (t.kind == Tok::Star) {
      ++pos_;
      const Token& loc = expect(Tok::Loc, "a location");
      Nat addr = loc.num;
      expect(Tok::Assign, "':='");
      return c_indirect_assign(addr, parse_aexp());
    }
    if (t.kind == Tok::Ident) {
      if (t.text == "skip") {
        ++pos_;
        return c_skip();
      }
      if (t.text == "assert") {
        ++pos_;
        return c_assert(parse_paren_assertion(1));
      }
      if (t.text == "call") {
        ++pos_;
        Span sp = peek().span;
        std::string target = expect_name("procedure name");
        call_sites_.push_back(CallSite{target, sp});
        return c_call(target);
      }
      if (t.text == "if") {
        ++pos_;
        expect(Tok::LParen, "'('");
        BoolExprPtr cond = parse_bexp();
        expect(Tok::RParen, "')'");
        CommandPtr then_branch = parse_block();
        expect_kw("else");
        CommandPtr else_branch = parse_block();
        return c_if(cond, then_branch, else_branch);
      }
      if (t.text == "while") {
        ++pos_;
        expect(Tok::LParen, "'('");
        BoolExprPtr cond = parse_bexp();
        expect(Tok::RParen, "')'");
        expect_kw("inv");
        Assertion inv = parse_paren_assertion(1);
        CommandPtr body = parse_block();
        return c_while(cond, std::move(inv), body);
      }
    }
    fail(t.span, "expected a command, found '" + t.text + "'");
  }

  // -- arithmetic and Boolean expressions over locations ----------------------

  ArithExprPtr parse_aexp() {
    ArithExprPtr lhs = parse_aterm();
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      ArithOp op = next().kind == Tok::Plus ? ArithOp::Add : ArithOp::Monus;
      lhs = a_bin(op, lhs, parse_aterm());
    }
    return lhs;
  }

  ArithExprPtr parse_aterm() {
    ArithExprPtr lhs = parse_afactor();
    while (peek().kind == Tok::Star) {
      ++pos_;
      lhs = a_bin(ArithOp::Mul, lhs, parse_afactor());
    }
    return lhs;
  }

  ArithExprPtr parse_afactor() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Num:
        ++pos_;
        return a_const(t.num);
      case Tok::Loc:
        ++pos_;
        return a_loc(t.num);
      case Tok::Star: {
        ++pos_;
        const Token& loc = expect(Tok::Loc, "a location");
        return a_deref(loc.num);
      }
      case Tok::Amp: {
        ++pos_;
        const Token& loc = expect(Tok::Loc, "a location");
        return a_addr_of(loc.num);
      }
      case Tok::LParen: {
        ++pos_;
        ArithExprPtr inner = parse_aexp();
        expect(Tok::RParen, "')'");
        return inner;
      }
      default:
        fail(t.span, "expected an arithmetic expression, found '" + t.text + "'");
    }
  }

  /// Decides whether a '(' at the current position opens a comparison operand
  /// rather than a parenthesized Boolean/assertion formula: scan ahead for a
  /// comparison operator at bracket depth zero before any formula connective.
  bool paren_starts_comparison() const {
    int depth = 0;
    for (std::size_t off = 0;; ++off) {
      const Token& t = peek(off);
      switch (t.kind) {
        case Tok::LParen:
          ++depth;
          break;
        case Tok::RParen:
          if (--depth < 0) return false;
          break;
        case Tok::End:
          return false;
        default:
          if (depth == 0) {
            if (is_cmp(t.kind)) return true;
            if (t.kind == Tok::AndAnd || t.kind == Tok::OrOr || t.kind == Tok::Arrow ||
                t.kind == Tok::LBrace || t.kind == Tok::Semi)
              return false;
          }
      }
    }
  }

  BoolExprPtr parse_bexp() {
    BoolExprPtr lhs = parse_band();
    while (peek().kind == Tok::OrOr) {
      ++pos_;
      lhs = b_logic(BoolConn::Or, lhs, parse_band());
    }
    return lhs;
  }

  BoolExprPtr parse_band() {
    BoolExprPtr lhs = parse_bunit();
    while (peek().kind == Tok::AndAnd) {
      ++pos_;
      lhs = b_logic(BoolConn::And, lhs, parse_bunit());
    }
    return lhs;
  }

  BoolExprPtr parse_bunit() {
    const Token& t = peek();
    if (t.kind == Tok::Bang) {
      ++pos_;
      return b_not(parse_bunit());
    }
    if (t.kind == Tok::Ident && (t.text == "true" || t.text == "false")) {
      ++pos_;
      return b_lit(t.text == "true");
    }
    if (t.kind == Tok::LParen && !paren_starts_comparison()) {
      ++pos_;
      BoolExprPtr inner = parse_bexp();
      expect(Tok::RParen, "')'");
      return inner;
    }
    ArithExprPtr lhs = parse_aexp();
    const Token& op = peek();
    if (!is_cmp(op.kind)) fail(op.span, "expected a comparison operator, found '" + op.text + "'");
    ++pos_;
    ArithExprPtr rhs = parse_aexp();
    switch (op.kind) {
      case Tok::Le: return b_cmp(CmpOp::Le, lhs, rhs);
      case Tok::Eq: return b_cmp(CmpOp::Eq, lhs, rhs);
      case Tok::Lt: return b_not(b_cmp(CmpOp::Le, rhs, lhs));
      case Tok::Gt: return b_not(b_cmp(CmpOp::Le, lhs, rhs));
      case Tok::Ge: return b_cmp(CmpOp::Le, rhs, lhs);
      case Tok::Ne: return b_not(b_cmp(CmpOp::Eq, lhs, rhs));
      default: fail(op.span, "unreachable");
    }
  }

  // -- assertion formulas -----------------------------------------------------

  Assertion parse_paren_assertion(int arity) {
    expect(Tok::LParen, "'('");
    FormulaPtr body = parse_formula(arity);
    expect(Tok::RParen, "')'");
    return Assertion{arity, body};
  }

  FormulaPtr parse_formula(int arity) { return parse_f_imp(arity); }

  FormulaPtr parse_f_imp(int arity) {
    FormulaPtr lhs = parse_f_or(arity);
    if (peek().kind == Tok::Arrow) {
      ++pos_;
      return f_implies(lhs, parse_f_imp(arity));
    }
    return lhs;
  }

  FormulaPtr parse_f_or(int arity) {
    FormulaPtr lhs = parse_f_and(arity);
    while (peek().kind == Tok::OrOr) {
      ++pos_;
      lhs = f_or(lhs, parse_f_and(arity));
    }
    return lhs;
  }

  FormulaPtr parse_f_and(int arity) {
    FormulaPtr lhs = parse_f_unit(arity);
    while (peek().kind == Tok::AndAnd) {
      ++pos_;
      lhs = f_and(lhs, parse_f_unit(arity));
    }
    return lhs;
  }

  FormulaPtr parse_f_unit(int arity) {
    const Token& t = peek();
    if (t.kind == Tok::Bang) {
      ++pos_;
      return f_not(parse_f_unit(arity));
    }
    if (t.kind == Tok::Ident && (t.text == "forall" || t.text == "exists")) {
      bool is_forall = t.text == "forall";
      ++pos_;
      const Token& v = peek();
      if (v.kind == Tok::Loc) fail(v.span, "quantified variable must not look like a location");
      std::string var = expect_name("quantified variable");
      expect(Tok::Dot, "'.'");
      quant_stack_.push_back(var);
      FormulaPtr body = parse_f_imp(arity);  // quantifier scope extends right
      quant_stack_.pop_back();
      return is_forall ? f_forall_nat(var, body) : f_exists_nat(var, body);
    }
    if (t.kind == Tok::Ident && (t.text == "true" || t.text == "false")) {
      ++pos_;
      return f_bool(t.text == "true");
    }
    if (t.kind == Tok::LParen && !paren_starts_comparison()) {
      ++pos_;
      FormulaPtr inner = parse_formula(arity);
      expect(Tok::RParen, "')'");
      return inner;
    }
    NatTermPtr lhs = parse_term(arity);
    const Token& op = peek();
    if (!is_cmp(op.kind)) fail(op.span, "expected a comparison operator, found '" + op.text + "'");
    ++pos_;
    NatTermPtr rhs = parse_term(arity);
    switch (op.kind) {
      case Tok::Le: return f_cmp(CmpOp::Le, lhs, rhs);
      case Tok::Eq: return f_cmp(CmpOp::Eq, lhs, rhs);
      case Tok::Lt: return f_not(f_cmp(CmpOp::Le, rhs, lhs));
      case Tok::Gt: return f_not(f_cmp(CmpOp::Le, lhs, rhs));
      case Tok::Ge: return f_cmp(CmpOp::Le, rhs, lhs);
      case Tok::Ne: return f_not(f_cmp(CmpOp::Eq, lhs, rhs));
      default: fail(op.span, "unreachable");
    }
  }

  NatTermPtr parse_term(int arity) {
    NatTermPtr lhs = parse_tprod(arity);
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      ArithOp op = next().kind == Tok::Plus ? ArithOp::Add : ArithOp::Monus;
      lhs = t_bin(op, lhs, parse_tprod(arity));
    }
    return lhs;
  }

  NatTermPtr parse_tprod(int arity) {
    NatTermPtr lhs = parse_tatom(arity);
    while (peek().kind == Tok::Star) {
      ++pos_;
      lhs = t_bin(ArithOp::Mul, lhs, parse_tatom(arity));
    }
    return lhs;
  }

  NatTermPtr parse_tatom(int arity) {
    const Token& t = peek();
    if (t.kind == Tok::Num) {
      ++pos_;
      return t_lit(t.num);
    }
    if (t.kind == Tok::Loc)
      fail(t.span, "locations are not assertion terms; read memory with at(...)");
    if (t.kind == Tok::Ident && t.text == "at") {
      Span sp = t.span;
      ++pos_;
      expect(Tok::LParen, "'('");
      int index = 1;
      if (peek().kind == Tok::Num && peek(1).kind == Tok::Comma) {
        if (peek().num < 1 || peek().num > 64) fail(peek().span, "state index out of range");
        index = static_cast<int>(peek().num.get_ui());
        pos_ += 2;
      }
      if (index > arity || arity == 0)
        fail(sp, "state read at(" + std::to_string(index) + ", ...) exceeds assertion arity " +
                     std::to_string(arity));
      NatTermPtr addr = parse_term(arity);
      expect(Tok::RParen, "')'");
      return t_read(s_param(index), addr);
    }
    if (t.kind == Tok::Ident && !kKeywords.count(t.text)) {
      for (auto it = quant_stack_.rbegin(); it != quant_stack_.rend(); ++it)
        if (*it == t.text) {
          ++pos_;
          return t_var(t.text);
        }
      fail(t.span, "unbound variable '" + t.text + "'");
    }
    if (t.kind == Tok::LParen) {
      ++pos_;
      NatTermPtr inner = parse_term(arity);
      expect(Tok::RParen, "')'");
      return inner;
    }
    fail(t.span, "expected a term, found '" + t.text + "'");
  }
};

}  // namespace

ParseResult parse_module(const std::string& text) {
  std::vector<Token> toks;
  try {
    toks = lex(text);
  } catch (const ParseAbort& a) {
    return std::vector<Diagnostic>{a.diag};
  }
  Parser p(std::move(toks));
  try {
    SourceModule m = p.run();
    return m;
  } catch (const ParseAbort& a) {
    std::vector<Diagnostic> ds = p.diagnostics();
    if (ds.empty()) ds.push_back(a.diag);
    return ds;
  }
}

SourceModule parse_module_or_throw(const std::string& text, const std::string& filename) {
  ParseResult r = parse_module(text);
  if (auto* m = std::get_if<SourceModule>(&r)) return std::move(*m);
  const auto& ds = std::get<std::vector<Diagnostic>>(r);
  std::string msg;
  for (const auto& d : ds) {
    if (!msg.empty()) msg += "\n";
    msg += format_diagnostic(filename, d);
  }
  throw std::runtime_error(msg);
}

}  // namespace rlv
