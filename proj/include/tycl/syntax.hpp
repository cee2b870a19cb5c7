#pragma once

// ASCII surface syntax.
//
//   formulas   `*` tensor, `|` par, `+` plus, `&` with, `~x` dual atom,
//              `1`, `bot`, `top`, `0`. `*`/`&` bind tighter than `|`/`+`;
//              binaries associate to the left.
//   sequents   comma-separated formulas; the empty string is the empty sequent.
//   KA terms   `+` < `.` < postfix `*`; constants `1`, `0`.
//   RM terms   `\` and `/` (non-associative, loosest) < `\/` < `/\` < `.`;
//              constants `1`, `0`, `top`.
//   judgements `t1, ..., tk |- t`.
//   envs       one `ident : obj -> obj` binding per line, `#` starts a comment.
//
// `bot` and `top` are keywords and cannot name variables.

#include <cctype>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "formula.hpp"
#include "objects.hpp"
#include "terms.hpp"

namespace tycl {

struct SourceSpan {
  std::size_t line = 1;
  std::size_t column = 1;
  std::size_t length = 1;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(SourceSpan span, std::string expected, std::string found)
      : std::runtime_error("line " + std::to_string(span.line) + ", column " +
                           std::to_string(span.column) + ": expected " + expected + ", found " +
                           found),
        span_(span),
        expected_(std::move(expected)),
        found_(std::move(found)) {}

  const SourceSpan& span() const noexcept { return span_; }
  const std::string& expected() const noexcept { return expected_; }
  const std::string& found() const noexcept { return found_; }

 private:
  SourceSpan span_;
  std::string expected_;
  std::string found_;
};

class DuplicateBinding : public std::runtime_error {
 public:
  explicit DuplicateBinding(std::string var)
      : std::runtime_error("duplicate binding for variable '" + var + "'"), var_(std::move(var)) {}
  const std::string& variable() const noexcept { return var_; }

 private:
  std::string var_;
};

namespace detail {

struct Token {
  enum class Kind { Ident, Number, Symbol, End };
  Kind kind = Kind::End;
  std::string text;
  SourceSpan span;

  bool is(std::string_view sym) const { return kind == Kind::Symbol && text == sym; }
  bool is_word(std::string_view w) const {
    return (kind == Kind::Ident || kind == Kind::Number) && text == w;
  }
  std::string describe() const {
    if (kind == Kind::End) return "end of input";
    return "'" + text + "'";
  }
};

inline bool ident_start(unsigned char c) { return std::isalpha(c) || c == '_'; }
inline bool ident_char(unsigned char c) { return std::isalnum(c) || c == '_' || c == '\''; }

inline std::vector<Token> tokenize(std::string_view text) {
  static constexpr std::string_view kLong[] = {"|-", "->", "<=", "\\/", "/\\"};
  static constexpr std::string_view kShort = "()*|+&~.\\/,:={}";
  std::vector<Token> out;
  std::size_t line = 1, col = 1, i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < text.size()) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    Token t;
    t.span = {line, col, 1};
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < text.size() && ident_char(static_cast<unsigned char>(text[j]))) ++j;
      t.kind = Token::Kind::Ident;
      t.text = std::string(text.substr(i, j - i));
    } else if (std::isdigit(c)) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      t.kind = Token::Kind::Number;
      t.text = std::string(text.substr(i, j - i));
    } else {
      for (auto sym : kLong) {
        if (text.substr(i, sym.size()) == sym) {
          t.text = std::string(sym);
          break;
        }
      }
      if (t.text.empty() && kShort.find(static_cast<char>(c)) != std::string_view::npos)
        t.text = std::string(1, static_cast<char>(c));
      if (t.text.empty()) {
        std::string shown = std::isprint(c) ? std::string(1, static_cast<char>(c))
                                            : "byte 0x" + std::string(1, "0123456789abcdef"[c >> 4]) +
                                                  std::string(1, "0123456789abcdef"[c & 15]);
        throw ParseError(t.span, "a token", "'" + shown + "'");
      }
      t.kind = Token::Kind::Symbol;
    }
    t.span.length = t.text.size();
    advance(t.text.size());
    out.push_back(std::move(t));
  }
  Token end;
  end.span = {line, col, 1};
  out.push_back(std::move(end));
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(tokenize(text)) {}

  const Token& peek() const { return toks_[pos_]; }
  const Token& peek(std::size_t ahead) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  Token take() {
    Token t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  bool accept(std::string_view sym) {
    if (!peek().is(sym)) return false;
    take();
    return true;
  }
  void expect(std::string_view sym) {
    if (!accept(sym)) fail("'" + std::string(sym) + "'");
  }
  bool at_end() const { return peek().kind == Token::Kind::End; }
  void expect_end() {
    if (!at_end()) fail("end of input");
  }
  [[noreturn]] void fail(std::string expected) const {
    throw ParseError(peek().span, std::move(expected), peek().describe());
  }
  bool is_variable() const {
    const Token& t = peek();
    return t.kind == Token::Kind::Ident && t.text != "bot" && t.text != "top";
  }

  // formula := level1 ; level1 := level2 (("|"|"+") level2)* ;
  // level2 := atom (("*"|"&") atom)*
  Formula formula() {
    Formula f = formula_level2();
    for (;;) {
      if (accept("|")) {
        f = Formula::par(std::move(f), formula_level2());
      } else if (accept("+")) {
        f = Formula::plus(std::move(f), formula_level2());
      } else {
        return f;
      }
    }
  }

  Formula formula_level2() {
    Formula f = formula_atom();
    for (;;) {
      if (accept("*")) {
        f = Formula::tensor(std::move(f), formula_atom());
      } else if (accept("&")) {
        f = Formula::with(std::move(f), formula_atom());
      } else {
        return f;
      }
    }
  }

  Formula formula_atom() {
    const Token& t = peek();
    if (accept("(")) {
      Formula f = formula();
      expect(")");
      return f;
    }
    if (accept("~")) {
      if (!is_variable()) fail("a variable after '~'");
      return Formula::dual(take().text);
    }
    if (t.is_word("1")) { take(); return Formula::one(); }
    if (t.is_word("0")) { take(); return Formula::zero(); }
    if (t.is_word("bot")) { take(); return Formula::bot(); }
    if (t.is_word("top")) { take(); return Formula::top(); }
    if (is_variable()) return Formula::atom(take().text);
    fail("a formula");
  }

  // kterm := ksum ; ksum := kdot ("+" kdot)* ; kdot := kstar ("." kstar)* ;
  // kstar := katom "*"*
  KaTerm ka_term() {
    KaTerm t = ka_dot();
    while (accept("+")) t = ka::plus(std::move(t), ka_dot());
    return t;
  }
  KaTerm ka_dot() {
    KaTerm t = ka_star();
    while (accept(".")) t = ka::dot(std::move(t), ka_star());
    return t;
  }
  KaTerm ka_star() {
    KaTerm t = ka_atom();
    while (accept("*")) t = ka::star(std::move(t));
    return t;
  }
  KaTerm ka_atom() {
    const Token& t = peek();
    if (accept("(")) {
      KaTerm k = ka_term();
      expect(")");
      return k;
    }
    if (t.is_word("1")) { take(); return ka::one(); }
    if (t.is_word("0")) { take(); return ka::zero(); }
    if (is_variable()) return ka::var(take().text);
    fail("a Kleene-algebra term");
  }

  // rterm := rjoin [("\" | "/") rjoin] ; rjoin := rmeet ("\/" rmeet)* ;
  // rmeet := rdot ("/\" rdot)* ; rdot := ratom ("." ratom)*
  RmTerm rm_term() {
    RmTerm t = rm_join();
    if (accept("\\")) {
      t = rm::ldiv(std::move(t), rm_join());
    } else if (accept("/")) {
      t = rm::rdiv(std::move(t), rm_join());
    } else {
      return t;
    }
    if (peek().is("\\") || peek().is("/")) fail("parentheses around a nested division");
    return t;
  }
  RmTerm rm_join() {
    RmTerm t = rm_meet();
    while (accept("\\/")) t = rm::join(std::move(t), rm_meet());
    return t;
  }
  RmTerm rm_meet() {
    RmTerm t = rm_dot();
    while (accept("/\\")) t = rm::meet(std::move(t), rm_dot());
    return t;
  }
  RmTerm rm_dot() {
    RmTerm t = rm_atom();
    while (accept(".")) t = rm::dot(std::move(t), rm_atom());
    return t;
  }
  RmTerm rm_atom() {
    const Token& t = peek();
    if (accept("(")) {
      RmTerm r = rm_term();
      expect(")");
      return r;
    }
    if (t.is_word("1")) { take(); return rm::unit(); }
    if (t.is_word("0")) { take(); return rm::zero(); }
    if (t.is_word("top")) { take(); return rm::top(); }
    if (is_variable()) return rm::var(take().text);
    fail("a residuated-lattice term");
  }

  std::string object_name() {
    const Token& t = peek();
    if (t.kind != Token::Kind::Ident && t.kind != Token::Kind::Number) fail("an object name");
    return take().text;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Formula parse_formula(std::string_view text) {
  detail::Parser p(text);
  Formula f = p.formula();
  p.expect_end();
  return f;
}

inline Sequent parse_sequent(std::string_view text) {
  detail::Parser p(text);
  Sequent s;
  if (p.at_end()) return s;
  s.push_back(p.formula());
  while (p.accept(",")) s.push_back(p.formula());
  p.expect_end();
  return s;
}

inline KaTerm parse_ka_term(std::string_view text) {
  detail::Parser p(text);
  KaTerm t = p.ka_term();
  p.expect_end();
  return t;
}

inline RmTerm parse_rm_term(std::string_view text) {
  detail::Parser p(text);
  RmTerm t = p.rm_term();
  p.expect_end();
  return t;
}

struct RmJudgement {
  std::vector<RmTerm> hyps;
  RmTerm goal;
};

inline RmJudgement parse_rm_judgement(std::string_view text) {
  detail::Parser p(text);
  std::vector<RmTerm> hyps;
  if (!p.peek().is("|-")) {
    hyps.push_back(p.rm_term());
    while (p.accept(",")) hyps.push_back(p.rm_term());
  }
  p.expect("|-");
  RmTerm goal = p.rm_term();
  p.expect_end();
  return {std::move(hyps), std::move(goal)};
}

/// One `lhs <= rhs` containment query over residuated-lattice terms.
struct RmInequation {
  RmTerm lhs;
  RmTerm rhs;
};

inline RmInequation parse_rm_inequation(std::string_view text) {
  detail::Parser p(text);
  RmTerm lhs = p.rm_term();
  p.expect("<=");
  RmTerm rhs = p.rm_term();
  p.expect_end();
  return {std::move(lhs), std::move(rhs)};
}

/// Splits text into lines with `#` comments stripped, keeping 1-based line
/// numbers so errors point into the original file.
inline std::vector<std::pair<std::size_t, std::string>> content_lines(std::string_view text) {
  std::vector<std::pair<std::size_t, std::string>> out;
  std::size_t lineno = 0, start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++lineno;
    std::string_view line = text.substr(start, end - start);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (line.find_first_not_of(" \t\r") != std::string_view::npos) out.emplace_back(lineno, line);
    start = end + 1;
  }
  return out;
}

inline TypeEnv parse_env(std::string_view text) {
  TypeEnv env;
  for (const auto& [lineno, line] : content_lines(text)) {
    try {
      detail::Parser p(line);
      if (!p.is_variable()) p.fail("a variable name");
      std::string var = p.take().text;
      p.expect(":");
      std::string from = p.object_name();
      p.expect("->");
      std::string to = p.object_name();
      p.expect_end();
      if (env.contains(var)) throw DuplicateBinding(var);
      env.emplace(std::move(var),
                  std::pair{ObjectTerm::constant(std::move(from)), ObjectTerm::constant(std::move(to))});
    } catch (const ParseError& e) {
      SourceSpan span = e.span();
      span.line = lineno;
      throw ParseError(span, e.expected(), e.found());
    }
  }
  return env;
}

// Rendering ---------------------------------------------------------------

namespace detail {
inline int level(const Formula& f) {
  switch (f.kind()) {
    case Connective::Par:
    case Connective::Plus: return 1;
    case Connective::Tensor:
    case Connective::With: return 2;
    default: return 3;
  }
}

inline const char* symbol(Connective c) {
  switch (c) {
    case Connective::Tensor: return " * ";
    case Connective::Par: return " | ";
    case Connective::Plus: return " + ";
    case Connective::With: return " & ";
    default: return "";
  }
}

inline void render(const Formula& f, std::string& out) {
  switch (f.kind()) {
    case Connective::Atom: out += f.name(); return;
    case Connective::Dual: out += '~'; out += f.name(); return;
    case Connective::One: out += '1'; return;
    case Connective::Bot: out += "bot"; return;
    case Connective::Zero: out += '0'; return;
    case Connective::Top: out += "top"; return;
    default: break;
  }
  const int lv = level(f);
  const Formula a = f.lhs(), b = f.rhs();
  const bool pa = level(a) < lv, pb = level(b) <= lv;
  if (pa) out += '(';
  render(a, out);
  if (pa) out += ')';
  out += symbol(f.kind());
  if (pb) out += '(';
  render(b, out);
  if (pb) out += ')';
}

inline int level(const KaTerm& t) {
  switch (t.op()) {
    case KaOp::Plus: return 1;
    case KaOp::Dot: return 2;
    case KaOp::Star: return 3;
    default: return 4;
  }
}

inline void render(const KaTerm& t, std::string& out) {
  switch (t.op()) {
    case KaOp::Var: out += t.name(); return;
    case KaOp::Zero: out += '0'; return;
    case KaOp::One: out += '1'; return;
    case KaOp::Star: {
      const KaTerm a = t.lhs();
      const bool p = level(a) < 3;
      if (p) out += '(';
      render(a, out);
      if (p) out += ')';
      out += '*';
      return;
    }
    default: break;
  }
  const int lv = level(t);
  const KaTerm a = t.lhs(), b = t.rhs();
  const bool pa = level(a) < lv, pb = level(b) <= lv;
  if (pa) out += '(';
  render(a, out);
  if (pa) out += ')';
  out += t.op() == KaOp::Plus ? " + " : ".";
  if (pb) out += '(';
  render(b, out);
  if (pb) out += ')';
}

inline int level(const RmTerm& t) {
  switch (t.op()) {
    case RmOp::LDiv:
    case RmOp::RDiv: return 1;
    case RmOp::Join: return 2;
    case RmOp::Meet: return 3;
    case RmOp::Dot: return 4;
    default: return 5;
  }
}

inline void render(const RmTerm& t, std::string& out) {
  const char* sym = "";
  switch (t.op()) {
    case RmOp::Var: out += t.name(); return;
    case RmOp::Unit: out += '1'; return;
    case RmOp::Zero: out += '0'; return;
    case RmOp::Top: out += "top"; return;
    case RmOp::Dot: sym = "."; break;
    case RmOp::LDiv: sym = " \\ "; break;
    case RmOp::RDiv: sym = " / "; break;
    case RmOp::Join: sym = " \\/ "; break;
    case RmOp::Meet: sym = " /\\ "; break;
  }
  const int lv = level(t);
  const RmTerm a = t.lhs(), b = t.rhs();
  const bool pa = level(a) < lv || (lv == 1 && level(a) == 1);
  const bool pb = level(b) <= lv;
  if (pa) out += '(';
  render(a, out);
  if (pa) out += ')';
  out += sym;
  if (pb) out += '(';
  render(b, out);
  if (pb) out += ')';
}
}  // namespace detail

inline std::string render(const Formula& f) {
  std::string s;
  detail::render(f, s);
  return s;
}

inline std::string render(const Sequent& seq) {
  std::string s;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (i) s += ", ";
    detail::render(seq[i], s);
  }
  return s;
}

inline std::string render(const KaTerm& t) {
  std::string s;
  detail::render(t, s);
  return s;
}

inline std::string render(const RmTerm& t) {
  std::string s;
  detail::render(t, s);
  return s;
}

inline std::string render(const RmJudgement& j) {
  std::string s;
  for (std::size_t i = 0; i < j.hyps.size(); ++i) {
    if (i) s += ", ";
    detail::render(j.hyps[i], s);
  }
  s += s.empty() ? "|- " : " |- ";
  detail::render(j.goal, s);
  return s;
}

inline std::string render(const TypeEnv& env) {
  std::string s;
  for (const auto& [x, ty] : env) s += x + " : " + ty.first.str() + " -> " + ty.second.str() + "\n";
  return s;
}

}  // namespace tycl
