#pragma once

// ASCII formula grammar (also documented in the README):
//
//   formula := 'A' v '.' formula | 'E' v '.' formula | disj
//   disj    := conj ('|' conj)*
//   conj    := prim ('&' prim)*
//   prim    := '(' formula ')' | literal
//   literal := 'Pr' '[' name ']' '(' term ')' | '!Pr' '[' name ']' '(' term ')'
//            | '!' '(' term ('<'|'prec') term ')'
//            | term ('='|'!='|'<'|'prec') term
//            | term ('in'|'notin') SetVar
//   term    := prod ('+' prod)* ;  prod := atom ('*' atom)*
//   atom    := number | variable | '(' term ')'
//
// Lowercase identifiers are number variables, uppercase identifiers are set
// variables.  Decimal numbers denote the standard unary numerals.  Binary
// connectives and term operators associate to the left; printing emits the
// minimal parentheses that reproduce the tree exactly.

#include <cctype>
#include <cstdint>
#include <optional>
#include <string>

#include "eps0/syntax.hpp"

namespace eps0 {

struct ParseError : Error {
  std::size_t line, col;
  ParseError(std::size_t line_, std::size_t col_, const std::string& msg)
      : Error("parse error at " + std::to_string(line_) + ":" + std::to_string(col_) +
              ": " + msg),
        line(line_), col(col_) {}
};

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

inline std::optional<std::uint64_t> numeral_value(const Term& t) {
  if (t.kind == TermKind::Zero) return 0;
  std::uint64_t n = 0;
  const Term* cur = &t;
  while (true) {
    if (cur->kind == TermKind::One) return n + 1;
    if (cur->kind != TermKind::Sum || cur->args[1].kind != TermKind::One)
      return std::nullopt;
    ++n;
    cur = &cur->args[0];
  }
}

namespace detail {

inline void print_term_prec(const Term& t, int level, std::string& out) {
  if (auto n = numeral_value(t)) {
    out += std::to_string(*n);
    return;
  }
  switch (t.kind) {
    case TermKind::Var: out += t.var; return;
    case TermKind::Zero: out += '0'; return;
    case TermKind::One: out += '1'; return;
    case TermKind::Sum: {
      bool parens = level > 1;
      if (parens) out += '(';
      print_term_prec(t.args[0], 1, out);
      out += '+';
      print_term_prec(t.args[1], 2, out);
      if (parens) out += ')';
      return;
    }
    case TermKind::Prod: {
      bool parens = level > 2;
      if (parens) out += '(';
      print_term_prec(t.args[0], 2, out);
      out += '*';
      print_term_prec(t.args[1], 3, out);
      if (parens) out += ')';
      return;
    }
  }
}

// levels: 0 = quantifier scope, 1 = disjunction, 2 = conjunction, 3 = atom
inline void print_formula_prec(const Formula& f, int level, std::string& out) {
  switch (f.kind) {
    case FormulaKind::AllNum: case FormulaKind::ExNum:
    case FormulaKind::AllSet: case FormulaKind::ExSet: {
      bool parens = level > 0;
      if (parens) out += '(';
      out += (f.kind == FormulaKind::AllNum || f.kind == FormulaKind::AllSet) ? "A " : "E ";
      out += is_number_quant(f) ? f.bound : f.set_var;
      out += ". ";
      print_formula_prec(f.kids[0], 0, out);
      if (parens) out += ')';
      return;
    }
    case FormulaKind::Or: {
      bool parens = level > 1;
      if (parens) out += '(';
      print_formula_prec(f.kids[0], 1, out);
      out += " | ";
      print_formula_prec(f.kids[1], 2, out);
      if (parens) out += ')';
      return;
    }
    case FormulaKind::And: {
      bool parens = level > 2;
      if (parens) out += '(';
      print_formula_prec(f.kids[0], 2, out);
      out += " & ";
      print_formula_prec(f.kids[1], 3, out);
      if (parens) out += ')';
      return;
    }
    case FormulaKind::Eq:
      print_term_prec(f.lhs, 0, out); out += " = "; print_term_prec(f.rhs, 0, out); return;
    case FormulaKind::Neq:
      print_term_prec(f.lhs, 0, out); out += " != "; print_term_prec(f.rhs, 0, out); return;
    case FormulaKind::Less:
      print_term_prec(f.lhs, 0, out); out += " < "; print_term_prec(f.rhs, 0, out); return;
    case FormulaKind::NotLess:
      out += "!(";
      print_term_prec(f.lhs, 0, out); out += " < "; print_term_prec(f.rhs, 0, out);
      out += ')';
      return;
    case FormulaKind::CodeLess:
      print_term_prec(f.lhs, 0, out); out += " prec "; print_term_prec(f.rhs, 0, out); return;
    case FormulaKind::NotCodeLess:
      out += "!(";
      print_term_prec(f.lhs, 0, out); out += " prec "; print_term_prec(f.rhs, 0, out);
      out += ')';
      return;
    case FormulaKind::In:
      print_term_prec(f.lhs, 0, out); out += " in "; out += f.set_var; return;
    case FormulaKind::NotIn:
      print_term_prec(f.lhs, 0, out); out += " notin "; out += f.set_var; return;
    case FormulaKind::Prov:
      out += "Pr["; out += f.theory; out += "](";
      print_term_prec(f.lhs, 0, out); out += ')';
      return;
    case FormulaKind::NotProv:
      out += "!Pr["; out += f.theory; out += "](";
      print_term_prec(f.lhs, 0, out); out += ')';
      return;
  }
}

}  // namespace detail

inline std::string print_term(const Term& t) {
  std::string s;
  detail::print_term_prec(t, 0, s);
  return s;
}

inline std::string print_formula(const Formula& f) {
  std::string s;
  detail::print_formula_prec(f, 0, s);
  return s;
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

namespace detail {

struct FormulaParser {
  std::string text;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < pos && i < text.size(); ++i) {
      if (text[i] == '\n') { ++line; col = 1; } else { ++col; }
    }
    throw ParseError(line, col, msg);
  }

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }
  bool eat(char c) {
    if (peek() == c) { ++pos; return true; }
    return false;
  }
  void expect(char c, const char* what) {
    if (!eat(c)) fail(std::string("expected '") + c + "' " + what);
  }
  bool lookahead_word(const char* w) {
    skip_ws();
    std::size_t i = 0;
    while (w[i]) {
      if (pos + i >= text.size() || text[pos + i] != w[i]) return false;
      ++i;
    }
    char next = pos + i < text.size() ? text[pos + i] : '\0';
    return !(std::isalnum(static_cast<unsigned char>(next)) || next == '_');
  }
  bool eat_word(const char* w) {
    if (!lookahead_word(w)) return false;
    pos += std::string(w).size();
    return true;
  }
  std::string ident() {
    skip_ws();
    if (pos >= text.size() || !std::isalpha(static_cast<unsigned char>(text[pos])))
      fail("expected an identifier");
    std::size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
      ++pos;
    return text.substr(start, pos - start);
  }
  static bool is_set_name(const std::string& s) {
    return std::isupper(static_cast<unsigned char>(s[0]));
  }

  Term atom() {
    char c = peek();
    if (c == '(') {
      ++pos;
      Term t = term();
      expect(')', "to close a term");
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::uint64_t n = 0;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
        n = n * 10 + static_cast<std::uint64_t>(text[pos] - '0');
        ++pos;
      }
      return numeral(n);
    }
    std::string name = ident();
    if (is_set_name(name)) fail("set variable '" + name + "' used as a number term");
    return t_var(name);
  }

  Term product() {
    Term t = atom();
    while (eat('*')) t = t_prod(std::move(t), atom());
    return t;
  }

  Term term() {
    Term t = product();
    while (true) {
      skip_ws();
      if (pos < text.size() && text[pos] == '+') {
        ++pos;
        t = t_sum(std::move(t), product());
      } else {
        return t;
      }
    }
  }

  Formula prov_literal(bool positive) {
    expect('[', "after Pr");
    std::string th;
    skip_ws();
    while (pos < text.size() && text[pos] != ']') th += text[pos++];
    expect(']', "to close the theory tag");
    if (th.empty()) fail("empty theory tag");
    expect('(', "before the provability argument");
    Term t = term();
    expect(')', "to close the provability argument");
    return positive ? f_prov(th, std::move(t)) : f_not_prov(th, std::move(t));
  }

  Formula literal() {
    if (eat_word("Pr")) return prov_literal(true);
    if (peek() == '!') {
      // '!=': handled under term relations; here: !Pr[..](..) or !(s<t)/(s prec t)
      std::size_t save = pos;
      ++pos;
      if (eat_word("Pr")) return prov_literal(false);
      if (peek() == '(') {
        ++pos;
        Term a = term();
        FormulaKind k;
        if (eat('<')) k = FormulaKind::NotLess;
        else if (eat_word("prec")) k = FormulaKind::NotCodeLess;
        else fail("expected '<' or 'prec' inside a negated comparison");
        Term b = term();
        expect(')', "to close the negated comparison");
        return f_lit2(k, std::move(a), std::move(b));
      }
      pos = save;
      fail("unexpected '!'");
    }
    Term a = term();
    skip_ws();
    if (eat_word("in")) {
      std::string X = ident();
      if (!is_set_name(X)) fail("'in' requires a set variable, got '" + X + "'");
      return f_in(std::move(a), X);
    }
    if (eat_word("notin")) {
      std::string X = ident();
      if (!is_set_name(X)) fail("'notin' requires a set variable, got '" + X + "'");
      return f_not_in(std::move(a), X);
    }
    if (pos + 1 < text.size() && text[pos] == '!' && text[pos + 1] == '=') {
      pos += 2;
      return f_neq(std::move(a), term());
    }
    if (eat('=')) return f_eq(std::move(a), term());
    if (eat('<')) return f_less(std::move(a), term());
    if (eat_word("prec")) return f_code_less(std::move(a), term());
    fail("expected a relation symbol");
  }

  Formula primary() {
    if (peek() == '(') {
      std::size_t save = pos;
      ++pos;
      // '(' may open a formula or a term; try formula first
      try {
        Formula f = formula();
        expect(')', "to close the formula");
        return f;
      } catch (const ParseError&) {
        pos = save;
        return literal();
      }
    }
    return literal();
  }

  Formula conjunction() {
    Formula f = primary();
    while (eat('&')) f = f_and(std::move(f), primary());
    return f;
  }

  Formula disjunction() {
    Formula f = conjunction();
    while (true) {
      skip_ws();
      if (pos < text.size() && text[pos] == '|') {
        ++pos;
        f = f_or(std::move(f), conjunction());
      } else {
        return f;
      }
    }
  }

  Formula formula() {
    skip_ws();
    if (lookahead_word("A") || lookahead_word("E")) {
      bool universal = text[pos] == 'A';
      std::size_t save = pos;
      ++pos;
      skip_ws();
      if (pos < text.size() && std::isalpha(static_cast<unsigned char>(text[pos]))) {
        std::string v = ident();
        if (eat('.')) {
          Formula body = formula();
          if (is_set_name(v))
            return universal ? f_all_set(v, std::move(body)) : f_ex_set(v, std::move(body));
          return universal ? f_all_num(v, std::move(body)) : f_ex_num(v, std::move(body));
        }
      }
      pos = save;  // not a quantifier after all
    }
    return disjunction();
  }
};

}  // namespace detail

inline Formula parse_formula(const std::string& text) {
  detail::FormulaParser p{text};
  Formula f = p.formula();
  p.skip_ws();
  if (p.pos != p.text.size()) p.fail("trailing input");
  if (!no_shadowing(f)) p.fail("a bound variable shadows an outer binding");
  return f;
}

inline Term parse_term(const std::string& text) {
  detail::FormulaParser p{text};
  Term t = p.term();
  p.skip_ws();
  if (p.pos != p.text.size()) p.fail("trailing input");
  return t;
}

}  // namespace eps0
