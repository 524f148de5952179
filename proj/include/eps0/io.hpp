#pragma once

// Minimal s-expression reader/writer shared by the proof and omega-code file
// formats.  Atoms are bare tokens; strings are double-quoted with \" and \\
// escapes.

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "eps0/util.hpp"

namespace eps0 {

struct SExpr {
  enum class Kind { Atom, Str, List };
  Kind kind = Kind::List;
  std::string text;
  std::vector<SExpr> items;

  static SExpr atom(std::string s) {
    SExpr e; e.kind = Kind::Atom; e.text = std::move(s); return e;
  }
  static SExpr str(std::string s) {
    SExpr e; e.kind = Kind::Str; e.text = std::move(s); return e;
  }
  static SExpr list(std::vector<SExpr> xs) {
    SExpr e; e.items = std::move(xs); return e;
  }

  bool is_list() const { return kind == Kind::List; }
  bool is_atom(const std::string& s) const { return kind == Kind::Atom && text == s; }
  // a list whose head is the given atom
  bool headed(const std::string& s) const {
    return is_list() && !items.empty() && items[0].is_atom(s);
  }
  const SExpr* field(const std::string& head) const {
    if (!is_list()) return nullptr;
    for (const auto& it : items)
      if (it.headed(head)) return &it;
    return nullptr;
  }
};

namespace detail {

inline void sexpr_write(const SExpr& e, std::string& out, int indent) {
  switch (e.kind) {
    case SExpr::Kind::Atom: out += e.text; return;
    case SExpr::Kind::Str: {
      out += '"';
      for (char c : e.text) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
      }
      out += '"';
      return;
    }
    case SExpr::Kind::List: {
      out += '(';
      bool break_lines = false;
      for (const auto& it : e.items)
        if (it.is_list() && !it.items.empty()) break_lines = true;
      for (std::size_t i = 0; i < e.items.size(); ++i) {
        if (i) {
          if (break_lines && e.items[i].is_list()) {
            out += '\n';
            out.append(static_cast<std::size_t>(indent + 1), ' ');
          } else {
            out += ' ';
          }
        }
        sexpr_write(e.items[i], out, indent + 1);
      }
      out += ')';
      return;
    }
  }
}

struct SExprParser {
  const std::string& text;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error("s-expression parse error at offset " + std::to_string(pos) + ": " + msg);
  }
  void skip() {
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
  SExpr parse() {
    skip();
    if (pos >= text.size()) fail("unexpected end of input");
    char c = text[pos];
    if (c == '(') {
      ++pos;
      SExpr e;
      while (true) {
        skip();
        if (pos >= text.size()) fail("missing ')'");
        if (text[pos] == ')') { ++pos; return e; }
        e.items.push_back(parse());
      }
    }
    if (c == ')') fail("unexpected ')'");
    if (c == '"') {
      ++pos;
      std::string s;
      while (pos < text.size() && text[pos] != '"') {
        if (text[pos] == '\\' && pos + 1 < text.size()) ++pos;
        s += text[pos++];
      }
      if (pos >= text.size()) fail("unterminated string");
      ++pos;
      return SExpr::str(std::move(s));
    }
    std::string tok;
    while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos])) &&
           text[pos] != '(' && text[pos] != ')' && text[pos] != '"' && text[pos] != ';')
      tok += text[pos++];
    if (tok.empty()) fail("empty token");
    return SExpr::atom(std::move(tok));
  }
};

}  // namespace detail

inline std::string sexpr_to_string(const SExpr& e) {
  std::string out;
  detail::sexpr_write(e, out, 0);
  out += '\n';
  return out;
}

inline SExpr sexpr_parse(const std::string& text) {
  detail::SExprParser p{text};
  SExpr e = p.parse();
  p.skip();
  if (p.pos != text.size()) p.fail("trailing input");
  return e;
}

}  // namespace eps0
