#pragma once

// Lexer and recursive-descent parser for the surface syntax.
//
//   term    := lambda | sum
//   lambda  := '\' IDENT (':' type)? '.' term
//   sum     := app ('+' app)*                     left assoc
//   app     := postfix+                           left assoc
//   postfix := atom ('[' rebinds ']')*            binds tighter than application
//   atom    := NAT | IDENT | 'error' | '(' term ')' | '<' ctx '|' term '>'
//   ctx     := IDENT ':' type (',' IDENT ':' type)*
//   rebinds := IDENT ':' type ':=' term (',' IDENT ':' type ':=' term)*
//
//   type    := inter
//   inter   := arrow ('&' arrow)*                 '&' binds loosest
//   arrow   := lev ('->' arrow)?                  right assoc
//   lev     := prim ('^' NAT)?                    omitted level means 0
//   prim    := 'int' | 'code' | '(' type ')'
//
// '--' starts a line comment. 'error', 'int' and 'code' are reserved.
// '^' after a parenthesized type lifts every conjunct, so (int & code)^1
// reads as int^1 & code^1.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ubr/syntax.hpp"

namespace ubr {

struct ParseError : std::runtime_error {
  SourceSpan span;
  std::vector<std::string> expected;
  std::string found;
  ParseError(SourceSpan sp, std::vector<std::string> exp, std::string fnd, const std::string& msg)
      : std::runtime_error(msg), span(sp), expected(std::move(exp)), found(std::move(fnd)) {}
};

namespace detail {

enum class Tok {
  Ident, Nat, KwError, KwInt, KwCode,
  Lambda, Dot, Colon, Assign, Comma, Plus,
  LParen, RParen, Lt, Gt, Pipe, LBrack, RBrack,
  Arrow, Amp, Caret, End,
};

inline const char* tok_name(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Nat: return "number";
    case Tok::KwError: return "'error'";
    case Tok::KwInt: return "'int'";
    case Tok::KwCode: return "'code'";
    case Tok::Lambda: return "'\\'";
    case Tok::Dot: return "'.'";
    case Tok::Colon: return "':'";
    case Tok::Assign: return "':='";
    case Tok::Comma: return "','";
    case Tok::Plus: return "'+'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Lt: return "'<'";
    case Tok::Gt: return "'>'";
    case Tok::Pipe: return "'|'";
    case Tok::LBrack: return "'['";
    case Tok::RBrack: return "']'";
    case Tok::Arrow: return "'->'";
    case Tok::Amp: return "'&'";
    case Tok::Caret: return "'^'";
    case Tok::End: return "end of input";
  }
  return "?";
}

struct Token {
  Tok kind = Tok::End;
  SourceSpan span;
  std::string text;       // Ident
  std::int64_t num = 0;   // Nat
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) { advance(); }

  const Token& peek() const { return tok_; }

  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    skip_trivia();
    int start = pos_, sline = line_, scol = col_;
    auto span_here = [&] { return SourceSpan{start, pos_, sline, scol}; };
    if (pos_ >= static_cast<int>(src_.size())) {
      tok_ = Token{Tok::End, span_here(), "", 0};
      return;
    }
    char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::int64_t v = 0;
      while (pos_ < static_cast<int>(src_.size()) &&
             std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        int digit = src_[pos_] - '0';
        if (v > (INT64_MAX - digit) / 10)
          throw ParseError(span_here(), {"number"}, "number", "numeric literal out of range");
        v = v * 10 + digit;
        bump();
      }
      tok_ = Token{Tok::Nat, span_here(), "", v};
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::string name;
      while (pos_ < static_cast<int>(src_.size()) &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
        name += src_[pos_];
        bump();
      }
      Tok k = Tok::Ident;
      if (name == "error") k = Tok::KwError;
      else if (name == "int") k = Tok::KwInt;
      else if (name == "code") k = Tok::KwCode;
      tok_ = Token{k, span_here(), name, 0};
      return;
    }
    auto one = [&](Tok k) {
      bump();
      tok_ = Token{k, span_here(), "", 0};
    };
    switch (c) {
      case '\\': one(Tok::Lambda); return;
      case '.': one(Tok::Dot); return;
      case ',': one(Tok::Comma); return;
      case '+': one(Tok::Plus); return;
      case '(': one(Tok::LParen); return;
      case ')': one(Tok::RParen); return;
      case '<': one(Tok::Lt); return;
      case '>': one(Tok::Gt); return;
      case '|': one(Tok::Pipe); return;
      case '[': one(Tok::LBrack); return;
      case ']': one(Tok::RBrack); return;
      case '&': one(Tok::Amp); return;
      case '^': one(Tok::Caret); return;
      case ':':
        bump();
        if (pos_ < static_cast<int>(src_.size()) && src_[pos_] == '=') {
          bump();
          tok_ = Token{Tok::Assign, span_here(), "", 0};
        } else {
          tok_ = Token{Tok::Colon, span_here(), "", 0};
        }
        return;
      case '-':
        bump();
        if (pos_ < static_cast<int>(src_.size()) && src_[pos_] == '>') {
          bump();
          tok_ = Token{Tok::Arrow, span_here(), "", 0};
          return;
        }
        throw ParseError(span_here(), {"'->'"}, std::string(1, c), "stray '-'");
      default:
        throw ParseError(SourceSpan{start, start + 1, sline, scol}, {}, std::string(1, c),
                         std::string("unexpected character '") + c + "'");
    }
  }

  void skip_trivia() {
    while (pos_ < static_cast<int>(src_.size())) {
      char c = src_[pos_];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        bump();
      } else if (c == '-' && pos_ + 1 < static_cast<int>(src_.size()) && src_[pos_ + 1] == '-') {
        while (pos_ < static_cast<int>(src_.size()) && src_[pos_] != '\n') bump();
      } else {
        break;
      }
    }
  }

  void bump() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  const std::string& src_;
  int pos_ = 0, line_ = 1, col_ = 1;
  Token tok_;
};

class Parser {
 public:
  explicit Parser(const std::string& src) : lex_(src) {}

  TermPtr term_all() {
    TermPtr t = term();
    expect(Tok::End);
    return t;
  }

  RawTypePtr type_all() {
    RawTypePtr t = type();
    expect(Tok::End);
    return t;
  }

 private:
  [[noreturn]] void fail(std::vector<std::string> expected) {
    const Token& t = lex_.peek();
    std::string found = t.kind == Tok::Ident ? "'" + t.text + "'" : tok_name(t.kind);
    std::string msg = "expected ";
    for (size_t i = 0; i < expected.size(); ++i) {
      if (i) msg += i + 1 == expected.size() ? " or " : ", ";
      msg += expected[i];
    }
    msg += ", found " + found;
    throw ParseError(t.span, std::move(expected), found, msg);
  }

  Token expect(Tok k) {
    if (lex_.peek().kind != k) fail({tok_name(k)});
    return lex_.take();
  }

  bool at(Tok k) const { return lex_.peek().kind == k; }

  bool starts_atom() const {
    switch (lex_.peek().kind) {
      case Tok::Nat:
      case Tok::Ident:
      case Tok::KwError:
      case Tok::LParen:
      case Tok::Lt:
        return true;
      default:
        return false;
    }
  }

  static SourceSpan join(SourceSpan a, SourceSpan b) {
    return SourceSpan{a.start, b.end, a.line, a.col};
  }

  TermPtr term() {
    if (at(Tok::Lambda)) return lambda();
    return sum();
  }

  TermPtr lambda() {
    Token t0 = expect(Tok::Lambda);
    Token name = expect(Tok::Ident);
    RawTypePtr annot;
    if (at(Tok::Colon)) {
      lex_.take();
      annot = type();
    }
    expect(Tok::Dot);
    TermPtr body = term();
    return Term::lam(name.text, annot, body, join(t0.span, body->span));
  }

  TermPtr sum() {
    TermPtr t = app();
    while (at(Tok::Plus)) {
      lex_.take();
      TermPtr rhs = app();
      t = Term::sum(t, rhs, join(t->span, rhs->span));
    }
    return t;
  }

  TermPtr app() {
    TermPtr t = postfix();
    while (starts_atom()) {
      TermPtr arg = postfix();
      t = Term::app(t, arg, join(t->span, arg->span));
    }
    return t;
  }

  TermPtr postfix() {
    TermPtr t = atom();
    while (at(Tok::LBrack)) {
      lex_.take();
      std::vector<TypedSubstEntry> entries;
      for (;;) {
        Token name = expect(Tok::Ident);
        for (const auto& e : entries)
          if (e.name == name.text)
            throw ParseError(name.span, {}, "'" + name.text + "'",
                             "duplicate rebind entry '" + name.text + "'");
        expect(Tok::Colon);
        RawTypePtr ty = type();
        expect(Tok::Assign);
        TermPtr val = term();
        entries.push_back({name.text, ty, val});
        if (!at(Tok::Comma)) break;
        lex_.take();
      }
      Token close = expect(Tok::RBrack);
      t = Term::rebind(t, TypedSubst(std::move(entries)), join(t->span, close.span));
    }
    return t;
  }

  TermPtr atom() {
    const Token& p = lex_.peek();
    switch (p.kind) {
      case Tok::Nat: {
        Token t = lex_.take();
        return Term::num_lit(t.num, t.span);
      }
      case Tok::Ident: {
        Token t = lex_.take();
        return Term::var(t.text, t.span);
      }
      case Tok::KwError: {
        Token t = lex_.take();
        return Term::error(t.span);
      }
      case Tok::LParen: {
        lex_.take();
        TermPtr t = term();
        expect(Tok::RParen);
        return t;
      }
      case Tok::Lt: {
        Token t0 = lex_.take();
        std::vector<TypeCtx::Binding> bs;
        for (;;) {
          Token name = expect(Tok::Ident);
          for (const auto& b : bs)
            if (b.name == name.text)
              throw ParseError(name.span, {}, "'" + name.text + "'",
                               "duplicate unbinder '" + name.text + "'");
          expect(Tok::Colon);
          bs.push_back({name.text, type()});
          if (!at(Tok::Comma)) break;
          lex_.take();
        }
        expect(Tok::Pipe);
        TermPtr body = term();
        Token close = expect(Tok::Gt);
        return Term::unbind(TypeCtx(std::move(bs)), body, join(t0.span, close.span));
      }
      default:
        fail({"number", "identifier", "'error'", "'('", "'<'"});
    }
  }

  RawTypePtr type() { return inter(); }

  RawTypePtr inter() {
    RawTypePtr t = arrow();
    while (at(Tok::Amp)) {
      lex_.take();
      t = RawType::inter(t, arrow());
    }
    return t;
  }

  RawTypePtr arrow() {
    RawTypePtr t = lev();
    if (at(Tok::Arrow)) {
      lex_.take();
      return RawType::arrow(t, arrow(), 0);
    }
    return t;
  }

  RawTypePtr lev() {
    RawTypePtr t = prim();
    if (at(Tok::Caret)) {
      lex_.take();
      Token n = expect(Tok::Nat);
      if (n.num > 1000000)
        throw ParseError(n.span, {"number"}, "number", "level out of range");
      t = lift_raw_outer(t, static_cast<int>(n.num));
    }
    return t;
  }

  RawTypePtr prim() {
    switch (lex_.peek().kind) {
      case Tok::KwInt:
        lex_.take();
        return RawType::int_at(0);
      case Tok::KwCode:
        lex_.take();
        return RawType::code_at(0);
      case Tok::LParen: {
        lex_.take();
        RawTypePtr t = type();
        expect(Tok::RParen);
        return t;
      }
      default:
        fail({"'int'", "'code'", "'('"});
    }
  }

  Lexer lex_;
};

}  // namespace detail

inline TermPtr parse_term(const std::string& src) { return detail::Parser(src).term_all(); }
inline RawTypePtr parse_type(const std::string& src) { return detail::Parser(src).type_all(); }

}  // namespace ubr
