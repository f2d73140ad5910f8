#include "fomod/parser.hpp"

#include <algorithm>
#include <cctype>

namespace fomod {

namespace {

enum class TokKind { Ident, Number, Punct, End };

struct Token {
  TokKind kind;
  std::string text;
  int line;
  int col;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) {}

  Token next() {
    skip_ws();
    int line = line_, col = col_;
    if (pos_ >= src_.size()) return {TokKind::End, "", line, col};
    char c = src_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string s;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
        s += src_[pos_];
        advance();
      }
      return {TokKind::Ident, s, line, col};
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string s;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        s += src_[pos_];
        advance();
      }
      return {TokKind::Number, s, line, col};
    }
    // Multi-character operators first.
    static const char* two[] = {"->", "<=", ">="};
    if (c == '<' && pos_ + 2 < src_.size() && src_[pos_ + 1] == '-' && src_[pos_ + 2] == '>') {
      advance(); advance(); advance();
      return {TokKind::Punct, "<->", line, col};
    }
    for (const char* op : two) {
      if (src_.compare(pos_, 2, op) == 0) {
        advance(); advance();
        return {TokKind::Punct, op, line, col};
      }
    }
    static const std::string singles = "=&|!.,()[]";
    if (singles.find(c) != std::string::npos) {
      advance();
      return {TokKind::Punct, std::string(1, c), line, col};
    }
    throw ParseError(std::string("unexpected character '") + c + "'", line, col);
  }

 private:
  void skip_ws() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '#') {  // comment to end of line
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  const std::string& src_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

bool is_reserved(const std::string& s) {
  static const char* words[] = {"A", "E", "mod", "x", "y",
                                "succ", "leq", "child", "desc", "nsib", "fsib"};
  for (const char* w : words)
    if (s == w) return true;
  return false;
}

std::optional<NavSym> nav_sym(const std::string& s) {
  if (s == "succ") return NavSym::Succ;
  if (s == "leq") return NavSym::Leq;
  if (s == "child") return NavSym::Child;
  if (s == "desc") return NavSym::Desc;
  if (s == "nsib") return NavSym::NextSib;
  if (s == "fsib") return NavSym::FollSib;
  return std::nullopt;
}

class Parser {
 public:
  Parser(const std::string& src, const std::optional<Signature>& hint)
      : lex_(src), hint_(hint) {
    cur_ = lex_.next();
  }

  ParseResult run() {
    FormulaPtr f = parse_iff();
    if (cur_.kind != TokKind::End)
      throw ParseError("unexpected trailing input '" + cur_.text + "'", cur_.line, cur_.col);
    Signature sig;
    if (hint_) {
      for (const auto& p : preds_)
        if (!hint_->has(p))
          throw ParseError("predicate '" + p + "' not in the given signature", 1, 1);
      if (nav_ && *nav_ != hint_->nav)
        throw ParseError("navigational atoms do not match the requested kind", 1, 1);
      sig = *hint_;
    } else {
      sig.preds = preds_;
      sig.nav = nav_.value_or(NavKind::Word);
    }
    return {f, sig};
  }

 private:
  [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, cur_.line, cur_.col); }

  void bump() { cur_ = lex_.next(); }

  bool accept_punct(const std::string& s) {
    if (cur_.kind == TokKind::Punct && cur_.text == s) {
      bump();
      return true;
    }
    return false;
  }

  void expect_punct(const std::string& s) {
    if (!accept_punct(s)) fail("expected '" + s + "' but found '" + cur_.text + "'");
  }

  Var expect_var() {
    if (cur_.kind == TokKind::Ident && (cur_.text == "x" || cur_.text == "y")) {
      Var v = cur_.text == "x" ? Var::X : Var::Y;
      bump();
      return v;
    }
    fail("expected variable 'x' or 'y' but found '" + cur_.text + "'");
  }

  BigInt expect_number() {
    if (cur_.kind != TokKind::Number) fail("expected a number but found '" + cur_.text + "'");
    BigInt n(cur_.text);
    bump();
    return n;
  }

  // iff is weakest among the connectives, left associative.
  FormulaPtr parse_iff() {
    FormulaPtr f = parse_implies();
    while (cur_.kind == TokKind::Punct && cur_.text == "<->") {
      bump();
      f = iff(f, parse_implies());
    }
    return f;
  }

  FormulaPtr parse_implies() {  // right associative
    FormulaPtr f = parse_or();
    if (cur_.kind == TokKind::Punct && cur_.text == "->") {
      bump();
      return implies(f, parse_implies());
    }
    return f;
  }

  FormulaPtr parse_or() {
    FormulaPtr f = parse_and();
    while (cur_.kind == TokKind::Punct && cur_.text == "|") {
      bump();
      f = lor(f, parse_and());
    }
    return f;
  }

  FormulaPtr parse_and() {
    FormulaPtr f = parse_unary();
    while (cur_.kind == TokKind::Punct && cur_.text == "&") {
      bump();
      f = land(f, parse_unary());
    }
    return f;
  }

  FormulaPtr parse_unary() {
    if (accept_punct("!")) return lnot(parse_unary());
    if (cur_.kind == TokKind::Ident && (cur_.text == "A" || cur_.text == "E"))
      return parse_quantifier();
    return parse_atom_or_group();
  }

  FormulaPtr parse_quantifier() {
    bool universal = cur_.text == "A";
    int qline = cur_.line, qcol = cur_.col;
    bump();
    if (universal) {
      Var v = expect_var();
      expect_punct(".");
      return forall(v, parse_iff());  // body extends maximally to the right
    }
    if (accept_punct("[")) {
      Cmp c;
      if (accept_punct("<=")) c = Cmp::Leq;
      else if (accept_punct(">=")) c = Cmp::Geq;
      else if (accept_punct("=")) c = Cmp::Eq;
      else fail("expected '<=', '=' or '>=' after 'E['");
      BigInt k = expect_number();
      if (!(cur_.kind == TokKind::Ident && cur_.text == "mod"))
        fail("expected 'mod' in counting quantifier");
      bump();
      BigInt l = expect_number();
      expect_punct("]");
      if (l < 1) throw ParseError("modulus must be at least 1", qline, qcol);
      if (k >= l) throw ParseError("threshold must be smaller than the modulus", qline, qcol);
      Var v = expect_var();
      expect_punct(".");
      return mod_exists(c, std::move(k), std::move(l), v, parse_iff());
    }
    Var v = expect_var();
    expect_punct(".");
    return exists(v, parse_iff());
  }

  FormulaPtr parse_atom_or_group() {
    if (accept_punct("(")) {
      FormulaPtr f = parse_iff();
      expect_punct(")");
      return f;
    }
    if (cur_.kind != TokKind::Ident)
      fail("expected a formula but found '" + cur_.text + "'");
    // Variable on the left of an equality.
    if (cur_.text == "x" || cur_.text == "y") {
      Var v = cur_.text == "x" ? Var::X : Var::Y;
      bump();
      expect_punct("=");
      Var w = expect_var();
      return equality(v, w);
    }
    std::string name = cur_.text;
    int nline = cur_.line, ncol = cur_.col;
    if (auto s = nav_sym(name)) {
      bump();
      expect_punct("(");
      Var v = expect_var();
      expect_punct(",");
      Var w = expect_var();
      expect_punct(")");
      NavKind k = nav_kind_of(*s);
      if (nav_ && *nav_ != k)
        throw ParseError("formula mixes word and tree vocabularies", nline, ncol);
      nav_ = k;
      return nav_atom(*s, v, w);
    }
    if (is_reserved(name)) fail("'" + name + "' is a reserved word");
    bump();
    expect_punct("(");
    Var v = expect_var();
    expect_punct(")");
    if (std::find(preds_.begin(), preds_.end(), name) == preds_.end())
      preds_.push_back(name);
    return unary_atom(name, v);
  }

  Lexer lex_;
  Token cur_;
  std::optional<Signature> hint_;
  std::vector<std::string> preds_;
  std::optional<NavKind> nav_;
};

}  // namespace

ParseResult parse_formula(const std::string& text, const std::optional<Signature>& hint) {
  Parser p(text, hint);
  return p.run();
}

}  // namespace fomod
