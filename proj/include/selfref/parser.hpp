#pragma once
// Lenient text parser. Accepts the canonical rendering plus ASCII aliases,
// ≠ ≤ ≮ sugar, bounded quantifiers ∃v<t[...] / ∀v≤t[...], #n and ⌜expr⌝ numerals.

#include "selfref/coding.hpp"

#include <cctype>
#include <string>
#include <unordered_map>
#include <vector>

namespace selfref {

class ParseError : public Error {
 public:
  ParseError(std::size_t pos, std::string expected)
      : Error("parse error at byte " + std::to_string(pos) + ": expected " + expected),
        position(pos),
        expected(std::move(expected)) {}
  std::size_t position;
  std::string expected;
};

namespace parse_detail {

enum class L : std::uint8_t {
  Zero, One, Plus, Times, Eq, Lt, Neq, Le, NotLt, Not, And, Or, Implies, Iff, Forall, Exists,
  LParen, RParen, LBracket, RBracket, Comma, Var, Fun, Pred, Hash, QuoteOpen, QuoteClose, End
};

struct Lex {
  L kind;
  std::size_t pos;
  VarIndex var = 0;
  OracleFn fn = OracleFn::Len;
  OraclePred pred = OraclePred::Prf;
  BigInt number;
};

inline std::vector<Lex> lex(const std::string& s) {
  std::vector<Lex> out;
  std::size_t i = 0;
  auto starts = [&](const char* lit) { return s.compare(i, std::char_traits<char>::length(lit), lit) == 0; };
  // Prime marks after x: ' ′ ″ ‴
  auto primes = [&]() {
    VarIndex n = 0;
    while (i < s.size()) {
      if (s[i] == '\'') {
        ++n;
        ++i;
      } else if (starts("′")) {
        ++n;
        i += 3;
      } else if (starts("″")) {
        n += 2;
        i += 3;
      } else if (starts("‴")) {
        n += 3;
        i += 3;
      } else {
        break;
      }
    }
    return n;
  };
  struct Sym {
    const char* text;
    L kind;
  };
  static const Sym syms[] = {
      {"<->", L::Iff}, {"->", L::Implies}, {"<=", L::Le},    {"!=", L::Neq},     {"↔", L::Iff},      {"→", L::Implies},
      {"≠", L::Neq},   {"≤", L::Le},       {"≮", L::NotLt},  {"¬", L::Not},      {"∧", L::And},      {"∨", L::Or},
      {"∀", L::Forall}, {"∃", L::Exists},  {"·", L::Times},  {"⌜", L::QuoteOpen}, {"⌝", L::QuoteClose}, {"~", L::Not},
      {"&", L::And},   {"|", L::Or},       {"*", L::Times},  {"+", L::Plus},     {"=", L::Eq},       {"<", L::Lt},
      {"(", L::LParen}, {")", L::RParen},  {"[", L::LBracket}, {"]", L::RBracket}, {",", L::Comma},    {"0", L::Zero},
      {"1", L::One}};
  while (i < s.size()) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    Lex t{L::End, i};
    if (c == '#') {
      ++i;
      std::size_t st = i;
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      if (st == i) throw ParseError(st, "digits after #");
      t.kind = L::Hash;
      t.number = BigInt(s.substr(st, i - st));
      out.push_back(t);
      continue;
    }
    if (c == 'x') {
      ++i;
      t.kind = L::Var;
      t.var = primes();
      out.push_back(t);
      continue;
    }
    if (std::isalpha(c)) {
      std::size_t st = i;
      while (i < s.size() && std::isalpha(static_cast<unsigned char>(s[i])) && s[i] != 'x') ++i;
      std::string w = s.substr(st, i - st);
      if (w == "A") t.kind = L::Forall;
      else if (w == "E") t.kind = L::Exists;
      else if (w == "prf") t.kind = L::Pred, t.pred = OraclePred::Prf;
      else if (w == "Formula") t.kind = L::Pred, t.pred = OraclePred::Formula;
      else if (w == "Tr") t.kind = L::Pred, t.pred = OraclePred::Tr;
      else if (w == "len") t.kind = L::Fun, t.fn = OracleFn::Len;
      else if (w == "D") t.kind = L::Fun, t.fn = OracleFn::D;
      else if (w == "neg") t.kind = L::Fun, t.fn = OracleFn::Neg;
      else if (w == "inst") t.kind = L::Fun, t.fn = OracleFn::Inst;
      else throw ParseError(st, "a known symbol, found '" + w + "'");
      out.push_back(t);
      continue;
    }
    bool found = false;
    for (const auto& sy : syms) {
      if (starts(sy.text)) {
        t.kind = sy.kind;
        i += std::char_traits<char>::length(sy.text);
        out.push_back(t);
        found = true;
        break;
      }
    }
    if (!found) throw ParseError(i, "a symbol of the formula alphabet");
  }
  out.push_back(Lex{L::End, s.size()});
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Lex> toks) : t_(std::move(toks)) {}

  Expr whole() {
    std::size_t save = i_;
    try {
      FormulaPtr f = formula();
      expect(L::End, "end of input");
      return f;
    } catch (const ParseError& fe) {
      std::size_t far = fe.position;
      i_ = save;
      try {
        TermPtr tm = term();
        expect(L::End, "end of input");
        return tm;
      } catch (const ParseError& te) {
        if (te.position >= far) throw;
        throw fe;
      }
    }
  }

  FormulaPtr formula() { return iff(); }

  TermPtr term() {
    TermPtr a = product();
    while (peek() == L::Plus) {
      ++i_;
      a = term::add(a, product());
    }
    return a;
  }

 private:
  L peek() const { return t_[i_].kind; }
  std::size_t pos() const { return t_[i_].pos; }
  void expect(L k, const char* what) {
    if (peek() != k) throw ParseError(pos(), what);
    ++i_;
  }

  FormulaPtr iff() {
    FormulaPtr a = imp();
    while (peek() == L::Iff) {
      ++i_;
      a = fml::iff(a, imp());
    }
    return a;
  }
  FormulaPtr imp() {
    FormulaPtr a = disj();
    if (peek() == L::Implies) {
      ++i_;
      return fml::implies(a, imp());
    }
    return a;
  }
  FormulaPtr disj() {
    FormulaPtr a = conj();
    while (peek() == L::Or) {
      ++i_;
      a = fml::disj(a, conj());
    }
    return a;
  }
  FormulaPtr conj() {
    FormulaPtr a = unary();
    while (peek() == L::And) {
      ++i_;
      a = fml::conj(a, unary());
    }
    return a;
  }

  FormulaPtr unary() {
    switch (peek()) {
      case L::Not: ++i_; return fml::negation(unary());
      case L::Forall:
      case L::Exists: return quantified();
      case L::LParen: {
        // A parenthesis opens either a formula or the left term of an atom.
        // Failed formula attempts are remembered so nested term parentheses
        // do not cause repeated reparsing.
        std::size_t save = i_;
        std::size_t fail_pos = 0;
        std::string fail_what;
        auto known = failed_.find(save);
        if (known == failed_.end()) {
          try {
            ++i_;
            FormulaPtr f = formula();
            expect(L::RParen, "')'");
            return f;
          } catch (const ParseError& fe) {
            failed_.emplace(save, fe);
            fail_pos = fe.position;
            fail_what = fe.expected;
          }
        } else {
          fail_pos = known->second.position;
          fail_what = known->second.expected;
        }
        i_ = save;
        try {
          return atom();
        } catch (const ParseError& ae) {
          if (ae.position >= fail_pos) throw;
          throw ParseError(fail_pos, fail_what);
        }
      }
      default: return atom();
    }
  }

  FormulaPtr quantified() {
    bool all = peek() == L::Forall;
    ++i_;
    if (peek() != L::Var) throw ParseError(pos(), "a variable after the quantifier");
    VarIndex v = t_[i_++].var;
    TermPtr bound;
    bool inclusive = false;
    if (peek() == L::Lt || peek() == L::Le) {
      inclusive = peek() == L::Le;
      ++i_;
      bound = term();
      if (inclusive) bound = term::succ(bound);
    }
    FormulaPtr body;
    if (peek() == L::LBracket) {
      ++i_;
      body = formula();
      expect(L::RBracket, "']'");
    } else {
      body = unary();
    }
    if (bound) return all ? fml::forall_below(v, bound, body) : fml::exists_below(v, bound, body);
    return all ? fml::forall(v, body) : fml::exists(v, body);
  }

  std::vector<TermPtr> args() {
    expect(L::LParen, "'('");
    std::vector<TermPtr> a{term()};
    while (peek() == L::Comma) {
      ++i_;
      a.push_back(term());
    }
    expect(L::RParen, "')'");
    return a;
  }

  FormulaPtr atom() {
    if (peek() == L::Pred) {
      OraclePred p = t_[i_].pred;
      std::size_t at = pos();
      ++i_;
      auto a = args();
      if (a.size() != arity(p)) throw ParseError(at, std::to_string(arity(p)) + " arguments");
      return fml::pred(p, std::move(a));
    }
    TermPtr l = term();
    L op = peek();
    if (op != L::Eq && op != L::Lt && op != L::Neq && op != L::Le && op != L::NotLt)
      throw ParseError(pos(), "a relation symbol");
    ++i_;
    TermPtr r = term();
    switch (op) {
      case L::Eq: return fml::eq(l, r);
      case L::Lt: return fml::lt(l, r);
      case L::Neq: return fml::neq(l, r);
      case L::Le: return fml::le(l, r);
      default: return fml::negation(fml::lt(l, r));
    }
  }

  TermPtr product() {
    TermPtr a = primary();
    while (peek() == L::Times) {
      ++i_;
      a = term::mul(a, primary());
    }
    return a;
  }

  TermPtr primary() {
    const Lex& t = t_[i_];
    switch (t.kind) {
      case L::Zero: ++i_; return term::zero();
      case L::One: ++i_; return term::one();
      case L::Var: ++i_; return term::var(t.var);
      case L::Hash: ++i_; return numeral(Nat(t.number));
      case L::QuoteOpen: {
        ++i_;
        std::size_t save = i_;
        Expr e;
        try {
          e = formula();
          if (peek() != L::QuoteClose) throw ParseError(pos(), "'⌝'");
        } catch (const ParseError&) {
          i_ = save;
          e = term();
        }
        expect(L::QuoteClose, "'⌝'");
        return quote(e);
      }
      case L::Fun: {
        OracleFn f = t.fn;
        std::size_t at = t.pos;
        ++i_;
        auto a = args();
        if (a.size() != arity(f)) throw ParseError(at, std::to_string(arity(f)) + " arguments");
        return term::fun(f, std::move(a));
      }
      case L::LParen: {
        ++i_;
        TermPtr a = term();
        expect(L::RParen, "')'");
        return a;
      }
      default: throw ParseError(t.pos, "a term");
    }
  }

  std::vector<Lex> t_;
  std::size_t i_ = 0;
  std::unordered_map<std::size_t, ParseError> failed_;
};

}  // namespace parse_detail

inline Expr parse_expr(const std::string& text) {
  parse_detail::Parser p(parse_detail::lex(text));
  return p.whole();
}

inline FormulaPtr parse_formula(const std::string& text) {
  Expr e = parse_expr(text);
  if (e.index() != 1) throw ParseError(0, "a formula, found a term");
  return std::get<1>(e);
}

inline TermPtr parse_term(const std::string& text) {
  Expr e = parse_expr(text);
  if (e.index() != 0) throw ParseError(0, "a term, found a formula");
  return std::get<0>(e);
}

}  // namespace selfref
