#pragma once
// Token alphabet, the canonical token stream of an expression, and text rendering.

#include "selfref/syntax.hpp"

#include <string>
#include <vector>

namespace selfref {

enum class Tok : std::uint8_t {
  Zero = 1, One, Plus, Times, Eq, Lt, Not, And, Or, Implies, Iff, Forall, Exists,
  LParen, RParen, LBracket, RBracket, Comma, X, Prime,
  Prf, FormulaSym, Len, D, Neg, Tr, Inst
};
inline constexpr unsigned kTokenCount = 27;

inline const char* tok_text(Tok t) {
  static const char* const names[] = {"",  "0", "1", "+", "·", "=", "<", "¬", "∧", "∨", "→", "↔", "∀", "∃",
                                      "(", ")", "[", "]", ",", "x", "'", "prf", "Formula", "len", "D", "neg",
                                      "Tr", "inst"};
  return names[static_cast<int>(t)];
}
inline const char* tok_name(Tok t) {
  static const char* const names[] = {"",       "zero",    "one",     "plus",   "times",  "eq",     "lt",
                                      "not",    "and",     "or",      "implies", "iff",    "forall", "exists",
                                      "lparen", "rparen",  "lbracket", "rbracket", "comma", "x",     "prime",
                                      "prf",    "Formula", "len",     "D",      "neg",    "Tr",     "inst"};
  return names[static_cast<int>(t)];
}

inline Tok tok_of(OracleFn f) {
  switch (f) {
    case OracleFn::Len: return Tok::Len;
    case OracleFn::D: return Tok::D;
    case OracleFn::Neg: return Tok::Neg;
    case OracleFn::Inst: return Tok::Inst;
  }
  return Tok::Len;
}
inline Tok tok_of(OraclePred p) {
  switch (p) {
    case OraclePred::Prf: return Tok::Prf;
    case OraclePred::Formula: return Tok::FormulaSym;
    case OraclePred::Tr: return Tok::Tr;
  }
  return Tok::Prf;
}

inline Tok tok_of(FormulaKind k) {
  switch (k) {
    case FormulaKind::And: return Tok::And;
    case FormulaKind::Or: return Tok::Or;
    case FormulaKind::Implies: return Tok::Implies;
    case FormulaKind::Iff: return Tok::Iff;
    case FormulaKind::Forall: return Tok::Forall;
    case FormulaKind::Exists: return Tok::Exists;
    default: return Tok::Eq;
  }
}

// Code-to-expression back-reference attached by the encoder.
struct ExprOrigin : Provenance {
  explicit ExprOrigin(Expr e) : expr(std::move(e)) {}
  Expr expr;
};

inline const Expr* origin_expr(const Nat& n) {
  if (auto* o = dynamic_cast<const ExprOrigin*>(n.origin().get())) return &o->expr;
  return nullptr;
}

// Walks the canonical token stream. Numerals >= 2 are reported whole through
// sink.numeral so that sinks can expand or summarize them.
template <class Sink>
void emit(const Term& t, Sink& s);

template <class Sink>
void emit_var(VarIndex v, Sink& s) {
  s.tok(Tok::X);
  for (VarIndex i = 0; i < v; ++i) s.tok(Tok::Prime);
}

template <class Sink>
void emit(const Term& t, Sink& s) {
  switch (t.kind) {
    case TermKind::Numeral:
      if (t.value == Nat(0))
        s.tok(Tok::Zero);
      else if (t.value == Nat(1))
        s.tok(Tok::One);
      else
        s.numeral(t.value);
      return;
    case TermKind::Var: emit_var(t.var, s); return;
    case TermKind::Fun:
      s.tok(tok_of(t.fn));
      s.tok(Tok::LParen);
      for (std::size_t i = 0; i < t.args.size(); ++i) {
        if (i) s.tok(Tok::Comma);
        emit(*t.args[i], s);
      }
      s.tok(Tok::RParen);
      return;
    case TermKind::Add:
    case TermKind::Mul: {
      bool wrap = !t.args[0]->atomic();
      if (wrap) s.tok(Tok::LParen);
      emit(*t.args[0], s);
      if (wrap) s.tok(Tok::RParen);
      s.tok(t.kind == TermKind::Add ? Tok::Plus : Tok::Times);
      s.tok(Tok::LParen);
      emit(*t.args[1], s);
      s.tok(Tok::RParen);
      return;
    }
  }
}

template <class Sink>
void emit(const Formula& f, Sink& s) {
  switch (f.kind) {
    case FormulaKind::Eq:
    case FormulaKind::Lt:
      emit(*f.terms[0], s);
      s.tok(f.kind == FormulaKind::Eq ? Tok::Eq : Tok::Lt);
      emit(*f.terms[1], s);
      return;
    case FormulaKind::Pred:
      s.tok(tok_of(f.pred));
      s.tok(Tok::LParen);
      for (std::size_t i = 0; i < f.terms.size(); ++i) {
        if (i) s.tok(Tok::Comma);
        emit(*f.terms[i], s);
      }
      s.tok(Tok::RParen);
      return;
    case FormulaKind::Not:
      s.tok(Tok::Not);
      s.tok(Tok::LParen);
      emit(*f.sub[0], s);
      s.tok(Tok::RParen);
      return;
    case FormulaKind::Forall:
    case FormulaKind::Exists:
      s.tok(tok_of(f.kind));
      emit_var(f.var, s);
      s.tok(Tok::LBracket);
      emit(*f.sub[0], s);
      s.tok(Tok::RBracket);
      return;
    default:
      s.tok(Tok::LParen);
      emit(*f.sub[0], s);
      s.tok(Tok::RParen);
      s.tok(tok_of(f.kind));
      s.tok(Tok::LParen);
      emit(*f.sub[1], s);
      s.tok(Tok::RParen);
      return;
  }
}

template <class Sink>
void emit(const Expr& e, Sink& s) {
  if (e.index() == 0)
    emit(*std::get<0>(e), s);
  else
    emit(*std::get<1>(e), s);
}

// Expands numeral n >= 1 as 1+(1+(...)) into token calls.
template <class Sink>
void emit_expanded_numeral(std::uint64_t n, Sink& s) {
  for (std::uint64_t i = 1; i < n; ++i) {
    s.tok(Tok::One);
    s.tok(Tok::Plus);
    s.tok(Tok::LParen);
  }
  s.tok(Tok::One);
  for (std::uint64_t i = 1; i < n; ++i) s.tok(Tok::RParen);
}

struct TokenSink {
  std::vector<Tok> out;
  std::size_t limit = 50'000'000;
  void tok(Tok t) {
    if (out.size() >= limit) throw CodeUnrepresentable("token stream too long to materialize");
    out.push_back(t);
  }
  void numeral(const Nat& n) {
    auto v = n.to_u64();
    if (!v || *v > limit) throw CodeUnrepresentable("numeral too large to expand into tokens");
    emit_expanded_numeral(*v, *this);
  }
};

template <class E>
std::vector<Tok> tokens(const E& e) {
  TokenSink s;
  emit(e, s);
  return s.out;
}

inline std::string render(const Expr& e);

// Numerals up to this value are written out in unary form; larger ones as #n.
inline constexpr std::uint64_t kRenderExpandLimit = 256;

struct TextSink {
  std::string out;
  void tok(Tok t) { out += tok_text(t); }
  void numeral(const Nat& n) {
    if (auto v = n.to_u64(); v && *v <= kRenderExpandLimit) {
      emit_expanded_numeral(*v, *this);
    } else if (const Expr* e = origin_expr(n)) {
      out += "⌜";
      out += render(*e);
      out += "⌝";
    } else if (n.is_concrete()) {
      out += "#" + n.concrete().str();
    } else {
      throw CodeUnrepresentable("symbolic numeral without a known expression cannot be rendered");
    }
  }
};

inline std::string render(const Expr& e) {
  TextSink s;
  emit(e, s);
  return s.out;
}
inline std::string render(const TermPtr& t) { return render(Expr(t)); }
inline std::string render(const FormulaPtr& f) { return render(Expr(f)); }

inline std::string tokens_to_text(const std::vector<Tok>& ts) {
  std::string s;
  for (Tok t : ts) s += tok_text(t);
  return s;
}

}  // namespace selfref
