#pragma once
// Terms and formulas of first-order arithmetic with oracle symbols.
//
// Nodes are immutable and shared. Numerals are a single node kind holding their
// value, so 1+(1+(1)) and numeral(3) are the same tree.

#include "selfref/nat.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace selfref {

using VarIndex = std::uint32_t;

enum class TermKind : std::uint8_t { Numeral, Var, Add, Mul, Fun };
enum class OracleFn : std::uint8_t { Len, D, Neg, Inst };
enum class FormulaKind : std::uint8_t { Eq, Lt, Pred, Not, And, Or, Implies, Iff, Forall, Exists };
enum class OraclePred : std::uint8_t { Prf, Formula, Tr };

inline std::size_t arity(OracleFn f) {
  switch (f) {
    case OracleFn::Len: return 1;
    case OracleFn::D: return 2;
    case OracleFn::Neg: return 1;
    case OracleFn::Inst: return 3;
  }
  return 0;
}
inline std::size_t arity(OraclePred p) { return p == OraclePred::Prf ? 2 : 1; }

inline const char* name_of(OracleFn f) {
  switch (f) {
    case OracleFn::Len: return "len";
    case OracleFn::D: return "D";
    case OracleFn::Neg: return "neg";
    case OracleFn::Inst: return "inst";
  }
  return "?";
}
inline const char* name_of(OraclePred p) {
  switch (p) {
    case OraclePred::Prf: return "prf";
    case OraclePred::Formula: return "Formula";
    case OraclePred::Tr: return "Tr";
  }
  return "?";
}

struct Term;
struct Formula;
using TermPtr = std::shared_ptr<const Term>;
using FormulaPtr = std::shared_ptr<const Formula>;
using Expr = std::variant<TermPtr, FormulaPtr>;

inline std::size_t hash_mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

inline std::vector<VarIndex> merge_vars(const std::vector<VarIndex>& a, const std::vector<VarIndex>& b) {
  std::vector<VarIndex> r;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
  return r;
}

struct Term {
  TermKind kind;
  Nat value;
  VarIndex var = 0;
  OracleFn fn = OracleFn::Len;
  std::vector<TermPtr> args;
  std::size_t hash = 0;
  Nat length;
  std::vector<VarIndex> vars;  // sorted, all occurring variables
  std::uint32_t var_bound = 0;  // 1 + largest variable index, 0 if none
  bool numeral_free = true;     // no Numeral node with value >= 2

  bool is_numeral() const { return kind == TermKind::Numeral; }
  // Renders without surrounding parentheses when used as a left operand.
  bool atomic() const {
    return kind == TermKind::Var || kind == TermKind::Fun || (kind == TermKind::Numeral && value <= Nat(1));
  }
};

struct Formula {
  FormulaKind kind;
  std::vector<TermPtr> terms;
  OraclePred pred = OraclePred::Prf;
  std::array<FormulaPtr, 2> sub;
  VarIndex var = 0;
  std::size_t hash = 0;
  std::size_t shape = 0;  // hash of the connective skeleton only
  Nat length;
  std::vector<VarIndex> free;  // sorted
  std::uint32_t var_bound = 0;

  bool is_binary() const {
    return kind == FormulaKind::And || kind == FormulaKind::Or || kind == FormulaKind::Implies || kind == FormulaKind::Iff;
  }
  bool is_quantifier() const { return kind == FormulaKind::Forall || kind == FormulaKind::Exists; }
  bool is_atomic() const { return kind == FormulaKind::Eq || kind == FormulaKind::Lt || kind == FormulaKind::Pred; }
  bool closed() const { return free.empty(); }
};

// ---------------------------------------------------------------- equality

bool equal(const Term& a, const Term& b);
bool equal(const Formula& a, const Formula& b);

inline bool equal(const Term& a, const Term& b) {
  if (&a == &b) return true;
  if (a.hash != b.hash || a.kind != b.kind) return false;
  switch (a.kind) {
    case TermKind::Numeral: return a.value == b.value;
    case TermKind::Var: return a.var == b.var;
    case TermKind::Fun:
      if (a.fn != b.fn) return false;
      [[fallthrough]];
    default:
      if (a.args.size() != b.args.size()) return false;
      for (std::size_t i = 0; i < a.args.size(); ++i)
        if (!equal(*a.args[i], *b.args[i])) return false;
      return true;
  }
}

inline bool equal(const Formula& a, const Formula& b) {
  if (&a == &b) return true;
  if (a.hash != b.hash || a.kind != b.kind) return false;
  if (a.kind == FormulaKind::Pred && a.pred != b.pred) return false;
  if (a.is_quantifier() && a.var != b.var) return false;
  if (a.terms.size() != b.terms.size()) return false;
  for (std::size_t i = 0; i < a.terms.size(); ++i)
    if (!equal(*a.terms[i], *b.terms[i])) return false;
  for (int i = 0; i < 2; ++i) {
    if (!a.sub[i] != !b.sub[i]) return false;
    if (a.sub[i] && !equal(*a.sub[i], *b.sub[i])) return false;
  }
  return true;
}

inline bool equal(const TermPtr& a, const TermPtr& b) { return equal(*a, *b); }
inline bool equal(const FormulaPtr& a, const FormulaPtr& b) { return equal(*a, *b); }
inline bool equal(const Expr& a, const Expr& b) {
  if (a.index() != b.index()) return false;
  if (a.index() == 0) return equal(std::get<0>(a), std::get<0>(b));
  return equal(std::get<1>(a), std::get<1>(b));
}

struct FormulaHash {
  std::size_t operator()(const FormulaPtr& f) const { return f->hash; }
};
struct FormulaEq {
  bool operator()(const FormulaPtr& a, const FormulaPtr& b) const { return equal(*a, *b); }
};

// ---------------------------------------------------------------- lengths

inline Nat numeral_length(const Nat& n) {
  if (n <= Nat(1)) return Nat(1);
  return *(Nat(4) * n).minus(Nat(3));
}

// ---------------------------------------------------------------- term builders

namespace term {

inline TermPtr numeral(const Nat& n) {
  auto t = std::make_shared<Term>();
  t->kind = TermKind::Numeral;
  t->value = n;
  t->hash = hash_mix(11, n.hash());
  t->length = numeral_length(n);
  t->numeral_free = n <= Nat(1);
  return t;
}
inline TermPtr zero() {
  static const TermPtr z = numeral(Nat(0));
  return z;
}
inline TermPtr one() {
  static const TermPtr o = numeral(Nat(1));
  return o;
}
inline TermPtr var(VarIndex i) {
  auto t = std::make_shared<Term>();
  t->kind = TermKind::Var;
  t->var = i;
  t->hash = hash_mix(13, i);
  t->length = Nat(std::uint64_t(i) + 1);
  t->vars = {i};
  t->var_bound = i + 1;
  return t;
}

namespace detail {
inline TermPtr compound(TermKind k, OracleFn fn, std::vector<TermPtr> args) {
  auto t = std::make_shared<Term>();
  t->kind = k;
  t->fn = fn;
  std::size_t h = hash_mix(17 + static_cast<int>(k), static_cast<int>(fn));
  Nat len(0);
  for (const auto& a : args) {
    h = hash_mix(h, a->hash);
    len = len + a->length;
    t->vars = merge_vars(t->vars, a->vars);
    t->var_bound = std::max(t->var_bound, a->var_bound);
    t->numeral_free = t->numeral_free && a->numeral_free;
  }
  if (k == TermKind::Fun) {
    len = len + Nat(std::uint64_t(args.size() + 2));  // name ( , ... )
  } else {
    len = len + Nat(3);  // op ( )
    if (!args[0]->atomic()) len = len + Nat(2);
  }
  t->hash = h;
  t->length = len;
  t->args = std::move(args);
  return t;
}
}  // namespace detail

// Add(1, numeral(k)) with k >= 1 is the numeral k+1 and is built as such.
inline TermPtr add(TermPtr a, TermPtr b) {
  if (a->is_numeral() && b->is_numeral() && a->value == Nat(1) && b->value >= Nat(1))
    return numeral(b->value + Nat(1));
  return detail::compound(TermKind::Add, OracleFn::Len, {std::move(a), std::move(b)});
}
inline TermPtr mul(TermPtr a, TermPtr b) {
  return detail::compound(TermKind::Mul, OracleFn::Len, {std::move(a), std::move(b)});
}
inline TermPtr fun(OracleFn f, std::vector<TermPtr> args) {
  if (args.size() != arity(f)) throw Error(std::string("wrong arity for ") + name_of(f));
  return detail::compound(TermKind::Fun, f, std::move(args));
}
inline TermPtr succ(TermPtr a) { return add(std::move(a), one()); }

}  // namespace term

// ---------------------------------------------------------------- formula builders

namespace fml {

namespace detail {
inline std::size_t shape_seed(FormulaKind k, int extra) { return hash_mix(101 + static_cast<int>(k), extra); }

inline FormulaPtr atom(FormulaKind k, OraclePred p, std::vector<TermPtr> ts) {
  auto f = std::make_shared<Formula>();
  f->kind = k;
  f->pred = p;
  std::size_t h = shape_seed(k, static_cast<int>(p));
  f->shape = h;
  Nat len(0);
  for (const auto& t : ts) {
    h = hash_mix(h, t->hash);
    len = len + t->length;
    f->free = merge_vars(f->free, t->vars);
    f->var_bound = std::max(f->var_bound, t->var_bound);
  }
  if (k == FormulaKind::Pred)
    len = len + Nat(std::uint64_t(ts.size() + 2));
  else
    len = len + Nat(1);
  f->hash = h;
  f->length = len;
  f->terms = std::move(ts);
  return f;
}
}  // namespace detail

inline FormulaPtr eq(TermPtr a, TermPtr b) {
  return detail::atom(FormulaKind::Eq, OraclePred::Prf, {std::move(a), std::move(b)});
}
inline FormulaPtr lt(TermPtr a, TermPtr b) {
  return detail::atom(FormulaKind::Lt, OraclePred::Prf, {std::move(a), std::move(b)});
}
inline FormulaPtr pred(OraclePred p, std::vector<TermPtr> args) {
  if (args.size() != arity(p)) throw Error(std::string("wrong arity for ") + name_of(p));
  return detail::atom(FormulaKind::Pred, p, std::move(args));
}

inline FormulaPtr negation(FormulaPtr a) {
  auto f = std::make_shared<Formula>();
  f->kind = FormulaKind::Not;
  f->hash = hash_mix(detail::shape_seed(FormulaKind::Not, 0), a->hash);
  f->shape = hash_mix(detail::shape_seed(FormulaKind::Not, 0), a->shape);
  f->length = a->length + Nat(3);
  f->free = a->free;
  f->var_bound = a->var_bound;
  f->sub[0] = std::move(a);
  return f;
}

inline FormulaPtr binary(FormulaKind k, FormulaPtr a, FormulaPtr b) {
  auto f = std::make_shared<Formula>();
  f->kind = k;
  f->hash = hash_mix(hash_mix(detail::shape_seed(k, 0), a->hash), b->hash);
  f->shape = hash_mix(hash_mix(detail::shape_seed(k, 0), a->shape), b->shape);
  f->length = a->length + b->length + Nat(5);
  f->free = merge_vars(a->free, b->free);
  f->var_bound = std::max(a->var_bound, b->var_bound);
  f->sub[0] = std::move(a);
  f->sub[1] = std::move(b);
  return f;
}
inline FormulaPtr conj(FormulaPtr a, FormulaPtr b) { return binary(FormulaKind::And, std::move(a), std::move(b)); }
inline FormulaPtr disj(FormulaPtr a, FormulaPtr b) { return binary(FormulaKind::Or, std::move(a), std::move(b)); }
inline FormulaPtr implies(FormulaPtr a, FormulaPtr b) {
  return binary(FormulaKind::Implies, std::move(a), std::move(b));
}
inline FormulaPtr iff(FormulaPtr a, FormulaPtr b) { return binary(FormulaKind::Iff, std::move(a), std::move(b)); }

inline FormulaPtr quantifier(FormulaKind k, VarIndex v, FormulaPtr body) {
  auto f = std::make_shared<Formula>();
  f->kind = k;
  f->var = v;
  f->hash = hash_mix(hash_mix(detail::shape_seed(k, 0), v), body->hash);
  f->shape = hash_mix(detail::shape_seed(k, 0), body->shape);
  f->length = body->length + Nat(std::uint64_t(v) + 4);
  f->free = body->free;
  f->free.erase(std::remove(f->free.begin(), f->free.end(), v), f->free.end());
  f->var_bound = std::max<std::uint32_t>(body->var_bound, v + 1);
  f->sub[0] = std::move(body);
  return f;
}
inline FormulaPtr forall(VarIndex v, FormulaPtr body) { return quantifier(FormulaKind::Forall, v, std::move(body)); }
inline FormulaPtr exists(VarIndex v, FormulaPtr body) { return quantifier(FormulaKind::Exists, v, std::move(body)); }

// Bounded forms: ∃v[(v<t)∧(φ)] and ∀v[(v<t)→(φ)].
inline FormulaPtr exists_below(VarIndex v, TermPtr t, FormulaPtr body) {
  return exists(v, conj(lt(term::var(v), std::move(t)), std::move(body)));
}
inline FormulaPtr forall_below(VarIndex v, TermPtr t, FormulaPtr body) {
  return forall(v, implies(lt(term::var(v), std::move(t)), std::move(body)));
}
inline FormulaPtr neq(TermPtr a, TermPtr b) { return negation(eq(std::move(a), std::move(b))); }
// t ≤ s abbreviates (t<s)∨(t=s).
inline FormulaPtr le(TermPtr a, TermPtr b) { return disj(lt(a, b), eq(a, b)); }

}  // namespace fml

inline TermPtr numeral(const Nat& n) { return term::numeral(n); }

// ---------------------------------------------------------------- variables

inline std::vector<VarIndex> free_vars(const Formula& f) { return f.free; }

inline bool occurs_free(const Formula& f, VarIndex v) { return std::binary_search(f.free.begin(), f.free.end(), v); }
inline bool occurs_in(const Term& t, VarIndex v) { return std::binary_search(t.vars.begin(), t.vars.end(), v); }

inline void collect_all_vars(const Formula& f, std::set<VarIndex>& out) {
  for (const auto& t : f.terms) out.insert(t->vars.begin(), t->vars.end());
  if (f.is_quantifier()) out.insert(f.var);
  for (const auto& s : f.sub)
    if (s) collect_all_vars(*s, out);
}

// Smallest variable index occurring nowhere (free or bound) in f.
inline VarIndex fresh_var(const Formula& f) {
  std::set<VarIndex> used;
  collect_all_vars(f, used);
  VarIndex i = 0;
  while (used.count(i)) ++i;
  return i;
}

// ---------------------------------------------------------------- substitution

inline TermPtr substitute(const TermPtr& t, VarIndex v, const TermPtr& s) {
  if (!occurs_in(*t, v)) return t;
  switch (t->kind) {
    case TermKind::Var: return s;
    case TermKind::Add: return term::add(substitute(t->args[0], v, s), substitute(t->args[1], v, s));
    case TermKind::Mul: return term::mul(substitute(t->args[0], v, s), substitute(t->args[1], v, s));
    case TermKind::Fun: {
      std::vector<TermPtr> a;
      for (const auto& x : t->args) a.push_back(substitute(x, v, s));
      return term::fun(t->fn, std::move(a));
    }
    default: return t;
  }
}

// Capture-avoiding φ[v := s]. A bound variable is renamed only when it would
// capture a variable of s, and then to the smallest index that is safe.
inline FormulaPtr substitute(const FormulaPtr& f, VarIndex v, const TermPtr& s) {
  if (!occurs_free(*f, v)) return f;
  switch (f->kind) {
    case FormulaKind::Eq: return fml::eq(substitute(f->terms[0], v, s), substitute(f->terms[1], v, s));
    case FormulaKind::Lt: return fml::lt(substitute(f->terms[0], v, s), substitute(f->terms[1], v, s));
    case FormulaKind::Pred: {
      std::vector<TermPtr> a;
      for (const auto& x : f->terms) a.push_back(substitute(x, v, s));
      return fml::pred(f->pred, std::move(a));
    }
    case FormulaKind::Not: return fml::negation(substitute(f->sub[0], v, s));
    case FormulaKind::And:
    case FormulaKind::Or:
    case FormulaKind::Implies:
    case FormulaKind::Iff:
      return fml::binary(f->kind, substitute(f->sub[0], v, s), substitute(f->sub[1], v, s));
    case FormulaKind::Forall:
    case FormulaKind::Exists: {
      VarIndex b = f->var;
      FormulaPtr body = f->sub[0];
      if (occurs_in(*s, b)) {
        VarIndex c = 0;
        while (occurs_in(*s, c) || occurs_free(*body, c) || c == v) ++c;
        body = substitute(body, b, term::var(c));
        b = c;
      }
      return fml::quantifier(f->kind, b, substitute(body, v, s));
    }
  }
  return f;
}

// φ(t) for a formula with exactly one free variable (or none).
inline FormulaPtr instantiate(const FormulaPtr& f, const TermPtr& t) {
  if (f->free.size() > 1) throw Error("formula has more than one free variable");
  if (f->free.empty()) return f;
  return substitute(f, f->free[0], t);
}

// ---------------------------------------------------------------- traversal

using Path = std::vector<std::uint16_t>;

inline std::string path_to_string(const Path& p) {
  std::string s;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) s += '.';
    s += std::to_string(p[i]);
  }
  return s;
}
inline Path path_from_string(const std::string& s) {
  Path p;
  if (s.empty()) return p;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t dot = s.find('.', pos);
    if (dot == std::string::npos) dot = s.size();
    p.push_back(static_cast<std::uint16_t>(std::stoul(s.substr(pos, dot - pos))));
    pos = dot + 1;
  }
  return p;
}

inline const Formula* at_path(const Formula& root, const Path& p) {
  const Formula* cur = &root;
  for (auto i : p) {
    if (i > 1 || !cur->sub[i]) return nullptr;
    cur = cur->sub[i].get();
  }
  return cur;
}

// Path of the node with the given address, searched depth first.
inline bool find_path(const Formula& root, const Formula* target, Path& out) {
  if (&root == target) return true;
  for (std::uint16_t i = 0; i < 2; ++i) {
    if (!root.sub[i]) continue;
    out.push_back(i);
    if (find_path(*root.sub[i], target, out)) return true;
    out.pop_back();
  }
  return false;
}

inline void subformulas(const FormulaPtr& f, std::vector<FormulaPtr>& out) {
  out.push_back(f);
  for (const auto& s : f->sub)
    if (s) subformulas(s, out);
}
inline void subterms(const TermPtr& t, std::vector<TermPtr>& out) {
  out.push_back(t);
  for (const auto& a : t->args) subterms(a, out);
}
inline void subterms(const FormulaPtr& f, std::vector<TermPtr>& out) {
  for (const auto& t : f->terms) subterms(t, out);
  for (const auto& s : f->sub)
    if (s) subterms(s, out);
}

inline bool has_oracle(const Term& t) {
  if (t.kind == TermKind::Fun) return true;
  for (const auto& a : t.args)
    if (has_oracle(*a)) return true;
  return false;
}
inline bool has_oracle(const Formula& f) {
  if (f.kind == FormulaKind::Pred) return true;
  for (const auto& t : f.terms)
    if (has_oracle(*t)) return true;
  for (const auto& s : f.sub)
    if (s && has_oracle(*s)) return true;
  return false;
}
inline bool quantifier_free(const Formula& f) {
  if (f.is_quantifier()) return false;
  for (const auto& s : f.sub)
    if (s && !quantifier_free(*s)) return false;
  return true;
}

inline Nat length(const Expr& e) {
  return e.index() == 0 ? std::get<0>(e)->length : std::get<1>(e)->length;
}

}  // namespace selfref
