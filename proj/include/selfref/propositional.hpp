#pragma once
// Propositional skeletons and truth-table equivalence.

#include "selfref/syntax.hpp"

#include <memory>
#include <string>
#include <vector>

namespace selfref {

class TooManyAtoms : public Error {
 public:
  using Error::Error;
};

struct PropForm;
using PropPtr = std::shared_ptr<const PropForm>;

struct PropForm {
  enum class Kind { Atom, Not, And, Or, Implies, Iff } kind = Kind::Atom;
  unsigned atom = 0;
  PropPtr a, b;

  static PropPtr var(unsigned i) {
    auto p = std::make_shared<PropForm>();
    p->atom = i;
    return p;
  }
  static PropPtr make(Kind k, PropPtr x, PropPtr y = nullptr) {
    auto p = std::make_shared<PropForm>();
    p->kind = k;
    p->a = std::move(x);
    p->b = std::move(y);
    return p;
  }
};

namespace prop {
inline PropPtr p(unsigned i) { return PropForm::var(i); }
inline PropPtr neg(PropPtr x) { return PropForm::make(PropForm::Kind::Not, std::move(x)); }
inline PropPtr conj(PropPtr x, PropPtr y) { return PropForm::make(PropForm::Kind::And, std::move(x), std::move(y)); }
inline PropPtr disj(PropPtr x, PropPtr y) { return PropForm::make(PropForm::Kind::Or, std::move(x), std::move(y)); }
inline PropPtr implies(PropPtr x, PropPtr y) {
  return PropForm::make(PropForm::Kind::Implies, std::move(x), std::move(y));
}
inline PropPtr iff(PropPtr x, PropPtr y) { return PropForm::make(PropForm::Kind::Iff, std::move(x), std::move(y)); }
}  // namespace prop

inline unsigned atom_count(const PropForm& f) {
  if (f.kind == PropForm::Kind::Atom) return f.atom + 1;
  unsigned n = atom_count(*f.a);
  if (f.b) n = std::max(n, atom_count(*f.b));
  return n;
}

inline bool prop_value(const PropForm& f, std::uint32_t row) {
  switch (f.kind) {
    case PropForm::Kind::Atom: return (row >> f.atom) & 1u;
    case PropForm::Kind::Not: return !prop_value(*f.a, row);
    case PropForm::Kind::And: return prop_value(*f.a, row) && prop_value(*f.b, row);
    case PropForm::Kind::Or: return prop_value(*f.a, row) || prop_value(*f.b, row);
    case PropForm::Kind::Implies: return !prop_value(*f.a, row) || prop_value(*f.b, row);
    case PropForm::Kind::Iff: return prop_value(*f.a, row) == prop_value(*f.b, row);
  }
  return false;
}

inline std::string prop_render(const PropForm& f) {
  static const char* names = "pqrstuvwabcdefgh";
  switch (f.kind) {
    case PropForm::Kind::Atom:
      return f.atom < 16 ? std::string(1, names[f.atom]) : "p" + std::to_string(f.atom);
    case PropForm::Kind::Not: return "¬(" + prop_render(*f.a) + ")";
    default: break;
  }
  const char* op = f.kind == PropForm::Kind::And       ? "∧"
                   : f.kind == PropForm::Kind::Or      ? "∨"
                   : f.kind == PropForm::Kind::Implies ? "→"
                                                       : "↔";
  return "(" + prop_render(*f.a) + ")" + op + "(" + prop_render(*f.b) + ")";
}

// Equivalence by exhaustive valuation of the shared atoms.
inline bool taut_equiv(const PropForm& f, const PropForm& g) {
  unsigned n = std::max(atom_count(f), atom_count(g));
  if (n > 16) throw TooManyAtoms("truth tables are limited to 16 atoms, got " + std::to_string(n));
  for (std::uint32_t row = 0; row < (1u << n); ++row)
    if (prop_value(f, row) != prop_value(g, row)) return false;
  return true;
}
inline bool tautology(const PropForm& f) { return taut_equiv(f, *prop::implies(prop::p(0), prop::p(0))); }

// Replaces an atom by a constant, written p∨¬p or ¬(p∨¬p).
inline PropPtr prop_assign(const PropPtr& f, unsigned atom, bool value) {
  if (f->kind == PropForm::Kind::Atom) {
    if (f->atom != atom) return f;
    PropPtr top = prop::disj(prop::p(atom), prop::neg(prop::p(atom)));
    return value ? top : prop::neg(top);
  }
  return PropForm::make(f->kind, prop_assign(f->a, atom, value), f->b ? prop_assign(f->b, atom, value) : nullptr);
}

// Connective skeleton of a formula; maximal non-connective subformulas become atoms,
// shared when equal.
struct Skeleton {
  PropPtr form;
  std::vector<FormulaPtr> atoms;
};

namespace prop_detail {
inline PropPtr skeleton(const FormulaPtr& f, std::vector<FormulaPtr>& atoms) {
  using K = PropForm::Kind;
  switch (f->kind) {
    case FormulaKind::Not: return prop::neg(skeleton(f->sub[0], atoms));
    case FormulaKind::And:
    case FormulaKind::Or:
    case FormulaKind::Implies:
    case FormulaKind::Iff: {
      K k = f->kind == FormulaKind::And ? K::And
            : f->kind == FormulaKind::Or ? K::Or
            : f->kind == FormulaKind::Implies ? K::Implies
                                              : K::Iff;
      auto l = skeleton(f->sub[0], atoms);
      return PropForm::make(k, l, skeleton(f->sub[1], atoms));
    }
    default: break;
  }
  for (unsigned i = 0; i < atoms.size(); ++i)
    if (equal(atoms[i], f)) return prop::p(i);
  atoms.push_back(f);
  return prop::p(static_cast<unsigned>(atoms.size() - 1));
}
}  // namespace prop_detail

inline Skeleton skeleton(const FormulaPtr& f, std::vector<FormulaPtr> atoms = {}) {
  Skeleton s;
  s.form = prop_detail::skeleton(f, atoms);
  s.atoms = std::move(atoms);
  return s;
}

// Skeletons of two formulas over one shared atom table.
inline std::pair<Skeleton, Skeleton> joint_skeleton(const FormulaPtr& f, const FormulaPtr& g) {
  Skeleton a = skeleton(f);
  Skeleton b = skeleton(g, a.atoms);
  a.atoms = b.atoms;
  return {a, b};
}

}  // namespace selfref
