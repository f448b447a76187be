#pragma once
// Budgeted three-valued evaluation in ℕ and in ℕ⁺ (ℕ with oracle symbols).

#include "selfref/coding.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace selfref {

enum class TV : std::uint8_t { False, True, Unknown };

inline const char* to_string(TV v) {
  switch (v) {
    case TV::False: return "False";
    case TV::True: return "True";
    default: return "Unknown";
  }
}
inline TV tv_of(bool b) { return b ? TV::True : TV::False; }
inline TV not3(TV a) { return a == TV::Unknown ? a : (a == TV::True ? TV::False : TV::True); }
inline TV and3(TV a, TV b) {
  if (a == TV::False || b == TV::False) return TV::False;
  if (a == TV::True && b == TV::True) return TV::True;
  return TV::Unknown;
}
inline TV or3(TV a, TV b) { return not3(and3(not3(a), not3(b))); }
inline TV implies3(TV a, TV b) { return or3(not3(a), b); }
inline TV iff3(TV a, TV b) {
  if (a == TV::Unknown || b == TV::Unknown) return TV::Unknown;
  return tv_of(a == b);
}

class UnboundVariable : public Error {
 public:
  using Error::Error;
};
class BadWitnessAddress : public Error {
 public:
  using Error::Error;
};

struct Budget {
  std::uint64_t witness_bound = 64;
  std::uint32_t depth_bound = 2;
  std::uint64_t iteration_cap = 1u << 20;
  // Decide quantifiers over quantifier-free polynomial bodies via root bounds.
  bool stabilize = false;
};

class Valuation {
 public:
  const Nat* get(VarIndex v) const {
    if (v >= vals_.size() || !vals_[v]) return nullptr;
    return &*vals_[v];
  }
  std::optional<Nat> swap_in(VarIndex v, std::optional<Nat> value) {
    if (v >= vals_.size()) vals_.resize(v + 1);
    std::optional<Nat> old = std::move(vals_[v]);
    vals_[v] = std::move(value);
    return old;
  }
  void set(VarIndex v, Nat value) { swap_in(v, std::move(value)); }

 private:
  std::vector<std::optional<Nat>> vals_;
};

struct Witness {
  enum class Kind { Value, Skolem, Discharge, Unique } kind = Kind::Value;
  Nat value;
  std::function<std::optional<Nat>(const Valuation&)> skolem;
  std::string label;
  std::function<TV(const Valuation&)> discharge;

  static Witness constant(Nat n) {
    Witness w;
    w.value = std::move(n);
    return w;
  }
  static Witness of(std::function<std::optional<Nat>(const Valuation&)> f) {
    Witness w;
    w.kind = Kind::Skolem;
    w.skolem = std::move(f);
    return w;
  }
  // For ∃v[D∧B] where D holds for at most one v (justified under `label`):
  // D true and B false at the value makes the quantifier false.
  static Witness unique(Nat n, std::string label) {
    Witness w;
    w.kind = Kind::Unique;
    w.value = std::move(n);
    w.label = std::move(label);
    return w;
  }
  static Witness discharged(std::string label, std::function<TV(const Valuation&)> f) {
    Witness w;
    w.kind = Kind::Discharge;
    w.label = std::move(label);
    w.discharge = std::move(f);
    return w;
  }
};
using WitnessMap = std::map<Path, Witness>;

// Re-roots a witness map under a path prefix.
inline WitnessMap prefixed(const WitnessMap& m, const Path& prefix) {
  WitnessMap r;
  for (const auto& [p, w] : m) {
    Path q = prefix;
    q.insert(q.end(), p.begin(), p.end());
    r.emplace(std::move(q), w);
  }
  return r;
}

class Evaluator;
using ExistsDecider = std::function<std::optional<TV>(const Formula& q, Evaluator& ev, Valuation& val)>;

struct OracleEnv {
  std::function<TV(const Nat&, const Nat&)> prf;
  std::function<TV(const Nat&)> formula;
  std::function<TV(const Nat&)> tr;
  std::function<Nat(const Nat&)> len;
  std::function<Nat(const Nat&, const Nat&)> d;
  std::function<Nat(const Nat&)> neg;
  std::function<Nat(const Nat&, const Nat&, const Nat&)> inst;
  std::vector<ExistsDecider> deciders;
};

struct EvalStats {
  std::uint64_t witnesses_used = 0;
  std::uint64_t linear_solves = 0;
  std::uint64_t stabilized = 0;
  std::uint64_t budget_hits = 0;
  std::map<std::string, std::uint64_t> discharges;
};

// ---------------------------------------------------------------- polynomials

namespace poly {

using Poly = std::vector<BigInt>;  // coefficient of z^i at index i

inline void trim(Poly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}
inline Poly add(const Poly& a, const Poly& b, int sign = 1) {
  Poly r(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += sign * b[i];
  trim(r);
  return r;
}
inline Poly mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  trim(r);
  return r;
}

// Above the returned bound the sign of p is constant.
inline BigInt root_bound(const Poly& p) {
  if (p.size() <= 1) return 0;
  BigInt lead = abs(p.back());
  BigInt m = 0;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) m = std::max(m, BigInt(abs(p[i])));
  return 1 + (m + lead - 1) / lead;
}

}  // namespace poly

inline int degree_in(const Term& t, VarIndex v) {
  if (!occurs_in(t, v)) return 0;
  switch (t.kind) {
    case TermKind::Var: return 1;
    case TermKind::Add: return std::max(degree_in(*t.args[0], v), degree_in(*t.args[1], v));
    case TermKind::Mul: return degree_in(*t.args[0], v) + degree_in(*t.args[1], v);
    default: return 1000;
  }
}

inline void flatten_and(const FormulaPtr& f, std::vector<FormulaPtr>& out) {
  if (f->kind == FormulaKind::And) {
    flatten_and(f->sub[0], out);
    flatten_and(f->sub[1], out);
  } else {
    out.push_back(f);
  }
}

// ---------------------------------------------------------------- evaluator

class Evaluator {
 public:
  Evaluator(const OracleEnv& env, Budget budget, const WitnessMap* witnesses = nullptr)
      : env_(env), budget_(budget), witnesses_(witnesses && !witnesses->empty() ? witnesses : nullptr) {}

  const Budget& budget() const { return budget_; }
  const OracleEnv& env() const { return env_; }
  EvalStats stats;
  // Closed sentences whose truth value is fixed by hypothesis (case analysis).
  std::vector<std::pair<FormulaPtr, TV>> assumptions;

  TV run(const FormulaPtr& f, Valuation& val) {
    if (witnesses_) {
      for (const auto& [p, w] : *witnesses_) {
        const Formula* node = at_path(*f, p);
        if (!node || node->kind != FormulaKind::Exists)
          throw BadWitnessAddress("no Exists node at path '" + path_to_string(p) + "'");
      }
    }
    path_.clear();
    return eval(*f, val);
  }

  Nat term(const Term& t, const Valuation& val) {
    switch (t.kind) {
      case TermKind::Numeral: return t.value;
      case TermKind::Var: {
        const Nat* n = val.get(t.var);
        if (!n) throw UnboundVariable("variable x" + std::string(t.var, '\'') + " has no value");
        return *n;
      }
      case TermKind::Add: return term(*t.args[0], val) + term(*t.args[1], val);
      case TermKind::Mul: return term(*t.args[0], val) * term(*t.args[1], val);
      case TermKind::Fun: {
        std::vector<Nat> a;
        for (const auto& x : t.args) a.push_back(term(*x, val));
        switch (t.fn) {
          case OracleFn::Len: return env_.len ? env_.len(a[0]) : Nat(0);
          case OracleFn::D: return env_.d ? env_.d(a[0], a[1]) : Nat(0);
          case OracleFn::Neg: return env_.neg ? env_.neg(a[0]) : Nat(0);
          case OracleFn::Inst: return env_.inst ? env_.inst(a[0], a[1], a[2]) : Nat(0);
        }
      }
    }
    return Nat(0);
  }

  // Value of a quantifier body with its variable set to `value`.
  TV body_at(const Formula& q, const Nat& value, Valuation& val) {
    auto old = val.swap_in(q.var, value);
    path_.push_back(0);
    TV r;
    try {
      r = eval(*q.sub[0], val);
    } catch (...) {
      path_.pop_back();
      val.swap_in(q.var, std::move(old));
      throw;
    }
    path_.pop_back();
    val.swap_in(q.var, std::move(old));
    return r;
  }

  TV eval(const Formula& f, Valuation& val) {
    if (witnesses_) {
      auto it = witnesses_->find(path_);
      if (it != witnesses_->end() && it->second.kind == Witness::Kind::Discharge) {
        ++stats.discharges[it->second.label];
        return it->second.discharge(val);
      }
    }
    if (!assumptions.empty()) {
      if (auto r = assumed(f, val)) return *r;
    }
    switch (f.kind) {
      case FormulaKind::Eq: return tv_of(term(*f.terms[0], val) == term(*f.terms[1], val));
      case FormulaKind::Lt: return tv_of(term(*f.terms[0], val) < term(*f.terms[1], val));
      case FormulaKind::Pred: {
        std::vector<Nat> a;
        for (const auto& x : f.terms) a.push_back(term(*x, val));
        switch (f.pred) {
          case OraclePred::Prf: return env_.prf ? env_.prf(a[0], a[1]) : TV::False;
          case OraclePred::Formula: return env_.formula ? env_.formula(a[0]) : TV::False;
          case OraclePred::Tr: return env_.tr ? env_.tr(a[0]) : TV::Unknown;
        }
        return TV::Unknown;
      }
      case FormulaKind::Not: return not3(child(f, 0, val));
      case FormulaKind::And: {
        TV a = child(f, 0, val);
        if (a == TV::False) return a;
        return and3(a, child(f, 1, val));
      }
      case FormulaKind::Or: {
        TV a = child(f, 0, val);
        if (a == TV::True) return a;
        return or3(a, child(f, 1, val));
      }
      case FormulaKind::Implies: {
        TV a = child(f, 0, val);
        if (a == TV::False) return TV::True;
        return implies3(a, child(f, 1, val));
      }
      case FormulaKind::Iff: {
        TV a = child(f, 0, val);
        return iff3(a, child(f, 1, val));
      }
      case FormulaKind::Exists: return exists(f, val);
      case FormulaKind::Forall: return forall(f, val);
    }
    return TV::Unknown;
  }

  // Upper end of the range that decides a quantifier over a quantifier-free
  // polynomial body, or nullopt if the body is not of that kind.
  std::optional<BigInt> stabilization_bound(const Formula& body, VarIndex v, Valuation& val) {
    if (!quantifier_free(body) || has_oracle(body)) return std::nullopt;
    BigInt bound = 0;
    bool ok = true;
    std::function<void(const Formula&)> walk = [&](const Formula& g) {
      if (!ok) return;
      if (g.kind == FormulaKind::Eq || g.kind == FormulaKind::Lt) {
        auto p = to_poly(*g.terms[0], v, val);
        auto q = to_poly(*g.terms[1], v, val);
        if (!p || !q) {
          ok = false;
          return;
        }
        bound = std::max(bound, poly::root_bound(poly::add(*p, *q, -1)));
        return;
      }
      for (const auto& s : g.sub)
        if (s) walk(*s);
    };
    walk(body);
    if (!ok) return std::nullopt;
    return bound;
  }

 private:
  TV child(const Formula& f, std::uint16_t i, Valuation& val) {
    path_.push_back(i);
    TV r;
    try {
      r = eval(*f.sub[i], val);
    } catch (...) {
      path_.pop_back();
      throw;
    }
    path_.pop_back();
    return r;
  }

  std::optional<TV> assumed(const Formula& f, Valuation& val) {
    for (const auto& [s, tv] : assumptions) {
      if (s->shape != f.shape) continue;
      FormulaPtr inst = std::shared_ptr<const Formula>(std::shared_ptr<const Formula>{}, &f);
      for (VarIndex v : f.free) {
        const Nat* n = val.get(v);
        if (!n) return std::nullopt;
        inst = substitute(inst, v, numeral(*n));
      }
      if (equal(*inst, *s)) return tv;
    }
    return std::nullopt;
  }

  std::optional<poly::Poly> to_poly(const Term& t, VarIndex v, Valuation& val) {
    switch (t.kind) {
      case TermKind::Numeral:
        if (!t.value.is_concrete()) return std::nullopt;
        return t.value == Nat(0) ? poly::Poly{} : poly::Poly{t.value.concrete()};
      case TermKind::Var: {
        if (t.var == v) return poly::Poly{0, 1};
        const Nat* n = val.get(t.var);
        if (!n || !n->is_concrete()) return std::nullopt;
        return *n == Nat(0) ? poly::Poly{} : poly::Poly{n->concrete()};
      }
      case TermKind::Add:
      case TermKind::Mul: {
        auto a = to_poly(*t.args[0], v, val);
        auto b = to_poly(*t.args[1], v, val);
        if (!a || !b) return std::nullopt;
        auto r = t.kind == TermKind::Add ? poly::add(*a, *b) : poly::mul(*a, *b);
        if (r.size() > 17) return std::nullopt;
        return r;
      }
      default: return std::nullopt;
    }
  }

  // The bound t of ∃v[(v<t)∧…], ∀v[(v<t)→…], or the same with (v<t)∨(v=t);
  // the flag is set for the inclusive form.
  static std::optional<std::pair<const Term*, bool>> bounded_pattern(const Formula& q) {
    const Formula& b = *q.sub[0];
    FormulaKind want = q.kind == FormulaKind::Exists ? FormulaKind::And : FormulaKind::Implies;
    if (b.kind != want) return std::nullopt;
    const Formula& g = *b.sub[0];
    auto guard = [&](const Formula& a, FormulaKind k) {
      return a.kind == k && a.terms[0]->kind == TermKind::Var && a.terms[0]->var == q.var && !occurs_in(*a.terms[1], q.var);
    };
    if (guard(g, FormulaKind::Lt)) return std::make_pair(g.terms[1].get(), false);
    if (g.kind == FormulaKind::Or && guard(*g.sub[0], FormulaKind::Lt) && guard(*g.sub[1], FormulaKind::Eq) &&
        equal(*g.sub[0]->terms[1], *g.sub[1]->terms[1]))
      return std::make_pair(g.sub[0]->terms[1].get(), true);
    return std::nullopt;
  }

  Nat bound_value(const std::pair<const Term*, bool>& b, Valuation& val) {
    Nat t = term(*b.first, val);
    return b.second ? t + Nat(1) : t;
  }

  // Inside ∃v, an equation affine in v pins v to at most one value; the
  // quantifier then reduces to the body at that value.
  std::optional<TV> solve_linear(const Formula& q, Valuation& val, const Nat* bound) {
    std::vector<FormulaPtr> conj;
    flatten_and(q.sub[0], conj);
    for (const auto& c : conj) {
      if (c->kind != FormulaKind::Eq) continue;
      int dl = degree_in(*c->terms[0], q.var), dr = degree_in(*c->terms[1], q.var);
      if (dl > 1 || dr > 1 || (dl == 0 && dr == 0)) continue;
      auto diff_at = [&](int z) {
        auto old = val.swap_in(q.var, Nat(z));
        ExpSum d = term(*c->terms[0], val).as_sum() - term(*c->terms[1], val).as_sum();
        val.swap_in(q.var, std::move(old));
        return d;
      };
      ExpSum f0 = diff_at(0);
      ExpSum a = diff_at(1) - f0;
      if (a.is_zero()) {
        if (f0.is_zero()) continue;
        ++stats.linear_solves;
        return TV::False;
      }
      if (a.terms().size() != 1) continue;
      const auto& at = a.terms()[0];
      ExpSum z;
      bool divisible = true;
      for (const auto& t : f0.terms()) {
        if (t.exp < at.exp) {
          divisible = false;
          break;
        }
        z = z + ExpSum::power(t.exp - at.exp, -t.coeff / at.coeff);
      }
      if (!divisible) continue;
      ++stats.linear_solves;
      auto zn = Nat::try_from_sum(z);
      if (!zn) return TV::False;
      if (bound && !(*zn < *bound)) return TV::False;
      return body_at(q, *zn, val);
    }
    return std::nullopt;
  }

  std::optional<Nat> witness_for(Valuation& val) {
    if (!witnesses_) return std::nullopt;
    auto it = witnesses_->find(path_);
    if (it == witnesses_->end()) return std::nullopt;
    if (it->second.kind == Witness::Kind::Value || it->second.kind == Witness::Kind::Unique)
      return it->second.value;
    if (it->second.kind == Witness::Kind::Skolem) return it->second.skolem(val);
    return std::nullopt;
  }

  TV unique_witness(const Formula& f, const Witness& w, Valuation& val) {
    const Formula& body = *f.sub[0];
    if (body.kind != FormulaKind::And) return TV::Unknown;
    auto old = val.swap_in(f.var, w.value);
    path_.push_back(0);
    TV d = TV::Unknown, rest = TV::Unknown;
    try {
      d = child(body, 0, val);
      if (d == TV::True) rest = child(body, 1, val);
    } catch (...) {
      path_.pop_back();
      val.swap_in(f.var, std::move(old));
      throw;
    }
    path_.pop_back();
    val.swap_in(f.var, std::move(old));
    if (d != TV::True || rest == TV::Unknown) return TV::Unknown;
    if (rest == TV::True) {
      ++stats.witnesses_used;
      return TV::True;
    }
    ++stats.discharges[w.label];
    return TV::False;
  }

  TV exists(const Formula& f, Valuation& val) {
    if (witnesses_) {
      auto it = witnesses_->find(path_);
      if (it != witnesses_->end() && it->second.kind == Witness::Kind::Unique) {
        TV r = unique_witness(f, it->second, val);
        if (r != TV::Unknown) return r;
      }
    }
    if (auto w = witness_for(val)) {
      if (body_at(f, *w, val) == TV::True) {
        ++stats.witnesses_used;
        return TV::True;
      }
    }
    for (const auto& d : env_.deciders)
      if (auto r = d(f, *this, val)) return *r;
    if (auto b = bounded_pattern(f)) {
      Nat t = bound_value(*b, val);
      if (auto r = solve_linear(f, val, &t)) return *r;
      return iterate(f, t, val, TV::True);
    }
    return unbounded(f, val, TV::True);
  }

  TV forall(const Formula& f, Valuation& val) {
    if (auto b = bounded_pattern(f)) {
      Nat t = bound_value(*b, val);
      return iterate(f, t, val, TV::False);
    }
    return unbounded(f, val, TV::False);
  }

  // Exact evaluation over 0..t-1. `decisive` is True for ∃ and False for ∀.
  TV iterate(const Formula& f, const Nat& t, Valuation& val, TV decisive) {
    auto n = t.to_u64();
    if (!n || *n > budget_.iteration_cap) {
      ++stats.budget_hits;
      return TV::Unknown;
    }
    bool unknown = false;
    for (std::uint64_t z = 0; z < *n; ++z) {
      TV r = body_at(f, Nat(z), val);
      if (r == decisive) return decisive;
      if (r == TV::Unknown) unknown = true;
    }
    return unknown ? TV::Unknown : not3(decisive);
  }

  TV unbounded(const Formula& f, Valuation& val, TV decisive) {
    if (budget_.stabilize) {
      if (decisive == TV::True) {
        if (auto r = solve_linear(f, val, nullptr)) return *r;
      }
      if (auto b = stabilization_bound(*f.sub[0], f.var, val)) {
        if (*b <= budget_.witness_bound) {
          ++stats.stabilized;
          return iterate(f, Nat(*b + 1), val, decisive);
        }
      }
    }
    if (depth_ >= budget_.depth_bound) {
      ++stats.budget_hits;
      return TV::Unknown;
    }
    ++depth_;
    TV result = TV::Unknown;
    try {
      for (std::uint64_t z = 0; z <= budget_.witness_bound; ++z) {
        if (body_at(f, Nat(z), val) == decisive) {
          result = decisive;
          break;
        }
      }
    } catch (...) {
      --depth_;
      throw;
    }
    --depth_;
    if (result == TV::Unknown) ++stats.budget_hits;
    return result;
  }

  const OracleEnv& env_;
  Budget budget_;
  const WitnessMap* witnesses_;
  Path path_;
  std::uint32_t depth_ = 0;
};

// ---------------------------------------------------------------- environments

inline bool is_pure_formula_code(const Nat& c) {
  try {
    Expr e = decode(c);
    return e.index() == 1 && !has_oracle(*std::get<1>(e));
  } catch (const Error&) {
    return false;
  }
}

// Truth of a decoded sentence under a fixed budget (stabilization on).
TV default_truth(const Nat& c, const OracleEnv& env);

// Interpretations of the code-level oracle symbols; prf is False everywhere
// until a theory is attached and Tr evaluates decoded sentences.
inline OracleEnv base_env() {
  OracleEnv env;
  env.prf = [](const Nat&, const Nat&) { return TV::False; };
  env.formula = [](const Nat& c) { return tv_of(is_pure_formula_code(c)); };
  env.len = [](const Nat& c) -> Nat {
    try {
      return length(decode(c));
    } catch (const Error&) {
      return Nat(0);
    }
  };
  env.d = [](const Nat& c, const Nat& y) -> Nat {
    try {
      return D_code(c, numeral(y));
    } catch (const Error&) {
      return Nat(0);
    }
  };
  env.neg = [](const Nat& c) -> Nat {
    try {
      return neg_code(c);
    } catch (const Error&) {
      return Nat(0);
    }
  };
  env.inst = [](const Nat&, const Nat&, const Nat&) { return Nat(0); };
  return env;
}

inline TV eval(const FormulaPtr& f, const Valuation& valuation, const Budget& budget, const OracleEnv& env,
               const WitnessMap* witnesses = nullptr, EvalStats* stats = nullptr) {
  Evaluator ev(env, budget, witnesses);
  Valuation val = valuation;
  TV r = ev.run(f, val);
  if (stats) *stats = ev.stats;
  return r;
}
inline TV eval(const FormulaPtr& f, const Budget& budget, const OracleEnv& env, const WitnessMap* witnesses = nullptr) {
  return eval(f, Valuation{}, budget, env, witnesses);
}

inline Nat eval_term(const TermPtr& t, const Valuation& val, const OracleEnv& env) {
  Evaluator ev(env, Budget{});
  return ev.term(*t, val);
}

struct TruthGuard {
  static int& depth() {
    thread_local int d = 0;
    return d;
  }
};

inline TV default_truth(const Nat& c, const OracleEnv& env) {
  FormulaPtr s;
  try {
    s = decode_formula(c);
  } catch (const Error&) {
    return TV::False;
  }
  if (!s->closed()) return TV::False;
  if (TruthGuard::depth() > 2) return TV::Unknown;
  ++TruthGuard::depth();
  Budget b;
  b.stabilize = true;
  TV r;
  try {
    r = eval(s, b, env);
  } catch (...) {
    --TruthGuard::depth();
    throw;
  }
  --TruthGuard::depth();
  return r;
}

// Environment whose Tr evaluates decoded sentences.
inline std::shared_ptr<OracleEnv> truth_env() {
  auto env = std::make_shared<OracleEnv>(base_env());
  std::weak_ptr<OracleEnv> weak = env;
  env->tr = [weak](const Nat& c) {
    auto e = weak.lock();
    return e ? default_truth(c, *e) : TV::Unknown;
  };
  return env;
}

// ∀ζ[φ(ζ)↔ζ=n̄], evaluated with stabilization so quantifier-free φ is exact.
inline TV defines(const FormulaPtr& phi, const Nat& n, Budget budget, const OracleEnv& env) {
  budget.stabilize = true;
  return eval(build_D(phi, numeral(n)), budget, env);
}

inline FormulaPtr truth_biconditional_formula(const FormulaPtr& psi, const FormulaPtr& beta) {
  if (psi->free.size() != 1) throw NotOneFree("Ψ must have exactly one free variable");
  return fml::iff(instantiate(psi, quote(beta)), beta);
}

inline TV truth_biconditional(const FormulaPtr& psi, const FormulaPtr& beta, const Budget& budget,
                              const OracleEnv& env, const WitnessMap* witnesses = nullptr) {
  return eval(truth_biconditional_formula(psi, beta), budget, env, witnesses);
}

}  // namespace selfref
