#pragma once
// Dominating functions over a small pinned catalogue of two-variable formulas,
// and the formula ψ(u,v) whose graph defines F from a truth predicate.

#include "selfref/proof.hpp"
#include "selfref/semantics.hpp"

#include <map>
#include <optional>

namespace selfref {

class UnresolvedPoint : public Error {
 public:
  using Error::Error;
};

// Catalogue index i is the micro code of the i-th formula φ(u,v), u = x, v = x'.
class MicroScheme {
 public:
  explicit MicroScheme(std::vector<FormulaPtr> catalogue) : cat_(std::move(catalogue)) {
    for (std::size_t i = 0; i < cat_.size(); ++i)
      if (cat_[i]->free != std::vector<VarIndex>{0, 1})
        throw Error("catalogue formula " + std::to_string(i) + " must have free variables exactly x, x'");
    for (std::size_t i = 0; i < cat_.size(); ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (equal(cat_[i], cat_[j])) throw Error("catalogue repeats formula " + std::to_string(j));
  }

  std::size_t size() const { return cat_.size(); }
  const FormulaPtr& at(std::size_t i) const { return cat_.at(i); }

  FormulaPtr instance(std::size_t a, const Nat& u, const Nat& z) const {
    return substitute(substitute(cat_.at(a), 0, numeral(u)), 1, numeral(z));
  }

  // Least z with φ_a(ū, z̄); nullopt when ∃z φ_a(ū,z) is False; throws
  // UnresolvedPoint when neither is settled within the budget.
  std::optional<std::uint64_t> least_witness(std::size_t a, std::uint64_t u, const Budget& budget) const {
    auto key = std::make_tuple(a, u, budget.witness_bound);
    if (auto it = cache_.find(key); it != cache_.end()) {
      if (it->second == kUnresolved) throw UnresolvedPoint("no verdict for α=" + std::to_string(a) + " at " + std::to_string(u));
      return it->second == kNone ? std::nullopt : std::optional<std::uint64_t>(it->second);
    }
    std::uint64_t r = kUnresolved;
    for (std::uint64_t z = 0; z <= budget.witness_bound; ++z)
      if (eval(instance(a, Nat(u), Nat(z)), budget, base_env()) == TV::True) {
        r = z;
        break;
      }
    if (r == kUnresolved) {
      Budget b = budget;
      b.stabilize = true;
      FormulaPtr ex = fml::exists(1, substitute(cat_.at(a), 0, numeral(Nat(u))));
      if (eval(ex, b, base_env()) == TV::False) r = kNone;
    }
    cache_[key] = r;
    return least_witness(a, u, budget);
  }

 private:
  static constexpr std::uint64_t kNone = ~0ull, kUnresolved = ~0ull - 1;
  std::vector<FormulaPtr> cat_;
  mutable std::map<std::tuple<std::size_t, std::uint64_t, std::uint64_t>, std::uint64_t> cache_;
};

inline MicroScheme micro_catalogue(const std::string& name = "micro_catalogue.txt") {
  std::vector<FormulaPtr> fs;
  std::istringstream in(read_file(fixture_path(name)));
  for (std::string line; std::getline(in, line);)
    if (line.find_first_not_of(" \t\r") != std::string::npos) fs.push_back(parse_formula(line));
  return MicroScheme(std::move(fs));
}

namespace dom_detail {
inline std::optional<std::uint64_t> bound_over(const MicroScheme& s, std::uint64_t x, bool all_inputs,
                                               const Budget& budget) {
  std::uint64_t y = 0;
  std::size_t top = std::min<std::uint64_t>(x, s.size() - 1);
  try {
    for (std::size_t a = 0; a <= top && s.size(); ++a)
      for (std::uint64_t u = all_inputs ? 0 : x; u <= x; ++u)
        if (auto z = s.least_witness(a, u, budget)) y = std::max(y, *z + 1);
  } catch (const UnresolvedPoint&) {
    return std::nullopt;
  }
  return y;
}
}  // namespace dom_detail

// min{y | ∀α≤x[∃z α(x,z) → ∃z<y α(x,z)]}; nullopt is Unknown.
inline std::optional<std::uint64_t> F_diagonal(const MicroScheme& s, std::uint64_t x, const Budget& budget = {}) {
  return dom_detail::bound_over(s, x, false, budget);
}

// min{y | ∀α,u≤x[∃z α(u,z) → ∃z<y α(u,z)]}
inline std::optional<std::uint64_t> F_uniform(const MicroScheme& s, std::uint64_t x, const Budget& budget = {}) {
  return dom_detail::bound_over(s, x, true, budget);
}

struct DefinedFunction {
  FormulaPtr formula;
  std::uint64_t micro_code = 0;
  std::map<std::uint64_t, std::uint64_t> samples;  // m ↦ n with φ(m̄,n̄) True and no other n ≤ the search bound
};

inline DefinedFunction defined_function(const MicroScheme& s, std::size_t code, std::uint64_t from, std::uint64_t to,
                                        const Budget& budget = {}) {
  DefinedFunction f;
  f.formula = s.at(code);
  f.micro_code = code;
  for (std::uint64_t m = from; m <= to; ++m) {
    std::optional<std::uint64_t> hit;
    for (std::uint64_t n = 0; n <= budget.witness_bound; ++n)
      if (eval(s.instance(code, Nat(m), Nat(n)), budget, base_env()) == TV::True) {
        if (hit) throw Error("formula " + std::to_string(code) + " is not functional at " + std::to_string(m));
        hit = n;
      }
    if (!hit) throw UnresolvedPoint("no value for formula " + std::to_string(code) + " at " + std::to_string(m));
    f.samples[m] = *hit;
  }
  return f;
}

// F(x) > f(x) for every x in [max(from, code of f), to].
inline bool dominates_check(const std::map<std::uint64_t, std::optional<std::uint64_t>>& F, const DefinedFunction& f,
                            std::uint64_t from, std::uint64_t to) {
  for (std::uint64_t x = std::max(from, f.micro_code); x <= to; ++x) {
    auto fi = F.find(x);
    auto si = f.samples.find(x);
    if (fi == F.end() || !fi->second || si == f.samples.end()) throw UnresolvedPoint("unresolved at " + std::to_string(x));
    if (!(*fi->second > si->second)) return false;
  }
  return true;
}

struct PsiVars {
  static constexpr VarIndex u = 0, v = 1, alpha = 2, z = 3, w = 4;
};

struct PsiFormulas {
  FormulaPtr psi;    // ψ(u,v)
  FormulaPtr graph;  // ψ(u,v) ∧ ∀w<v ¬ψ(u,w)
};

// ψ(u,v) = ∀α≤u[∃z Υ(inst(α,u,z)) → ∃z<v Υ(inst(α,u,z))]
inline PsiFormulas build_psi(const FormulaPtr& upsilon) {
  if (upsilon->free.size() != 1) throw NotOneFree("Υ must have exactly one free variable");
  using V = PsiVars;
  auto at = [&](VarIndex zv) {
    return instantiate(upsilon, term::fun(OracleFn::Inst, {term::var(V::alpha), term::var(V::u), term::var(zv)}));
  };
  auto psi_at = [&](const TermPtr& bound) {
    return fml::forall(V::alpha,
                       fml::implies(fml::le(term::var(V::alpha), term::var(V::u)),
                                    fml::implies(fml::exists(V::z, at(V::z)), fml::exists_below(V::z, bound, at(V::z)))));
  };
  PsiFormulas p;
  p.psi = psi_at(term::var(V::v));
  p.graph = fml::conj(p.psi, fml::forall_below(V::w, term::var(V::v), fml::negation(psi_at(term::var(V::w)))));
  return p;
}

// Truth environment where inst reads the catalogue and ∃z Υ(inst(ā,ū,z)) is
// settled by the catalogue's own witness search.
inline std::shared_ptr<OracleEnv> domination_env(std::shared_ptr<const MicroScheme> s, const Budget& budget = {}) {
  auto env = truth_env();
  env->inst = [s](const Nat& a, const Nat& u, const Nat& z) -> Nat {
    if (!a.is_concrete() || a.concrete() >= s->size()) return Nat(0);
    return encode(s->instance(static_cast<std::size_t>(a.concrete()), u, z));
  };
  env->deciders.push_back([s, budget](const Formula& q, Evaluator& ev, Valuation& val) -> std::optional<TV> {
    if (q.kind != FormulaKind::Exists) return std::nullopt;
    const Formula& body = *q.sub[0];
    if (body.kind != FormulaKind::Pred || body.pred != OraclePred::Tr) return std::nullopt;
    const Term& t = *body.terms[0];
    if (t.kind != TermKind::Fun || t.fn != OracleFn::Inst || t.args[2]->kind != TermKind::Var || t.args[2]->var != q.var)
      return std::nullopt;
    Nat a = ev.term(*t.args[0], val), u = ev.term(*t.args[1], val);
    if (!a.is_concrete() || !u.is_concrete()) return TV::Unknown;
    if (a.concrete() >= s->size()) return TV::False;
    try {
      return tv_of(s->least_witness(static_cast<std::size_t>(a.concrete()),
                                    static_cast<std::uint64_t>(u.concrete()), budget).has_value());
    } catch (const UnresolvedPoint&) {
      return TV::Unknown;
    }
  });
  return env;
}

}  // namespace selfref
