#pragma once
// Def / Berry / B formulas for a formula Υ, the length bound on B, and
// micro-scale universes where definability is decided exactly.

#include "selfref/enumerate.hpp"
#include "selfref/semantics.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <random>

namespace selfref {

class BudgetInsufficient : public Error {
 public:
  using Error::Error;
};

struct BerryVars {
  static constexpr VarIndex x = 0, xp = 1, alpha = 2, w = 3;
};

// ∃α[((Formula(α))∧(len(α)<z))∧(Υ[D(α,y)])]
inline FormulaPtr def_at(const FormulaPtr& upsilon, const TermPtr& y, const TermPtr& z) {
  TermPtr a = term::var(BerryVars::alpha);
  FormulaPtr body = fml::conj(fml::conj(fml::pred(OraclePred::Formula, {a}), fml::lt(term::fun(OracleFn::Len, {a}), z)),
                              instantiate(upsilon, term::fun(OracleFn::D, {a, y})));
  return fml::exists(BerryVars::alpha, body);
}

// ¬Def(u) ∧ ∀w<u Def(w), both at bound v
inline FormulaPtr berry_at(const FormulaPtr& upsilon, const TermPtr& u, const TermPtr& v) {
  return fml::conj(fml::negation(def_at(upsilon, u, v)),
                   fml::forall_below(BerryVars::w, u, def_at(upsilon, term::var(BerryVars::w), v)));
}

// ∃x'[(x'=q)∧(Berry^{<x'}(x))]
inline FormulaPtr b_at(const FormulaPtr& upsilon, const TermPtr& q) {
  return fml::exists(BerryVars::xp, fml::conj(fml::eq(term::var(BerryVars::xp), q),
                                              berry_at(upsilon, term::var(BerryVars::x), term::var(BerryVars::xp))));
}

struct BerryBundle {
  FormulaPtr upsilon;
  FormulaPtr def_formula;    // free y = x, z = x'
  FormulaPtr berry_formula;  // free u = x, v = x'
  FormulaPtr b_formula;      // free x
  Nat ell;
  TermPtr q_term;            // 6̄·ℓ̄
};

inline BerryBundle build_bundle(const FormulaPtr& upsilon) {
  if (upsilon->free.size() != 1) throw NotOneFree("Υ must have exactly one free variable");
  BerryBundle b;
  b.upsilon = upsilon;
  TermPtr x = term::var(BerryVars::x), xp = term::var(BerryVars::xp);
  b.def_formula = def_at(upsilon, x, xp);
  b.berry_formula = berry_at(upsilon, x, xp);
  b.ell = b.berry_formula->length;
  b.q_term = term::mul(numeral(Nat(6)), numeral(b.ell));
  b.b_formula = b_at(upsilon, b.q_term);
  return b;
}

struct LengthAudit {
  Nat b_length, six_ell, ell;
  bool below_six_ell = false;
  Nat nominal_count;             // 24 + 5ℓ
  bool nominal_count_matches = false;
};

inline LengthAudit length_audit(const BerryBundle& b) {
  LengthAudit a;
  a.ell = b.ell;
  a.b_length = b.b_formula->length;
  a.six_ell = Nat(6) * b.ell;
  a.below_six_ell = a.b_length < a.six_ell;
  a.nominal_count = Nat(24) + Nat(5) * b.ell;
  a.nominal_count_matches = a.b_length == a.nominal_count;
  return a;
}

// The Υ formulas used for the length audit.
inline std::vector<std::pair<std::string, FormulaPtr>> upsilon_corpus() {
  std::vector<std::pair<std::string, FormulaPtr>> c = {
      {"reflexive", parse_formula("x=x")},
      {"empty", parse_formula("¬(x=x)")},
      {"truth", parse_formula("Tr(x)")},
      {"nonzero", parse_formula("0<x")},
  };
  FormulaPtr big = parse_formula("x=x");
  while (big->length < Nat(50)) big = fml::conj(big, parse_formula("0<x+(1)"));
  c.emplace_back("fifty-tokens", big);
  return c;
}

// ---------------------------------------------------------------- micro universes

// All one-free-variable pure formulas shorter than max_len, with Υ's verdict on
// D(φ, n̄) for every n up to n_bound.
struct MicroUniverse {
  std::size_t max_len = 12;
  std::uint64_t n_bound = 16;
  FormulaPtr upsilon;
  std::vector<FormulaPtr> formulas;
  std::vector<std::vector<TV>> verdict;  // [formula][n]
  TV at_zero = TV::Unknown;              // Υ(0̄), the value D takes on other codes
  std::uint64_t other_formulas = 0;      // pure formulas shorter than max_len without exactly one free variable
  std::size_t shortest_other = 0;
  Nat code_bound;  // 1 + the largest code of any pure formula shorter than max_len
  // Extra rows for formulas outside the enumeration, counted at a declared length.
  std::vector<std::pair<std::size_t, std::vector<TV>>> admitted;

  // Def^{<z}(n̄) read off the table; Unknown outside it.
  TV def(std::size_t z, std::uint64_t n) const {
    if (z > max_len || n > n_bound) return TV::Unknown;
    TV r = TV::False;
    if (other_formulas && shortest_other < z) r = or3(r, at_zero);
    for (std::size_t i = 0; i < formulas.size(); ++i)
      if (formulas[i]->length < Nat(z)) r = or3(r, verdict[i][n]);
    for (const auto& [len, row] : admitted)
      if (len < z) r = or3(r, row[n]);
    return r;
  }

  // Indices of formulas φ with Υ(⌜D(φ,n̄)⌝) True.
  std::vector<std::size_t> definers(std::uint64_t n) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < formulas.size(); ++i)
      if (verdict[i][n] == TV::True) out.push_back(i);
    return out;
  }
};

inline TV upsilon_at_d(const FormulaPtr& upsilon, const FormulaPtr& phi, std::uint64_t n, const Budget& budget,
                       const OracleEnv& env) {
  return eval(instantiate(upsilon, numeral(encode(build_D(phi, numeral(Nat(n)))))), budget, env);
}

// Υ at ⌜σ⌝ where the truth of σ is known from outside the evaluator.
inline TV upsilon_verdict_on(const FormulaPtr& upsilon, const FormulaPtr& sigma, TV known, const Budget& budget,
                             OracleEnv env) {
  Nat code = encode(sigma);
  auto base = env.tr;
  env.tr = [code, known, base](const Nat& c) { return c == code ? known : base ? base(c) : TV::Unknown; };
  return eval(instantiate(upsilon, numeral(code)), budget, env);
}

inline MicroUniverse build_micro_universe(const FormulaPtr& upsilon, std::size_t max_len = 12,
                                          std::uint64_t n_bound = 16, const Budget& budget = {},
                                          const OracleEnv& env = *truth_env(),
                                          std::optional<std::uint64_t> shuffle_seed = std::nullopt) {
  if (upsilon->free.size() != 1) throw NotOneFree("Υ must have exactly one free variable");
  MicroUniverse u;
  u.max_len = max_len;
  u.n_bound = n_bound;
  u.upsilon = upsilon;
  Enumerator e;
  for (std::size_t len = 1; len < max_len; ++len)
    for (const auto& f : e.formulas(len)) {
      if (Nat c = encode(f); !(c < u.code_bound)) u.code_bound = c + Nat(1);
      if (f->free.size() == 1) {
        u.formulas.push_back(f);
      } else {
        if (!u.other_formulas) u.shortest_other = len;
        ++u.other_formulas;
      }
    }
  if (shuffle_seed) {
    std::mt19937_64 rng(*shuffle_seed);
    std::shuffle(u.formulas.begin(), u.formulas.end(), rng);
  }
  u.at_zero = eval(instantiate(upsilon, term::zero()), budget, env);
  u.verdict.assign(u.formulas.size(), std::vector<TV>(n_bound + 1, TV::Unknown));
  for (std::size_t i = 0; i < u.formulas.size(); ++i)
    for (std::uint64_t n = 0; n <= n_bound; ++n) u.verdict[i][n] = upsilon_at_d(upsilon, u.formulas[i], n, budget, env);
  return u;
}

// Least n with Def^{<max_len}(n̄) False.
inline std::uint64_t least_undefinable(const MicroUniverse& u) {
  for (std::uint64_t n = 0; n <= u.n_bound; ++n) {
    TV d = u.def(u.max_len, n);
    if (d == TV::Unknown) throw BudgetInsufficient("definability of " + std::to_string(n) + " is Unknown");
    if (d == TV::False) return n;
  }
  throw BudgetInsufficient("every n up to " + std::to_string(u.n_bound) + " is definable");
}

// Decides Def's ∃α from the micro table when its bound lies inside the universe.
inline ExistsDecider micro_def_decider(std::shared_ptr<const MicroUniverse> u) {
  return [u](const Formula& q, Evaluator& ev, Valuation& val) -> std::optional<TV> {
    if (q.var != BerryVars::alpha) return std::nullopt;
    const Formula& body = *q.sub[0];
    if (body.kind != FormulaKind::And || body.sub[0]->kind != FormulaKind::And) return std::nullopt;
    const Formula& isf = *body.sub[0]->sub[0];
    const Formula& lenlt = *body.sub[0]->sub[1];
    if (isf.kind != FormulaKind::Pred || isf.pred != OraclePred::Formula || lenlt.kind != FormulaKind::Lt)
      return std::nullopt;
    const Term* d = nullptr;
    std::vector<TermPtr> ts;
    subterms(q.sub[0], ts);
    for (const auto& t : ts)
      if (t->kind == TermKind::Fun && t->fn == OracleFn::D && t->args[0]->kind == TermKind::Var &&
          t->args[0]->var == BerryVars::alpha)
        d = t.get();
    if (!d) return std::nullopt;
    Nat z = ev.term(*lenlt.terms[1], val);
    Nat y = ev.term(*d->args[1], val);
    if (!z.is_concrete() || !y.is_concrete() || z.concrete() > u->max_len || y.concrete() > u->n_bound)
      return TV::Unknown;
    return u->def(static_cast<std::size_t>(z.concrete()), static_cast<std::uint64_t>(y.concrete()));
  };
}

inline OracleEnv micro_env(std::shared_ptr<const MicroUniverse> u, OracleEnv env = base_env()) {
  env.deciders.push_back(micro_def_decider(std::move(u)));
  return env;
}

struct BerryReport {
  std::uint64_t berry_number = 0;             // 𝔟 for the micro bound
  bool berry_number_found = false;
  bool uniqueness = true;                     // at most one u with Berry^{<w}(u) for each w
  std::vector<std::pair<std::uint64_t, std::uint64_t>> uniqueness_violations;  // (w, u)
  std::vector<TV> b_values;                   // B^{<max_len}(n̄) for n ≤ n_bound
  TV b_at_berry = TV::Unknown;                // B(𝔟̄) with the table as given
  TV defines_berry = TV::Unknown;             // B defines 𝔟 on the micro domain
  TV b_at_berry_closed = TV::Unknown;         // B(𝔟̄) once B itself is admitted as a short formula
  bool contradiction = false;
};

// Berry's argument at micro scale. The bound 6ℓ is replaced by max_len; B's own
// length is far above max_len, so the Def-closure step is replayed by admitting
// B into the table as a formula shorter than the bound.
inline BerryReport berry_contradiction_report(const FormulaPtr& upsilon, const MicroUniverse& table,
                                              const Budget& budget = {}) {
  auto u = std::make_shared<const MicroUniverse>(table);
  OracleEnv env = micro_env(u);
  BerryReport r;
  TermPtr bound = numeral(Nat(u->max_len));
  for (std::size_t w = 1; w <= u->max_len; ++w) {
    std::vector<std::uint64_t> hits;
    for (std::uint64_t n = 0; n <= u->n_bound; ++n)
      if (eval(berry_at(upsilon, numeral(Nat(n)), numeral(Nat(w))), budget, env) == TV::True) hits.push_back(n);
    if (hits.size() > 1) {
      r.uniqueness = false;
      for (auto h : hits) r.uniqueness_violations.emplace_back(w, h);
    }
  }
  FormulaPtr b = b_at(upsilon, bound);
  // x' is pinned by x'=q
  WitnessMap pin{{Path{}, Witness::unique(Nat(u->max_len), "functional:equation")}};
  for (std::uint64_t n = 0; n <= u->n_bound; ++n) r.b_values.push_back(eval(instantiate(b, numeral(Nat(n))), budget, env, &pin));
  std::uint64_t trues = std::count(r.b_values.begin(), r.b_values.end(), TV::True);
  try {
    r.berry_number = least_undefinable(*u);
    r.berry_number_found = true;
  } catch (const BudgetInsufficient&) {
  }
  if (!r.berry_number_found) return r;
  r.b_at_berry = r.b_values[r.berry_number];
  bool exact = std::none_of(r.b_values.begin(), r.b_values.end(), [](TV t) { return t == TV::Unknown; });
  r.defines_berry = exact ? tv_of(trues == 1 && r.b_at_berry == TV::True) : TV::Unknown;

  // Admit B: ∀ζ[B(ζ)↔ζ=n̄] is true exactly when B defines n.
  MicroUniverse closed = *u;
  std::vector<TV> row(u->n_bound + 1, TV::Unknown);
  auto tenv = truth_env();
  for (std::uint64_t n = 0; n <= u->n_bound; ++n) {
    TV d_true = r.defines_berry == TV::True ? tv_of(n == r.berry_number) : TV::Unknown;
    row[n] = upsilon_verdict_on(upsilon, build_D(b, numeral(Nat(n))), d_true, budget, *tenv);
  }
  closed.admitted.emplace_back(u->max_len - 1, row);
  OracleEnv cenv = micro_env(std::make_shared<const MicroUniverse>(closed));
  r.b_at_berry_closed = eval(instantiate(b, numeral(Nat(r.berry_number))), budget, cenv, &pin);
  r.contradiction = r.b_at_berry == TV::True && r.b_at_berry_closed == TV::False;
  return r;
}

// First pair i<j with codes[i]=codes[j], by least j. Guaranteed to exist when
// there are more than p entries, all below p.
inline std::optional<std::pair<std::size_t, std::size_t>> pigeonhole_duplicate(const std::vector<BigInt>& codes,
                                                                               const BigInt& p) {
  (void)p;
  std::map<BigInt, std::size_t> seen;
  for (std::size_t j = 0; j < codes.size(); ++j) {
    auto [it, fresh] = seen.emplace(codes[j], j);
    if (!fresh) return std::make_pair(it->second, j);
  }
  return std::nullopt;
}

struct TarskiReport {
  std::uint64_t ladder_top = 0;          // (∗) checked for n ≤ ladder_top
  std::vector<TV> def_values;            // Def^{<max_len}(n̄)
  std::optional<std::uint64_t> ladder_break;
  Nat code_bound;                        // 𝔭 over codes
  std::size_t index_bound = 0;           // 𝔭 over universe indices
  std::vector<BigInt> chosen;            // least defining index for each n
  std::optional<std::pair<std::size_t, std::size_t>> duplicate;
  FormulaPtr clash_formula;
  std::vector<FormulaPtr> clash_trace;   // ī=ī, φ(ī), ī=j̄
  bool clash = false;
  FormulaPtr tb_failure;                 // a sentence β with Υ(⌜β⌝)↔β False
  TV tb_failure_value = TV::Unknown;
};

// The ladder Def(0̄), Def(1̄), … and the pigeonhole step, replayed on a micro
// universe. Indices into the universe stand in for codes below 𝔭.
inline TarskiReport syntactic_tarski_experiment(const MicroUniverse& u, const Budget& budget = {}) {
  TarskiReport r;
  r.code_bound = u.code_bound;
  r.index_bound = u.formulas.size();
  r.ladder_top = std::min<std::uint64_t>(u.n_bound, r.index_bound);
  bool all_before = true;
  for (std::uint64_t n = 0; n <= r.ladder_top; ++n) {
    TV d = u.def(u.max_len, n);
    if (d == TV::Unknown) throw BudgetInsufficient("Def at " + std::to_string(n) + " is Unknown");
    r.def_values.push_back(d);
    if (all_before && d == TV::False) {
      r.ladder_break = n;
      break;
    }
  }
  auto env = truth_env();
  Budget exact = budget;
  exact.stabilize = true;
  if (!r.ladder_break && r.ladder_top == r.index_bound) {
    for (std::uint64_t n = 0; n <= r.ladder_top; ++n) {
      auto d = u.definers(n);
      if (d.empty()) break;  // Def came from a code outside the one-free formulas
      r.chosen.push_back(*std::min_element(d.begin(), d.end()));
    }
    r.duplicate = pigeonhole_duplicate(r.chosen, BigInt(r.index_bound));
    if (r.duplicate) {
      auto [i, j] = *r.duplicate;
      const FormulaPtr& phi = u.formulas[static_cast<std::size_t>(r.chosen[i])];
      r.clash_formula = phi;
      TermPtr ti = numeral(Nat(i)), tj = numeral(Nat(j));
      r.clash_trace = {fml::eq(ti, ti), instantiate(phi, ti), fml::eq(ti, tj)};
      r.clash = true;
      for (std::size_t k : {i, j}) {
        FormulaPtr s = build_D(phi, numeral(Nat(k)));
        TV v = eval(fml::iff(instantiate(u.upsilon, quote(s)), s), exact, *env);
        if (v == TV::False) {
          r.tb_failure = s;
          r.tb_failure_value = v;
          break;
        }
      }
    }
  }
  if (!r.tb_failure) {
    Enumerator e;
    for (std::size_t len = 1; len < u.max_len && !r.tb_failure; ++len)
      for (const auto& b : e.formulas(len)) {
        if (!b->closed()) continue;
        TV v = eval(fml::iff(instantiate(u.upsilon, quote(b)), b), exact, *env);
        if (v == TV::False) {
          r.tb_failure = b;
          r.tb_failure_value = v;
          break;
        }
      }
  }
  return r;
}

}  // namespace selfref
