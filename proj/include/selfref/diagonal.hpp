#pragma once
// Arithmetized self-substitution, fixed points, and truth-definition refutation.
//
// For a code c the self-substitution value is the code of ∃x[(x=c̄)∧(α)] where α
// is the text coded by c. Written out in digits this is
//   PRE · K^(|c̄|+5+m) + code(c̄) · K^(5+m) + MID · K^(m+2) + c · K² + END
// with m the bijective digit count of c and |c̄| = 4c−3. The unary numeral has a
// closed form in R = K^(c−1), so after clearing denominators the relation between
// c and its image is one polynomial identity in c, y, R and M = K^m.

#include "selfref/propositional.hpp"
#include "selfref/semantics.hpp"


namespace selfref {

namespace diag_detail {

inline constexpr unsigned K = kCodeBase;

inline BigInt horner(std::initializer_list<Tok> ts) {
  BigInt v = 0;
  for (Tok t : ts) v = v * K + static_cast<unsigned>(t);
  return v;
}

struct Constants {
  BigInt pre = horner({Tok::Exists, Tok::X, Tok::LBracket, Tok::LParen, Tok::X, Tok::Eq});
  BigInt mid = horner({Tok::RParen, Tok::And, Tok::LParen});
  BigInt end = horner({Tok::RParen, Tok::RBracket});
  BigInt t3 = horner({Tok::One, Tok::Plus, Tok::LParen});
  BigInt id1 = static_cast<unsigned>(Tok::One);
  BigInt idr = static_cast<unsigned>(Tok::RParen);
  BigInt g1 = K - 1;
  BigInt g3 = BigInt(K) * K * K - 1;
  BigInt g = g1 * g3;
  BigInt k5 = BigInt(1) << 25;
  BigInt k6 = BigInt(1) << 30;
  // G·y + C1·R·M + C2·M = C34·R⁴·M + C56·R·M + C7·M + C8·x + C9
  BigInt c1 = t3 * g1 * k6;
  BigInt c2 = idr * g3 * k5;
  BigInt c34 = pre * g * k6 + t3 * g1 * k6;
  BigInt c56 = id1 * g * k5 + idr * g3 * k5;
  BigInt c7 = mid * K * K * g;
  BigInt c8 = BigInt(K) * K * g;
  BigInt c9 = end * g;
};

inline const Constants& constants() {
  static const Constants c;
  return c;
}

inline BigInt ext_inverse(BigInt a, BigInt m) {
  BigInt m0 = m, x0 = 0, x1 = 1;
  a %= m;
  if (m == 1) return 0;
  while (a > 1) {
    BigInt q = a / m;
    BigInt t = m;
    m = a % m;
    a = t;
    t = x0;
    x0 = x1 - q * x0;
    x1 = t;
  }
  if (x1 < 0) x1 += m0;
  return x1;
}

}  // namespace diag_detail

// Constant as a binary Horner term: 2·(…)+1 chains, length O(log n).
inline TermPtr const_term(const BigInt& n) {
  if (n <= 1) return numeral(Nat(n));
  TermPtr two = numeral(Nat(2));
  TermPtr half = term::mul(two, const_term(n / 2));
  return n % 2 == 0 ? half : term::add(half, term::one());
}

// y = a mod (1+(i+1)·b), as ∃q≤a[a = q·d + y ∧ y < d].
inline FormulaPtr beta_formula(const TermPtr& a, const TermPtr& b, const TermPtr& i, const TermPtr& y, VarIndex q) {
  TermPtr d = term::add(term::one(), term::mul(term::add(term::one(), i), b));
  TermPtr qv = term::var(q);
  return fml::exists_below(q, term::add(a, term::one()),
                           fml::conj(fml::eq(a, term::add(term::mul(qv, d), y)), fml::lt(y, d)));
}

// Beta(a, b, i, y) over x, x', x'', x'''.
inline FormulaPtr build_beta_formula() {
  return beta_formula(term::var(0), term::var(1), term::var(2), term::var(3), 4);
}

inline BigInt beta_value(const BigInt& a, const BigInt& b, const BigInt& i) { return a % (1 + (i + 1) * b); }

// a, b with beta_value(a, b, i) = seq[i], via the Chinese remainder theorem.
inline std::pair<BigInt, BigInt> beta_code(const std::vector<BigInt>& seq) {
  BigInt top = 1;
  for (const auto& s : seq) top = std::max(top, BigInt(s + 1));
  BigInt fact = 1;
  for (std::size_t j = 2; j <= seq.size(); ++j) fact *= j;
  BigInt b = fact * ((top + fact - 1) / fact);
  BigInt a = 0, mod = 1;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    BigInt mi = 1 + BigInt(i + 1) * b;
    BigInt want = seq[i] % mi;
    BigInt diff = (want - a % mi + mi) % mi;
    BigInt t = diff * diag_detail::ext_inverse(mod % mi, mi) % mi;
    a += mod * t;
    mod *= mi;
  }
  return {a, b};
}

struct ExpVars {
  VarIndex a, b, i, u, q;
};

// Exp(k, R): R = K^k, through a β-coded sequence s with s_0 = 1, s_{i+1} = K·s_i.
inline FormulaPtr exp_formula(const TermPtr& k, const TermPtr& r, const ExpVars& v) {
  TermPtr a = term::var(v.a), b = term::var(v.b), i = term::var(v.i), u = term::var(v.u);
  TermPtr kk = const_term(diag_detail::K);
  FormulaPtr step = fml::exists_below(
      v.u, term::add(a, term::one()),
      fml::conj(beta_formula(a, b, i, u, v.q), beta_formula(a, b, term::add(term::one(), i), term::mul(kk, u), v.q)));
  FormulaPtr body = fml::conj(beta_formula(a, b, term::zero(), term::one(), v.q),
                              fml::conj(fml::forall_below(v.i, k, step), beta_formula(a, b, k, r, v.q)));
  return fml::exists(v.a, fml::exists(v.b, body));
}

// Exponents up to this size get a genuine β certificate; larger ones are checked
// directly against K^k.
inline constexpr std::uint64_t kExpCertifyLimit = 8;

// Witnesses for an Exp node, relative to that node. `k` and `r` are the
// variables holding its arguments.
inline WitnessMap exp_witnesses(const BigInt& kval, const ExpVars& v, VarIndex k, VarIndex r) {
  WitnessMap w;
  if (kval > kExpCertifyLimit) {
    w.emplace(Path{}, Witness::discharged("exp", [k, r](const Valuation& val) {
      const Nat* kn = val.get(k);
      const Nat* rn = val.get(r);
      if (!kn || !rn || !kn->is_concrete()) return TV::Unknown;
      return tv_of(*rn == Nat::pow_base(kn->concrete()));
    }));
    return w;
  }
  std::vector<BigInt> seq;
  BigInt s = 1;
  for (BigInt j = 0; j <= kval; ++j, s *= diag_detail::K) seq.push_back(s);
  auto [a, b] = beta_code(seq);
  w.emplace(Path{}, Witness::constant(Nat(a)));
  w.emplace(Path{0}, Witness::constant(Nat(b)));
  VarIndex va = v.a, vb = v.b, vi = v.i;
  w.emplace(Path{0, 0, 1, 0, 0, 1}, Witness::of([va, vb, vi](const Valuation& val) -> std::optional<Nat> {
              const Nat *an = val.get(va), *bn = val.get(vb), *in = val.get(vi);
              if (!an || !bn || !in || !an->is_concrete() || !bn->is_concrete() || !in->is_concrete())
                return std::nullopt;
              return Nat(beta_value(an->concrete(), bn->concrete(), in->concrete()));
            }));
  return w;
}

// Variables of Diag(x, y).
struct DiagVars {
  static constexpr VarIndex x = 0, y = 1, r = 2, R = 3, M = 4, m = 5;
  static constexpr ExpVars exp{6, 7, 8, 9, 10};
};

struct DiagFormula {
  FormulaPtr formula;
  FormulaPtr exists_R, exists_M, exists_m, exp_r, exp_m, identity;
  Path path_R, path_M, path_m, path_exp_r, path_exp_m;
};

inline DiagFormula build_diag() {
  using V = DiagVars;
  const auto& c = diag_detail::constants();
  TermPtr x = term::var(V::x), y = term::var(V::y), r = term::var(V::r), R = term::var(V::R), M = term::var(V::M),
          m = term::var(V::m);
  auto times = [](TermPtr a, TermPtr b) { return term::mul(std::move(a), std::move(b)); };
  auto plus = [](TermPtr a, TermPtr b) { return term::add(std::move(a), std::move(b)); };
  TermPtr R4 = times(R, times(R, times(R, R)));
  TermPtr lhs = plus(times(const_term(c.g), y),
                     plus(times(const_term(c.c1), times(R, M)), times(const_term(c.c2), M)));
  TermPtr rhs = plus(times(const_term(c.c34), times(R4, M)),
                     plus(times(const_term(c.c56), times(R, M)),
                          plus(times(const_term(c.c7), M), plus(times(const_term(c.c8), x), const_term(c.c9)))));
  DiagFormula d;
  d.identity = fml::eq(lhs, rhs);
  TermPtr km1x = times(const_term(c.g1), x);
  FormulaPtr low = fml::lt(M, plus(km1x, numeral(Nat(2))));
  FormulaPtr high = fml::lt(plus(km1x, const_term(c.g1)), times(const_term(diag_detail::K), M));
  d.exp_m = exp_formula(m, M, V::exp);
  d.exists_m = fml::exists(V::m, d.exp_m);
  d.exists_M = fml::exists(V::M, fml::conj(fml::conj(d.exists_m, fml::conj(low, high)), d.identity));
  d.exp_r = exp_formula(r, R, V::exp);
  d.exists_R = fml::exists(V::R, fml::conj(d.exp_r, d.exists_M));
  d.formula = fml::exists(V::r, fml::conj(fml::eq(x, term::add(term::one(), r)), d.exists_R));
  for (auto [node, path] : {std::pair{&d.exists_R, &d.path_R}, std::pair{&d.exists_M, &d.path_M},
                            std::pair{&d.exists_m, &d.path_m}, std::pair{&d.exp_r, &d.path_exp_r},
                            std::pair{&d.exp_m, &d.path_exp_m}})
    find_path(*d.formula, node->get(), *path);
  return d;
}

// Built once.
inline const DiagFormula& diag() {
  static const DiagFormula d = build_diag();
  return d;
}

// Bijective base-K digit count.
inline std::uint64_t digit_count(const BigInt& c) { return bijective_digits(c, diag_detail::K).size(); }

// Code of ∃x[(x=c̄)∧(α)] for the text α coded by c, from the closed form.
inline Nat self_substitution_value(const BigInt& c) {
  const auto& k = diag_detail::constants();
  BigInt r = c - 1;
  std::uint64_t m = digit_count(c);
  ExpSum R = ExpSum::power(r);
  ExpSum numeral_code = (ExpSum::power(4 * r + 1) - ExpSum::power(r + 1)).scaled(BigRat(k.t3, k.g3)) +
                        ExpSum::power(r, BigRat(k.id1)) + (R - ExpSum(BigRat(1))).scaled(BigRat(k.idr, k.g1));
  ExpSum total = ExpSum::power(4 * r + 1 + 5 + m, BigRat(k.pre)) + numeral_code * ExpSum::power(5 + m) +
                 ExpSum::power(m + 2, BigRat(k.mid)) + ExpSum(BigRat(c)) * ExpSum::power(2) + ExpSum(BigRat(k.end));
  return Nat::from_sum(total);
}

// Witnesses certifying Diag(c, y) relative to the Diag node.
inline WitnessMap diag_witnesses(const BigInt& c, const Nat& y) {
  using V = DiagVars;
  const DiagFormula& d = diag();
  std::uint64_t m = digit_count(c);
  WitnessMap w;
  w.emplace(Path{}, Witness::unique(Nat(c - 1), "functional:successor"));
  w.emplace(d.path_R, Witness::unique(Nat::pow_base(c - 1), "functional:exp"));
  w.emplace(d.path_M, Witness::unique(Nat::pow_base(m), "functional:digit-count"));
  w.emplace(d.path_m, Witness::constant(Nat(m)));
  for (auto& [p, wt] : prefixed(exp_witnesses(c - 1, V::exp, V::r, V::R), d.path_exp_r)) w.emplace(p, wt);
  for (auto& [p, wt] : prefixed(exp_witnesses(BigInt(m), V::exp, V::m, V::M), d.path_exp_m)) w.emplace(p, wt);
  (void)y;
  return w;
}

struct FixedPointCertificate {
  FormulaPtr psi, delta, theta;
  FormulaPtr psi_in_delta;  // Ψ with its variable renamed to y
  Nat code_of_delta, code_of_theta;
  WitnessMap witnesses;  // relative to theta
  TV theta_verdict = TV::Unknown;
  TV psi_verdict = TV::Unknown;
  TV biconditional = TV::Unknown;
  EvalStats stats;
};

// ∃x[(x=⌜δ⌝)∧(δ)] for a formula δ in x.
inline FormulaPtr boolos_form(const FormulaPtr& delta) {
  return fml::exists(DiagVars::x, fml::conj(fml::eq(term::var(DiagVars::x), quote(delta)), delta));
}

inline FixedPointCertificate diagonal_sentence(const FormulaPtr& psi, const Budget& budget = {},
                                               const OracleEnv& env = base_env()) {
  if (psi->free.size() != 1) throw NotOneFree("Ψ must have exactly one free variable");
  FixedPointCertificate cert;
  cert.psi = psi;
  FormulaPtr psi_y = substitute(psi, psi->free[0], term::var(DiagVars::y));
  cert.psi_in_delta = psi_y;
  cert.delta = fml::exists(DiagVars::y, fml::conj(diag().formula, psi_y));
  cert.code_of_delta = encode(cert.delta);
  cert.theta = boolos_form(cert.delta);
  cert.code_of_theta = encode(cert.theta);
  const BigInt& c = cert.code_of_delta.concrete();
  cert.witnesses.emplace(Path{}, Witness::unique(cert.code_of_delta, "functional:equation"));
  cert.witnesses.emplace(Path{0, 1}, Witness::unique(cert.code_of_theta, "functional:diag"));
  for (auto& [p, w] : prefixed(diag_witnesses(c, cert.code_of_theta), Path{0, 1, 0, 0})) cert.witnesses.emplace(p, w);
  Evaluator ev(env, budget, &cert.witnesses);
  Valuation v;
  cert.theta_verdict = ev.run(cert.theta, v);
  cert.stats = ev.stats;
  cert.psi_verdict = eval(instantiate(psi, quote(cert.theta)), budget, env);
  WitnessMap bw = prefixed(cert.witnesses, Path{1});
  cert.biconditional = eval(fml::iff(instantiate(psi, quote(cert.theta)), cert.theta), budget, env, &bw);
  return cert;
}

// eval(Ψ(⌜θ⌝)↔θ) computed as ¬eval(¬Ψ(⌜θ⌝)↔θ).
inline TV flip_equiv_witness(const FormulaPtr& psi, const FormulaPtr& theta, const Budget& budget,
                             const OracleEnv& env, const WitnessMap* theta_witnesses = nullptr) {
  FormulaPtr lhs = instantiate(psi, quote(theta));
  auto [a, b] = joint_skeleton(fml::iff(lhs, theta), fml::negation(fml::iff(fml::negation(lhs), theta)));
  if (!taut_equiv(*a.form, *b.form)) throw Error("flip step is not a tautology");
  WitnessMap w;
  if (theta_witnesses) w = prefixed(*theta_witnesses, Path{1});
  return not3(eval(fml::iff(fml::negation(lhs), theta), budget, env, &w));
}

struct TruthRefutation {
  FormulaPtr gamma, lambda;
  Nat code_of_lambda;
  TV lambda_verdict = TV::Unknown;
  TV gamma_at_lambda = TV::Unknown;
  TV biconditional = TV::Unknown;  // Γ(⌜λ⌝)↔λ
  FixedPointCertificate certificate;
};

inline TruthRefutation refute_truth_definition(const FormulaPtr& gamma, const Budget& budget = {},
                                               const OracleEnv& env = base_env()) {
  TruthRefutation r;
  r.gamma = gamma;
  r.certificate = diagonal_sentence(fml::negation(gamma), budget, env);
  r.lambda = r.certificate.theta;
  r.code_of_lambda = r.certificate.code_of_theta;
  r.lambda_verdict = r.certificate.theta_verdict;
  r.gamma_at_lambda = eval(instantiate(gamma, quote(r.lambda)), budget, env);
  r.biconditional = iff3(r.gamma_at_lambda, r.lambda_verdict);
  return r;
}

struct NamedFormula {
  std::string name;
  FormulaPtr formula;
};

inline std::vector<NamedFormula> psi_corpus() {
  std::vector<std::pair<std::string, std::string>> src = {
      {"valid", "x=x"},
      {"unsatisfiable", "¬(x=x)"},
      {"even", "∃x'[(x'<x+(1))∧(x'+(x')=x)]"},
      {"zero", "x=0"},
      {"positive", "0<x"},
      {"divisible-by-3", "∃x'[(x'<x+(1))∧(x'·(1+(1+(1)))=x)]"},
      {"below-2", "x<1+(1)"},
      {"odd", "∃x'[(x'<x)∧((x'+(x'))+(1)=x)]"},
      {"has-predecessor", "∃x'[(x'<x)∧(1+(x')=x)]"},
      {"times-one", "x·(1)=x"},
  };
  std::vector<NamedFormula> out;
  for (auto& [n, s] : src) out.push_back({n, parse_formula(s)});
  return out;
}

inline std::vector<NamedFormula> gamma_candidates() {
  return {{"everything-true", parse_formula("x=x")},
          {"nothing-true", parse_formula("¬(x=x)")},
          {"even", parse_formula("∃x'[(x'<x+(1))∧(x'+(x')=x)]")}};
}

}  // namespace selfref
