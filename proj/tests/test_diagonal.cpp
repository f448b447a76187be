#include "selfref/diagonal.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace selfref;

namespace {

// Independent oracle for the self-substitution value: spell out the token ids
// of ∃x[(x=1+(…1…))∧(digits of c)] and run Horner.
BigInt spelled_image(std::uint64_t c) {
  std::vector<unsigned> ids = {13, 19, 16, 14, 19, 5};
  for (std::uint64_t i = 1; i < c; ++i) ids.insert(ids.end(), {2, 3, 14});
  ids.push_back(2);
  for (std::uint64_t i = 1; i < c; ++i) ids.push_back(15);
  ids.insert(ids.end(), {15, 8, 14});
  std::vector<unsigned> digits;
  for (BigInt n = c; n > 0;) {
    BigInt d = n % 32;
    if (d == 0) d = 32;
    digits.push_back(static_cast<unsigned>(d));
    n = (n - d) / 32;
  }
  ids.insert(ids.end(), digits.rbegin(), digits.rend());
  ids.insert(ids.end(), {15, 17});
  BigInt v = 0;
  for (unsigned d : ids) v = v * 32 + d;
  return v;
}

FormulaPtr diag_at(const Nat& x, const Nat& y) {
  return substitute(substitute(diag().formula, DiagVars::x, numeral(x)), DiagVars::y, numeral(y));
}

}  // namespace

TEST(Diagonal, BetaFormula) {
  auto beta = build_beta_formula();
  EXPECT_EQ(beta->free, (std::vector<VarIndex>{0, 1, 2, 3}));
  for (std::uint64_t y = 0; y < 10; ++y) {
    Valuation v;
    v.set(0, Nat(7));
    v.set(1, Nat(1));
    v.set(2, Nat(0));
    v.set(3, Nat(y));
    EXPECT_EQ(eval(beta, v, {}, base_env()), tv_of(y == 1)) << y;
  }
  Valuation v;
  v.set(0, Nat(100));
  v.set(1, Nat(3));
  v.set(2, Nat(1));
  v.set(3, Nat(100 % 7));
  EXPECT_EQ(eval(beta, v, {}, base_env()), TV::True);
}

TEST(Diagonal, BetaCodesRandomSequences) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 50; ++t) {
    std::vector<BigInt> seq;
    for (int i = 0, n = 1 + static_cast<int>(rng() % 7); i < n; ++i) seq.push_back(rng() % 5000);
    auto [a, b] = beta_code(seq);
    for (std::size_t i = 0; i < seq.size(); ++i) EXPECT_EQ(beta_value(a, b, i), seq[i]);
  }
}

TEST(Diagonal, ExpFormulaSmallExponents) {
  ExpVars ev{6, 7, 8, 9, 10};
  auto e = exp_formula(term::var(0), term::var(1), ev);
  for (std::uint64_t k = 0; k <= 4; ++k) {
    WitnessMap w = exp_witnesses(BigInt(k), ev, 0, 1);
    ASSERT_EQ(w.begin()->second.kind, Witness::Kind::Value);  // genuine β certificate
    Valuation v;
    v.set(0, Nat(k));
    v.set(1, Nat::pow_base(BigInt(k)));
    EvalStats st;
    EXPECT_EQ(eval(e, v, {}, base_env(), &w, &st), TV::True) << k;
    EXPECT_TRUE(st.discharges.empty());
    v.set(1, Nat::pow_base(BigInt(k)) + Nat(1));
    EXPECT_NE(eval(e, v, {}, base_env(), &w), TV::True);
  }
  // Blind search finds Exp(0, 1) on its own.
  Valuation v;
  v.set(0, Nat(0));
  v.set(1, Nat(1));
  EXPECT_EQ(eval(e, v, {}, base_env()), TV::True);
}

TEST(Diagonal, SelfSubstitutionClosedFormMatchesSpelledTokens) {
  for (std::uint64_t c = 1; c <= 300; ++c) EXPECT_EQ(self_substitution_value(BigInt(c)), Nat(spelled_image(c))) << c;
  auto f = parse_formula("x=x");
  EXPECT_EQ(self_substitution_value(encode(f).concrete()), encode(boolos_form(f)));
}

TEST(Diagonal, DiagGraphIsCertifiedAndFunctional) {
  for (std::uint64_t c : {1ull, 2ull, 5ull, 9ull, 33ull, 1057ull, 19635ull}) {
    Nat y = self_substitution_value(BigInt(c));
    WitnessMap w = diag_witnesses(BigInt(c), y);
    EXPECT_EQ(eval(diag_at(Nat(c), y), {}, base_env(), &w), TV::True) << c;
    EXPECT_EQ(eval(diag_at(Nat(c), y + Nat(1)), {}, base_env(), &w), TV::False) << c;
    EXPECT_EQ(eval(diag_at(Nat(c), *y.minus(Nat(1))), {}, base_env(), &w), TV::False) << c;
  }
}

TEST(Diagonal, DiagIsPinned) {
  const auto& d = diag();
  EXPECT_TRUE(d.formula->free == (std::vector<VarIndex>{0, 1}));
  EXPECT_FALSE(has_oracle(*d.formula));
  EXPECT_EQ(d.formula->length, Nat(6121));
  EXPECT_EQ(encode(d.formula).mod_small(1000000007), 485328854u);
}

TEST(Diagonal, FixedPointsOverCorpus) {
  for (const auto& [name, psi] : psi_corpus()) {
    auto cert = diagonal_sentence(psi);
    EXPECT_TRUE(cert.theta->closed());
    EXPECT_NE(cert.theta_verdict, TV::Unknown) << name;
    EXPECT_EQ(cert.theta_verdict, cert.psi_verdict) << name;
    EXPECT_EQ(cert.biconditional, TV::True) << name;
    EXPECT_EQ(cert.code_of_theta, self_substitution_value(cert.code_of_delta.concrete()));
    if (name == "valid") EXPECT_EQ(cert.theta_verdict, TV::True);
    if (name == "unsatisfiable") EXPECT_EQ(cert.theta_verdict, TV::False);
    if (name == "even") {
      // Every θ text ends in "]", id 17, so its code is odd.
      EXPECT_EQ(cert.code_of_theta.mod_small(2), 1u);
      EXPECT_EQ(cert.theta_verdict, TV::False);
    }
  }
}

TEST(Diagonal, Deterministic) {
  auto psi = parse_formula("0<x");
  EXPECT_EQ(diagonal_sentence(psi).code_of_theta, diagonal_sentence(psi).code_of_theta);
  EXPECT_THROW(diagonal_sentence(parse_formula("x=x'")), NotOneFree);
}

TEST(Diagonal, TautologyStep) {
  using namespace prop;
  EXPECT_TRUE(taut_equiv(*neg(iff(p(0), p(1))), *iff(neg(p(0)), p(1))));
  EXPECT_FALSE(taut_equiv(*p(0), *neg(p(0))));
  EXPECT_TRUE(taut_equiv(*implies(p(0), p(1)), *disj(neg(p(0)), p(1))));
  PropPtr big = p(0);
  for (unsigned i = 1; i < 17; ++i) big = conj(big, p(i));
  EXPECT_THROW(taut_equiv(*big, *big), TooManyAtoms);
}

TEST(Diagonal, FlipPathAgreesWithDirect) {
  OracleEnv env = base_env();
  auto t = parse_formula("0=0");
  EXPECT_EQ(flip_equiv_witness(parse_formula("x=x"), t, {}, env), TV::True);
  EXPECT_EQ(flip_equiv_witness(parse_formula("¬(x=x)"), t, {}, env), TV::False);
  testgen::Gen g(9);
  g.max_var = 1;
  int done = 0;
  while (done < 50) {
    FormulaPtr psi = g.formula(3);
    FormulaPtr theta = g.formula(3);
    if (psi->free != std::vector<VarIndex>{0} || !theta->closed()) continue;
    TV direct = eval(fml::iff(instantiate(psi, quote(theta)), theta), {}, env);
    EXPECT_EQ(flip_equiv_witness(psi, theta, {}, env), direct) << render(psi) << " / " << render(theta);
    ++done;
  }
}

TEST(Diagonal, TruthDefinitionsAreRefuted) {
  for (const auto& [name, gamma] : gamma_candidates()) {
    auto r = refute_truth_definition(gamma);
    EXPECT_EQ(r.biconditional, TV::False) << name;
    if (name == "everything-true") {
      EXPECT_EQ(r.lambda_verdict, TV::False);
      EXPECT_EQ(r.gamma_at_lambda, TV::True);
    }
    if (name == "nothing-true") {
      EXPECT_EQ(r.lambda_verdict, TV::True);
      EXPECT_EQ(r.gamma_at_lambda, TV::False);
    }
    if (name == "even") EXPECT_EQ(r.gamma_at_lambda, tv_of(r.code_of_lambda.mod_small(2) == 0));
  }
}
