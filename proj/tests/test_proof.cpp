#include "selfref/incompleteness.hpp"

#include <gtest/gtest.h>

#include <chrono>
#include <random>

using namespace selfref;

namespace {

const Theory& Q() {
  static const Theory t = theory_q();
  return t;
}

const GoedelReport& goedel() {
  static const GoedelReport r = goedel_report(Q());
  return r;
}

const RosserReport& rosser() {
  static const RosserReport r = rosser_sentence(Q());
  return r;
}

FormulaPtr successor_bound_goal(unsigned k) {
  TermPtr kk = numeral(Nat(k));
  return fml::forall(0, fml::implies(fml::lt(term::var(0), term::add(term::one(), kk)),
                                     fml::disj(fml::lt(term::var(0), kk), fml::eq(term::var(0), kk))));
}

}  // namespace

TEST(Proof, TheoryFixtureIsSentences) {
  EXPECT_EQ(Q().axioms.size(), 10u);
  for (const auto& [name, s] : Q().axioms) EXPECT_TRUE(s->closed()) << name;
  ASSERT_NE(Q().find("O1"), nullptr);
  EXPECT_TRUE(equal(*Q().find("O1"), parse_formula("∀x[¬(x<0)]")));
  EXPECT_THROW(Q().with("bad", parse_formula("x=0")), Error);
}

TEST(Proof, FixtureProofsCheck) {
  auto p = load_proof("not_neq_zero.proof");
  EXPECT_LE(p.steps.size(), 10u);
  EXPECT_TRUE(check_proof(p, Q(), parse_formula("¬(0≠0)")));
  EXPECT_EQ(render(p.conclusion()), "¬(¬(0=0))");
  for (unsigned k = 0; k <= 3; ++k) {
    auto nb = load_proof("not_below_zero_" + std::to_string(k) + ".proof");
    EXPECT_TRUE(check_proof(nb, Q(), fml::negation(fml::lt(numeral(Nat(k)), term::zero())))) << k;
    auto sb = load_proof("successor_bound_" + std::to_string(k) + ".proof");
    EXPECT_LE(sb.steps.size(), 20u);
    auto r = check_proof(sb, Q(), successor_bound_goal(k));
    EXPECT_TRUE(r) << k << ": " << r.diagnostic;
  }
}

TEST(Proof, OneStepAxiomProof) {
  for (const auto& [name, s] : Q().axioms) {
    auto r = bounded_proof_search(s, Q());
    ASSERT_TRUE(r.proof) << name;
    EXPECT_EQ(r.proof->steps.size(), 1u);
    EXPECT_TRUE(check_proof(*r.proof, Q(), s));
  }
}

TEST(Proof, BrokenProofsFail) {
  auto p = load_proof("not_neq_zero.proof");
  Proof dangling = p;
  dangling.steps.back().just.j = 7;
  auto r = check_proof(dangling, Q());
  EXPECT_FALSE(r);
  EXPECT_EQ(r.failed_step, 3u);
  EXPECT_FALSE(r.diagnostic.empty());
  EXPECT_FALSE(check_proof(p, Q(), parse_formula("0=0")));
  Proof unknown_axiom = p;
  unknown_axiom.steps[0].just = Justification{};
  unknown_axiom.steps[0].just.axiom = "Q99";
  EXPECT_FALSE(check_proof(unknown_axiom, Q()));
  EXPECT_FALSE(check_proof(Proof{}, Q()));
}

TEST(Proof, TextRoundtrip) {
  for (const char* name : {"not_neq_zero.proof", "successor_bound_2.proof", "not_below_zero_1.proof"}) {
    auto p = load_proof(name);
    auto q = parse_proof(proof_text(p));
    EXPECT_EQ(proof_text(q), proof_text(p));
    EXPECT_EQ(proof_code(q), proof_code(p));
  }
  EXPECT_THROW(parse_proof("1 | 0=0"), ProofFormatError);
  EXPECT_THROW(parse_proof("1 | 0=0 | mp:x,y"), ProofFormatError);
}

TEST(Proof, SearchFindsNotNeqZero) {
  SearchOptions o;
  o.node_budget = 50;
  auto r = bounded_proof_search(parse_formula("¬(0≠0)"), Q(), o);
  ASSERT_TRUE(r.proof);
  EXPECT_LE(r.nodes, 50u);
  EXPECT_TRUE(check_proof(*r.proof, Q(), parse_formula("¬(0≠0)")));
  // deterministic
  EXPECT_EQ(proof_text(*bounded_proof_search(parse_formula("¬(0≠0)"), Q(), o).proof), proof_text(*r.proof));
}

TEST(Proof, SearchAgreesWithChecker) {
  std::vector<FormulaPtr> goals = {parse_formula("¬(0≠0)"), parse_formula("0=0"), parse_formula("(0=0)→(0=0)"),
                                   parse_formula("¬(0<0)"), parse_formula("¬(1<0)"), parse_formula("¬(0+(1)=0)"),
                                   parse_formula("1=1"), parse_formula("(0=1)→(0=1)")};
  SearchOptions o;
  o.node_budget = 3000;
  int found = 0;
  for (const auto& g : goals) {
    auto r = bounded_proof_search(g, Q(), o);
    if (!r.proof) continue;
    ++found;
    auto c = check_proof(*r.proof, Q(), g);
    EXPECT_TRUE(c) << render(g) << ": " << c.diagnostic;
    EXPECT_TRUE(prf_holds(proof_code(*r.proof), encode(g), Q()));
  }
  EXPECT_GE(found, 5);
}

TEST(Proof, NeqZeroIsNotFound) {
  SearchOptions o;
  o.node_budget = 100000;
  auto r = bounded_proof_search(parse_formula("0≠0"), Q(), o);
  EXPECT_FALSE(r.proof);
}

TEST(Proof, PrfOnCodes) {
  auto p = load_proof("not_neq_zero.proof");
  Nat pc = proof_code(p);
  Nat nd = encode(parse_formula("¬(0≠0)"));
  EXPECT_TRUE(prf_holds(pc, nd, Q()));
  EXPECT_FALSE(prf_holds(pc, encode(parse_formula("0=0")), Q()));
  EXPECT_FALSE(prf_holds(Nat(0), nd, Q()));
  std::mt19937_64 rng(11);
  for (int i = 0; i < 300; ++i) {
    Nat junk(BigInt(rng()) * BigInt(rng()));
    EXPECT_FALSE(prf_holds(junk, nd, Q()));
    EXPECT_FALSE(prf_holds(pc + junk + Nat(1), nd, Q()));
  }
  OracleEnv env = prf_env(Q());
  EXPECT_EQ(eval(fml::pred(OraclePred::Prf, {numeral(pc), quote(parse_formula("¬(0≠0)"))}), {}, env), TV::True);
}

TEST(Proof, ProvabilityPredicates) {
  EXPECT_EQ(render(pr_formula()), "∃x'[prf(x',x)]");
  EXPECT_EQ(pr_formula()->free, std::vector<VarIndex>{0});
  EXPECT_EQ(rosser_pr_formula()->free, std::vector<VarIndex>{0});
  EXPECT_EQ(rosser_psi()->free, std::vector<VarIndex>{0});
  OracleEnv env = prf_env(Q());
  FormulaPtr nd = parse_formula("¬(0≠0)");
  WitnessMap w{{Path{}, Witness::constant(proof_code(load_proof("not_neq_zero.proof")))}};
  EXPECT_EQ(eval(instantiate(pr_formula(), quote(nd)), {}, env, &w), TV::True);
  EXPECT_EQ(eval(instantiate(pr_formula(), quote(nd)), {}, env), TV::Unknown);
  Budget big;
  big.witness_bound = 4096;
  EXPECT_EQ(eval(instantiate(pr_formula(), quote(parse_formula("0≠0"))), big, env), TV::Unknown);
}

TEST(Proof, GoedelSentence) {
  const auto& g = goedel();
  EXPECT_TRUE(g.certificate.theta->closed());
  EXPECT_EQ(g.pr_of_gamma, TV::Unknown);
  EXPECT_EQ(g.biconditional_by_cases, TV::True);
  EXPECT_FALSE(g.search.proof);
  EXPECT_EQ(g.search.nodes, 10000u);
  EXPECT_EQ(goedel_sentence(Q()).code_of_theta, g.certificate.code_of_theta);
}

TEST(Proof, RosserSentence) {
  const auto& r = rosser();
  EXPECT_TRUE(r.rho->closed());
  EXPECT_FALSE(r.rho_search.proof);
  EXPECT_FALSE(r.neg_search.proof);
  EXPECT_EQ(r.biconditional_by_cases, TV::True);
  // ∀x[prf(x,⌜ρ⌝) → ∃y<x prf(y,⌜¬ρ⌝)] ↔ ρ, with ⌜¬ρ⌝ spelled neg(⌜ρ⌝)
  TermPtr q = quote(r.rho);
  FormulaPtr display = fml::iff(
      fml::forall(1, fml::implies(fml::pred(OraclePred::Prf, {term::var(1), q}),
                                  fml::exists_below(2, term::var(1),
                                                    fml::pred(OraclePred::Prf, {term::var(2), term::fun(OracleFn::Neg, {q})})))),
      r.rho);
  EXPECT_TRUE(equal(r.biconditional, display));
  EXPECT_EQ(eval_term(term::fun(OracleFn::Neg, {q}), {}, prf_env(Q())), encode(fml::negation(r.rho)));
  // shape law: the left side is the diagonalized Ψ at ⌜ρ⌝
  EXPECT_TRUE(equal(r.biconditional->sub[0], instantiate(r.certificate.psi, q)));
  ASSERT_NE(r.extended.find("ROSSER"), nullptr);
  EXPECT_EQ(r.extended.axioms.size(), Q().axioms.size() + 1);
}

TEST(Proof, TbStream) {
  TbStream s(parse_formula("x=x"), 6);
  auto first = s.next();
  ASSERT_TRUE(first);
  EXPECT_EQ(render(first->beta), "0=0");
  TermPtr q = quote(first->beta);
  EXPECT_TRUE(equal(first->biconditional, fml::iff(fml::eq(q, q), first->beta)));

  auto t0 = std::chrono::steady_clock::now();
  TbStream many(parse_formula("0<x"), 12);
  std::vector<Nat> seen;
  std::size_t last_len = 0;
  for (int i = 0; i < 100; ++i) {
    auto it = many.next();
    ASSERT_TRUE(it);
    EXPECT_TRUE(it->beta->closed());
    EXPECT_GE(it->beta->length, Nat(last_len));
    last_len = static_cast<std::size_t>(it->beta->length.concrete());
    seen.push_back(encode(it->beta));
  }
  EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(), 1.0);
  std::sort(seen.begin(), seen.end());
  EXPECT_EQ(std::adjacent_find(seen.begin(), seen.end()), seen.end());
  EXPECT_THROW(TbStream(parse_formula("0=0"), 5), NotOneFree);
}

TEST(Proof, ConsistencyWitness) {
  OracleEnv env = prf_env(Q());
  auto a = consistency_witness(parse_formula("0=0"), Q(), {}, env);
  EXPECT_EQ(a.status, Consistency::ConsistentBySoundness);
  EXPECT_FALSE(a.alarm);
  auto b = consistency_witness(parse_formula("0≠0"), Q(), {}, env);
  EXPECT_NE(b.status, Consistency::ConsistentBySoundness);
  EXPECT_FALSE(b.alarm);
  if (b.refutation) EXPECT_TRUE(check_proof(*b.refutation, Q(), parse_formula("¬(0≠0)")));
  auto c = consistency_witness(rosser().biconditional, Q(), {}, env, rosser().biconditional_by_cases);
  EXPECT_EQ(c.status, Consistency::ConsistentBySoundness);
  EXPECT_FALSE(c.alarm);
}

TEST(Proof, WeakDiagonalDemo) {
  auto a = weak_dl_equivalence_demo(parse_formula("x=x"), Q());
  EXPECT_EQ(render(a.theta), "0=0");
  EXPECT_EQ(a.neg_biconditional, TV::False);
  EXPECT_EQ(a.biconditional, TV::True);
  EXPECT_TRUE(a.flip_is_tautology);
  EXPECT_EQ(a.consistency.status, Consistency::ConsistentBySoundness);
  auto b = weak_dl_equivalence_demo(parse_formula("¬(x=x)"), Q());
  EXPECT_EQ(eval(b.theta, {}, base_env()), TV::False);
  EXPECT_EQ(b.consistency.status, Consistency::ConsistentBySoundness);
  auto c = weak_dl_equivalence_demo(pr_formula(), Q());
  EXPECT_EQ(c.biconditional, TV::True);
  EXPECT_EQ(c.consistency.status, Consistency::ConsistentBySoundness);
  EXPECT_FALSE(c.consistency.alarm);
  EXPECT_THROW(weak_dl_equivalence_demo(parse_formula("x=x"), Q(), {}, 2), SearchExhausted);
}

TEST(Proof, RemarkDemo) {
  auto r = remark_demo(Q());
  EXPECT_EQ(render(r.delta), "¬(0=0)");
  EXPECT_TRUE(r.not_delta_checks);
  EXPECT_TRUE(r.reduces_to_pr);
  EXPECT_EQ(r.pr_of_delta, TV::Unknown);
  EXPECT_TRUE(r.fact_true);
  EXPECT_TRUE(r.combined_checks) << r.combined_diagnostic;
  EXPECT_TRUE(equal(r.combined.conclusion(), fml::negation(r.theta)));
  // the same steps do not check without the added biconditional
  EXPECT_FALSE(check_proof(r.combined, Q().with("FACT", r.combined.steps[3].formula)));
}
