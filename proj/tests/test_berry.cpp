#include "selfref/berry.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace selfref;

namespace {

// Token count read off the rendered text: every code point is one token except
// the multi-letter oracle names.
std::size_t rendered_tokens(std::string s) {
  for (const char* name : {"Formula", "len", "prf", "neg", "inst", "Tr"}) {
    for (std::size_t p; (p = s.find(name)) != std::string::npos;) s.replace(p, std::string(name).size(), "@");
  }
  std::size_t n = 0;
  for (unsigned char c : s)
    if ((c & 0xC0) != 0x80) ++n;
  return n;
}

// φ defines n, checked on 0..40 only; exact for the short quantifier-free φ used here.
std::optional<std::uint64_t> brute_defined(const FormulaPtr& phi) {
  std::optional<std::uint64_t> hit;
  for (std::uint64_t m = 0; m <= 40; ++m)
    if (eval(instantiate(phi, numeral(Nat(m))), {}, base_env()) == TV::True) {
      if (hit) return std::nullopt;
      hit = m;
    }
  return hit;
}

std::uint64_t brute_berry(const std::vector<FormulaPtr>& fs) {
  std::set<std::uint64_t> defined;
  for (const auto& f : fs)
    if (auto n = brute_defined(f)) defined.insert(*n);
  std::uint64_t b = 0;
  while (defined.count(b)) ++b;
  return b;
}

const MicroUniverse& truth12() {
  static const MicroUniverse u = build_micro_universe(parse_formula("Tr(x)"), 12, 16);
  return u;
}

}  // namespace

TEST(Berry, BundleShapes) {
  auto b = build_bundle(parse_formula("x=x"));
  EXPECT_EQ(b.def_formula->free, (std::vector<VarIndex>{0, 1}));
  EXPECT_EQ(b.berry_formula->free, (std::vector<VarIndex>{0, 1}));
  EXPECT_EQ(b.b_formula->free, std::vector<VarIndex>{0});
  EXPECT_EQ(b.ell, b.berry_formula->length);
  EXPECT_EQ(render(b.def_formula), "∃x''[((Formula(x''))∧(len(x'')<x'))∧(D(x'',x)=D(x'',x))]");
  ASSERT_EQ(b.b_formula->kind, FormulaKind::Exists);
  EXPECT_EQ(b.b_formula->var, BerryVars::xp);
  const Formula& body = *b.b_formula->sub[0];
  ASSERT_EQ(body.kind, FormulaKind::And);
  EXPECT_TRUE(equal(body.sub[0], fml::eq(term::var(1), b.q_term)));
  EXPECT_TRUE(equal(body.sub[1], b.berry_formula));
  EXPECT_EQ(eval_term(b.q_term, {}, base_env()), Nat(6) * b.ell);
  EXPECT_THROW(build_bundle(parse_formula("x=x'")), NotOneFree);
}

TEST(Berry, EllCountedIndependently) {
  for (const auto& [name, u] : upsilon_corpus()) {
    auto b = build_bundle(u);
    EXPECT_EQ(b.ell, Nat(rendered_tokens(render(b.berry_formula)))) << name;
    EXPECT_GT(b.ell, Nat(24)) << name;
  }
  EXPECT_EQ(build_bundle(parse_formula("x=x")).ell, Nat(128));
  EXPECT_EQ(build_bundle(parse_formula("Tr(x)")).ell, Nat(113));
}

TEST(Berry, LengthAudit) {
  for (const auto& [name, u] : upsilon_corpus()) {
    auto a = length_audit(build_bundle(u));
    EXPECT_TRUE(a.below_six_ell) << name;
    EXPECT_EQ(a.b_length, Nat(36) + Nat(5) * a.ell) << name;  // our rendering: 12 more than 24+5ℓ
    EXPECT_FALSE(a.nominal_count_matches);
  }
  EXPECT_GE(upsilon_corpus().back().second->length, Nat(50));
  for (std::uint64_t l = 25; l < 2000; ++l) EXPECT_LT(24 + 5 * l, 6 * l);
}

TEST(Berry, LeastUndefinableSmall) {
  auto u = build_micro_universe(parse_formula("Tr(x)"), 4, 10);
  std::vector<FormulaPtr> fs;
  for (const char* a : {"0", "1", "x"})
    for (const char* b : {"0", "1", "x"})
      for (const char* op : {"=", "<"}) {
        auto f = parse_formula(std::string(a) + op + b);
        if (f->free.size() == 1) fs.push_back(f);
      }
  EXPECT_EQ(u.formulas.size(), fs.size());
  EXPECT_EQ(least_undefinable(u), brute_berry(fs));
  EXPECT_EQ(least_undefinable(u), 2u);
}

TEST(Berry, LeastUndefinableLength8MatchesBruteForce) {
  auto u = build_micro_universe(parse_formula("Tr(x)"), 8, 16);
  for (const auto& f : u.formulas) ASSERT_TRUE(quantifier_free(*f));
  EXPECT_EQ(least_undefinable(u), brute_berry(u.formulas));
}

TEST(Berry, LeastUndefinablePinnedAndOrderFree) {
  EXPECT_EQ(truth12().formulas.size(), 4016u);
  EXPECT_EQ(least_undefinable(truth12()), 4u);
  auto shuffled = build_micro_universe(parse_formula("Tr(x)"), 12, 16, {}, *truth_env(), 99);
  EXPECT_EQ(least_undefinable(shuffled), least_undefinable(truth12()));
  std::uint64_t prev = 0;
  for (std::size_t len : {3, 4, 6, 8, 10, 12}) {
    std::uint64_t b = len == 12 ? least_undefinable(truth12())
                                : least_undefinable(build_micro_universe(parse_formula("Tr(x)"), len, 16));
    EXPECT_GE(b, prev) << len;
    prev = b;
  }
  EXPECT_THROW(least_undefinable(build_micro_universe(parse_formula("x=x"), 4, 3)), BudgetInsufficient);
}

TEST(Berry, DefMonotoneInBound) {
  const auto& u = truth12();
  for (std::uint64_t n = 0; n <= u.n_bound; ++n)
    for (std::size_t z = 0; z <= u.max_len; ++z)
      if (u.def(z, n) == TV::True)
        for (std::size_t z2 = z; z2 <= u.max_len; ++z2) EXPECT_EQ(u.def(z2, n), TV::True) << n << " " << z;
}

TEST(Berry, ContradictionWithTruthOracle) {
  auto r = berry_contradiction_report(parse_formula("Tr(x)"), truth12());
  EXPECT_TRUE(r.uniqueness);
  ASSERT_TRUE(r.berry_number_found);
  EXPECT_EQ(r.berry_number, 4u);
  EXPECT_EQ(r.b_at_berry, TV::True);
  EXPECT_EQ(r.defines_berry, TV::True);
  EXPECT_EQ(r.b_at_berry_closed, TV::False);
  EXPECT_TRUE(r.contradiction);
}

TEST(Berry, EmptyUpsilonIsClean) {
  auto u = build_micro_universe(parse_formula("¬(x=x)"), 8, 12);
  auto r = berry_contradiction_report(parse_formula("¬(x=x)"), u);
  EXPECT_TRUE(r.uniqueness);
  EXPECT_FALSE(r.contradiction);
  // Def is empty, so 0 is the least undefinable number and B holds there only.
  ASSERT_EQ(r.b_values.size(), 13u);
  EXPECT_EQ(r.b_values[0], TV::True);
  for (std::size_t n = 1; n < r.b_values.size(); ++n) EXPECT_EQ(r.b_values[n], TV::False) << n;
}

TEST(Berry, UniquenessExhaustive) {
  for (const char* ups : {"Tr(x)", "x=x", "¬(x=x)", "0<x"}) {
    auto u = build_micro_universe(parse_formula(ups), 8, 12);
    auto r = berry_contradiction_report(parse_formula(ups), u);
    EXPECT_TRUE(r.uniqueness) << ups;
  }
}

TEST(Berry, Pigeonhole) {
  auto d = pigeonhole_duplicate({0, 1, 0}, 2);
  ASSERT_TRUE(d);
  EXPECT_EQ(*d, std::make_pair(std::size_t{0}, std::size_t{2}));
  EXPECT_FALSE(pigeonhole_duplicate({0, 1}, 2));
  std::mt19937_64 rng(5);
  for (int t = 0; t < 1000; ++t) {
    std::uint64_t p = 1 + rng() % 50;
    std::vector<BigInt> v;
    for (std::uint64_t i = 0; i <= p; ++i) v.push_back(rng() % p);
    auto r = pigeonhole_duplicate(v, p);
    ASSERT_TRUE(r);
    EXPECT_LT(r->first, r->second);
    EXPECT_EQ(v[r->first], v[r->second]);
  }
}

TEST(Berry, TarskiExperiment) {
  auto genuine = build_micro_universe(parse_formula("Tr(x)"), 6, 40);
  auto g = syntactic_tarski_experiment(genuine);
  ASSERT_TRUE(g.ladder_break);
  EXPECT_EQ(*g.ladder_break, least_undefinable(genuine));
  EXPECT_FALSE(g.clash);
  EXPECT_FALSE(g.tb_failure);

  Nat top(0);
  Enumerator e;
  for (std::size_t len = 1; len < 6; ++len)
    for (const auto& f : e.formulas(len))
      if (top < encode(f)) top = encode(f);
  EXPECT_EQ(g.code_bound, top + Nat(1));

  auto over = build_micro_universe(parse_formula("x=x"), 6, 40);
  auto o = syntactic_tarski_experiment(over);
  EXPECT_FALSE(o.ladder_break);
  EXPECT_EQ(o.chosen.size(), o.index_bound + 1);
  ASSERT_TRUE(o.duplicate);
  EXPECT_TRUE(o.clash);
  ASSERT_EQ(o.clash_trace.size(), 3u);
  auto [i, j] = *o.duplicate;
  EXPECT_LT(i, j);
  EXPECT_EQ(eval(o.clash_trace[2], {}, base_env()), TV::False);
  ASSERT_TRUE(o.tb_failure);
  EXPECT_EQ(o.tb_failure_value, TV::False);

  auto empty = build_micro_universe(parse_formula("¬(x=x)"), 6, 40);
  auto n = syntactic_tarski_experiment(empty);
  ASSERT_TRUE(n.ladder_break);
  EXPECT_EQ(*n.ladder_break, 0u);
  EXPECT_FALSE(n.clash);
  ASSERT_TRUE(n.tb_failure);
  EXPECT_EQ(render(n.tb_failure), "0=0");
}
