#include "selfref/domination.hpp"

#include <gtest/gtest.h>

using namespace selfref;

namespace {

// Least witnesses of the catalogue fixture, written out by hand.
std::optional<std::uint64_t> hand_witness(std::size_t a, std::uint64_t u) {
  switch (a) {
    case 0: return u + 1;
    case 1: return u <= 3 ? std::optional<std::uint64_t>(3 - u) : std::nullopt;
    case 2: return 2 * u;
    case 3: return u * u;
    case 4: return u * u + 1;
    case 5: return u + 1;
    case 6: return u + 1;
    case 7: return u % 2 == 0 ? std::optional<std::uint64_t>(u / 2) : std::nullopt;
  }
  return std::nullopt;
}

std::uint64_t hand_F(std::uint64_t x, bool all_inputs) {
  std::uint64_t y = 0;
  for (std::size_t a = 0; a <= std::min<std::uint64_t>(x, 7); ++a)
    for (std::uint64_t u = all_inputs ? 0 : x; u <= x; ++u)
      if (auto z = hand_witness(a, u)) y = std::max(y, *z + 1);
  return y;
}

Budget wide() {
  Budget b;
  b.witness_bound = 4096;
  return b;
}

const MicroScheme& cat() {
  static const MicroScheme s = micro_catalogue("micro_catalogue_wide.txt");
  return s;
}

}  // namespace

TEST(Domination, CatalogueFixture) {
  EXPECT_EQ(cat().size(), 8u);
  EXPECT_EQ(render(cat().at(0)), "x'=x+(1)");
  EXPECT_THROW(MicroScheme({parse_formula("x=0")}), Error);
  EXPECT_THROW(MicroScheme({cat().at(0), cat().at(0)}), Error);
  for (std::size_t a = 0; a < cat().size(); ++a)
    for (std::uint64_t u = 0; u <= 12; ++u) EXPECT_EQ(cat().least_witness(a, u, wide()), hand_witness(a, u)) << a << " " << u;
}

TEST(Domination, FAgainstHandValues) {
  for (std::uint64_t x = 0; x <= 50; ++x) {
    EXPECT_EQ(F_diagonal(cat(), x, wide()), hand_F(x, false)) << x;
    EXPECT_EQ(F_uniform(cat(), x, wide()), hand_F(x, true)) << x;
  }
  EXPECT_EQ(F_diagonal(cat(), 0), 2u);
  EXPECT_EQ(F_diagonal(cat(), 1), 3u);
  EXPECT_EQ(F_uniform(cat(), 1), 4u);
}

TEST(Domination, PinnedCatalogue) {
  auto pinned = micro_catalogue();
  ASSERT_EQ(pinned.size(), 3u);
  for (std::size_t a = 0; a < 3; ++a) EXPECT_TRUE(equal(pinned.at(a), cat().at(a == 0 ? 0 : a + 1))) << a;
  for (std::uint64_t x = 0; x <= 20; ++x) EXPECT_EQ(F_uniform(pinned, x, wide()), F_diagonal(pinned, x, wide()));
}

TEST(Domination, SingleFormulaCatalogue) {
  MicroScheme one({parse_formula("x'=x+(1)")});
  EXPECT_EQ(F_uniform(one, 3), 5u);
  EXPECT_EQ(F_diagonal(one, 0), 2u);
  EXPECT_EQ(F_uniform(one, 0), F_diagonal(one, 0));
  MicroScheme none({parse_formula("x'+(x')=x")});
  EXPECT_EQ(F_diagonal(none, 1), 0u);  // no z with 2z = 1
}

TEST(Domination, BudgetAndOrdering) {
  Budget small;
  small.witness_bound = 20;
  for (std::uint64_t x = 0; x <= 30; ++x) {
    auto ps = F_diagonal(cat(), x, small), pw = F_diagonal(cat(), x, wide());
    auto ks = F_uniform(cat(), x, small), kw = F_uniform(cat(), x, wide());
    if (ps) EXPECT_EQ(ps, pw) << x;
    if (ks) EXPECT_EQ(ks, kw) << x;
    ASSERT_TRUE(pw && kw);
    EXPECT_GE(*kw, *pw);
  }
  EXPECT_FALSE(F_diagonal(cat(), 30, small));  // 30² is past the search
}

TEST(Domination, DominatesCatalogueFunctions) {
  std::map<std::uint64_t, std::optional<std::uint64_t>> kot, pap;
  for (std::uint64_t x = 0; x <= 50; ++x) {
    kot[x] = F_uniform(cat(), x, wide());
    pap[x] = F_diagonal(cat(), x, wide());
  }
  for (std::size_t code : {0u, 2u, 3u, 4u}) {
    auto f = defined_function(cat(), code, 0, 50, wide());
    EXPECT_TRUE(dominates_check(kot, f, 0, 50)) << code;
    EXPECT_TRUE(dominates_check(pap, f, 0, 50)) << code;
  }
  auto doubling = defined_function(cat(), 2, 0, 50, wide());
  EXPECT_EQ(doubling.samples.at(7), 14u);
  // a table that fails to majorize is reported
  std::map<std::uint64_t, std::optional<std::uint64_t>> low = {{0, 1}, {1, 1}};
  EXPECT_FALSE(dominates_check(low, defined_function(cat(), 0, 0, 1), 0, 1));
  EXPECT_THROW(dominates_check({}, doubling, 0, 3), UnresolvedPoint);
}

TEST(Domination, PsiShapeAndGraph) {
  auto p = build_psi(parse_formula("Tr(x)"));
  EXPECT_EQ(render(p.psi),
            "∀x''[((x''<x)∨(x''=x))→((∃x'''[Tr(inst(x'',x,x'''))])→(∃x'''[(x'''<x')∧(Tr(inst(x'',x,x''')))]))]");
  EXPECT_EQ(p.psi->free, (std::vector<VarIndex>{0, 1}));
  EXPECT_EQ(p.graph->free, (std::vector<VarIndex>{0, 1}));
  EXPECT_THROW(build_psi(parse_formula("0=0")), NotOneFree);

  auto s = std::make_shared<const MicroScheme>(micro_catalogue("micro_catalogue_wide.txt"));
  auto env = domination_env(s, wide());
  for (std::uint64_t x = 0; x <= 5; ++x) {
    std::uint64_t fx = *F_diagonal(*s, x, wide());
    int trues = 0;
    for (std::uint64_t y = 0; y <= fx + 3; ++y) {
      FormulaPtr g = substitute(substitute(p.graph, 0, numeral(Nat(x))), 1, numeral(Nat(y)));
      TV v = eval(g, {}, *env);
      ASSERT_NE(v, TV::Unknown) << x << " " << y;
      EXPECT_EQ(v, tv_of(y == fx)) << x << " " << y;
      trues += v == TV::True;
    }
    EXPECT_EQ(trues, 1);
  }
}
