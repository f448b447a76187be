#include "selfref/nat.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace selfref;

namespace {

ExpSum random_sum(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> nterms(1, 4), ex(0, 12), num(-40, 40), den(1, 7);
  ExpSum s;
  int n = nterms(rng);
  for (int i = 0; i < n; ++i) s = s + ExpSum::power(ex(rng), BigRat(num(rng), den(rng)));
  return s;
}

int sign_of(const BigRat& r) { return r > 0 ? 1 : (r < 0 ? -1 : 0); }

}  // namespace

TEST(ExpSum, SignMatchesExactExpansion) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 3000; ++trial) {
    ExpSum s = random_sum(rng);
    EXPECT_EQ(s.sign(), sign_of(s.expand())) << s.to_string();
  }
}

TEST(ExpSum, NearCancellationIsResolved) {
  // 32^50 - (32^50 - 1) = 1, with the lower part spread over many terms.
  ExpSum a = ExpSum::power(50);
  ExpSum b = ExpSum::power(50, BigRat(1, 31)) - ExpSum(BigRat(1, 31));  // (32^50-1)/31
  ExpSum diff = a - b.scaled(31);
  EXPECT_EQ(diff.sign(), 1);
  EXPECT_EQ((diff - ExpSum(BigRat(1))).sign(), 0);
}

TEST(ExpSum, ResiduesMatchExpansion) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    ExpSum s = ExpSum::power(trial % 9 + 3, BigRat(5)) + ExpSum(BigRat(trial));
    BigInt v = boost::multiprecision::numerator(s.expand());
    for (int m : {2, 3, 7, 31, 1000}) EXPECT_EQ(s.mod(m), v % m);
  }
  ExpSum frac = ExpSum::power(20, BigRat(1, 31)) - ExpSum(BigRat(1, 31));
  EXPECT_TRUE(frac.is_integer());
  EXPECT_FALSE((frac + ExpSum(BigRat(1, 2))).is_integer());
}

TEST(Nat, SymbolicValuesCompareExactly) {
  Nat big = Nat::pow_base(BigInt(1) << 80);
  EXPECT_FALSE(big.is_concrete());
  Nat bigger = big + Nat(1);
  EXPECT_LT(big, bigger);
  EXPECT_EQ(*bigger.minus(big), Nat(1));
  EXPECT_FALSE(big.minus(bigger).has_value());
  EXPECT_EQ(big.mod_small(2), 0u);
  EXPECT_EQ(bigger.mod_small(31), 2u);  // 32 ≡ 1 (mod 31)
  EXPECT_EQ(*(big * Nat(6)).divide_exact(Nat(3)), big * Nat(2));
  EXPECT_EQ(*(big * big).divide_exact(big), big);
}

TEST(Nat, SmallSymbolicSumsCollapseToConcrete) {
  Nat n = Nat::from_sum(ExpSum::power(10, BigRat(3)) + ExpSum(BigRat(4)));
  ASSERT_TRUE(n.is_concrete());
  EXPECT_EQ(n.concrete(), BigInt(3) * (BigInt(1) << 50) + 4);
}

TEST(Nat, NegativeOrFractionalSumsAreRejected) {
  EXPECT_FALSE(Nat::try_from_sum(ExpSum(BigRat(-1))).has_value());
  EXPECT_FALSE(Nat::try_from_sum(ExpSum(BigRat(1, 2))).has_value());
}
