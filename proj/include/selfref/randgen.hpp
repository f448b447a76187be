#pragma once
// Random expression generators for property checks.

#include "selfref/coding.hpp"

#include <random>

namespace selfref::testgen {

struct Gen {
  explicit Gen(std::uint64_t seed) : rng(seed) {}
  std::mt19937_64 rng;
  VarIndex max_var = 3;
  bool oracles = false;

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

  TermPtr term(int depth) {
    int k = pick(depth <= 0 ? 4 : (oracles ? 7 : 6));
    switch (k) {
      case 0: return term::zero();
      case 1: return term::one();
      case 2: return term::var(static_cast<VarIndex>(pick(max_var + 1)));
      case 3: return numeral(Nat(pick(6)));
      case 4: return term::add(term(depth - 1), term(depth - 1));
      case 5: return term::mul(term(depth - 1), term(depth - 1));
      default: return term::fun(OracleFn::Len, {term(depth - 1)});
    }
  }

  FormulaPtr formula(int depth) {
    int k = pick(depth <= 0 ? 2 : 9);
    switch (k) {
      case 0: return fml::eq(term(2), term(2));
      case 1: return fml::lt(term(2), term(2));
      case 2: return fml::negation(formula(depth - 1));
      case 3: return fml::conj(formula(depth - 1), formula(depth - 1));
      case 4: return fml::disj(formula(depth - 1), formula(depth - 1));
      case 5: return fml::implies(formula(depth - 1), formula(depth - 1));
      case 6: return fml::iff(formula(depth - 1), formula(depth - 1));
      case 7: return fml::forall(static_cast<VarIndex>(pick(max_var + 1)), formula(depth - 1));
      default: return fml::exists(static_cast<VarIndex>(pick(max_var + 1)), formula(depth - 1));
    }
  }
};

}  // namespace selfref::testgen
