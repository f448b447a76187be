#pragma once
// Exhaustive enumeration of pure-signature terms and formulas by length.

#include "selfref/coding.hpp"

#include <map>
#include <vector>

namespace selfref {

// Canonical trees of each exact length, built bottom-up. Each bucket of formulas
// is sorted by code.
class Enumerator {
 public:
  const std::vector<TermPtr>& terms(std::size_t len) {
    while (terms_.size() <= len) grow_terms();
    return terms_[len];
  }

  const std::vector<FormulaPtr>& formulas(std::size_t len) {
    terms(len);
    while (formulas_.size() <= len) grow_formulas();
    return formulas_[len];
  }

  std::vector<FormulaPtr> up_to(std::size_t max_len) {
    std::vector<FormulaPtr> all;
    for (std::size_t n = 1; n <= max_len; ++n) {
      const auto& b = formulas(n);
      all.insert(all.end(), b.begin(), b.end());
    }
    return all;
  }

  std::uint64_t count_up_to(std::size_t max_len) {
    std::uint64_t c = 0;
    for (std::size_t n = 1; n <= max_len; ++n) c += formulas(n).size();
    return c;
  }

 private:
  std::vector<std::vector<TermPtr>> terms_;
  std::vector<std::vector<FormulaPtr>> formulas_;

  void grow_terms() {
    std::size_t n = terms_.size();
    std::vector<TermPtr> out;
    if (n == 1) {
      out.push_back(term::zero());
      out.push_back(term::one());
    }
    if (n >= 1) out.push_back(term::var(static_cast<VarIndex>(n - 1)));
    // a∘b costs |a|+|b|+3, plus 2 when a is wrapped.
    for (std::size_t la = 1; la + 4 <= n; ++la) {
      for (const auto& a : terms_[la]) {
        std::size_t cost = la + 3 + (a->atomic() ? 0 : 2);
        if (cost + 1 > n) continue;
        for (const auto& b : terms_[n - cost]) {
          out.push_back(term::add(a, b));
          out.push_back(term::mul(a, b));
        }
      }
    }
    terms_.push_back(std::move(out));
  }

  void grow_formulas() {
    std::size_t n = formulas_.size();
    std::vector<FormulaPtr> out;
    for (std::size_t la = 1; la + 2 <= n; ++la)
      for (const auto& a : terms_[la])
        for (const auto& b : terms_[n - 1 - la]) {
          out.push_back(fml::eq(a, b));
          out.push_back(fml::lt(a, b));
        }
    if (n > 3)
      for (const auto& f : formulas_[n - 3]) out.push_back(fml::negation(f));
    for (std::size_t la = 1; la + 6 <= n; ++la)
      for (const auto& f : formulas_[la])
        for (const auto& g : formulas_[n - 5 - la])
          for (FormulaKind k : {FormulaKind::And, FormulaKind::Or, FormulaKind::Implies, FormulaKind::Iff})
            out.push_back(fml::binary(k, f, g));
    // Qv[f] costs |f| + v + 4.
    for (std::size_t v = 0; v + 5 <= n; ++v)
      for (const auto& f : formulas_[n - 4 - v]) {
        out.push_back(fml::forall(static_cast<VarIndex>(v), f));
        out.push_back(fml::exists(static_cast<VarIndex>(v), f));
      }
    std::vector<std::pair<Nat, FormulaPtr>> keyed;
    keyed.reserve(out.size());
    for (auto& f : out) keyed.emplace_back(encode(f), std::move(f));
    std::sort(keyed.begin(), keyed.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    out.clear();
    for (auto& [c, f] : keyed) out.push_back(std::move(f));
    formulas_.push_back(std::move(out));
  }
};

// Second count of formulas by length, over the canonical text grammar rather
// than trees:
//   T    := 0 | 1 | x'… | L+(T) | L·(T)      L := 0 | 1 | x'… | (T+ or T·)
//   F    := T=T | T<T | ¬(F) | (F)∘(F) | Qx'…[F]
class GrammarCounter {
 public:
  explicit GrammarCounter(std::size_t max_len) : n_(max_len) {
    simple_.assign(n_ + 1, 0);
    compound_.assign(n_ + 1, 0);
    formula_.assign(n_ + 1, 0);
    for (std::size_t n = 1; n <= n_; ++n) simple_[n] = (n == 1 ? 3 : 1);  // 0, 1, x and primed vars
    for (std::size_t n = 1; n <= n_; ++n) {
      BigInt c = 0;
      for (std::size_t l = 1; l + 4 <= n; ++l) {
        // left simple: l + 3 + r = n; left compound wrapped: l + 2 + 3 + r = n
        c += 2 * simple_[l] * term_count(n - 3 - l);
        if (l + 6 <= n) c += 2 * compound_[l] * term_count(n - 5 - l);
      }
      compound_[n] = c;
    }
    for (std::size_t n = 1; n <= n_; ++n) {
      BigInt c = 0;
      for (std::size_t l = 1; l + 2 <= n; ++l) c += 2 * term_count(l) * term_count(n - 1 - l);
      if (n > 3) c += formula_[n - 3];
      for (std::size_t l = 1; l + 6 <= n; ++l) c += 4 * formula_[l] * formula_[n - 5 - l];
      for (std::size_t v = 0; v + 5 <= n; ++v) c += 2 * formula_[n - 4 - v];
      formula_[n] = c;
    }
  }

  BigInt term_count(std::size_t n) const { return n <= n_ ? simple_[n] + compound_[n] : BigInt(0); }
  BigInt formula_count(std::size_t n) const { return n <= n_ ? formula_[n] : BigInt(0); }
  BigInt formulas_up_to(std::size_t n) const {
    BigInt s = 0;
    for (std::size_t i = 1; i <= n && i <= n_; ++i) s += formula_[i];
    return s;
  }

 private:
  std::size_t n_;
  std::vector<BigInt> simple_, compound_, formula_;
};

}  // namespace selfref
