#pragma once
// Natural numbers for codes that may be far too large to store digit by digit.
//
// A Nat is either a concrete multiprecision integer or a symbolic sum
// q_1*K^{E_1} + ... + q_n*K^{E_n} with rational q_i, integer E_i >= 0 and K the
// coding base. Sums are kept in descending exponent order with no zero terms.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace selfref {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

inline constexpr unsigned kCodeBase = 32;
inline constexpr unsigned kCodeBaseBits = 5;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CodeUnrepresentable : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline BigInt pow_base(const BigInt& e) {
  if (e < 0) throw Error("negative exponent");
  if (e > 4'000'000) throw CodeUnrepresentable("power of the base too large to expand");
  BigInt r = 1;
  r <<= static_cast<unsigned>(e) * kCodeBaseBits;
  return r;
}

// Rough log2 bounds of |q| for q != 0.
inline BigInt log2_upper(const BigRat& q) {
  BigInt n = abs(boost::multiprecision::numerator(q));
  BigInt d = boost::multiprecision::denominator(q);
  return BigInt(msb(n)) + 1 - BigInt(msb(d));
}
inline BigInt log2_lower(const BigRat& q) {
  BigInt n = abs(boost::multiprecision::numerator(q));
  BigInt d = boost::multiprecision::denominator(q);
  return BigInt(msb(n)) - BigInt(msb(d)) - 1;
}

}  // namespace detail

// Signed exact value sum_i coeff_i * K^exp_i.
class ExpSum {
 public:
  struct Term {
    BigInt exp;
    BigRat coeff;
  };

  ExpSum() = default;
  explicit ExpSum(const BigRat& c) {
    if (c != 0) terms_.push_back({0, c});
  }
  static ExpSum power(const BigInt& e, const BigRat& c = 1) {
    ExpSum s;
    if (c != 0) s.terms_.push_back({e, c});
    return s;
  }

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  friend ExpSum operator+(const ExpSum& a, const ExpSum& b) {
    ExpSum r;
    std::size_t i = 0, j = 0;
    while (i < a.terms_.size() || j < b.terms_.size()) {
      if (j == b.terms_.size() || (i < a.terms_.size() && a.terms_[i].exp > b.terms_[j].exp)) {
        r.terms_.push_back(a.terms_[i++]);
      } else if (i == a.terms_.size() || b.terms_[j].exp > a.terms_[i].exp) {
        r.terms_.push_back(b.terms_[j++]);
      } else {
        BigRat c = a.terms_[i].coeff + b.terms_[j].coeff;
        if (c != 0) r.terms_.push_back({a.terms_[i].exp, c});
        ++i;
        ++j;
      }
    }
    return r;
  }
  ExpSum operator-() const {
    ExpSum r = *this;
    for (auto& t : r.terms_) t.coeff = -t.coeff;
    return r;
  }
  friend ExpSum operator-(const ExpSum& a, const ExpSum& b) { return a + (-b); }
  friend ExpSum operator*(const ExpSum& a, const ExpSum& b) {
    ExpSum r;
    for (const auto& x : a.terms_) {
      ExpSum part;
      for (const auto& y : b.terms_) part.terms_.push_back({x.exp + y.exp, x.coeff * y.coeff});
      r = r + part;
    }
    return r;
  }
  ExpSum scaled(const BigRat& c) const {
    if (c == 0) return {};
    ExpSum r = *this;
    for (auto& t : r.terms_) t.coeff *= c;
    return r;
  }

  // Sign of the value: merge leading terms while the remainder could still
  // outweigh them; once the lead dominates everything below, its sign wins.
  int sign() const {
    std::size_t n = terms_.size();
    std::vector<BigRat> suffix(n + 1, BigRat(0));
    for (std::size_t k = n; k-- > 0;) suffix[k] = suffix[k + 1] + abs(terms_[k].coeff);
    std::size_t i = 0;
    while (i < n) {
      BigRat c = terms_[i].coeff;
      BigInt e = terms_[i].exp;
      ++i;
      while (true) {
        if (c == 0) break;
        if (i == n) return c > 0 ? 1 : -1;
        BigInt gap = e - terms_[i].exp;
        BigInt lhs = detail::log2_lower(c) + gap * kCodeBaseBits;
        if (lhs > detail::log2_upper(suffix[i]) + 1) return c > 0 ? 1 : -1;
        c = c * BigRat(detail::pow_base(gap)) + terms_[i].coeff;
        e = terms_[i].exp;
        ++i;
      }
    }
    return 0;
  }

  BigInt common_denominator() const {
    BigInt d = 1;
    for (const auto& t : terms_) d = boost::multiprecision::lcm(d, BigInt(boost::multiprecision::denominator(t.coeff)));
    return d;
  }

  // Value modulo m (m > 0); requires the value to be an integer.
  BigInt mod(const BigInt& m) const {
    BigInt d = common_denominator();
    BigInt dm = d * m;
    BigInt r = 0;
    for (const auto& t : terms_) {
      BigInt num = boost::multiprecision::numerator(t.coeff) * (d / boost::multiprecision::denominator(t.coeff));
      BigInt pw = powm(BigInt(kCodeBase), t.exp, dm);
      r += num * pw;
      r %= dm;
    }
    if (r < 0) r += dm;
    return (r / d) % m;
  }

  bool is_integer() const {
    BigInt d = common_denominator();
    if (d == 1) return true;
    BigInt r = 0;
    for (const auto& t : terms_) {
      BigInt num = boost::multiprecision::numerator(t.coeff) * (d / boost::multiprecision::denominator(t.coeff));
      BigInt pw = powm(BigInt(kCodeBase), t.exp, d);
      r += num * pw;
      r %= d;
    }
    return r == 0;
  }

  BigInt max_exp() const { return terms_.empty() ? BigInt(0) : terms_.front().exp; }

  // Exact value; only sensible when max_exp() is small.
  BigRat expand() const {
    BigRat r = 0;
    for (const auto& t : terms_) r += t.coeff * BigRat(detail::pow_base(t.exp));
    return r;
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (std::size_t k = 0; k < terms_.size(); ++k) {
      const auto& t = terms_[k];
      std::string c = t.coeff.str();
      if (k > 0) {
        if (c[0] == '-') {
          s += " - ";
          c.erase(0, 1);
        } else {
          s += " + ";
        }
      }
      s += c;
      if (t.exp != 0) s += "*32^" + t.exp.str();
    }
    return s;
  }

 private:
  std::vector<Term> terms_;
};

// Opaque back-reference from a code to the expression it encodes.
struct Provenance {
  virtual ~Provenance() = default;
};

class Nat {
 public:
  Nat() = default;
  template <class I, class = std::enable_if_t<std::is_integral_v<I>>>
  Nat(I v) : small_(v) {
    if (small_ < 0) throw Error("negative natural");
  }
  explicit Nat(BigInt v) : small_(std::move(v)) {
    if (small_ < 0) throw Error("negative natural");
  }
  // Builds a natural from a signed sum; throws unless it is a nonnegative integer.
  static Nat from_sum(const ExpSum& s) {
    auto n = try_from_sum(s);
    if (!n) throw Error("value is not a natural number");
    return *n;
  }
  static std::optional<Nat> try_from_sum(const ExpSum& s) {
    if (s.sign() < 0 || !s.is_integer()) return std::nullopt;
    Nat r;
    if (s.max_exp() <= kCollapseExp) {
      BigRat v = s.expand();
      r.small_ = boost::multiprecision::numerator(v);
    } else {
      r.sym_ = std::make_shared<const ExpSum>(s);
    }
    return r;
  }
  static Nat pow_base(const BigInt& e) { return from_sum(ExpSum::power(e)); }

  bool is_concrete() const { return !sym_; }
  const BigInt& concrete() const {
    if (sym_) throw CodeUnrepresentable("symbolic natural has no concrete expansion here");
    return small_;
  }
  std::optional<std::uint64_t> to_u64() const {
    if (sym_ || small_ > std::numeric_limits<std::uint64_t>::max()) return std::nullopt;
    return static_cast<std::uint64_t>(small_);
  }
  ExpSum as_sum() const { return sym_ ? *sym_ : ExpSum(BigRat(small_)); }

  const std::shared_ptr<const Provenance>& origin() const { return origin_; }
  Nat with_origin(std::shared_ptr<const Provenance> p) const {
    Nat r = *this;
    r.origin_ = std::move(p);
    return r;
  }

  friend Nat operator+(const Nat& a, const Nat& b) {
    if (!a.sym_ && !b.sym_) return Nat(BigInt(a.small_ + b.small_));
    return from_sum(a.as_sum() + b.as_sum());
  }
  friend Nat operator*(const Nat& a, const Nat& b) {
    if (!a.sym_ && !b.sym_) return Nat(BigInt(a.small_ * b.small_));
    if ((!a.sym_ && a.small_ == 0) || (!b.sym_ && b.small_ == 0)) return Nat(0);
    return from_sum(a.as_sum() * b.as_sum());
  }
  // a - b when a >= b.
  std::optional<Nat> minus(const Nat& b) const {
    if (!sym_ && !b.sym_) {
      if (small_ < b.small_) return std::nullopt;
      return Nat(BigInt(small_ - b.small_));
    }
    return try_from_sum(as_sum() - b.as_sum());
  }
  // Exact quotient a / b when the divisor is concrete or a single power term.
  std::optional<Nat> divide_exact(const Nat& b) const {
    if (!b.sym_) {
      if (b.small_ == 0) return std::nullopt;
      if (!sym_) {
        if (small_ % b.small_ != 0) return std::nullopt;
        return Nat(BigInt(small_ / b.small_));
      }
      return try_from_sum(sym_->scaled(BigRat(1) / BigRat(b.small_)));
    }
    const auto& bt = b.sym_->terms();
    if (bt.size() != 1) return std::nullopt;
    ExpSum a = as_sum();
    ExpSum q;
    for (const auto& t : a.terms()) {
      if (t.exp < bt[0].exp) return std::nullopt;
      q = q + ExpSum::power(t.exp - bt[0].exp, t.coeff / bt[0].coeff);
    }
    return try_from_sum(q);
  }

  static int compare(const Nat& a, const Nat& b) {
    if (!a.sym_ && !b.sym_) return a.small_ < b.small_ ? -1 : (a.small_ == b.small_ ? 0 : 1);
    return (a.as_sum() - b.as_sum()).sign();
  }
  friend bool operator==(const Nat& a, const Nat& b) { return compare(a, b) == 0; }
  friend bool operator!=(const Nat& a, const Nat& b) { return compare(a, b) != 0; }
  friend bool operator<(const Nat& a, const Nat& b) { return compare(a, b) < 0; }
  friend bool operator<=(const Nat& a, const Nat& b) { return compare(a, b) <= 0; }
  friend bool operator>(const Nat& a, const Nat& b) { return compare(a, b) > 0; }
  friend bool operator>=(const Nat& a, const Nat& b) { return compare(a, b) >= 0; }

  std::uint64_t mod_small(std::uint64_t m) const {
    if (!sym_) return static_cast<std::uint64_t>(small_ % m);
    return static_cast<std::uint64_t>(sym_->mod(BigInt(m)));
  }

  // Value-determined hash (residue modulo a fixed large prime).
  std::size_t hash() const {
    constexpr std::uint64_t p = 2305843009213693951ULL;  // 2^61 - 1
    return static_cast<std::size_t>(mod_small(p));
  }

  std::string to_string() const { return sym_ ? sym_->to_string() : small_.str(); }
  std::string summary() const {
    if (!sym_) {
      std::string s = small_.str();
      if (s.size() <= 60) return s;
      return s.substr(0, 20) + "...(" + std::to_string(s.size()) + " decimal digits)";
    }
    std::string e = sym_->max_exp().str();
    if (e.size() > 24) e = e.substr(0, 12) + "...(" + std::to_string(e.size()) + " digits)";
    return "symbolic ~32^" + e + " (" + std::to_string(sym_->terms().size()) + " terms)";
  }

 private:
  static constexpr unsigned kCollapseExp = 4096;
  BigInt small_ = 0;
  std::shared_ptr<const ExpSum> sym_;
  std::shared_ptr<const Provenance> origin_;
};

}  // namespace selfref
