#pragma once
// Gödel coding: bijective base-32 reading of the canonical token stream.

#include "selfref/render.hpp"

#include <string>
#include <vector>

namespace selfref {

inline constexpr const char* kSchemeVersion = "tok27-bij32-v1";

class NotACode : public Error {
 public:
  using Error::Error;
};
class NotOneFree : public Error {
 public:
  using Error::Error;
};

Expr parse_expr(const std::string& text);

namespace detail {

inline BigInt tokens_value(const std::vector<Tok>& ts) {
  BigInt v = 0;
  std::size_t i = 0;
  while (i < ts.size()) {
    std::uint64_t chunk = 0;
    unsigned n = 0;
    for (; n < 12 && i < ts.size(); ++n, ++i) chunk = (chunk << kCodeBaseBits) | static_cast<unsigned>(ts[i]);
    v <<= n * kCodeBaseBits;
    v += chunk;
  }
  return v;
}

// Segments of a token stream: concrete runs interleaved with large numerals.
struct SegmentSink {
  struct Segment {
    ExpSum value;
    BigInt length;
  };
  std::vector<Segment> segs;
  std::vector<Tok> run;

  void flush() {
    if (run.empty()) return;
    segs.push_back({ExpSum(BigRat(tokens_value(run))), BigInt(run.size())});
    run.clear();
  }
  void tok(Tok t) { run.push_back(t); }
  void numeral(const Nat& n) {
    if (auto v = n.to_u64(); v && *v <= 4096) {
      emit_expanded_numeral(*v, *this);
      return;
    }
    if (!n.is_concrete()) throw CodeUnrepresentable("numeral of symbolic size has no concrete token length");
    flush();
    const BigInt r = n.concrete() - 1;
    const BigRat K(kCodeBase);
    const BigRat t3 = BigRat(tokens_value({Tok::One, Tok::Plus, Tok::LParen}));
    const BigRat id1(static_cast<int>(Tok::One));
    const BigRat idr(static_cast<int>(Tok::RParen));
    const BigRat g3 = K * K * K - 1;
    const BigRat g1 = K - 1;
    // "1+(" r times, then "1", then ")" r times.
    ExpSum v = (ExpSum::power(4 * r + 1, t3 / g3) - ExpSum::power(r + 1, t3 / g3)) + ExpSum::power(r, id1) +
               (ExpSum::power(r, idr / g1) - ExpSum(idr / g1));
    segs.push_back({v, 4 * r + 1});
  }
};

}  // namespace detail

inline Nat encode(const Expr& e) {
  Nat len = length(e);
  Nat code;
  if (auto l = len.to_u64(); l && *l <= 4'000'000) {
    code = Nat(detail::tokens_value(tokens(e)));
  } else {
    detail::SegmentSink s;
    emit(e, s);
    s.flush();
    ExpSum total;
    BigInt shift = 0;
    for (std::size_t i = s.segs.size(); i-- > 0;) {
      total = total + s.segs[i].value * ExpSum::power(shift);
      shift += s.segs[i].length;
    }
    code = Nat::from_sum(total);
  }
  return code.with_origin(std::make_shared<const ExprOrigin>(e));
}
inline Nat encode(const FormulaPtr& f) { return encode(Expr(f)); }
inline Nat encode(const TermPtr& t) { return encode(Expr(t)); }

inline TermPtr quote(const Expr& e) { return numeral(encode(e)); }
inline TermPtr quote(const FormulaPtr& f) { return quote(Expr(f)); }

inline std::vector<unsigned> bijective_digits(BigInt c, unsigned base) {
  std::vector<unsigned> d;
  while (c > 0) {
    unsigned digit = static_cast<unsigned>((c - 1) % base) + 1;
    d.push_back(digit);
    c = (c - digit) / base;
  }
  std::reverse(d.begin(), d.end());
  return d;
}

inline Expr decode(const Nat& c) {
  if (const Expr* e = origin_expr(c)) return *e;
  if (!c.is_concrete()) throw CodeUnrepresentable("symbolic number with no known expression");
  if (c.concrete() == 0) throw NotACode("0 is not a code");
  std::vector<Tok> ts;
  for (unsigned d : bijective_digits(c.concrete(), kCodeBase)) {
    if (d > kTokenCount) throw NotACode("digit outside the token alphabet");
    ts.push_back(static_cast<Tok>(d));
  }
  Expr e;
  try {
    e = parse_expr(tokens_to_text(ts));
  } catch (const Error&) {
    throw NotACode("digit string is not a parseable token stream");
  }
  if (tokens(e) != ts) throw NotACode("token stream is not canonical");
  return e;
}

inline FormulaPtr decode_formula(const Nat& c) {
  Expr e = decode(c);
  if (e.index() != 1) throw NotACode("code denotes a term, not a formula");
  return std::get<1>(e);
}

// ∀ζ[(φ(ζ))↔(ζ=y)] with ζ fresh for φ and y.
inline FormulaPtr build_D(const FormulaPtr& phi, const TermPtr& y) {
  if (phi->free.size() != 1) throw NotOneFree("D needs a formula with exactly one free variable");
  VarIndex z = fresh_var(*fml::conj(phi, fml::eq(y, y)));
  return fml::forall(z, fml::iff(substitute(phi, phi->free[0], term::var(z)), fml::eq(term::var(z), y)));
}

inline Nat D_code(const Nat& c, const TermPtr& y) { return encode(build_D(decode_formula(c), y)); }
inline Nat neg_code(const Nat& c) { return encode(fml::negation(decode_formula(c))); }

// Byte strings (proof texts) as naturals, bijective base 256.
inline Nat encode_bytes(const std::string& s) {
  BigInt w = 0;
  for (unsigned char ch : s) w = w * 256 + (static_cast<unsigned>(ch) + 1);
  return Nat(w);
}
inline std::string decode_bytes(const Nat& n) {
  if (!n.is_concrete()) throw NotACode("symbolic number is not a byte string");
  std::string s;
  for (unsigned d : bijective_digits(n.concrete(), 256)) s.push_back(static_cast<char>(d - 1));
  return s;
}

}  // namespace selfref

#include "selfref/parser.hpp"
