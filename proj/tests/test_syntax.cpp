#include "selfref/coding.hpp"
#include "support.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <fstream>

using namespace selfref;

namespace {

std::string unary(std::uint64_t m) {
  std::string s;
  for (std::uint64_t i = 1; i < m; ++i) s += "1+(";
  s += "1";
  for (std::uint64_t i = 1; i < m; ++i) s += ")";
  return s;
}

// Independent tokenizer over canonical text: single ASCII or UTF-8 symbols,
// the five oracle names, and x.
std::vector<unsigned> text_ids(const std::string& s) {
  static const std::vector<std::pair<std::string, unsigned>> table = {
      {"Formula", 22}, {"prf", 21}, {"len", 23}, {"neg", 25}, {"inst", 27}, {"Tr", 26}, {"D", 24},
      {"0", 1},        {"1", 2},    {"+", 3},    {"·", 4},    {"=", 5},     {"<", 6},   {"¬", 7},
      {"∧", 8},        {"∨", 9},    {"→", 10},   {"↔", 11},   {"∀", 12},    {"∃", 13},  {"(", 14},
      {")", 15},       {"[", 16},   {"]", 17},   {",", 18},   {"x", 19},    {"'", 20}};
  std::vector<unsigned> ids;
  std::size_t i = 0;
  while (i < s.size()) {
    bool hit = false;
    for (const auto& [sym, id] : table) {
      if (s.compare(i, sym.size(), sym) == 0) {
        ids.push_back(id);
        i += sym.size();
        hit = true;
        break;
      }
    }
    if (!hit) throw std::runtime_error("unexpected character in canonical text");
  }
  return ids;
}

BigInt horner(const std::vector<unsigned>& ids) {
  BigInt v = 0;
  for (unsigned d : ids) v = v * 32 + d;
  return v;
}

}  // namespace

TEST(Syntax, NumeralLengthLaw) {
  for (std::uint64_t m = 1; m <= 500; ++m) {
    auto n = numeral(Nat(m));
    EXPECT_EQ(n->length, Nat(4 * m - 3));
    EXPECT_EQ(tokens(Expr(n)).size(), 4 * m - 3);
    auto parsed = parse_term(unary(m));
    EXPECT_TRUE(equal(parsed, n));
    EXPECT_EQ(unary(m).size(), 4 * m - 3);
  }
  EXPECT_EQ(numeral(Nat(0))->length, Nat(1));
}

TEST(Syntax, SmallLengths) {
  EXPECT_EQ(length(parse_expr("x''")), Nat(3));
  EXPECT_EQ(length(parse_expr("x=x")), Nat(3));
  EXPECT_EQ(render(numeral(Nat(2))), "1+(1)");
  EXPECT_EQ(render(term::var(2)), "x''");
}

TEST(Syntax, CanonicalRenderingRoundTrips) {
  testgen::Gen g(1);
  g.oracles = true;
  for (int i = 0; i < 500; ++i) {
    FormulaPtr f = g.formula(5);
    std::string text = render(f);
    FormulaPtr back = parse_formula(text);
    ASSERT_TRUE(equal(back, f)) << text;
    EXPECT_EQ(render(back), text);
    EXPECT_EQ(f->length, Nat(tokens(Expr(f)).size()));
  }
}

TEST(Syntax, AliasesAndSugar) {
  EXPECT_EQ(render(parse_formula("Ax(x<0 -> 0=1)")), "∀x[(x<0)→(0=1)]");
  EXPECT_EQ(render(parse_formula("~(x=x) & x'=x | x<1")), "((¬(x=x))∧(x'=x))∨(x<1)");
  EXPECT_EQ(render(parse_formula("x≠0")), "¬(x=0)");
  EXPECT_EQ(render(parse_formula("x≤1")), "(x<1)∨(x=1)");
  EXPECT_EQ(render(parse_formula("∃x'<x[x'=0]")), "∃x'[(x'<x)∧(x'=0)]");
  EXPECT_EQ(render(parse_formula("x′″=0")), "x'''=0");
  EXPECT_THROW(parse_formula("x=(y"), ParseError);
  EXPECT_THROW(parse_formula("x=="), ParseError);
}

TEST(Syntax, CaptureAvoidingSubstitution) {
  auto f = parse_formula("∃x'[x=x']");
  EXPECT_EQ(render(substitute(f, 0, term::var(1))), "∃x''[x'=x'']");
  auto g = parse_formula("∀x[x=x']");
  EXPECT_TRUE(equal(substitute(g, 0, term::one()), g));  // x is bound
  EXPECT_EQ(render(substitute(g, 1, term::var(0))), "∀x''[x''=x]");
  EXPECT_EQ(fresh_var(*parse_formula("∀x[x=x'']")), 1u);
}

TEST(Syntax, FreeVariables) {
  auto f = parse_formula("(∀x[x=x'])∧(x''<x)");
  EXPECT_EQ(free_vars(*f), (std::vector<VarIndex>{0, 1, 2}));
  EXPECT_TRUE(parse_formula("∀x[∃x'[x<x']]")->closed());
}

TEST(Coding, HandComputedCodes) {
  // id(x) = 19, id(=) = 5.
  EXPECT_EQ(encode(parse_expr("x=x")), Nat(19 * 32 * 32 + 5 * 32 + 19));
  EXPECT_EQ(encode(parse_expr("0")), Nat(1));
}

TEST(Coding, RoundTripAgainstTextOracle) {
  testgen::Gen g(2);
  g.oracles = true;
  for (int i = 0; i < 300; ++i) {
    FormulaPtr f = g.formula(6);
    Nat c = encode(f);
    EXPECT_EQ(c, Nat(horner(text_ids(render(f)))));
    Expr back = decode(Nat(c.concrete()));  // drop the back-reference
    ASSERT_TRUE(equal(back, Expr(f)));
    EXPECT_EQ(quote(f)->value, c);
    EXPECT_EQ(quote(f)->length, *(Nat(4) * c).minus(Nat(3)));
  }
}

TEST(Coding, DecodeRejectsNonCodes) {
  EXPECT_THROW(decode(Nat(0)), NotACode);
  EXPECT_THROW(decode(Nat(28)), NotACode);  // digit past the alphabet
  EXPECT_THROW(decode(Nat(5)), NotACode);   // "=" alone
  // "1+(0)" is a term distinct from the numeral 1; it still decodes.
  EXPECT_NO_THROW(decode(Nat(encode(parse_expr("1+(0)")).concrete())));
}

TEST(Coding, OracleCodeBuilders) {
  auto phi = parse_formula("x=1+(1)");
  auto y = numeral(Nat(2));
  EXPECT_EQ(D_code(encode(phi), y), encode(build_D(phi, y)));
  EXPECT_EQ(render(build_D(phi, y)), "∀x'[(x'=1+(1))↔(x'=1+(1))]");
  auto zero = parse_formula("0=0");
  EXPECT_EQ(neg_code(encode(zero)), encode(parse_formula("¬(0=0)")));
  EXPECT_EQ(decode_formula(Nat(neg_code(neg_code(encode(zero))).concrete()))->length, Nat(9));
  EXPECT_THROW(build_D(parse_formula("x=x'"), y), NotOneFree);
}

TEST(Coding, HugeNumeralsEncodeSymbolically) {
  auto big = numeral(Nat(BigInt(1) << 3000));
  auto f = fml::eq(term::var(0), big);
  Nat c = encode(f);
  EXPECT_FALSE(c.is_concrete());
  // The last token is ")", id 15; the first is x.
  EXPECT_EQ(c.mod_small(32), 15u);
  EXPECT_EQ(f->length, Nat(2) + *(Nat(4) * Nat(BigInt(1) << 3000)).minus(Nat(3)));
  // Small numeral through the symbolic path agrees with direct expansion.
  auto mid = fml::eq(term::var(0), numeral(Nat(5000)));
  detail::SegmentSink s;
  emit(*mid, s);
  s.flush();
  ExpSum total;
  BigInt shift = 0;
  for (std::size_t i = s.segs.size(); i-- > 0;) {
    total = total + s.segs[i].value * ExpSum::power(shift);
    shift += s.segs[i].length;
  }
  EXPECT_EQ(Nat::from_sum(total), encode(mid));
}

TEST(Coding, ByteStrings) {
  for (std::string s : std::vector<std::string>{"", "a", "proof\n1 | 0=0 | schema:EQ_REFL:0", std::string("\xff\x00\x01", 3)})
    EXPECT_EQ(decode_bytes(encode_bytes(s)), s);
}

TEST(Coding, CodesFixtureMatchesAlphabet) {
  std::ifstream in(SELFREF_FIXTURE_DIR "/codes.json");
  auto j = nlohmann::json::parse(in);
  EXPECT_EQ(j["version"], kSchemeVersion);
  EXPECT_EQ(j["base"], kCodeBase);
  ASSERT_EQ(j["tokens"].size(), kTokenCount);
  for (const auto& t : j["tokens"]) {
    Tok k = static_cast<Tok>(t["id"].get<int>());
    EXPECT_EQ(t["text"], tok_text(k));
    EXPECT_EQ(t["name"], tok_name(k));
  }
}
