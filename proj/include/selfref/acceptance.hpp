#pragma once
// The acceptance suite: one pass/fail line per criterion, with wall time.

#include "selfref/berry.hpp"
#include "selfref/domination.hpp"
#include "selfref/incompleteness.hpp"
#include "selfref/randgen.hpp"

#include <chrono>
#include <functional>
#include <ostream>
#include <random>
#include <sstream>

namespace selfref {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  double seconds = 0;
  double limit = 0;  // 0 when untimed
  std::string detail;
};

namespace acceptance_detail {

struct Check {
  bool ok = true;
  std::ostringstream why;
  void expect(bool c, const std::string& what) {
    if (!c && ok) why << "failed: " << what;
    ok = ok && c;
  }
};

using Body = std::function<void(Check&, std::ostringstream&)>;

struct Criterion {
  int id;
  const char* name;
  double limit;
  Body body;
};

// Token id of the last rendered symbol, for the few symbols a sentence can end with.
inline int last_token_id(const std::string& text) {
  switch (text.back()) {
    case ']': return 17;
    case ')': return 15;
    case '0': return 1;
    case '1': return 2;
    case 'x': return 19;
    case '\'': return 20;
  }
  return -1;
}

inline std::vector<Criterion> criteria() {
  std::vector<Criterion> c;
  c.push_back({1, "numeral-length-law", 1.0, [](Check& k, std::ostringstream& d) {
                 for (std::uint64_t m = 1; m <= 500; ++m)
                   k.expect(numeral(Nat(m))->length == Nat(4 * m - 3), "len(numeral " + std::to_string(m) + ")");
                 k.expect(term::var(2)->length == Nat(3), "len(x'') = 3");
                 k.expect(parse_formula("x=x")->length == Nat(3), "len(x=x) = 3");
                 d << "m=1..500";
               }});
  c.push_back({2, "enumeration-recount", 0, [](Check& k, std::ostringstream& d) {
                 Enumerator e;
                 std::uint64_t n = e.count_up_to(8);
                 BigInt r = GrammarCounter(8).formulas_up_to(8);
                 k.expect(BigInt(n) == r, "enumerator and grammar recount agree");
                 d << "formulas of length <= 8: " << n << ", recount " << r;
               }});
  c.push_back({3, "coding-roundtrip", 10.0, [](Check& k, std::ostringstream& d) {
                 testgen::Gen g(2024);
                 for (int i = 0; i < 1000 && k.ok; ++i) {
                   FormulaPtr f = g.formula(g.pick(7));
                   Nat c = encode(f);
                   k.expect(equal(decode_formula(c), f), "decode(encode) at " + render(f));
                   k.expect(eval_term(quote(f), {}, base_env()) == c, "eval(quote) at " + render(f));
                 }
                 d << "1000 random formulas, depth <= 6";
               }});
  c.push_back({4, "tautology-step", 0, [](Check& k, std::ostringstream& d) {
                 using namespace prop;
                 k.expect(taut_equiv(*neg(iff(p(0), p(1))), *iff(neg(p(0)), p(1))), "¬(p↔q) ≡ ¬p↔q");
                 d << "4-row truth table";
               }});
  c.push_back({5, "fixed-points", 60.0, [](Check& k, std::ostringstream& d) {
                 int n = 0;
                 for (const auto& [name, psi] : psi_corpus()) {
                   auto cert = diagonal_sentence(psi);
                   k.expect(cert.theta_verdict != TV::Unknown, name + ": θ resolved");
                   k.expect(cert.theta_verdict == cert.psi_verdict, name + ": Ψ(⌜θ⌝) and θ agree");
                   if (name == "valid") k.expect(cert.theta_verdict == TV::True, "x=x gives True");
                   if (name == "unsatisfiable") k.expect(cert.theta_verdict == TV::False, "¬(x=x) gives False");
                   if (name == "even") {
                     int last = last_token_id(render(cert.theta));
                     k.expect(last > 0, "last symbol of θ known");
                     k.expect(cert.theta_verdict == tv_of(last % 2 == 0), "parity verdict matches code mod 2");
                   }
                   ++n;
                 }
                 d << n << " Ψ formulas";
               }});
  c.push_back({6, "truth-refutation", 0, [](Check& k, std::ostringstream& d) {
                 for (const auto& [name, gamma] : gamma_candidates())
                   k.expect(refute_truth_definition(gamma).biconditional == TV::False, name);
                 d << "3 candidates";
               }});
  c.push_back({7, "berry-bound", 0, [](Check& k, std::ostringstream& d) {
                 for (const auto& [name, u] : upsilon_corpus()) {
                   auto a = length_audit(build_bundle(u));
                   k.expect(a.below_six_ell, name + ": len(B) < 6ℓ");
                   k.expect(a.ell > Nat(24), name + ": ℓ > 24");
                   d << name << " ℓ=" << a.ell.concrete() << " len(B)=" << a.b_length.concrete() << "; ";
                 }
               }});
  c.push_back({8, "micro-berry", 120.0, [](Check& k, std::ostringstream& d) {
                 FormulaPtr tr = parse_formula("Tr(x)");
                 auto env = truth_env();
                 auto u = build_micro_universe(tr, 12, 16, {}, *env);
                 auto shuffled = build_micro_universe(tr, 12, 16, {}, *env, 7);
                 std::uint64_t b = least_undefinable(u);
                 k.expect(b == least_undefinable(shuffled), "𝔟 independent of order");
                 auto r = berry_contradiction_report(tr, u);
                 k.expect(r.uniqueness, "Berry uniqueness (truth)");
                 k.expect(r.contradiction, "contradiction flagged (truth)");
                 FormulaPtr none = parse_formula("¬(x=x)");
                 auto rn = berry_contradiction_report(none, build_micro_universe(none, 12, 16, {}, *env));
                 k.expect(rn.uniqueness, "Berry uniqueness (nothing-true)");
                 k.expect(!rn.contradiction, "clean report (nothing-true)");
                 d << "formulas=" << u.formulas.size() << " 𝔟=" << b;
               }});
  c.push_back({9, "pigeonhole", 0, [](Check& k, std::ostringstream& d) {
                 std::mt19937_64 rng(9);
                 for (int t = 0; t < 1000; ++t) {
                   std::uint64_t p = 1 + rng() % 100;
                   std::vector<BigInt> v;
                   for (std::uint64_t i = 0; i <= p; ++i) v.push_back(rng() % p);
                   auto r = pigeonhole_duplicate(v, p);
                   k.expect(r && r->first < r->second && v[r->first] == v[r->second], "duplicate found");
                 }
                 d << "1000 trials";
               }});
  c.push_back({10, "proof-system", 60.0, [](Check& k, std::ostringstream& d) {
                 Theory q = theory_q();
                 k.expect(check_proof(load_proof("not_neq_zero.proof"), q, parse_formula("¬(0≠0)")).ok, "¬(0≠0) fixture");
                 for (unsigned i = 0; i <= 3; ++i) {
                   TermPtr n = numeral(Nat(i));
                   k.expect(check_proof(load_proof("not_below_zero_" + std::to_string(i) + ".proof"), q,
                                        fml::negation(fml::lt(n, term::zero())))
                                .ok,
                            "not_below_zero " + std::to_string(i));
                   FormulaPtr sb = fml::forall(0, fml::implies(fml::lt(term::var(0), term::add(term::one(), n)),
                                                               fml::le(term::var(0), n)));
                   k.expect(check_proof(load_proof("successor_bound_" + std::to_string(i) + ".proof"), q, sb).ok,
                            "successor_bound " + std::to_string(i));
                 }
                 SearchOptions small;
                 small.node_budget = 50;
                 auto found = bounded_proof_search(parse_formula("¬(0≠0)"), q, small);
                 k.expect(found.proof && check_proof(*found.proof, q, parse_formula("¬(0≠0)")).ok, "search re-finds ¬(0≠0)");
                 SearchOptions big;
                 big.node_budget = 100000;
                 auto bad = bounded_proof_search(parse_formula("0≠0"), q, big);
                 k.expect(!bad.proof, "no proof of 0≠0");
                 d << "¬(0≠0) found in " << found.nodes << " nodes; 0≠0 NotFound after " << bad.nodes;
               }});
  c.push_back({11, "rosser", 0, [](Check& k, std::ostringstream& d) {
                 auto r = rosser_sentence(theory_q());
                 TermPtr q = quote(r.rho);
                 FormulaPtr display = fml::iff(
                     fml::forall(1, fml::implies(fml::pred(OraclePred::Prf, {term::var(1), q}),
                                                 fml::exists_below(2, term::var(1),
                                                                   fml::pred(OraclePred::Prf, {term::var(2),
                                                                                               term::fun(OracleFn::Neg, {q})})))),
                     r.rho);
                 k.expect(r.rho->closed(), "ρ is a sentence");
                 k.expect(equal(r.biconditional, display), "biconditional matches display");
                 k.expect(!r.rho_search.proof, "ρ NotFound");
                 k.expect(!r.neg_search.proof, "¬ρ NotFound");
                 d << "nodes " << r.rho_search.nodes << " / " << r.neg_search.nodes << ", len(ρ)="
                   << r.rho->length.summary();
               }});
  c.push_back({12, "remark-demo", 0, [](Check& k, std::ostringstream& d) {
                 auto r = remark_demo(theory_q());
                 k.expect(r.not_delta_checks, "fixture proof of ¬δ");
                 k.expect(r.reduces_to_pr, "¬Pr(⌜δ⌝)↔δ ≡ Pr(⌜δ⌝)");
                 d << "Pr(⌜δ⌝) verdict " << to_string(r.pr_of_delta) << ", combined proof "
                   << (r.combined_checks ? "checks" : "fails");
               }});
  c.push_back({13, "domination", 60.0, [](Check& k, std::ostringstream& d) {
                 auto s = std::make_shared<const MicroScheme>(micro_catalogue());
                 Budget wide;
                 wide.witness_bound = 4096;
                 std::map<std::uint64_t, std::optional<std::uint64_t>> F;
                 for (std::uint64_t x = 0; x <= 50; ++x) F[x] = F_uniform(*s, x, wide);
                 for (std::size_t a = 0; a < s->size(); ++a)
                   k.expect(dominates_check(F, defined_function(*s, a, 0, 50, wide), 0, 50),
                            "F dominates catalogue " + std::to_string(a));
                 auto p = build_psi(parse_formula("Tr(x)"));
                 auto env = domination_env(s, wide);
                 for (std::uint64_t x = 0; x <= 5; ++x) {
                   auto y = F_diagonal(*s, x, wide);
                   k.expect(y.has_value(), "F_diagonal resolves");
                   if (!y) continue;
                   FormulaPtr g = substitute(substitute(p.graph, 0, numeral(Nat(x))), 1, numeral(Nat(*y)));
                   k.expect(eval(g, {}, *env) == TV::True, "ψ-graph at x=" + std::to_string(x));
                 }
                 d << "catalogue size " << s->size() << ", F(50)=" << *F[50];
               }});
  c.push_back({14, "substitution-lemma", 0, [](Check& k, std::ostringstream& d) {
                 testgen::Gen g(14);
                 Budget b;
                 b.witness_bound = 6;
                 OracleEnv env = base_env();
                 for (int i = 0; i < 500; ++i) {
                   FormulaPtr f = g.formula(4);
                   std::uint64_t m = g.pick(6);
                   VarIndex v = static_cast<VarIndex>(g.pick(4));
                   Valuation rho;
                   for (VarIndex w = 0; w < 4; ++w) rho.set(w, Nat(g.pick(4)));
                   Valuation rho_m = rho;
                   rho_m.set(v, Nat(m));
                   k.expect(eval(f, rho_m, b, env) == eval(substitute(f, v, numeral(Nat(m))), rho, b, env),
                            "verdicts agree at " + render(f));
                 }
                 d << "500 cases";
               }});
  return c;
}

}  // namespace acceptance_detail

inline std::string format_result(const CriterionResult& r) {
  std::ostringstream o;
  o << (r.pass ? "PASS" : "FAIL") << "  " << r.id << " " << r.name << "  " << std::fixed;
  o.precision(2);
  o << r.seconds << "s";
  if (r.limit > 0) o << " (limit " << r.limit << "s)";
  if (!r.detail.empty()) o << "  " << r.detail;
  return o.str();
}

// Runs every criterion; lines are written to `out` as they finish.
inline std::vector<CriterionResult> run_acceptance(std::ostream* out = nullptr, const std::vector<int>& only = {}) {
  std::vector<CriterionResult> results;
  for (auto& c : acceptance_detail::criteria()) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    CriterionResult r;
    r.id = c.id;
    r.name = c.name;
    r.limit = c.limit;
    acceptance_detail::Check k;
    std::ostringstream detail;
    auto t0 = std::chrono::steady_clock::now();
    try {
      c.body(k, detail);
    } catch (const std::exception& e) {
      k.expect(false, std::string("exception: ") + e.what());
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.limit > 0 && r.seconds >= c.limit) k.expect(false, "over time limit");
    r.pass = k.ok;
    r.detail = k.ok ? detail.str() : k.why.str();
    if (out) *out << format_result(r) << std::endl;
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace selfref
