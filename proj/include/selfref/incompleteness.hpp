#pragma once
// Provability predicates, Gödel and Rosser sentences, truth-biconditional streams,
// and consistency evidence by soundness.

#include "selfref/diagonal.hpp"
#include "selfref/enumerate.hpp"
#include "selfref/proof.hpp"

namespace selfref {

class SearchExhausted : public Error {
 public:
  using Error::Error;
};

// Pr(x) := ∃x'[prf(x',x)]
inline FormulaPtr pr_formula() {
  return fml::exists(1, fml::pred(OraclePred::Prf, {term::var(1), term::var(0)}));
}

// RPr(x) := ∃x'[prf(x',x) ∧ ∀x''<x' ¬prf(x'',neg(x))]
inline FormulaPtr rosser_pr_formula() {
  TermPtr negx = term::fun(OracleFn::Neg, {term::var(0)});
  return fml::exists(1, fml::conj(fml::pred(OraclePred::Prf, {term::var(1), term::var(0)}),
                                  fml::forall_below(2, term::var(1),
                                                    fml::negation(fml::pred(OraclePred::Prf, {term::var(2), negx})))));
}

// ∀x'[prf(x',x) → ∃x''<x' prf(x'',neg(x))]
inline FormulaPtr rosser_psi() {
  TermPtr negx = term::fun(OracleFn::Neg, {term::var(0)});
  return fml::forall(1, fml::implies(fml::pred(OraclePred::Prf, {term::var(1), term::var(0)}),
                                     fml::exists_below(2, term::var(1), fml::pred(OraclePred::Prf, {term::var(2), negx}))));
}

inline OracleEnv prf_env(const Theory& t) {
  OracleEnv env = base_env();
  auto th = std::make_shared<Theory>(t);
  env.prf = [th](const Nat& p, const Nat& s) { return tv_of(prf_holds(p, s, *th)); };
  return env;
}

// Decides ∃v[prf(v,t)] as True when a small search finds a proof of the sentence
// coded by t; never decides False.
inline ExistsDecider proof_search_decider(const Theory& t, std::uint64_t node_budget = 300) {
  auto th = std::make_shared<Theory>(t);
  return [th, node_budget](const Formula& q, Evaluator& ev, Valuation& val) -> std::optional<TV> {
    const Formula& body = *q.sub[0];
    if (body.kind != FormulaKind::Pred || body.pred != OraclePred::Prf) return std::nullopt;
    if (body.terms[0]->kind != TermKind::Var || body.terms[0]->var != q.var || occurs_in(*body.terms[1], q.var))
      return std::nullopt;
    Nat s = ev.term(*body.terms[1], val);
    FormulaPtr goal;
    try {
      goal = decode_formula(s);
    } catch (const Error&) {
      return std::nullopt;
    }
    if (!goal->closed()) return std::nullopt;
    SearchOptions o;
    o.node_budget = node_budget;
    auto r = bounded_proof_search(goal, *th, o);
    if (r.proof && prf_holds(proof_code(*r.proof), s, *th)) return TV::True;
    return std::nullopt;
  };
}

// Evaluates f under both truth values of a closed sentence, given as one or more
// α-variants. Agreement on a definite verdict is returned; otherwise Unknown.
inline TV eval_by_cases(const FormulaPtr& f, const std::vector<FormulaPtr>& variants, const Budget& budget,
                        const OracleEnv& env, const WitnessMap* witnesses = nullptr) {
  TV out[2];
  for (int c = 0; c < 2; ++c) {
    Evaluator ev(env, budget, witnesses);
    for (const auto& s : variants) ev.assumptions.emplace_back(s, c ? TV::True : TV::False);
    Valuation v;
    out[c] = ev.run(f, v);
  }
  return out[0] == out[1] ? out[0] : TV::Unknown;
}

// Ψ(⌜θ⌝) in the two spellings that occur in a certificate.
inline std::vector<FormulaPtr> psi_at_theta(const FixedPointCertificate& c) {
  return {instantiate(c.psi, quote(c.theta)), substitute(c.psi_in_delta, DiagVars::y, quote(c.theta))};
}

// Ψ(⌜θ⌝)↔θ decided by the case split on Ψ(⌜θ⌝).
inline TV fixed_point_by_cases(const FixedPointCertificate& c, const Budget& budget, const OracleEnv& env) {
  WitnessMap w = prefixed(c.witnesses, Path{1});
  return eval_by_cases(fml::iff(instantiate(c.psi, quote(c.theta)), c.theta), psi_at_theta(c), budget, env, &w);
}

struct GoedelReport {
  FixedPointCertificate certificate;
  TV pr_of_gamma = TV::Unknown;
  TV biconditional_by_cases = TV::Unknown;
  SearchResult search;
};

inline FixedPointCertificate goedel_sentence(const Theory& t, const Budget& budget = {}) {
  return diagonal_sentence(fml::negation(pr_formula()), budget, prf_env(t));
}

inline GoedelReport goedel_report(const Theory& t, std::uint64_t node_budget = 10000, const Budget& budget = {}) {
  GoedelReport r;
  OracleEnv env = prf_env(t);
  r.certificate = goedel_sentence(t, budget);
  r.pr_of_gamma = eval(instantiate(pr_formula(), quote(r.certificate.theta)), budget, env);
  r.biconditional_by_cases = fixed_point_by_cases(r.certificate, budget, env);
  SearchOptions o;
  o.node_budget = node_budget;
  r.search = bounded_proof_search(r.certificate.theta, t, o);
  return r;
}

struct RosserReport {
  FixedPointCertificate certificate;
  FormulaPtr rho, biconditional;
  Theory extended;  // T plus the biconditional
  TV biconditional_by_cases = TV::Unknown;
  SearchResult rho_search, neg_search;
};

inline RosserReport rosser_sentence(const Theory& t, std::uint64_t node_budget = 10000, const Budget& budget = {}) {
  RosserReport r;
  OracleEnv env = prf_env(t);
  r.certificate = diagonal_sentence(rosser_psi(), budget, env);
  r.rho = r.certificate.theta;
  r.biconditional = fml::iff(instantiate(rosser_psi(), quote(r.rho)), r.rho);
  r.extended = t.with("ROSSER", r.biconditional);
  r.biconditional_by_cases = fixed_point_by_cases(r.certificate, budget, env);
  SearchOptions o;
  o.node_budget = node_budget;
  r.rho_search = bounded_proof_search(r.rho, t, o);
  r.neg_search = bounded_proof_search(fml::negation(r.rho), t, o);
  return r;
}

// Ψ(⌜β⌝)↔β for the sentences β in length order, then by code.
class TbStream {
 public:
  TbStream(FormulaPtr psi, std::size_t max_len) : psi_(std::move(psi)), max_len_(max_len) {
    if (psi_->free.size() != 1) throw NotOneFree("Ψ must have exactly one free variable");
  }

  struct Item {
    FormulaPtr beta, biconditional;
  };

  std::optional<Item> next() {
    while (len_ <= max_len_) {
      const auto& bucket = enum_.formulas(len_);
      while (pos_ < bucket.size()) {
        const FormulaPtr& b = bucket[pos_++];
        if (b->closed()) return Item{b, fml::iff(instantiate(psi_, quote(b)), b)};
      }
      ++len_;
      pos_ = 0;
    }
    return std::nullopt;
  }

 private:
  FormulaPtr psi_;
  std::size_t max_len_;
  Enumerator enum_;
  std::size_t len_ = 1, pos_ = 0;
};

enum class Consistency { ConsistentBySoundness, RefutedByProof, Unknown };

inline const char* to_string(Consistency c) {
  switch (c) {
    case Consistency::ConsistentBySoundness: return "ConsistentBySoundness";
    case Consistency::RefutedByProof: return "RefutedByProof";
    case Consistency::Unknown: return "Unknown";
  }
  return "?";
}

struct ConsistencyReport {
  Consistency status = Consistency::Unknown;
  TV verdict = TV::Unknown;
  std::optional<Proof> refutation;
  bool alarm = false;  // σ certified true and ¬σ proved: the theory would be unsound
  std::uint64_t search_nodes = 0;
};

// A theory sound for the oracle structure is consistent with every sentence true
// there. `verdict` is the certified truth value of σ when already known.
inline ConsistencyReport consistency_witness(const FormulaPtr& sigma, const Theory& t, const Budget& budget,
                                             const OracleEnv& env, std::optional<TV> verdict = std::nullopt,
                                             std::uint64_t search_budget = 2000) {
  if (!sigma->closed()) throw Error("consistency_witness needs a sentence");
  ConsistencyReport r;
  r.verdict = verdict ? *verdict : eval(sigma, budget, env);
  SearchOptions o;
  o.node_budget = search_budget;
  auto s = bounded_proof_search(fml::negation(sigma), t, o);
  r.search_nodes = s.nodes;
  r.refutation = s.proof;
  r.alarm = r.verdict == TV::True && s.proof.has_value();
  if (r.verdict == TV::True)
    r.status = Consistency::ConsistentBySoundness;
  else if (s.proof)
    r.status = Consistency::RefutedByProof;
  return r;
}

struct WeakDiagonalReport {
  FormulaPtr psi, theta;
  std::uint64_t sentences_tried = 0;
  TV neg_biconditional = TV::Unknown;  // ¬Ψ(⌜θ⌝)↔θ, found False
  bool flip_is_tautology = false;      // ¬(¬p↔q) ≡ (p↔q)
  TV biconditional = TV::Unknown;      // Ψ(⌜θ⌝)↔θ
  ConsistencyReport consistency;
};

// Looks for a sentence where the ¬Ψ-biconditional fails; by the flip step the
// Ψ-biconditional then holds there and is consistent with a sound theory.
inline WeakDiagonalReport weak_dl_equivalence_demo(const FormulaPtr& psi, const Theory& t, const Budget& budget = {},
                                                   std::size_t max_len = 7, std::uint64_t max_sentences = 2000) {
  OracleEnv env = prf_env(t);
  env.deciders.push_back(proof_search_decider(t));
  WeakDiagonalReport r;
  r.psi = psi;
  r.flip_is_tautology = taut_equiv(*prop::neg(prop::iff(prop::neg(prop::p(0)), prop::p(1))), *prop::iff(prop::p(0), prop::p(1)));
  FormulaPtr neg_psi = fml::negation(psi);
  TbStream stream(neg_psi, max_len);
  while (auto item = stream.next()) {
    if (++r.sentences_tried > max_sentences) break;
    TV v = eval(item->biconditional, budget, env);
    if (v != TV::False) continue;
    r.theta = item->beta;
    r.neg_biconditional = v;
    FormulaPtr bic = fml::iff(instantiate(psi, quote(r.theta)), r.theta);
    r.biconditional = eval(bic, budget, env);
    r.consistency = consistency_witness(bic, t, budget, env, r.biconditional, 500);
    return r;
  }
  throw SearchExhausted("no sentence up to length " + std::to_string(max_len) + " breaks the ¬Ψ biconditional");
}

struct RemarkReport {
  FormulaPtr delta, not_delta;
  Proof not_delta_proof;
  bool not_delta_checks = false;
  FormulaPtr sentence;          // ¬Pr(⌜δ⌝)↔δ
  bool reduces_to_pr = false;   // taut-equivalent to Pr(⌜δ⌝) once δ is false
  TV pr_of_delta = TV::Unknown;
  // Adding ¬Pr(⌜θ⌝)↔θ for a provable θ, with the true fact prf(p̄,⌜θ⌝), proves ¬θ.
  FormulaPtr theta;
  Theory extended;
  Proof combined;
  bool combined_checks = false;
  bool fact_true = false;
  std::string combined_diagnostic;
};

inline RemarkReport remark_demo(const Theory& t, const Budget& budget = {}) {
  RemarkReport r;
  OracleEnv env = prf_env(t);
  r.delta = parse_formula("0≠0");
  r.not_delta = fml::negation(r.delta);
  r.not_delta_proof = load_proof("not_neq_zero.proof");
  r.not_delta_checks = static_cast<bool>(check_proof(r.not_delta_proof, t, r.not_delta));

  FormulaPtr pr_delta = instantiate(pr_formula(), quote(r.delta));
  r.sentence = fml::iff(fml::negation(pr_delta), r.delta);
  Skeleton sk = skeleton(r.sentence);
  // atoms: 0 = Pr(⌜δ⌝), 1 = (0=0); δ false means atom 1 true
  r.reduces_to_pr = sk.atoms.size() == 2 && taut_equiv(*prop_assign(sk.form, 1, true), *prop::p(0));
  r.pr_of_delta = eval(pr_delta, budget, env);

  r.theta = r.not_delta;
  const Proof& p = r.not_delta_proof;
  Nat pcode = proof_code(p);
  TermPtr pbar = numeral(pcode);
  FormulaPtr fact = fml::pred(OraclePred::Prf, {pbar, quote(r.theta)});
  r.fact_true = eval(fact, budget, env) == TV::True;
  FormulaPtr pr_theta = instantiate(pr_formula(), quote(r.theta));
  FormulaPtr np = fml::negation(pr_theta);
  FormulaPtr bic = fml::iff(np, r.theta);
  r.extended = t.with("FACT", fact).with("REMARK", bic);

  Proof c = p;
  auto step = [&](FormulaPtr f, Justification j) {
    c.steps.push_back({std::move(f), std::move(j)});
    return c.steps.size();
  };
  auto axiom = [](std::string n) {
    Justification j;
    j.axiom = std::move(n);
    return j;
  };
  auto schema = [](Schema s, SchemaArgs a) {
    Justification j;
    j.kind = Justification::Kind::Schema;
    j.schema = s;
    j.args = std::move(a);
    return j;
  };
  auto mp = [](std::size_t i, std::size_t k) {
    Justification j;
    j.kind = Justification::Kind::MP;
    j.i = i;
    j.j = k;
    return j;
  };
  using namespace fml;
  FormulaPtr th = r.theta, nnth = negation(negation(th));
  FormulaPtr prf_atom = pred(OraclePred::Prf, {term::var(1), quote(th)});
  std::size_t s_fact = step(fact, axiom("FACT"));
  std::size_t s_intro = step(implies(fact, pr_theta), schema(Schema::EX_INTRO, {{prf_atom}, {1}, {pbar}}));
  std::size_t s_pr = step(pr_theta, mp(s_fact, s_intro));
  std::size_t s_bic = step(bic, axiom("REMARK"));
  std::size_t s_iff2 = step(implies(bic, implies(th, np)), schema(Schema::IFF2, {{np, th}, {}, {}}));
  std::size_t s_thnp = step(implies(th, np), mp(s_bic, s_iff2));
  std::size_t s_dn1 = step(implies(nnth, th), schema(Schema::DN1, {{th}, {}, {}}));
  std::size_t s_a1 = step(implies(implies(th, np), implies(nnth, implies(th, np))), schema(Schema::A1, {{implies(th, np), nnth}, {}, {}}));
  std::size_t s_k = step(implies(nnth, implies(th, np)), mp(s_thnp, s_a1));
  std::size_t s_a2 = step(implies(implies(nnth, implies(th, np)), implies(implies(nnth, th), implies(nnth, np))),
                          schema(Schema::A2, {{nnth, th, np}, {}, {}}));
  std::size_t s_m = step(implies(implies(nnth, th), implies(nnth, np)), mp(s_k, s_a2));
  std::size_t s_nn = step(implies(nnth, np), mp(s_dn1, s_m));
  std::size_t s_a3 = step(implies(implies(nnth, np), implies(pr_theta, negation(th))),
                          schema(Schema::A3, {{pr_theta, negation(th)}, {}, {}}));
  std::size_t s_c = step(implies(pr_theta, negation(th)), mp(s_nn, s_a3));
  step(negation(th), mp(s_pr, s_c));
  r.combined = std::move(c);
  auto chk = check_proof(r.combined, r.extended, negation(th));
  r.combined_checks = chk.ok;
  r.combined_diagnostic = chk.diagnostic;
  return r;
}

}  // namespace selfref
