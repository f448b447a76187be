// selfref: command-line front end. Every command builds a key-sorted JSON report.

#include "selfref/acceptance.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

using namespace selfref;
using json = nlohmann::json;

namespace {

struct Settings {
  Budget budget;
  std::uint64_t node_budget = 10000;
  std::size_t micro_maxlen = 12;
  std::string json_path;
  bool json_requested = false;
  bool hex = false;
};

// SELFREF_BUDGET_PROFILE = quick | default | wide
void apply_profile(Settings& s) {
  const char* p = std::getenv("SELFREF_BUDGET_PROFILE");
  std::string name = p ? p : "default";
  if (name == "quick") {
    s.budget.witness_bound = 16;
    s.node_budget = 1000;
    s.micro_maxlen = 8;
  } else if (name == "wide") {
    s.budget.witness_bound = 4096;
    s.budget.depth_bound = 3;
    s.node_budget = 100000;
  } else if (name != "default") {
    throw CLI::ValidationError("SELFREF_BUDGET_PROFILE", "unknown profile " + name);
  }
}

std::string hex_of(const BigInt& n) {
  std::ostringstream o;
  o << "0x" << std::hex << n;
  return o.str();
}

json nat_json(const Nat& n) {
  if (!n.is_concrete()) return {{"symbolic", n.summary()}};
  std::string dec = n.concrete().str();
  if (dec.size() > 4000) return {{"digits", dec.size()}, {"summary", n.summary()}, {"hex", hex_of(n.concrete())}};
  return {{"decimal", dec}, {"hex", hex_of(n.concrete())}};
}

std::string code_text(const Nat& n, bool hex) {
  if (!n.is_concrete()) return n.summary();
  return hex ? hex_of(n.concrete()) : n.concrete().str();
}

json formula_json(const FormulaPtr& f) {
  if (!f) return nullptr;
  json fv = json::array();
  for (VarIndex v : f->free) fv.push_back(render(term::var(v)));
  return {{"text", render(f)}, {"length", nat_json(f->length)}, {"free", fv}};
}

json stats_json(const EvalStats& s) {
  return {{"witnesses_used", s.witnesses_used},
          {"linear_solves", s.linear_solves},
          {"stabilized", s.stabilized},
          {"budget_hits", s.budget_hits},
          {"discharges", s.discharges}};
}

json certificate_json(const FixedPointCertificate& c) {
  json w = json::object();
  for (const auto& [p, wit] : c.witnesses) {
    static const char* kinds[] = {"value", "skolem", "discharge", "unique"};
    json e = {{"kind", kinds[static_cast<int>(wit.kind)]}};
    if (wit.kind == Witness::Kind::Value || wit.kind == Witness::Kind::Unique) e["value"] = nat_json(wit.value);
    if (!wit.label.empty()) e["label"] = wit.label;
    w[path_to_string(p)] = e;
  }
  return {{"psi", formula_json(c.psi)},
          {"delta_length", nat_json(c.delta->length)},
          {"theta_length", nat_json(c.theta->length)},
          {"code_of_delta", nat_json(c.code_of_delta)},
          {"code_of_theta", nat_json(c.code_of_theta)},
          {"witnesses", w},
          {"theta_verdict", to_string(c.theta_verdict)},
          {"psi_verdict", to_string(c.psi_verdict)},
          {"biconditional", to_string(c.biconditional)},
          {"stats", stats_json(c.stats)}};
}

json search_json(const SearchResult& r) {
  json j = {{"result", r.proof ? "Found" : "NotFound"}, {"nodes", r.nodes}, {"levels", r.levels}};
  if (r.proof) j["proof"] = proof_text(*r.proof);
  return j;
}

json tv_row(const std::vector<TV>& v) {
  json a = json::array();
  for (TV t : v) a.push_back(to_string(t));
  return a;
}

struct Outcome {
  json outputs;
  json inputs = json::object();
  bool verdict_ok = true;
  std::vector<std::string> summary;
};

using Command = std::function<Outcome(const Settings&)>;

int emit(const std::string& name, const Settings& s, const Command& run) {
  auto t0 = std::chrono::steady_clock::now();
  Outcome o = run(s);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  json report = {{"command", name},
                 {"scheme", kSchemeVersion},
                 {"inputs", o.inputs},
                 {"outputs", o.outputs},
                 {"budgets",
                  {{"witness_bound", s.budget.witness_bound},
                   {"depth_bound", s.budget.depth_bound},
                   {"iteration_cap", s.budget.iteration_cap},
                   {"node_budget", s.node_budget},
                   {"micro_maxlen", s.micro_maxlen}}},
                 {"wall_time_s", secs}};
  if (s.json_requested && s.json_path.empty()) {
    std::cout << report.dump(2) << "\n";
  } else {
    for (const auto& line : o.summary) std::cout << line << "\n";
    if (s.json_requested) {
      std::ofstream out(s.json_path);
      if (!out) throw Error("cannot write " + s.json_path);
      out << report.dump(2) << "\n";
    }
  }
  return o.verdict_ok ? 0 : 1;
}

FormulaPtr one_free(const std::string& text, const char* what) {
  FormulaPtr f = parse_formula(text);
  if (f->free.size() != 1) throw NotOneFree(std::string(what) + " must have exactly one free variable");
  return f;
}

Nat parse_code(const std::string& s) {
  try {
    return Nat(BigInt(s));
  } catch (const std::exception&) {
    throw CLI::ValidationError("code", "not a decimal or 0x-prefixed number: " + s);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"selfref: self-reference experiments over first-order arithmetic"};
  app.require_subcommand(1);
  app.fallthrough();
  Settings s;
  try {
    apply_profile(s);
  } catch (const CLI::Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  app.add_option("--witness-bound", s.budget.witness_bound, "largest witness tried for an unbounded ∃");
  app.add_option("--depth-bound", s.budget.depth_bound, "nesting of unbounded quantifiers searched");
  app.add_option("--node-budget", s.node_budget, "proof search nodes");
  app.add_option("--micro-maxlen", s.micro_maxlen, "length bound of the micro universe");
  auto* json_opt = app.add_option("--json", s.json_path, "write the JSON report to a path, or stdout when no path")
                       ->expected(0, 1);

  std::string text, psi = "Tr(x)", gamma = "x=x", goal, code, upsilon = "Tr(x)", catalogue = "micro_catalogue.txt";
  std::uint64_t x = 0, proof_budget = 0, count = 10;
  std::size_t max_len = 7, n_bound = 16;
  bool all_inputs = false;
  std::vector<int> only;
  std::map<CLI::App*, std::pair<std::string, Command>> commands;
  auto add = [&](const std::string& name, const std::string& help, Command c) {
    CLI::App* sub = app.add_subcommand(name, help);
    commands[sub] = {name, std::move(c)};
    return sub;
  };

  add("parse", "echo the canonical rendering", [&](const Settings& st) {
    Outcome o;
    Expr e = parse_expr(text);
    std::string r = render(e);
    o.inputs = {{"text", text}};
    Nat c = encode(e);
    bool is_formula = std::holds_alternative<FormulaPtr>(e);
    o.outputs = {{"rendering", r}, {"kind", is_formula ? "formula" : "term"}, {"code", nat_json(c)}};
    if (is_formula) o.outputs["formula"] = formula_json(std::get<FormulaPtr>(e));
    o.summary = {r};
    (void)st;
    return o;
  })->add_option("text", text)->required();

  auto* enc = add("encode", "print the code of a term or formula", [&](const Settings& st) {
    Outcome o;
    Nat c = encode(parse_expr(text));
    o.inputs = {{"text", text}};
    o.outputs = {{"code", nat_json(c)}};
    o.summary = {code_text(c, st.hex)};
    return o;
  });
  enc->add_option("text", text)->required();
  enc->add_flag("--hex", s.hex, "print in hexadecimal");

  add("decode", "render the expression with a given code", [&](const Settings&) {
    Outcome o;
    Expr e = decode(parse_code(code));
    o.inputs = {{"code", code}};
    o.outputs = {{"rendering", render(e)}};
    o.summary = {render(e)};
    return o;
  })->add_option("code", code)->required();

  add("diagonalize", "build θ with θ ↔ Ψ(⌜θ⌝) and certify it", [&](const Settings& st) {
    Outcome o;
    auto c = diagonal_sentence(one_free(psi, "Ψ"), st.budget);
    o.inputs = {{"psi", psi}};
    o.outputs = {{"theta", render(c.theta)}, {"certificate", certificate_json(c)}};
    o.verdict_ok = c.biconditional == TV::True;
    o.summary = {"θ = " + render(c.theta), "code(θ) = " + code_text(c.code_of_theta, true),
                 std::string("θ: ") + to_string(c.theta_verdict) + "  Ψ(⌜θ⌝): " + to_string(c.psi_verdict) +
                     "  biconditional: " + to_string(c.biconditional)};
    return o;
  })->add_option("--psi", psi, "Ψ with one free variable")->required();

  add("refute-truth", "diagonalize ¬Γ and show Γ is not a truth definition", [&](const Settings& st) {
    Outcome o;
    auto r = refute_truth_definition(one_free(gamma, "Γ"), st.budget);
    o.inputs = {{"gamma", gamma}};
    o.outputs = {{"lambda", render(r.lambda)},
                 {"lambda_verdict", to_string(r.lambda_verdict)},
                 {"gamma_at_lambda", to_string(r.gamma_at_lambda)},
                 {"biconditional", to_string(r.biconditional)},
                 {"certificate", certificate_json(r.certificate)}};
    o.verdict_ok = r.biconditional == TV::False;
    o.summary = {std::string("λ: ") + to_string(r.lambda_verdict) + "  Γ(⌜λ⌝): " + to_string(r.gamma_at_lambda) +
                 "  Γ(⌜λ⌝)↔λ: " + to_string(r.biconditional)};
    return o;
  })->add_option("--gamma", gamma, "candidate truth definition Γ(x)");

  auto* berry = add("berry", "Berry sentence lengths and the micro-universe contradiction", [&](const Settings& st) {
    Outcome o;
    FormulaPtr u = one_free(upsilon, "Υ");
    auto bundle = build_bundle(u);
    auto audit = length_audit(bundle);
    auto env = truth_env();
    auto table = build_micro_universe(u, st.micro_maxlen, n_bound, st.budget, *env);
    auto r = berry_contradiction_report(u, table, st.budget);
    json viol = json::array();
    for (auto [w, n] : r.uniqueness_violations) viol.push_back({w, n});
    o.inputs = {{"upsilon", upsilon}, {"n_bound", n_bound}};
    o.outputs = {{"ell", nat_json(bundle.ell)},
                 {"b_formula", formula_json(bundle.b_formula)},
                 {"b_length", nat_json(audit.b_length)},
                 {"six_ell", nat_json(audit.six_ell)},
                 {"below_six_ell", audit.below_six_ell},
                 {"micro_formulas", table.formulas.size()},
                 {"berry_number", r.berry_number_found ? json(r.berry_number) : json(nullptr)},
                 {"uniqueness", r.uniqueness},
                 {"uniqueness_violations", viol},
                 {"b_values", tv_row(r.b_values)},
                 {"b_at_berry", to_string(r.b_at_berry)},
                 {"defines_berry", to_string(r.defines_berry)},
                 {"b_at_berry_closed", to_string(r.b_at_berry_closed)},
                 {"contradiction", r.contradiction}};
    o.verdict_ok = r.uniqueness && audit.below_six_ell;
    o.summary = {"ℓ = " + bundle.ell.to_string() + ", len(B) = " + audit.b_length.to_string(),
                 "𝔟 = " + (r.berry_number_found ? std::to_string(r.berry_number) : std::string("?")) +
                     " over " + std::to_string(table.formulas.size()) + " formulas",
                 std::string("contradiction: ") + (r.contradiction ? "yes" : "no")};
    return o;
  });
  berry->add_option("--upsilon", upsilon, "Υ(x)");
  berry->add_option("--n-bound", n_bound, "largest number tabulated");

  auto* tarski = add("tarski-experiment", "ladder, pigeonhole clash and a failing T-biconditional", [&](const Settings& st) {
    Outcome o;
    FormulaPtr u = one_free(upsilon, "Υ");
    auto env = truth_env();
    auto table = build_micro_universe(u, st.micro_maxlen, n_bound, st.budget, *env);
    auto r = syntactic_tarski_experiment(table, st.budget);
    json chosen = json::array();
    for (const auto& c : r.chosen) chosen.push_back(c.str());
    json trace = json::array();
    for (const auto& f : r.clash_trace) trace.push_back(render(f));
    o.inputs = {{"upsilon", upsilon}, {"n_bound", n_bound}};
    o.outputs = {{"ladder_top", r.ladder_top},
                 {"def_values", tv_row(r.def_values)},
                 {"ladder_break", r.ladder_break ? json(*r.ladder_break) : json(nullptr)},
                 {"code_bound", nat_json(r.code_bound)},
                 {"index_bound", r.index_bound},
                 {"chosen", chosen},
                 {"duplicate", r.duplicate ? json({r.duplicate->first, r.duplicate->second}) : json(nullptr)},
                 {"clash", r.clash},
                 {"clash_formula", r.clash_formula ? json(render(r.clash_formula)) : json(nullptr)},
                 {"clash_trace", trace},
                 {"tb_failure", r.tb_failure ? json(render(r.tb_failure)) : json(nullptr)},
                 {"tb_failure_value", to_string(r.tb_failure_value)}};
    o.summary = {"ladder " + (r.ladder_break ? "breaks at " + std::to_string(*r.ladder_break)
                                             : "holds up to " + std::to_string(r.ladder_top)),
                 std::string("clash: ") + (r.clash ? "yes" : "no"),
                 "T-biconditional failure: " + (r.tb_failure ? render(r.tb_failure) : std::string("none"))};
    return o;
  });
  tarski->add_option("--upsilon", upsilon, "Υ(x)");
  tarski->add_option("--n-bound", n_bound, "largest number tabulated");

  auto* prove = add("prove", "bounded proof search in Q", [&](const Settings& st) {
    Outcome o;
    SearchOptions opt;
    opt.node_budget = proof_budget ? proof_budget : st.node_budget;
    FormulaPtr g = parse_formula(goal);
    auto r = bounded_proof_search(g, theory_q(), opt);
    o.inputs = {{"goal", render(g)}, {"theory", theory_q().name}};
    o.outputs = search_json(r);
    if (r.proof) {
      auto chk = check_proof(*r.proof, theory_q(), g);
      o.outputs["checks"] = chk.ok;
      o.verdict_ok = chk.ok;
    }
    o.summary = {std::string(r.proof ? "Found" : "NotFound") + " after " + std::to_string(r.nodes) + " nodes"};
    if (r.proof) o.summary.push_back(proof_text(*r.proof));
    return o;
  });
  prove->add_option("--goal", goal)->required();
  prove->add_option("--budget", proof_budget, "node budget (overrides --node-budget)");

  add("goedel", "the Gödel sentence of Q and a search for its proof", [&](const Settings& st) {
    Outcome o;
    auto r = goedel_report(theory_q(), st.node_budget, st.budget);
    o.inputs = {{"theory", theory_q().name}};
    o.outputs = {{"gamma", render(r.certificate.theta)},
                 {"certificate", certificate_json(r.certificate)},
                 {"pr_of_gamma", to_string(r.pr_of_gamma)},
                 {"biconditional_by_cases", to_string(r.biconditional_by_cases)},
                 {"search", search_json(r.search)}};
    o.verdict_ok = r.biconditional_by_cases != TV::False;
    o.summary = {"len(γ) = " + r.certificate.theta->length.summary(),
                 std::string("Pr(⌜γ⌝): ") + to_string(r.pr_of_gamma) +
                     "  biconditional by cases: " + to_string(r.biconditional_by_cases),
                 std::string("proof of γ: ") + (r.search.proof ? "Found" : "NotFound") + " after " +
                     std::to_string(r.search.nodes) + " nodes"};
    return o;
  });

  add("rosser", "the Rosser sentence of Q and searches for ρ and ¬ρ", [&](const Settings& st) {
    Outcome o;
    auto r = rosser_sentence(theory_q(), st.node_budget, st.budget);
    o.inputs = {{"theory", theory_q().name}};
    o.outputs = {{"rho", formula_json(r.rho)},
                 {"biconditional", render(r.biconditional)},
                 {"certificate", certificate_json(r.certificate)},
                 {"biconditional_by_cases", to_string(r.biconditional_by_cases)},
                 {"rho_search", search_json(r.rho_search)},
                 {"neg_search", search_json(r.neg_search)}};
    o.verdict_ok = r.biconditional_by_cases != TV::False;
    o.summary = {"len(ρ) = " + r.rho->length.summary(),
                 std::string("ρ: ") + (r.rho_search.proof ? "Found" : "NotFound") + "  ¬ρ: " +
                     (r.neg_search.proof ? "Found" : "NotFound") + " (" + std::to_string(st.node_budget) +
                     " nodes each)"};
    return o;
  });

  add("remark-demo", "a fixed point of ¬Pr built from a refutable δ", [&](const Settings& st) {
    Outcome o;
    auto r = remark_demo(theory_q(), st.budget);
    o.outputs = {{"delta", render(r.delta)},
                 {"not_delta_proof", proof_text(r.not_delta_proof)},
                 {"not_delta_checks", r.not_delta_checks},
                 {"sentence", render(r.sentence)},
                 {"reduces_to_pr", r.reduces_to_pr},
                 {"pr_of_delta", to_string(r.pr_of_delta)},
                 {"theta", render(r.theta)},
                 {"combined_proof", proof_text(r.combined)},
                 {"combined_checks", r.combined_checks},
                 {"combined_diagnostic", r.combined_diagnostic},
                 {"fact_true", r.fact_true}};
    o.verdict_ok = r.not_delta_checks && r.reduces_to_pr && r.combined_checks;
    o.summary = {"δ = " + render(r.delta), std::string("¬δ proof checks: ") + (r.not_delta_checks ? "yes" : "no"),
                 std::string("reduces to Pr(⌜δ⌝): ") + (r.reduces_to_pr ? "yes" : "no"),
                 std::string("combined proof checks: ") + (r.combined_checks ? "yes" : "no")};
    return o;
  });

  auto* dom = add("dominate", "the dominating function F over the catalogue", [&](const Settings& st) {
    Outcome o;
    auto scheme = micro_catalogue(catalogue);
    auto F = all_inputs ? F_uniform(scheme, x, st.budget) : F_diagonal(scheme, x, st.budget);
    json cat = json::array();
    for (std::size_t a = 0; a < scheme.size(); ++a) cat.push_back(render(scheme.at(a)));
    o.inputs = {{"x", x}, {"variant", all_inputs ? "all-inputs" : "diagonal"}, {"catalogue", cat}};
    o.outputs = {{"F", F ? json(*F) : json(nullptr)}};
    o.summary = {"F(" + std::to_string(x) + ") = " + (F ? std::to_string(*F) : std::string("Unknown"))};
    return o;
  });
  dom->add_option("--x", x)->required();
  dom->add_flag("--all-inputs", all_inputs, "bound over every input u ≤ x");
  dom->add_option("--catalogue", catalogue, "catalogue fixture name");

  auto* tb = add("tb", "stream T-biconditionals Ψ(⌜β⌝)↔β for closed β", [&](const Settings& st) {
    Outcome o;
    TbStream stream(one_free(psi, "Ψ"), max_len);
    auto env = truth_env();
    json items = json::array();
    std::size_t false_count = 0;
    for (std::uint64_t i = 0; i < count; ++i) {
      auto it = stream.next();
      if (!it) break;
      TV v = eval(it->biconditional, st.budget, *env);
      false_count += v == TV::False;
      items.push_back({{"beta", render(it->beta)}, {"verdict", to_string(v)}});
      o.summary.push_back(render(it->beta) + "  " + to_string(v));
    }
    o.inputs = {{"psi", psi}, {"max_len", max_len}, {"count", count}};
    o.outputs = {{"items", items}, {"false_count", false_count}};
    return o;
  });
  tb->add_option("--psi", psi, "Ψ(x)");
  tb->add_option("--max-len", max_len, "sentences shorter than this");
  tb->add_option("--count", count, "number of sentences");

  add("selftest", "run the acceptance suite", [&](const Settings&) {
    Outcome o;
    auto results = run_acceptance(nullptr, only);
    json rows = json::array();
    for (const auto& r : results) {
      rows.push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"seconds", r.seconds}, {"detail", r.detail}});
      o.verdict_ok = o.verdict_ok && r.pass;
      o.summary.push_back(format_result(r));
    }
    o.outputs = {{"criteria", rows}};
    return o;
  })->add_option("ids", only, "criteria to run (default all)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return 2;
  }
  s.json_requested = json_opt->count() > 0;

  for (auto& [sub, cmd] : commands) {
    if (!sub->parsed()) continue;
    try {
      return emit(cmd.first, s, cmd.second);
    } catch (const ParseError& e) {
      std::cerr << "parse error: " << e.what() << "\n";
      return 2;
    } catch (const NotOneFree& e) {
      std::cerr << e.what() << "\n";
      return 2;
    } catch (const NotACode& e) {
      std::cerr << e.what() << "\n";
      return 2;
    } catch (const CLI::ValidationError& e) {
      std::cerr << e.what() << "\n";
      return 2;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 1;
    }
  }
  return 2;
}
