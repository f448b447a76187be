#pragma once
// Hilbert calculus over a finitely axiomatized theory: proof objects, their text
// form, a checker, and a bounded forward search.

#include "selfref/coding.hpp"

#include <fstream>
#include <sstream>
#include <unordered_map>

namespace selfref {

enum class Schema {
  A1, A2, A3, DN1, DN2, AND1, AND2, AND3, OR1, OR2, OR3, IFF1, IFF2, IFF3,
  ALL_INST, ALL_DIST, EX_INTRO, EX_ELIM, EQ_REFL, EQ_SUBST
};

struct SchemaInfo {
  Schema schema;
  const char* name;
  const char* signature;  // F formula, V variable, T term
};

inline const std::vector<SchemaInfo>& schema_table() {
  static const std::vector<SchemaInfo> t = {
      {Schema::A1, "A1", "FF"},           {Schema::A2, "A2", "FFF"},         {Schema::A3, "A3", "FF"},
      {Schema::DN1, "DN1", "F"},          {Schema::DN2, "DN2", "F"},         {Schema::AND1, "AND1", "FF"},
      {Schema::AND2, "AND2", "FF"},       {Schema::AND3, "AND3", "FF"},      {Schema::OR1, "OR1", "FF"},
      {Schema::OR2, "OR2", "FF"},         {Schema::OR3, "OR3", "FFF"},       {Schema::IFF1, "IFF1", "FF"},
      {Schema::IFF2, "IFF2", "FF"},       {Schema::IFF3, "IFF3", "FF"},      {Schema::ALL_INST, "ALL_INST", "FVT"},
      {Schema::ALL_DIST, "ALL_DIST", "FFV"}, {Schema::EX_INTRO, "EX_INTRO", "FVT"}, {Schema::EX_ELIM, "EX_ELIM", "FFV"},
      {Schema::EQ_REFL, "EQ_REFL", "T"},  {Schema::EQ_SUBST, "EQ_SUBST", "FVTT"}};
  return t;
}

inline const SchemaInfo& schema_info(Schema s) { return schema_table()[static_cast<std::size_t>(s)]; }

inline std::optional<Schema> schema_named(const std::string& n) {
  for (const auto& i : schema_table())
    if (n == i.name) return i.schema;
  return std::nullopt;
}

struct SchemaArgs {
  std::vector<FormulaPtr> f;
  std::vector<VarIndex> v;
  std::vector<TermPtr> t;
};

// The instance, or nullopt when the arguments do not fit or a side condition fails.
inline std::optional<FormulaPtr> schema_instance(Schema s, const SchemaArgs& a) {
  const char* sig = schema_info(s).signature;
  std::size_t nf = 0, nv = 0, nt = 0;
  for (const char* c = sig; *c; ++c) (*c == 'F' ? nf : *c == 'V' ? nv : nt)++;
  if (a.f.size() != nf || a.v.size() != nv || a.t.size() != nt) return std::nullopt;
  using namespace fml;
  auto F = [&](std::size_t i) { return a.f[i]; };
  switch (s) {
    case Schema::A1: return implies(F(0), implies(F(1), F(0)));
    case Schema::A2:
      return implies(implies(F(0), implies(F(1), F(2))), implies(implies(F(0), F(1)), implies(F(0), F(2))));
    case Schema::A3: return implies(implies(negation(F(1)), negation(F(0))), implies(F(0), F(1)));
    case Schema::DN1: return implies(negation(negation(F(0))), F(0));
    case Schema::DN2: return implies(F(0), negation(negation(F(0))));
    case Schema::AND1: return implies(conj(F(0), F(1)), F(0));
    case Schema::AND2: return implies(conj(F(0), F(1)), F(1));
    case Schema::AND3: return implies(F(0), implies(F(1), conj(F(0), F(1))));
    case Schema::OR1: return implies(F(0), disj(F(0), F(1)));
    case Schema::OR2: return implies(F(1), disj(F(0), F(1)));
    case Schema::OR3: return implies(implies(F(0), F(2)), implies(implies(F(1), F(2)), implies(disj(F(0), F(1)), F(2))));
    case Schema::IFF1: return implies(iff(F(0), F(1)), implies(F(0), F(1)));
    case Schema::IFF2: return implies(iff(F(0), F(1)), implies(F(1), F(0)));
    case Schema::IFF3: return implies(implies(F(0), F(1)), implies(implies(F(1), F(0)), iff(F(0), F(1))));
    case Schema::ALL_INST: return implies(forall(a.v[0], F(0)), substitute(F(0), a.v[0], a.t[0]));
    case Schema::ALL_DIST:
      if (occurs_free(*F(0), a.v[0])) return std::nullopt;
      return implies(forall(a.v[0], implies(F(0), F(1))), implies(F(0), forall(a.v[0], F(1))));
    case Schema::EX_INTRO: return implies(substitute(F(0), a.v[0], a.t[0]), exists(a.v[0], F(0)));
    case Schema::EX_ELIM:
      if (occurs_free(*F(1), a.v[0])) return std::nullopt;
      return implies(forall(a.v[0], implies(F(0), F(1))), implies(exists(a.v[0], F(0)), F(1)));
    case Schema::EQ_REFL: return eq(a.t[0], a.t[0]);
    case Schema::EQ_SUBST:
      return implies(eq(a.t[0], a.t[1]), implies(substitute(F(0), a.v[0], a.t[0]), substitute(F(0), a.v[0], a.t[1])));
  }
  return std::nullopt;
}

struct Justification {
  enum class Kind { Axiom, Schema, MP, Gen } kind = Kind::Axiom;
  std::string axiom;
  Schema schema = Schema::A1;
  SchemaArgs args;
  std::size_t i = 0, j = 0;  // 1-based step numbers
  VarIndex var = 0;
};

struct ProofStep {
  FormulaPtr formula;
  Justification just;
};

struct Proof {
  std::vector<ProofStep> steps;
  FormulaPtr conclusion() const { return steps.empty() ? nullptr : steps.back().formula; }
};

class ProofFormatError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------- theories

struct Theory {
  std::string name;
  std::vector<std::pair<std::string, FormulaPtr>> axioms;

  const FormulaPtr* find(const std::string& n) const {
    for (const auto& [k, f] : axioms)
      if (k == n) return &f;
    return nullptr;
  }
  Theory with(const std::string& n, FormulaPtr s) const {
    if (!s->closed()) throw Error("extra axiom " + n + " is not a sentence");
    Theory t = *this;
    t.name = name + "+" + n;
    t.axioms.emplace_back(n, std::move(s));
    return t;
  }
};

inline Theory parse_theory(const std::string& name, std::istream& in) {
  Theory t;
  t.name = name;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto bar = line.find(" | ");
    if (bar == std::string::npos) throw ProofFormatError("theory line without ' | ': " + line);
    FormulaPtr f = parse_formula(line.substr(bar + 3));
    if (!f->closed()) throw ProofFormatError("axiom " + line.substr(0, bar) + " is not a sentence");
    t.axioms.emplace_back(line.substr(0, bar), f);
  }
  return t;
}

inline std::string fixture_path(const std::string& rel) {
#ifdef SELFREF_FIXTURE_DIR
  return std::string(SELFREF_FIXTURE_DIR) + "/" + rel;
#else
  return "fixtures/" + rel;
#endif
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline const Theory& theory_q() {
  static const Theory t = [] {
    std::istringstream in(read_file(fixture_path("theory_q.txt")));
    return parse_theory("Q", in);
  }();
  return t;
}

// ---------------------------------------------------------------- text form

inline std::string var_text(VarIndex v) { return render(term::var(v)); }

inline std::string justification_text(const Justification& j) {
  switch (j.kind) {
    case Justification::Kind::Axiom: return "axiom:" + j.axiom;
    case Justification::Kind::MP: return "mp:" + std::to_string(j.i) + "," + std::to_string(j.j);
    case Justification::Kind::Gen: return "gen:" + std::to_string(j.i) + "," + var_text(j.var);
    case Justification::Kind::Schema: break;
  }
  std::string s = std::string("schema:") + schema_info(j.schema).name + ":";
  std::size_t nf = 0, nv = 0, nt = 0;
  bool first = true;
  for (const char* c = schema_info(j.schema).signature; *c; ++c) {
    if (!first) s += ";";
    first = false;
    if (*c == 'F') s += render(j.args.f[nf++]);
    if (*c == 'V') s += var_text(j.args.v[nv++]);
    if (*c == 'T') s += render(j.args.t[nt++]);
  }
  return s;
}

inline std::string proof_text(const Proof& p) {
  std::string s;
  for (std::size_t k = 0; k < p.steps.size(); ++k)
    s += std::to_string(k + 1) + " | " + render(p.steps[k].formula) + " | " + justification_text(p.steps[k].just) + "\n";
  return s;
}

namespace proof_detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

inline std::size_t to_index(const std::string& s) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) throw ProofFormatError("bad step number '" + s + "'");
  return std::stoull(s);
}

inline VarIndex to_var(const std::string& s) {
  TermPtr t = parse_term(s);
  if (t->kind != TermKind::Var) throw ProofFormatError("expected a variable, got '" + s + "'");
  return t->var;
}

inline Justification parse_justification(const std::string& s) {
  Justification j;
  auto colon = s.find(':');
  if (colon == std::string::npos) throw ProofFormatError("bad justification '" + s + "'");
  std::string tag = s.substr(0, colon), rest = s.substr(colon + 1);
  if (tag == "axiom") {
    j.kind = Justification::Kind::Axiom;
    j.axiom = rest;
  } else if (tag == "mp" || tag == "gen") {
    auto parts = split(rest, ',');
    if (parts.size() != 2) throw ProofFormatError("bad justification '" + s + "'");
    j.kind = tag == "mp" ? Justification::Kind::MP : Justification::Kind::Gen;
    j.i = to_index(parts[0]);
    if (tag == "mp")
      j.j = to_index(parts[1]);
    else
      j.var = to_var(parts[1]);
  } else if (tag == "schema") {
    j.kind = Justification::Kind::Schema;
    auto c2 = rest.find(':');
    auto sch = schema_named(rest.substr(0, c2));
    if (!sch) throw ProofFormatError("unknown schema '" + rest.substr(0, c2) + "'");
    j.schema = *sch;
    auto args = c2 == std::string::npos ? std::vector<std::string>{} : split(rest.substr(c2 + 1), ';');
    std::string sig = schema_info(*sch).signature;
    if (args.size() != sig.size()) throw ProofFormatError("schema " + rest.substr(0, c2) + " takes " + std::to_string(sig.size()) + " arguments");
    for (std::size_t k = 0; k < sig.size(); ++k) {
      if (sig[k] == 'F') j.args.f.push_back(parse_formula(args[k]));
      if (sig[k] == 'V') j.args.v.push_back(to_var(args[k]));
      if (sig[k] == 'T') j.args.t.push_back(parse_term(args[k]));
    }
  } else {
    throw ProofFormatError("unknown justification tag '" + tag + "'");
  }
  return j;
}

}  // namespace proof_detail

// Lines "n | formula | justification"; blank lines and '#' comments are skipped.
inline Proof parse_proof(const std::string& text) {
  Proof p;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto a = line.find(" | ");
    auto b = line.rfind(" | ");
    if (a == std::string::npos || a == b) throw ProofFormatError("proof line needs three fields: " + line);
    if (proof_detail::to_index(line.substr(0, a)) != p.steps.size() + 1)
      throw ProofFormatError("steps must be numbered consecutively from 1");
    ProofStep st;
    st.formula = parse_formula(line.substr(a + 3, b - a - 3));
    st.just = proof_detail::parse_justification(line.substr(b + 3));
    p.steps.push_back(std::move(st));
  }
  return p;
}

inline Proof load_proof(const std::string& name) { return parse_proof(read_file(fixture_path("proofs/" + name))); }

// ---------------------------------------------------------------- checking

struct CheckResult {
  bool ok = true;
  std::size_t failed_step = 0;  // 1-based, 0 when ok
  std::string diagnostic;
  explicit operator bool() const { return ok; }
};

inline CheckResult check_proof(const Proof& p, const Theory& t, const FormulaPtr& goal = nullptr) {
  auto fail = [](std::size_t k, std::string why) { return CheckResult{false, k, std::move(why)}; };
  if (p.steps.empty()) return fail(0, "empty proof");
  for (std::size_t k = 0; k < p.steps.size(); ++k) {
    const ProofStep& st = p.steps[k];
    const Justification& j = st.just;
    std::size_t n = k + 1;
    switch (j.kind) {
      case Justification::Kind::Axiom: {
        const FormulaPtr* ax = t.find(j.axiom);
        if (!ax) return fail(n, "no axiom named " + j.axiom + " in " + t.name);
        if (!equal(**ax, *st.formula)) return fail(n, "formula is not axiom " + j.axiom);
        break;
      }
      case Justification::Kind::Schema: {
        auto inst = schema_instance(j.schema, j.args);
        if (!inst) return fail(n, std::string("side condition of ") + schema_info(j.schema).name + " fails");
        if (!equal(**inst, *st.formula)) return fail(n, std::string("formula is not the stated ") + schema_info(j.schema).name + " instance");
        break;
      }
      case Justification::Kind::MP: {
        if (j.i < 1 || j.i >= n || j.j < 1 || j.j >= n) return fail(n, "modus ponens refers to a later or missing step");
        const Formula& imp = *p.steps[j.j - 1].formula;
        if (imp.kind != FormulaKind::Implies) return fail(n, "second premise is not an implication");
        if (!equal(*imp.sub[0], *p.steps[j.i - 1].formula) || !equal(*imp.sub[1], *st.formula))
          return fail(n, "premises do not match");
        break;
      }
      case Justification::Kind::Gen: {
        if (j.i < 1 || j.i >= n) return fail(n, "generalization refers to a later or missing step");
        if (!equal(*fml::forall(j.var, p.steps[j.i - 1].formula), *st.formula)) return fail(n, "not the generalization");
        break;
      }
    }
  }
  if (goal && !equal(*p.conclusion(), *goal)) return fail(p.steps.size(), "last step is not the goal");
  return {};
}

inline Nat proof_code(const Proof& p) { return encode_bytes(proof_text(p)); }

// prf(p, s): p codes the text of a proof in `t` whose last line is the formula coded by s.
inline bool prf_holds(const Nat& p, const Nat& s, const Theory& t) {
  try {
    if (!p.is_concrete() || p == Nat(0)) return false;
    Proof pr = parse_proof(decode_bytes(p));
    if (pr.steps.empty()) return false;
    if (!check_proof(pr, t)) return false;
    return encode(pr.conclusion()) == s;
  } catch (const Error&) {
    return false;
  }
}

// ---------------------------------------------------------------- search

struct SearchOptions {
  std::uint64_t node_budget = 10000;
  unsigned numeral_bound = 2;
};

struct SearchResult {
  std::optional<Proof> proof;
  std::uint64_t nodes = 0;
  std::uint32_t levels = 0;
};

namespace proof_detail {

class Search {
 public:
  Search(const FormulaPtr& goal, const Theory& t, const SearchOptions& o) : goal_(goal), theory_(t), opt_(o) {
    max_len_ = goal->length * Nat(3) + Nat(64);
  }

  SearchResult run() {
    SearchResult r;
    seed_pools();
    for (const auto& [name, ax] : theory_.axioms) {
      Justification j;
      j.axiom = name;
      if (add(ax, j)) return finish(r);
    }
    for (const auto& t : terms_)
      if (add_schema(Schema::EQ_REFL, {{}, {}, {t}})) return finish(r);
    std::size_t old_pool = 0;
    while (nodes_.size() < opt_.node_budget && attempts_ < opt_.node_budget * 40) {
      ++level_;
      std::size_t before = nodes_.size();
      std::size_t pool_end = pool_.size();
      if (expand(old_pool, pool_end)) return finish(r);
      old_pool = pool_end;
      for (std::size_t k = before; k < nodes_.size(); ++k) pool_.push_back(nodes_[k].f);
      if (nodes_.size() == before) break;
    }
    r.nodes = nodes_.size();
    r.levels = level_;
    return r;
  }

 private:
  struct Node {
    FormulaPtr f;
    Justification j;
    std::vector<std::size_t> premises;  // node indices
  };

  FormulaPtr goal_;
  const Theory& theory_;
  SearchOptions opt_;
  Nat max_len_;
  std::vector<Node> nodes_;
  std::unordered_map<FormulaPtr, std::size_t, FormulaHash, FormulaEq> index_;
  std::unordered_map<FormulaPtr, std::vector<std::size_t>, FormulaHash, FormulaEq> waiting_;
  std::vector<FormulaPtr> pool_;
  std::vector<TermPtr> terms_;
  std::optional<std::size_t> goal_node_;
  std::uint64_t attempts_ = 0;
  std::uint32_t level_ = 0;

  SearchResult finish(SearchResult& r) {
    r.nodes = nodes_.size();
    r.levels = level_;
    std::vector<char> need(nodes_.size(), 0);
    std::vector<std::size_t> stack = {*goal_node_};
    while (!stack.empty()) {
      std::size_t k = stack.back();
      stack.pop_back();
      if (need[k]) continue;
      need[k] = 1;
      for (std::size_t p : nodes_[k].premises) stack.push_back(p);
    }
    std::vector<std::size_t> step_of(nodes_.size(), 0);
    Proof p;
    for (std::size_t k = 0; k < nodes_.size(); ++k) {
      if (!need[k]) continue;
      Justification j = nodes_[k].j;
      if (j.kind == Justification::Kind::MP) {
        j.i = step_of[nodes_[k].premises[0]];
        j.j = step_of[nodes_[k].premises[1]];
      } else if (j.kind == Justification::Kind::Gen) {
        j.i = step_of[nodes_[k].premises[0]];
      }
      p.steps.push_back({nodes_[k].f, j});
      step_of[k] = p.steps.size();
    }
    r.proof = std::move(p);
    return r;
  }

  void seed_pools() {
    std::vector<FormulaPtr> subs;
    subformulas(goal_, subs);
    std::sort(subs.begin(), subs.end(), [](const FormulaPtr& a, const FormulaPtr& b) {
      if (a->length != b->length) return a->length < b->length;
      return a->hash < b->hash;
    });
    std::unordered_map<FormulaPtr, int, FormulaHash, FormulaEq> seen;
    for (auto& s : subs)
      if (seen.emplace(s, 0).second) pool_.push_back(s);
    std::vector<TermPtr> ts;
    for (unsigned k = 0; k <= opt_.numeral_bound; ++k) ts.push_back(numeral(Nat(k)));
    subterms(goal_, ts);
    for (auto& t : ts) {
      bool dup = false;
      for (auto& u : terms_)
        if (equal(*u, *t)) dup = true;
      if (!dup) terms_.push_back(t);
    }
  }

  // Adds a node and closes under modus ponens. True once the goal is present.
  bool add(const FormulaPtr& f, const Justification& j, std::vector<std::size_t> premises = {}) {
    ++attempts_;
    if (goal_node_) return true;
    if (nodes_.size() >= opt_.node_budget) return false;
    if (max_len_ < f->length) return false;
    if (index_.count(f)) return false;
    std::size_t k = nodes_.size();
    nodes_.push_back({f, j, std::move(premises)});
    index_.emplace(f, k);
    if (equal(*f, *goal_)) {
      goal_node_ = k;
      return true;
    }
    if (f->kind == FormulaKind::Implies) {
      auto it = index_.find(f->sub[0]);
      if (it != index_.end()) {
        if (mp(it->second, k)) return true;
      } else {
        waiting_[f->sub[0]].push_back(k);
      }
    }
    auto w = waiting_.find(f);
    if (w != waiting_.end()) {
      std::vector<std::size_t> imps = std::move(w->second);
      waiting_.erase(w);
      for (std::size_t imp : imps)
        if (mp(k, imp)) return true;
    }
    return false;
  }

  bool mp(std::size_t a, std::size_t imp) {
    Justification j;
    j.kind = Justification::Kind::MP;
    FormulaPtr b = nodes_[imp].f->sub[1];
    return add(b, j, {a, imp});
  }

  bool add_schema(Schema s, SchemaArgs args) {
    auto inst = schema_instance(s, args);
    if (!inst) return false;
    Justification j;
    j.kind = Justification::Kind::Schema;
    j.schema = s;
    j.args = std::move(args);
    return add(*inst, j);
  }

  bool budget_left() const { return nodes_.size() < opt_.node_budget && attempts_ < opt_.node_budget * 40; }

  // One saturation level: instances in which at least one argument is new.
  bool expand(std::size_t old_end, std::size_t end) {
    auto is_new = [&](std::size_t i) { return i >= old_end; };
    // Quantifier steps on new pool members.
    for (std::size_t i = old_end; i < end && budget_left(); ++i) {
      const FormulaPtr& f = pool_[i];
      if (f->kind == FormulaKind::Forall) {
        for (const auto& t : terms_)
          if (add_schema(Schema::ALL_INST, {{f->sub[0]}, {f->var}, {t}})) return true;
        const Formula& body = *f->sub[0];
        if (body.kind == FormulaKind::Implies) {
          if (add_schema(Schema::ALL_DIST, {{body.sub[0], body.sub[1]}, {f->var}, {}})) return true;
          if (add_schema(Schema::EX_ELIM, {{body.sub[0], body.sub[1]}, {f->var}, {}})) return true;
        }
      }
      if (f->kind == FormulaKind::Exists)
        for (const auto& t : terms_)
          if (add_schema(Schema::EX_INTRO, {{f->sub[0]}, {f->var}, {t}})) return true;
      auto it = index_.find(f);
      if (it != index_.end())
        for (VarIndex v : f->free) {
          Justification j;
          j.kind = Justification::Kind::Gen;
          j.var = v;
          if (add(fml::forall(v, f), j, {it->second})) return true;
        }
    }
    // Propositional schemas, fewest metavariables first.
    for (std::size_t arity = 1; arity <= 3; ++arity) {
      for (const auto& info : schema_table()) {
        std::string sig = info.signature;
        if (sig.find_first_not_of('F') != std::string::npos || sig.size() != arity) continue;
        if (arity == 1) {
          for (std::size_t a = old_end; a < end && budget_left(); ++a)
            if (add_schema(info.schema, {{pool_[a]}, {}, {}})) return true;
        } else if (arity == 2) {
          for (std::size_t a = 0; a < end && budget_left(); ++a)
            for (std::size_t b = 0; b < end && budget_left(); ++b)
              if ((is_new(a) || is_new(b)) && add_schema(info.schema, {{pool_[a], pool_[b]}, {}, {}})) return true;
        } else {
          for (std::size_t a = 0; a < end && budget_left(); ++a)
            for (std::size_t b = 0; b < end && budget_left(); ++b)
              for (std::size_t c = 0; c < end && budget_left(); ++c)
                if ((is_new(a) || is_new(b) || is_new(c)) &&
                    add_schema(info.schema, {{pool_[a], pool_[b], pool_[c]}, {}, {}}))
                  return true;
        }
      }
    }
    // Equality substitution into new pool members along their free variables.
    for (std::size_t i = old_end; i < end && budget_left(); ++i)
      for (VarIndex v : pool_[i]->free)
        for (const auto& s : terms_)
          for (const auto& t : terms_)
            if (!equal(*s, *t) && add_schema(Schema::EQ_SUBST, {{pool_[i]}, {v}, {s, t}})) return true;
    return false;
  }
};

}  // namespace proof_detail

// Level-saturation forward search: axioms and reflexivity first, then at each
// level quantifier steps and schema instances over the pool (goal subformulas
// plus everything derived so far), with modus ponens closed eagerly.
inline SearchResult bounded_proof_search(const FormulaPtr& goal, const Theory& t, const SearchOptions& opt = {}) {
  return proof_detail::Search(goal, t, opt).run();
}

}  // namespace selfref
