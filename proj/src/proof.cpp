#include "lfikit/proof.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

namespace lfikit {

std::optional<LogicId> logic_from_string(const std::string& s) {
  std::string k;
  for (char c : s) k += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (k == "mbc") return LogicId::MbC;
  if (k == "qmbc") return LogicId::QmbC;
  if (k == "lfi1o" || k == "lfi1") return LogicId::LFI1o;
  if (k == "qlfi1o" || k == "qlfi1") return LogicId::QLFI1o;
  if (k == "qmbceq" || k == "qmbc-eq") return LogicId::QmbCEq;
  return std::nullopt;
}

std::string to_string(LogicId id) {
  switch (id) {
    case LogicId::MbC: return "mbC";
    case LogicId::QmbC: return "QmbC";
    case LogicId::LFI1o: return "LFI1o";
    case LogicId::QLFI1o: return "QLFI1o";
    case LogicId::QmbCEq: return "QmbC-eq";
  }
  return "?";
}

namespace {

// Metavariables in propositional schema patterns are the nullary atoms a, b,
// c; they match arbitrary formulas, consistently across repetitions.
bool pattern_match(const Formula& pattern, const Formula& f,
                   std::map<std::string, Formula>& binding) {
  if (pattern.kind() == Formula::Kind::Atom && pattern.terms().empty()) {
    const std::string& name = pattern.pred();
    if (name == "a" || name == "b" || name == "c") {
      auto it = binding.find(name);
      if (it == binding.end()) {
        binding.emplace(name, f);
        return true;
      }
      return it->second == f;
    }
  }
  if (pattern.kind() != f.kind()) return false;
  switch (pattern.kind()) {
    case Formula::Kind::Atom:
      return pattern.pred() == f.pred() && pattern.terms() == f.terms();
    case Formula::Kind::Eq: return pattern.terms() == f.terms();
    case Formula::Kind::Neg:
    case Formula::Kind::Cons:
      return pattern_match(pattern.child(), f.child(), binding);
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Imp:
      return pattern_match(pattern.lhs(), f.lhs(), binding) &&
             pattern_match(pattern.rhs(), f.rhs(), binding);
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
      return pattern.bound_var() == f.bound_var() &&
             pattern_match(pattern.body(), f.body(), binding);
  }
  return false;
}

// Recovers the term t such that candidate = body[x/t], if one exists. The
// positions of free x in body must all carry the same subterm; everything
// else must match exactly. When x is not free in body, any t works and the
// match degenerates to equality (t := x).
bool unify_term_at_x(const Term& pat, const Term& cand, const std::string& x,
                     const std::set<std::string>& bound,
                     std::optional<Term>& t) {
  if (pat.kind() == Term::Kind::Var && pat.name() == x && !bound.count(x)) {
    if (t) return *t == cand;
    t = cand;
    return true;
  }
  if (pat.kind() != cand.kind()) return false;
  switch (pat.kind()) {
    case Term::Kind::Var:
    case Term::Kind::Const: return pat.name() == cand.name();
    case Term::Kind::DomainConst:
      return pat.domain_index() == cand.domain_index();
    case Term::Kind::App: {
      if (pat.name() != cand.name() || pat.args().size() != cand.args().size())
        return false;
      for (std::size_t i = 0; i < pat.args().size(); ++i)
        if (!unify_term_at_x(pat.args()[i], cand.args()[i], x, bound, t))
          return false;
      return true;
    }
  }
  return false;
}

bool match_subst_walk(const Formula& body, const Formula& cand,
                      const std::string& x, std::set<std::string>& bound,
                      std::optional<Term>& t) {
  if (body.kind() != cand.kind()) return false;
  switch (body.kind()) {
    case Formula::Kind::Atom:
      if (body.pred() != cand.pred()) return false;
      [[fallthrough]];
    case Formula::Kind::Eq: {
      if (body.terms().size() != cand.terms().size()) return false;
      for (std::size_t i = 0; i < body.terms().size(); ++i)
        if (!unify_term_at_x(body.terms()[i], cand.terms()[i], x, bound, t))
          return false;
      return true;
    }
    case Formula::Kind::Neg:
    case Formula::Kind::Cons:
      return match_subst_walk(body.child(), cand.child(), x, bound, t);
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Imp:
      return match_subst_walk(body.lhs(), cand.lhs(), x, bound, t) &&
             match_subst_walk(body.rhs(), cand.rhs(), x, bound, t);
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: {
      if (body.bound_var() != cand.bound_var()) return false;
      bool inserted = bound.insert(body.bound_var()).second;
      bool ok = match_subst_walk(body.body(), cand.body(), x, bound, t);
      if (inserted) bound.erase(body.bound_var());
      return ok;
    }
  }
  return false;
}

// candidate == body[x/t] for some t free for x in body?
bool is_substitution_instance(const Formula& body, const std::string& x,
                              const Formula& candidate) {
  std::set<std::string> bound;
  std::optional<Term> t;
  if (!match_subst_walk(body, candidate, x, bound, t)) return false;
  if (!t) return true;  // x not free in body; candidate == body
  return is_free_for(*t, x, body);
}

Formula A(const char* name) { return Formula::atom(name); }

Schema make_pattern_schema(std::string id, Formula pattern) {
  std::map<std::string, Formula> sample_bind = {
      {"a", Formula::atom("p1")}, {"b", Formula::atom("p2")},
      {"c", Formula::atom("p3")}};
  // build the sample by structural replacement
  std::function<Formula(const Formula&)> inst = [&](const Formula& f) -> Formula {
    if (f.kind() == Formula::Kind::Atom && f.terms().empty() &&
        sample_bind.count(f.pred()))
      return sample_bind.at(f.pred());
    switch (f.kind()) {
      case Formula::Kind::Neg: return Formula::neg(inst(f.child()));
      case Formula::Kind::Cons: return Formula::cons(inst(f.child()));
      case Formula::Kind::And:
      case Formula::Kind::Or:
      case Formula::Kind::Imp:
        return Formula::binary(f.kind(), inst(f.lhs()), inst(f.rhs()));
      default: return f;
    }
  };
  Formula sample = inst(pattern);
  std::string display = to_string(pattern);
  auto matches = [pattern](const Formula& f) {
    std::map<std::string, Formula> binding;
    return pattern_match(pattern, f, binding);
  };
  return Schema{std::move(id), std::move(display), std::move(matches),
                std::move(sample)};
}

Schema make_custom_schema(std::string id, std::string display, Formula sample,
                          std::function<bool(const Formula&)> matches) {
  return Schema{std::move(id), std::move(display), std::move(matches),
                std::move(sample)};
}

bool match_ax12(const Formula& f) {  // phi[x/t] -> exists x phi
  if (f.kind() != Formula::Kind::Imp) return false;
  const Formula& rhs = f.rhs();
  if (rhs.kind() != Formula::Kind::Exists) return false;
  return is_substitution_instance(rhs.body(), rhs.bound_var(), f.lhs());
}

bool match_ax13(const Formula& f) {  // forall x phi -> phi[x/t]
  if (f.kind() != Formula::Kind::Imp) return false;
  const Formula& lhs = f.lhs();
  if (lhs.kind() != Formula::Kind::Forall) return false;
  return is_substitution_instance(lhs.body(), lhs.bound_var(), f.rhs());
}

bool match_ax14(const Formula& f) {  // alpha -> beta, alpha a variant of beta
  return f.kind() == Formula::Kind::Imp && is_variant(f.lhs(), f.rhs());
}

bool match_axeq1(const Formula& f) {  // forall x (x = x)
  if (f.kind() != Formula::Kind::Forall) return false;
  const Formula& b = f.body();
  return b.kind() == Formula::Kind::Eq &&
         b.terms()[0].kind() == Term::Kind::Var &&
         b.terms()[0].name() == f.bound_var() &&
         b.terms()[1] == b.terms()[0];
}

bool match_axeq2(const Formula& f) {
  // (x = y) -> (phi -> phi'), phi' = phi with some free x replaced by y
  if (f.kind() != Formula::Kind::Imp) return false;
  const Formula& eq = f.lhs();
  if (eq.kind() != Formula::Kind::Eq ||
      eq.terms()[0].kind() != Term::Kind::Var ||
      eq.terms()[1].kind() != Term::Kind::Var)
    return false;
  const std::string& x = eq.terms()[0].name();
  const std::string& y = eq.terms()[1].name();
  if (f.rhs().kind() != Formula::Kind::Imp) return false;
  const Formula& phi = f.rhs().lhs();
  const Formula& phi2 = f.rhs().rhs();
  if (!is_free_for(Term::var(y), x, phi)) return false;
  return partial_replace_ok(phi, phi2, x, y);
}

// ~Qx phi <-> Q'x ~phi, as the conjunction of both implications
bool match_quant_de_morgan(const Formula& f, Formula::Kind inner_q,
                           Formula::Kind outer_q) {
  if (f.kind() != Formula::Kind::And) return false;
  const Formula& fwd = f.lhs();
  const Formula& bwd = f.rhs();
  if (fwd.kind() != Formula::Kind::Imp || bwd.kind() != Formula::Kind::Imp)
    return false;
  if (bwd.lhs() != fwd.rhs() || bwd.rhs() != fwd.lhs()) return false;
  const Formula& neg_q = fwd.lhs();   // ~ (Q x phi)
  const Formula& q_neg = fwd.rhs();   // Q' x ~phi
  if (neg_q.kind() != Formula::Kind::Neg) return false;
  const Formula& q = neg_q.child();
  if (q.kind() != inner_q || q_neg.kind() != outer_q) return false;
  if (q.bound_var() != q_neg.bound_var()) return false;
  return q_neg.body().kind() == Formula::Kind::Neg &&
         q_neg.body().child() == q.body();
}

}  // namespace

SchemaCatalog::SchemaCatalog() {
  Formula a = A("a"), b = A("b"), c = A("c");
  using F = Formula;

  all_.push_back(make_pattern_schema("A1", F::imp(a, F::imp(b, a))));
  all_.push_back(make_pattern_schema(
      "A2", F::imp(F::imp(a, F::imp(b, c)),
                   F::imp(F::imp(a, b), F::imp(a, c)))));
  all_.push_back(make_pattern_schema("A3", F::imp(a, F::imp(b, F::conj(a, b)))));
  all_.push_back(make_pattern_schema("A4", F::imp(F::conj(a, b), a)));
  all_.push_back(make_pattern_schema("A5", F::imp(F::conj(a, b), b)));
  all_.push_back(make_pattern_schema("A6", F::imp(a, F::disj(a, b))));
  all_.push_back(make_pattern_schema("A7", F::imp(b, F::disj(a, b))));
  all_.push_back(make_pattern_schema(
      "A8", F::imp(F::imp(a, c),
                   F::imp(F::imp(b, c), F::imp(F::disj(a, b), c)))));
  all_.push_back(make_pattern_schema("A9", F::disj(a, F::imp(a, b))));
  all_.push_back(make_pattern_schema("A10", F::disj(a, F::neg(a))));
  all_.push_back(make_pattern_schema(
      "A11", F::imp(F::cons(a), F::imp(a, F::imp(F::neg(a), b)))));

  all_.push_back(make_custom_schema(
      "Ax12", "phi[x/t] -> exists x. phi  (t free for x in phi)",
      F::imp(F::atom("P", {Term::constant("c")}),
             F::exists("x", F::atom("P", {Term::var("x")}))),
      match_ax12));
  all_.push_back(make_custom_schema(
      "Ax13", "forall x. phi -> phi[x/t]  (t free for x in phi)",
      F::imp(F::forall("x", F::atom("P", {Term::var("x")})),
             F::atom("P", {Term::constant("c")})),
      match_ax13));
  all_.push_back(make_custom_schema(
      "Ax14", "alpha -> beta  (alpha a variant of beta)",
      F::imp(F::forall("x", F::atom("P", {Term::var("x")})),
             F::forall("y", F::atom("P", {Term::var("y")}))),
      match_ax14));

  all_.push_back(make_pattern_schema(
      "ci", F::imp(F::neg(F::cons(a)), F::conj(a, F::neg(a)))));
  all_.push_back(make_pattern_schema("dneg", make_iff(F::neg(F::neg(a)), a)));
  all_.push_back(make_pattern_schema(
      "negOr", make_iff(F::neg(F::disj(a, b)),
                        F::conj(F::neg(a), F::neg(b)))));
  all_.push_back(make_pattern_schema(
      "negAnd", make_iff(F::neg(F::conj(a, b)),
                         F::disj(F::neg(a), F::neg(b)))));
  all_.push_back(make_pattern_schema(
      "negImp", make_iff(F::neg(F::imp(a, b)), F::conj(a, F::neg(b)))));

  all_.push_back(make_custom_schema(
      "AxNegExists", "~(exists x. phi) <-> forall x. ~phi",
      make_iff(F::neg(F::exists("x", F::atom("P", {Term::var("x")}))),
               F::forall("x", F::neg(F::atom("P", {Term::var("x")})))),
      [](const Formula& f) {
        return match_quant_de_morgan(f, Formula::Kind::Exists,
                                     Formula::Kind::Forall);
      }));
  all_.push_back(make_custom_schema(
      "AxNegForall", "~(forall x. phi) <-> exists x. ~phi",
      make_iff(F::neg(F::forall("x", F::atom("P", {Term::var("x")}))),
               F::exists("x", F::neg(F::atom("P", {Term::var("x")})))),
      [](const Formula& f) {
        return match_quant_de_morgan(f, Formula::Kind::Forall,
                                     Formula::Kind::Exists);
      }));

  all_.push_back(make_custom_schema(
      "AxEq1", "forall x. x = x",
      F::forall("x", F::eq(Term::var("x"), Term::var("x"))), match_axeq1));
  all_.push_back(make_custom_schema(
      "AxEq2",
      "x = y -> (phi -> phi[x?y])  (some free x replaced by y, y free for x)",
      F::imp(F::eq(Term::var("x"), Term::var("y")),
             F::imp(F::atom("P", {Term::var("x"), Term::var("x")}),
                    F::atom("P", {Term::var("x"), Term::var("y")}))),
      match_axeq2));

  auto ids = [this](const std::vector<std::string>& names) {
    std::vector<const Schema*> out;
    for (const auto& n : names) out.push_back(find(n));
    return out;
  };
  std::vector<std::string> mbc = {"A1", "A2", "A3", "A4", "A5", "A6",
                                  "A7", "A8", "A9", "A10", "A11"};
  std::vector<std::string> lfi1 = mbc;
  for (const char* n : {"ci", "dneg", "negOr", "negAnd", "negImp"})
    lfi1.push_back(n);
  std::vector<std::string> qmbc = mbc;
  for (const char* n : {"Ax12", "Ax13", "Ax14"}) qmbc.push_back(n);
  std::vector<std::string> qlfi1 = lfi1;  // no Ax14 here
  for (const char* n : {"Ax12", "Ax13", "AxNegExists", "AxNegForall"})
    qlfi1.push_back(n);
  std::vector<std::string> qmbceq = qmbc;
  for (const char* n : {"AxEq1", "AxEq2"}) qmbceq.push_back(n);

  per_logic_.resize(5);
  per_logic_[static_cast<int>(LogicId::MbC)] = ids(mbc);
  per_logic_[static_cast<int>(LogicId::QmbC)] = ids(qmbc);
  per_logic_[static_cast<int>(LogicId::LFI1o)] = ids(lfi1);
  per_logic_[static_cast<int>(LogicId::QLFI1o)] = ids(qlfi1);
  per_logic_[static_cast<int>(LogicId::QmbCEq)] = ids(qmbceq);
}

const SchemaCatalog& SchemaCatalog::instance() {
  static SchemaCatalog catalog;
  return catalog;
}

const std::vector<const Schema*>& SchemaCatalog::for_logic(LogicId id) const {
  return per_logic_[static_cast<int>(id)];
}

const Schema* SchemaCatalog::find(const std::string& schema_id) const {
  for (const auto& s : all_)
    if (s.id == schema_id) return &s;
  return nullptr;
}

bool SchemaCatalog::first_order(LogicId id) {
  return id == LogicId::QmbC || id == LogicId::QLFI1o || id == LogicId::QmbCEq;
}

bool match_axiom(const std::string& schema_id, const Formula& f) {
  const Schema* s = SchemaCatalog::instance().find(schema_id);
  return s && s->matches(f);
}

const Formula& Derivation::conclusion() const {
  if (steps.empty()) throw SyntaxError("empty derivation");
  return steps.back().formula;
}

StepVerdict check_step(const Derivation& d, std::size_t index) {
  if (index >= d.steps.size()) return {false, "step index out of range"};
  const Step& step = d.steps[index];
  const Formula& f = step.formula;
  const auto& catalog = SchemaCatalog::instance();

  auto earlier = [&](std::size_t ref, std::string& err) -> const Formula* {
    if (ref >= index) {
      err = "reference to step " + std::to_string(ref + 1) +
            " which is not strictly earlier";
      return nullptr;
    }
    return &d.steps[ref].formula;
  };

  switch (step.by.kind) {
    case Justification::Kind::Premise: {
      for (const auto& p : d.premises)
        if (p == f) return {};
      return {false, "formula is not among the premises"};
    }
    case Justification::Kind::Axiom: {
      const Schema* schema = catalog.find(step.by.schema_id);
      if (!schema)
        return {false, "unknown axiom schema '" + step.by.schema_id + "'"};
      const auto& allowed = catalog.for_logic(d.logic);
      if (std::find(allowed.begin(), allowed.end(), schema) == allowed.end())
        return {false, "schema " + step.by.schema_id + " is not part of " +
                           to_string(d.logic)};
      if (!schema->matches(f))
        return {false, "formula does not instantiate schema " +
                           step.by.schema_id};
      return {};
    }
    case Justification::Kind::MP: {
      std::string err;
      const Formula* minor = earlier(step.by.ref1, err);
      if (!minor) return {false, err};
      const Formula* major = earlier(step.by.ref2, err);
      if (!major) return {false, err};
      if (major->kind() != Formula::Kind::Imp)
        return {false, "step " + std::to_string(step.by.ref2 + 1) +
                           " is not an implication"};
      if (major->lhs() != *minor)
        return {false, "antecedent of step " + std::to_string(step.by.ref2 + 1) +
                           " does not match step " +
                           std::to_string(step.by.ref1 + 1)};
      if (major->rhs() != f)
        return {false, "consequent does not match this step's formula"};
      return {};
    }
    case Justification::Kind::ExistsIn: {
      if (!SchemaCatalog::first_order(d.logic))
        return {false, "rule exists-in is not available in " + to_string(d.logic)};
      std::string err;
      const Formula* src = earlier(step.by.ref1, err);
      if (!src) return {false, err};
      if (src->kind() != Formula::Kind::Imp || f.kind() != Formula::Kind::Imp)
        return {false, "exists-in needs implications on both ends"};
      if (f.lhs().kind() != Formula::Kind::Exists)
        return {false, "conclusion antecedent is not existentially quantified"};
      if (f.lhs().body() != src->lhs())
        return {false, "quantified antecedent does not match the source step"};
      if (f.rhs() != src->rhs())
        return {false, "consequents differ"};
      const std::string& x = f.lhs().bound_var();
      if (free_vars(f.rhs()).count(x))
        return {false, "side condition violated: '" + x +
                           "' occurs free in the consequent"};
      return {};
    }
    case Justification::Kind::ForallIn: {
      if (!SchemaCatalog::first_order(d.logic))
        return {false, "rule forall-in is not available in " + to_string(d.logic)};
      std::string err;
      const Formula* src = earlier(step.by.ref1, err);
      if (!src) return {false, err};
      if (src->kind() != Formula::Kind::Imp || f.kind() != Formula::Kind::Imp)
        return {false, "forall-in needs implications on both ends"};
      if (f.rhs().kind() != Formula::Kind::Forall)
        return {false, "conclusion consequent is not universally quantified"};
      if (f.rhs().body() != src->rhs())
        return {false, "quantified consequent does not match the source step"};
      if (f.lhs() != src->lhs())
        return {false, "antecedents differ"};
      const std::string& x = f.rhs().bound_var();
      if (free_vars(f.lhs()).count(x))
        return {false, "side condition violated: '" + x +
                           "' occurs free in the antecedent"};
      return {};
    }
  }
  return {false, "unknown justification"};
}

DerivationVerdict check_derivation(const Derivation& d) {
  if (d.steps.empty()) return {false, 0, "derivation has no steps"};
  for (std::size_t i = 0; i < d.steps.size(); ++i) {
    StepVerdict v = check_step(d, i);
    if (!v.ok) return {false, i, v.reason};
  }
  return {};
}

}  // namespace lfikit
