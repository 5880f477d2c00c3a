#include "lfikit/syntax.hpp"

#include <algorithm>

namespace lfikit {

// ---- Signature ----

Signature Signature::propositional(const std::vector<std::string>& atoms) {
  Signature sig;
  for (const auto& a : atoms) sig.add_predicate(a, 0);
  return sig;
}

void Signature::check_fresh(const std::string& name) const {
  if (constants_.count(name) || functions_.count(name) ||
      predicates_.count(name))
    throw SyntaxError("symbol '" + name + "' declared twice");
  if (!name.empty() && name[0] == '@')
    throw SyntaxError("'" + name + "': names starting with '@' are reserved");
}

void Signature::add_constant(const std::string& name) {
  check_fresh(name);
  constants_.insert(name);
}

void Signature::add_function(const std::string& name, unsigned arity) {
  if (arity == 0) throw SyntaxError("function '" + name + "' needs arity >= 1");
  check_fresh(name);
  functions_[name] = arity;
}

void Signature::add_predicate(const std::string& name, unsigned arity) {
  check_fresh(name);
  predicates_[name] = arity;
}

bool Signature::is_constant(const std::string& name) const {
  return constants_.count(name) != 0;
}

std::optional<unsigned> Signature::function_arity(const std::string& name) const {
  auto it = functions_.find(name);
  if (it == functions_.end()) return std::nullopt;
  return it->second;
}

std::optional<unsigned> Signature::predicate_arity(const std::string& name) const {
  auto it = predicates_.find(name);
  if (it == predicates_.end()) return std::nullopt;
  return it->second;
}

// ---- Term ----

Term Term::var(std::string name) {
  auto rep = std::make_shared<Rep>();
  rep->kind = Kind::Var;
  rep->name = std::move(name);
  return Term(std::move(rep));
}

Term Term::constant(std::string name) {
  auto rep = std::make_shared<Rep>();
  rep->kind = Kind::Const;
  rep->name = std::move(name);
  return Term(std::move(rep));
}

Term Term::domain_const(std::size_t index) {
  auto rep = std::make_shared<Rep>();
  rep->kind = Kind::DomainConst;
  rep->index = index;
  rep->name = "@" + std::to_string(index);
  return Term(std::move(rep));
}

Term Term::app(std::string fn, std::vector<Term> args) {
  if (args.empty()) throw SyntaxError("function application needs arguments");
  auto rep = std::make_shared<Rep>();
  rep->kind = Kind::App;
  rep->name = std::move(fn);
  rep->args = std::move(args);
  return Term(std::move(rep));
}

bool Term::is_closed() const {
  switch (kind()) {
    case Kind::Var: return false;
    case Kind::Const:
    case Kind::DomainConst: return true;
    case Kind::App:
      return std::all_of(args().begin(), args().end(),
                         [](const Term& t) { return t.is_closed(); });
  }
  return false;
}

int Term::compare(const Term& a, const Term& b) {
  if (a.rep_ == b.rep_) return 0;
  if (a.kind() != b.kind())
    return static_cast<int>(a.kind()) < static_cast<int>(b.kind()) ? -1 : 1;
  switch (a.kind()) {
    case Kind::Var:
    case Kind::Const:
      return a.name().compare(b.name());
    case Kind::DomainConst:
      if (a.domain_index() != b.domain_index())
        return a.domain_index() < b.domain_index() ? -1 : 1;
      return 0;
    case Kind::App: {
      if (int c = a.name().compare(b.name()); c != 0) return c;
      if (a.args().size() != b.args().size())
        return a.args().size() < b.args().size() ? -1 : 1;
      for (std::size_t i = 0; i < a.args().size(); ++i)
        if (int c = compare(a.args()[i], b.args()[i]); c != 0) return c;
      return 0;
    }
  }
  return 0;
}

// ---- Formula ----

Formula Formula::atom(std::string pred, std::vector<Term> args) {
  auto rep = std::make_shared<Rep>();
  rep->kind = Kind::Atom;
  rep->name = std::move(pred);
  rep->terms = std::move(args);
  return Formula(std::move(rep));
}

Formula Formula::eq(Term lhs, Term rhs) {
  auto rep = std::make_shared<Rep>();
  rep->kind = Kind::Eq;
  rep->terms = {std::move(lhs), std::move(rhs)};
  return Formula(std::move(rep));
}

Formula Formula::neg(Formula f) {
  auto rep = std::make_shared<Rep>();
  rep->kind = Kind::Neg;
  rep->children = {std::move(f)};
  return Formula(std::move(rep));
}

Formula Formula::cons(Formula f) {
  auto rep = std::make_shared<Rep>();
  rep->kind = Kind::Cons;
  rep->children = {std::move(f)};
  return Formula(std::move(rep));
}

Formula Formula::binary(Kind k, Formula l, Formula r) {
  auto rep = std::make_shared<Rep>();
  rep->kind = k;
  rep->children = {std::move(l), std::move(r)};
  return Formula(std::move(rep));
}

Formula Formula::conj(Formula l, Formula r) {
  return binary(Kind::And, std::move(l), std::move(r));
}
Formula Formula::disj(Formula l, Formula r) {
  return binary(Kind::Or, std::move(l), std::move(r));
}
Formula Formula::imp(Formula l, Formula r) {
  return binary(Kind::Imp, std::move(l), std::move(r));
}

Formula Formula::quantifier(Kind k, std::string var, Formula body) {
  auto rep = std::make_shared<Rep>();
  rep->kind = k;
  rep->name = std::move(var);
  rep->children = {std::move(body)};
  return Formula(std::move(rep));
}

Formula Formula::forall(std::string var, Formula body) {
  return quantifier(Kind::Forall, std::move(var), std::move(body));
}
Formula Formula::exists(std::string var, Formula body) {
  return quantifier(Kind::Exists, std::move(var), std::move(body));
}

int Formula::compare(const Formula& a, const Formula& b) {
  if (a.rep_ == b.rep_) return 0;
  if (a.kind() != b.kind())
    return static_cast<int>(a.kind()) < static_cast<int>(b.kind()) ? -1 : 1;
  if (int c = a.rep_->name.compare(b.rep_->name); c != 0) return c;
  if (a.rep_->terms.size() != b.rep_->terms.size())
    return a.rep_->terms.size() < b.rep_->terms.size() ? -1 : 1;
  for (std::size_t i = 0; i < a.rep_->terms.size(); ++i)
    if (int c = Term::compare(a.rep_->terms[i], b.rep_->terms[i]); c != 0)
      return c;
  if (a.rep_->children.size() != b.rep_->children.size())
    return a.rep_->children.size() < b.rep_->children.size() ? -1 : 1;
  for (std::size_t i = 0; i < a.rep_->children.size(); ++i)
    if (int c = compare(a.rep_->children[i], b.rep_->children[i]); c != 0)
      return c;
  return 0;
}

// ---- Free variables ----

void term_vars_into(const Term& t, std::set<std::string>& out) {
  switch (t.kind()) {
    case Term::Kind::Var: out.insert(t.name()); break;
    case Term::Kind::Const:
    case Term::Kind::DomainConst: break;
    case Term::Kind::App:
      for (const auto& a : t.args()) term_vars_into(a, out);
      break;
  }
}

std::set<std::string> term_vars(const Term& t) {
  std::set<std::string> out;
  term_vars_into(t, out);
  return out;
}

namespace {

void free_vars_walk(const Formula& f, std::set<std::string>& bound,
                    std::set<std::string>& seen,
                    std::vector<std::string>& ordered) {
  switch (f.kind()) {
    case Formula::Kind::Atom:
    case Formula::Kind::Eq: {
      // collect term variables left to right
      std::vector<const Term*> stack;
      for (auto it = f.terms().rbegin(); it != f.terms().rend(); ++it)
        stack.push_back(&*it);
      while (!stack.empty()) {
        const Term* t = stack.back();
        stack.pop_back();
        if (t->kind() == Term::Kind::Var) {
          if (!bound.count(t->name()) && seen.insert(t->name()).second)
            ordered.push_back(t->name());
        } else if (t->kind() == Term::Kind::App) {
          for (auto it = t->args().rbegin(); it != t->args().rend(); ++it)
            stack.push_back(&*it);
        }
      }
      break;
    }
    case Formula::Kind::Neg:
    case Formula::Kind::Cons:
      free_vars_walk(f.child(), bound, seen, ordered);
      break;
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Imp:
      free_vars_walk(f.lhs(), bound, seen, ordered);
      free_vars_walk(f.rhs(), bound, seen, ordered);
      break;
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: {
      bool inserted = bound.insert(f.bound_var()).second;
      free_vars_walk(f.body(), bound, seen, ordered);
      if (inserted) bound.erase(f.bound_var());
      break;
    }
  }
}

}  // namespace

std::vector<std::string> free_vars_ordered(const Formula& f) {
  std::set<std::string> bound, seen;
  std::vector<std::string> ordered;
  free_vars_walk(f, bound, seen, ordered);
  return ordered;
}

std::set<std::string> free_vars(const Formula& f) {
  auto ordered = free_vars_ordered(f);
  return {ordered.begin(), ordered.end()};
}

bool is_sentence(const Formula& f) { return free_vars_ordered(f).empty(); }

bool is_propositional(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Atom: return f.terms().empty();
    case Formula::Kind::Eq: return false;
    case Formula::Kind::Neg:
    case Formula::Kind::Cons: return is_propositional(f.child());
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Imp:
      return is_propositional(f.lhs()) && is_propositional(f.rhs());
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: return false;
  }
  return false;
}

// ---- Substitution ----

namespace {

bool term_contains_var(const Term& t, const std::string& x) {
  switch (t.kind()) {
    case Term::Kind::Var: return t.name() == x;
    case Term::Kind::Const:
    case Term::Kind::DomainConst: return false;
    case Term::Kind::App:
      for (const auto& a : t.args())
        if (term_contains_var(a, x)) return true;
      return false;
  }
  return false;
}

bool formula_has_free(const Formula& f, const std::string& x) {
  switch (f.kind()) {
    case Formula::Kind::Atom:
    case Formula::Kind::Eq:
      for (const auto& t : f.terms())
        if (term_contains_var(t, x)) return true;
      return false;
    case Formula::Kind::Neg:
    case Formula::Kind::Cons: return formula_has_free(f.child(), x);
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Imp:
      return formula_has_free(f.lhs(), x) || formula_has_free(f.rhs(), x);
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
      if (f.bound_var() == x) return false;
      return formula_has_free(f.body(), x);
  }
  return false;
}

bool free_for_walk(const Formula& f, const std::string& x,
                   const std::set<std::string>& tvars,
                   std::set<std::string>& bound) {
  switch (f.kind()) {
    case Formula::Kind::Atom:
    case Formula::Kind::Eq: {
      bool has_x = false;
      for (const auto& t : f.terms())
        if (term_contains_var(t, x)) { has_x = true; break; }
      if (!has_x || bound.count(x)) return true;
      for (const auto& v : tvars)
        if (bound.count(v)) return false;
      return true;
    }
    case Formula::Kind::Neg:
    case Formula::Kind::Cons:
      return free_for_walk(f.child(), x, tvars, bound);
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Imp:
      return free_for_walk(f.lhs(), x, tvars, bound) &&
             free_for_walk(f.rhs(), x, tvars, bound);
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: {
      if (f.bound_var() == x) return true;  // x not free inside
      bool inserted = bound.insert(f.bound_var()).second;
      bool ok = free_for_walk(f.body(), x, tvars, bound);
      if (inserted) bound.erase(f.bound_var());
      return ok;
    }
  }
  return true;
}

}  // namespace

bool is_free_for(const Term& t, const std::string& x, const Formula& f) {
  auto tvars = term_vars(t);
  std::set<std::string> bound;
  return free_for_walk(f, x, tvars, bound);
}

Term substitute_in_term(const Term& t, const std::string& x, const Term& repl) {
  switch (t.kind()) {
    case Term::Kind::Var: return t.name() == x ? repl : t;
    case Term::Kind::Const:
    case Term::Kind::DomainConst: return t;
    case Term::Kind::App: {
      std::vector<Term> args;
      args.reserve(t.args().size());
      for (const auto& a : t.args())
        args.push_back(substitute_in_term(a, x, repl));
      return Term::app(t.name(), std::move(args));
    }
  }
  return t;
}

namespace {

Formula substitute_unchecked(const Formula& f, const std::string& x,
                             const Term& t) {
  switch (f.kind()) {
    case Formula::Kind::Atom: {
      std::vector<Term> args;
      args.reserve(f.terms().size());
      for (const auto& a : f.terms())
        args.push_back(substitute_in_term(a, x, t));
      return Formula::atom(f.pred(), std::move(args));
    }
    case Formula::Kind::Eq:
      return Formula::eq(substitute_in_term(f.terms()[0], x, t),
                         substitute_in_term(f.terms()[1], x, t));
    case Formula::Kind::Neg:
      return Formula::neg(substitute_unchecked(f.child(), x, t));
    case Formula::Kind::Cons:
      return Formula::cons(substitute_unchecked(f.child(), x, t));
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Imp:
      return Formula::binary(f.kind(), substitute_unchecked(f.lhs(), x, t),
                             substitute_unchecked(f.rhs(), x, t));
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
      if (f.bound_var() == x) return f;
      return Formula::quantifier(f.kind(), f.bound_var(),
                                 substitute_unchecked(f.body(), x, t));
  }
  return f;
}

}  // namespace

Formula substitute(const Formula& f, const std::string& x, const Term& t) {
  if (!is_free_for(t, x, f))
    throw CaptureError("term " + to_string(t) + " is not free for " + x);
  return substitute_unchecked(f, x, t);
}

// ---- Variants ----

namespace {

Formula drop_void_quantifiers(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Atom:
    case Formula::Kind::Eq: return f;
    case Formula::Kind::Neg:
      return Formula::neg(drop_void_quantifiers(f.child()));
    case Formula::Kind::Cons:
      return Formula::cons(drop_void_quantifiers(f.child()));
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Imp:
      return Formula::binary(f.kind(), drop_void_quantifiers(f.lhs()),
                             drop_void_quantifiers(f.rhs()));
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: {
      Formula body = drop_void_quantifiers(f.body());
      if (!formula_has_free(body, f.bound_var())) return body;
      return Formula::quantifier(f.kind(), f.bound_var(), std::move(body));
    }
  }
  return f;
}

Term rename_term(const Term& t, const std::map<std::string, std::string>& env) {
  switch (t.kind()) {
    case Term::Kind::Var: {
      auto it = env.find(t.name());
      return it == env.end() ? t : Term::var(it->second);
    }
    case Term::Kind::Const:
    case Term::Kind::DomainConst: return t;
    case Term::Kind::App: {
      std::vector<Term> args;
      args.reserve(t.args().size());
      for (const auto& a : t.args()) args.push_back(rename_term(a, env));
      return Term::app(t.name(), std::move(args));
    }
  }
  return t;
}

// Bound variables renamed to $<depth>; $ is not a legal identifier character,
// so renamed variables can never clash with free ones.
Formula canonical_rename(const Formula& f, std::size_t depth,
                         std::map<std::string, std::string>& env) {
  switch (f.kind()) {
    case Formula::Kind::Atom: {
      std::vector<Term> args;
      args.reserve(f.terms().size());
      for (const auto& t : f.terms()) args.push_back(rename_term(t, env));
      return Formula::atom(f.pred(), std::move(args));
    }
    case Formula::Kind::Eq:
      return Formula::eq(rename_term(f.terms()[0], env),
                         rename_term(f.terms()[1], env));
    case Formula::Kind::Neg:
      return Formula::neg(canonical_rename(f.child(), depth, env));
    case Formula::Kind::Cons:
      return Formula::cons(canonical_rename(f.child(), depth, env));
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Imp:
      return Formula::binary(f.kind(), canonical_rename(f.lhs(), depth, env),
                             canonical_rename(f.rhs(), depth, env));
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: {
      std::string fresh = "$" + std::to_string(depth);
      auto it = env.find(f.bound_var());
      std::optional<std::string> saved;
      if (it != env.end()) saved = it->second;
      env[f.bound_var()] = fresh;
      Formula body = canonical_rename(f.body(), depth + 1, env);
      if (saved)
        env[f.bound_var()] = *saved;
      else
        env.erase(f.bound_var());
      return Formula::quantifier(f.kind(), fresh, std::move(body));
    }
  }
  return f;
}

}  // namespace

Formula variant_normal_form(const Formula& f) {
  Formula stripped = drop_void_quantifiers(f);
  std::map<std::string, std::string> env;
  return canonical_rename(stripped, 0, env);
}

bool is_variant(const Formula& a, const Formula& b) {
  return variant_normal_form(a) == variant_normal_form(b);
}

Formula universal_closure(const Formula& f) {
  auto ordered = free_vars_ordered(f);
  Formula out = f;
  for (auto it = ordered.rbegin(); it != ordered.rend(); ++it)
    out = Formula::forall(*it, std::move(out));
  return out;
}

Formula derived_bottom(const Formula& beta) {
  return Formula::conj(beta,
                       Formula::conj(Formula::neg(beta), Formula::cons(beta)));
}

Formula derived_strong_neg(const Formula& alpha, const Formula& beta) {
  return Formula::imp(alpha, derived_bottom(beta));
}

Formula make_iff(const Formula& a, const Formula& b) {
  return Formula::conj(Formula::imp(a, b), Formula::imp(b, a));
}

// ---- Partial replacement ----

namespace {

bool term_replace_walk(const Term& a, const Term& b, const std::string& x,
                       const std::string& y,
                       const std::set<std::string>& bound) {
  if (a.kind() == Term::Kind::Var && a.name() == x && !bound.count(x)) {
    return b.kind() == Term::Kind::Var && (b.name() == x || b.name() == y);
  }
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Term::Kind::Var:
    case Term::Kind::Const: return a.name() == b.name();
    case Term::Kind::DomainConst: return a.domain_index() == b.domain_index();
    case Term::Kind::App: {
      if (a.name() != b.name() || a.args().size() != b.args().size())
        return false;
      for (std::size_t i = 0; i < a.args().size(); ++i)
        if (!term_replace_walk(a.args()[i], b.args()[i], x, y, bound))
          return false;
      return true;
    }
  }
  return false;
}

bool replace_walk(const Formula& a, const Formula& b, const std::string& x,
                  const std::string& y, std::set<std::string>& bound) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Formula::Kind::Atom:
      if (a.pred() != b.pred() || a.terms().size() != b.terms().size())
        return false;
      [[fallthrough]];
    case Formula::Kind::Eq:
      if (a.terms().size() != b.terms().size()) return false;
      for (std::size_t i = 0; i < a.terms().size(); ++i)
        if (!term_replace_walk(a.terms()[i], b.terms()[i], x, y, bound))
          return false;
      return true;
    case Formula::Kind::Neg:
    case Formula::Kind::Cons:
      return replace_walk(a.child(), b.child(), x, y, bound);
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Imp:
      return replace_walk(a.lhs(), b.lhs(), x, y, bound) &&
             replace_walk(a.rhs(), b.rhs(), x, y, bound);
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: {
      if (a.bound_var() != b.bound_var()) return false;
      bool inserted = bound.insert(a.bound_var()).second;
      bool ok = replace_walk(a.body(), b.body(), x, y, bound);
      if (inserted) bound.erase(a.bound_var());
      return ok;
    }
  }
  return false;
}

bool term_domain_replace_walk(const Term& a, const Term& b, std::size_t da,
                              std::size_t db) {
  if (a.kind() == Term::Kind::DomainConst && a.domain_index() == da) {
    return b.kind() == Term::Kind::DomainConst &&
           (b.domain_index() == da || b.domain_index() == db);
  }
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Term::Kind::Var:
    case Term::Kind::Const: return a.name() == b.name();
    case Term::Kind::DomainConst: return a.domain_index() == b.domain_index();
    case Term::Kind::App: {
      if (a.name() != b.name() || a.args().size() != b.args().size())
        return false;
      for (std::size_t i = 0; i < a.args().size(); ++i)
        if (!term_domain_replace_walk(a.args()[i], b.args()[i], da, db))
          return false;
      return true;
    }
  }
  return false;
}

bool domain_replace_walk(const Formula& a, const Formula& b, std::size_t da,
                         std::size_t db) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Formula::Kind::Atom:
      if (a.pred() != b.pred()) return false;
      [[fallthrough]];
    case Formula::Kind::Eq:
      if (a.terms().size() != b.terms().size()) return false;
      for (std::size_t i = 0; i < a.terms().size(); ++i)
        if (!term_domain_replace_walk(a.terms()[i], b.terms()[i], da, db))
          return false;
      return true;
    case Formula::Kind::Neg:
    case Formula::Kind::Cons:
      return domain_replace_walk(a.child(), b.child(), da, db);
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Imp:
      return domain_replace_walk(a.lhs(), b.lhs(), da, db) &&
             domain_replace_walk(a.rhs(), b.rhs(), da, db);
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
      if (a.bound_var() != b.bound_var()) return false;
      return domain_replace_walk(a.body(), b.body(), da, db);
  }
  return false;
}

}  // namespace

bool partial_replace_ok(const Formula& f, const Formula& candidate,
                        const std::string& x, const std::string& y) {
  std::set<std::string> bound;
  return replace_walk(f, candidate, x, y, bound);
}

bool partial_domain_replace_ok(const Formula& f, const Formula& candidate,
                               std::size_t a, std::size_t b) {
  return domain_replace_walk(f, candidate, a, b);
}

std::vector<Formula> subformulas(const Formula& f) {
  std::vector<Formula> out;
  auto seen_has = [&out](const Formula& g) {
    return std::any_of(out.begin(), out.end(),
                       [&g](const Formula& h) { return h == g; });
  };
  auto walk = [&](auto&& self, const Formula& g) -> void {
    switch (g.kind()) {
      case Formula::Kind::Atom:
      case Formula::Kind::Eq: break;
      case Formula::Kind::Neg:
      case Formula::Kind::Cons: self(self, g.child()); break;
      case Formula::Kind::And:
      case Formula::Kind::Or:
      case Formula::Kind::Imp:
        self(self, g.lhs());
        self(self, g.rhs());
        break;
      case Formula::Kind::Forall:
      case Formula::Kind::Exists: self(self, g.body()); break;
    }
    if (!seen_has(g)) out.push_back(g);
  };
  walk(walk, f);
  return out;
}

}  // namespace lfikit
