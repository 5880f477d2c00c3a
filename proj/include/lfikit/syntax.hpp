#ifndef LFIKIT_SYNTAX_HPP
#define LFIKIT_SYNTAX_HPP

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace lfikit {

// First-order syntax over the connective set {&, |, ->, ~, *} plus the two
// quantifiers. Terms and formulas are immutable values sharing their
// representation; copies are cheap and every operation here is pure.
//
// Domain constants (written @k) name elements of a model's universe. They
// live in a reserved lexical namespace so user signatures cannot collide
// with them.

struct SyntaxError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CaptureError : SyntaxError {
  using SyntaxError::SyntaxError;
};

struct ParseError : SyntaxError {
  ParseError(const std::string& msg, std::size_t offset)
      : SyntaxError(msg + " at offset " + std::to_string(offset)),
        offset(offset) {}
  std::size_t offset;
};

class Signature {
public:
  Signature() = default;

  static Signature propositional(const std::vector<std::string>& atoms);

  void add_constant(const std::string& name);
  void add_function(const std::string& name, unsigned arity);  // arity >= 1
  void add_predicate(const std::string& name, unsigned arity);
  void set_equality(bool on) { has_equality_ = on; }

  bool is_constant(const std::string& name) const;
  std::optional<unsigned> function_arity(const std::string& name) const;
  std::optional<unsigned> predicate_arity(const std::string& name) const;
  bool has_equality() const { return has_equality_; }

  const std::set<std::string>& constants() const { return constants_; }
  const std::map<std::string, unsigned>& functions() const { return functions_; }
  const std::map<std::string, unsigned>& predicates() const { return predicates_; }

private:
  void check_fresh(const std::string& name) const;

  std::set<std::string> constants_;
  std::map<std::string, unsigned> functions_;
  std::map<std::string, unsigned> predicates_;
  bool has_equality_ = false;
};

class Term {
public:
  enum class Kind { Var, Const, DomainConst, App };

  static Term var(std::string name);
  static Term constant(std::string name);
  static Term domain_const(std::size_t index);
  static Term app(std::string fn, std::vector<Term> args);

  Kind kind() const { return rep_->kind; }
  const std::string& name() const { return rep_->name; }
  std::size_t domain_index() const { return rep_->index; }
  const std::vector<Term>& args() const { return rep_->args; }

  bool is_closed() const;  // no variables

  friend bool operator==(const Term& a, const Term& b) {
    return compare(a, b) == 0;
  }
  friend bool operator<(const Term& a, const Term& b) {
    return compare(a, b) < 0;
  }
  static int compare(const Term& a, const Term& b);

private:
  struct Rep {
    Kind kind;
    std::string name;
    std::size_t index = 0;
    std::vector<Term> args;
  };
  explicit Term(std::shared_ptr<const Rep> rep) : rep_(std::move(rep)) {}
  std::shared_ptr<const Rep> rep_;
};

class Formula {
public:
  enum class Kind { Atom, Eq, Neg, Cons, And, Or, Imp, Forall, Exists };

  static Formula atom(std::string pred, std::vector<Term> args = {});
  static Formula eq(Term lhs, Term rhs);
  static Formula neg(Formula f);
  static Formula cons(Formula f);  // the consistency connective *
  static Formula conj(Formula l, Formula r);
  static Formula disj(Formula l, Formula r);
  static Formula imp(Formula l, Formula r);
  static Formula forall(std::string var, Formula body);
  static Formula exists(std::string var, Formula body);
  static Formula binary(Kind k, Formula l, Formula r);
  static Formula quantifier(Kind k, std::string var, Formula body);

  Kind kind() const { return rep_->kind; }
  bool is_binary() const {
    return kind() == Kind::And || kind() == Kind::Or || kind() == Kind::Imp;
  }
  bool is_unary() const { return kind() == Kind::Neg || kind() == Kind::Cons; }
  bool is_quantifier() const {
    return kind() == Kind::Forall || kind() == Kind::Exists;
  }

  const std::string& pred() const { return rep_->name; }       // Atom
  const std::vector<Term>& terms() const { return rep_->terms; } // Atom, Eq
  const Formula& child() const { return rep_->children[0]; }   // Neg, Cons
  const Formula& lhs() const { return rep_->children[0]; }     // binary
  const Formula& rhs() const { return rep_->children[1]; }
  const std::string& bound_var() const { return rep_->name; }  // quantifier
  const Formula& body() const { return rep_->children[0]; }

  friend bool operator==(const Formula& a, const Formula& b) {
    return compare(a, b) == 0;
  }
  friend bool operator!=(const Formula& a, const Formula& b) {
    return compare(a, b) != 0;
  }
  friend bool operator<(const Formula& a, const Formula& b) {
    return compare(a, b) < 0;
  }
  static int compare(const Formula& a, const Formula& b);

private:
  struct Rep {
    Kind kind;
    std::string name;  // predicate or bound variable
    std::vector<Term> terms;
    std::vector<Formula> children;
  };
  explicit Formula(std::shared_ptr<const Rep> rep) : rep_(std::move(rep)) {}
  std::shared_ptr<const Rep> rep_;
};

// A variable assignment: free variables to domain-element indices.
using Assignment = std::map<std::string, std::size_t>;

// ---- Syntactic operations ----

std::set<std::string> term_vars(const Term& t);
void term_vars_into(const Term& t, std::set<std::string>& out);

std::set<std::string> free_vars(const Formula& f);
// Free variables in order of first (free) occurrence, left to right.
std::vector<std::string> free_vars_ordered(const Formula& f);

bool is_sentence(const Formula& f);
// True when the formula uses only nullary atoms: no quantifiers, no equality,
// no terms.
bool is_propositional(const Formula& f);

// t is free for x in f: no variable of t gets captured at a free occurrence
// of x.
bool is_free_for(const Term& t, const std::string& x, const Formula& f);

Term substitute_in_term(const Term& t, const std::string& x, const Term& repl);

// f[x/t]; throws CaptureError unless is_free_for(t, x, f).
Formula substitute(const Formula& f, const std::string& x, const Term& t);

// Variant relation: equality up to insertion/deletion of void quantifiers and
// renaming of bound variables. Decided via a normal form (void quantifiers
// removed bottom-up, bound variables renamed canonically by binder depth).
Formula variant_normal_form(const Formula& f);
bool is_variant(const Formula& a, const Formula& b);

// Universally quantifies the free variables in first-occurrence order;
// identity on sentences.
Formula universal_closure(const Formula& f);

// Derived connectives.
Formula derived_bottom(const Formula& beta);                    // beta & (~beta & *beta)
Formula derived_strong_neg(const Formula& alpha, const Formula& beta);
Formula make_iff(const Formula& a, const Formula& b);

// True iff `candidate` can be obtained from f by replacing some (possibly
// none, possibly all) free occurrences of x by y. Precondition: y free for x
// in f.
bool partial_replace_ok(const Formula& f, const Formula& candidate,
                        const std::string& x, const std::string& y);

// Same relation on ground sentences, replacing occurrences of domain
// constant @a by @b.
bool partial_domain_replace_ok(const Formula& f, const Formula& candidate,
                               std::size_t a, std::size_t b);

// Collects all subformulas (children before parents, deduplicated,
// first-encounter order).
std::vector<Formula> subformulas(const Formula& f);

// ---- Parser / printer ----

struct ParseOptions {
  // When set, undeclared identifiers in formula position become predicates
  // (arity inferred from use) instead of errors. Used by the CLI for
  // propositional input where atoms need no signature.
  bool auto_declare_predicates = false;
};

Formula parse_formula(std::string_view text, const Signature& sig,
                      ParseOptions opts = {});
Term parse_term(std::string_view text, const Signature& sig);

std::string to_string(const Term& t);
std::string to_string(const Formula& f);

}  // namespace lfikit

#endif
