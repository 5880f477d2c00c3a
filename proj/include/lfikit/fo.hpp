#ifndef LFIKIT_FO_HPP
#define LFIKIT_FO_HPP

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lfikit/swap.hpp"
#include "lfikit/syntax.hpp"
#include "lfikit/twist.hpp"

namespace lfikit {

// First-order structures over a swap Nmatrix or a twist matrix: a finite
// universe, total interpretation tables for constants/functions/predicates,
// and optionally a standard equality table (designated exactly on the
// diagonal).
//
// Sentences of the diagram language are kept canonical: free variables are
// replaced by domain constants @k and every closed term is collapsed to the
// constant naming its denotation. Substitution coherence then holds
// syntactically, which is what makes the closure-level treatment of the
// swap-mode valuation clauses sound.

struct FOError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ClosureCapError : FOError {
  using FOError::FOError;
};

enum class SemanticsKind { Swap, Twist };
enum class EqualityDefault { Classical, Mid };

struct FunctionTable {
  unsigned arity = 1;
  std::vector<std::size_t> values;  // |U|^arity entries, row-major
};

struct PredicateTable {
  unsigned arity = 1;
  std::vector<std::size_t> values;  // indices into the matrix domain
};

struct FOStructureData {
  Signature signature;
  SemanticsKind kind = SemanticsKind::Twist;
  unsigned algebra_atoms = 1;
  std::vector<std::string> domain;
  std::map<std::string, std::size_t> constants;
  std::map<std::string, FunctionTable> functions;
  std::map<std::string, PredicateTable> predicates;
  std::optional<PredicateTable> equality;
};

class FOStructure {
public:
  // Validates totality of all tables, value ranges and, when equality is
  // present, standardness. Swap structures are always full.
  explicit FOStructure(FOStructureData data);

  SemanticsKind kind() const { return data_.kind; }
  const Signature& signature() const { return data_.signature; }
  const std::vector<std::string>& domain() const { return data_.domain; }
  std::size_t universe_size() const { return data_.domain.size(); }
  const FiniteBooleanAlgebra& algebra() const;

  const std::shared_ptr<const SwapNmatrix>& swap_matrix() const { return swap_; }
  const std::shared_ptr<const TwistMatrix>& twist_matrix() const { return twist_; }

  std::size_t constant_value(const std::string& name) const;
  std::size_t function_value(const std::string& name,
                             const std::vector<std::size_t>& args) const;
  // Index into the matrix domain.
  std::size_t predicate_value(const std::string& name,
                              const std::vector<std::size_t>& args) const;
  std::size_t equality_value(std::size_t a, std::size_t b) const;
  bool has_equality() const { return data_.equality.has_value(); }

  bool value_designated(std::size_t matrix_index) const;
  BAElement value_truth(std::size_t matrix_index) const;  // first coordinate
  std::string value_name(std::size_t matrix_index) const;
  std::size_t matrix_size() const;

  const FOStructureData& data() const { return data_; }

private:
  FOStructureData data_;
  std::shared_ptr<const SwapNmatrix> swap_;
  std::shared_ptr<const TwistMatrix> twist_;
};

// Default equality tables. `matrix_index_of` failures cannot happen for full
// matrices, which is all FOStructure admits.
PredicateTable make_equality_table(SemanticsKind kind, const FOStructure& like,
                                   EqualityDefault which);
PredicateTable make_equality_table(SemanticsKind kind,
                                   const SwapNmatrix* swap,
                                   const TwistMatrix* twist,
                                   std::size_t universe,
                                   EqualityDefault which);

// Designated exactly on the diagonal.
bool check_standard_equality(const FOStructure& s);

// ---- Terms and canonical sentences ----

std::size_t eval_term(const FOStructure& s, const Assignment& mu, const Term& t);

class GroundSentence {
public:
  const Formula& formula() const { return formula_; }
  friend bool operator==(const GroundSentence& a, const GroundSentence& b) {
    return a.formula_ == b.formula_;
  }
  friend bool operator<(const GroundSentence& a, const GroundSentence& b) {
    return a.formula_ < b.formula_;
  }

private:
  explicit GroundSentence(Formula f) : formula_(std::move(f)) {}
  friend GroundSentence canonicalize(const FOStructure&, const Formula&,
                                     const Assignment&);
  friend std::vector<GroundSentence> ground_closure(
      const FOStructure&, const std::vector<GroundSentence>&, std::size_t);
  Formula formula_;
};

// Replaces free variables by domain constants per the assignment, then
// collapses every closed term to the constant of its denotation.
GroundSentence canonicalize(const FOStructure& s, const Formula& f,
                            const Assignment& mu);

// ---- Twist-mode (deterministic) interpretation ----

TwistPair qlfi1_interpret(const FOStructure& s, const GroundSentence& sigma);

struct QLFI1Verdict {
  bool holds = true;
  // When false: the goal, a falsifying assignment and the value it got.
  Assignment assignment;
  std::optional<TwistPair> value;
};

QLFI1Verdict qlfi1_consequence(const std::vector<Formula>& premises,
                               const Formula& goal, const FOStructure& s);

// ---- Swap-mode valuation search ----

inline constexpr std::size_t kDefaultClosureCap = 20000;

// Closure under subformulas, with quantified members contributing all their
// instances over the universe. Children-first, deduplicated up to the
// variant relation.
std::vector<GroundSentence> ground_closure(
    const FOStructure& s, const std::vector<GroundSentence>& roots,
    std::size_t cap = kDefaultClosureCap);

class FOValuation {
public:
  FOValuation(const FOStructure* s, std::vector<Formula> sentences,
              std::vector<Formula> keys, std::vector<std::size_t> values);

  const std::vector<Formula>& sentences() const { return sentences_; }
  std::size_t value_index(const Formula& ground_sentence) const;
  bool designated(const Formula& ground_sentence) const;
  std::size_t size() const { return sentences_.size(); }
  std::size_t value_at(std::size_t i) const { return values_[i]; }

  // Re-checks atoms against the tables, connective membership, the
  // quantifier first-coordinate laws and (when present) the equality clause.
  bool consistent() const;

  const FOStructure& structure() const { return *structure_; }

private:
  const FOStructure* structure_;
  std::vector<Formula> sentences_;  // representatives, closure order
  std::vector<Formula> keys_;       // variant normal forms
  std::vector<std::size_t> values_;
  std::map<Formula, std::size_t> position_;  // by key
};

// The ground equality clause: for closure members sigma, sigma' where
// sigma' replaces some occurrences of @a by @b, the valuation must satisfy
// eq(a,b)_1 ^ v(sigma)_1 <= v(sigma')_1.
bool satisfies_equality_clause(const FOValuation& v);
std::vector<FOValuation> qmbc_eq_filter(std::vector<FOValuation> vals);

struct QmbCVerdict {
  bool holds = true;
  std::optional<FOValuation> countermodel;  // closure-level witness
};

// Consequence per structure. Premises and goal are replaced by their
// universal closures first; the search runs over valuations on the ground
// closure.
QmbCVerdict qmbc_consequence(const std::vector<Formula>& premises,
                             const Formula& goal, const FOStructure& s,
                             std::size_t cap = kDefaultClosureCap);

// Enumerates legal valuations on the ground closure of the given roots
// (equality clause included), one per observable class: snapshot coordinates
// no connective or designation check ever reads are kept at their canonical
// representatives. The visitor returns false to stop.
void enumerate_qmbc_valuations(
    const FOStructure& s, const std::vector<GroundSentence>& roots,
    const std::function<bool(const FOValuation&)>& visit,
    std::size_t cap = kDefaultClosureCap);

// In swap mode a sentence has no single value; this reports every value the
// root can take across legal valuations of its closure.
std::vector<std::size_t> swap_attainable_values(const FOStructure& s,
                                                const GroundSentence& sigma,
                                                std::size_t cap = kDefaultClosureCap);

// ---- Tiny-model enumeration (desk-scale helper) ----

struct EnumerationLimits {
  std::size_t max_universe = 2;
  unsigned max_algebra_atoms = 1;
  std::size_t max_structures = 200000;
};

// All structures over the signature with the given universe size, algebra and
// semantics: every combination of constant, function and predicate tables.
// Equality, when the signature has it, uses the classical default.
std::vector<FOStructure> enumerate_structures(const Signature& sig,
                                              SemanticsKind kind,
                                              unsigned algebra_atoms,
                                              std::size_t universe_size,
                                              EnumerationLimits limits = {});

}  // namespace lfikit

#endif
