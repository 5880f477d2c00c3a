#ifndef LFIKIT_PROP_HPP
#define LFIKIT_PROP_HPP

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "lfikit/swap.hpp"
#include "lfikit/syntax.hpp"

namespace lfikit {

// Propositional consequence over swap Nmatrices, decided on the subformula
// closure: a valuation picks one snapshot per closure member, constrained by
// the multioperations. A legal assignment on a subformula-closed set extends
// to a valuation on all formulas (standard Nmatrix analyticity), so closure
// search decides consequence.

struct PropError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// All subformulas of the inputs, children first, deduplicated, deterministic.
// Throws PropError on non-propositional input.
std::vector<Formula> closure(const std::vector<Formula>& formulas);

class PropValuation {
public:
  PropValuation(std::shared_ptr<const SwapNmatrix> matrix,
                std::vector<Formula> formulas, std::vector<std::size_t> values);

  const SwapNmatrix& matrix() const { return *matrix_; }
  const std::vector<Formula>& formulas() const { return formulas_; }
  std::size_t value_index(const Formula& f) const;
  const Snapshot& value(const Formula& f) const;
  bool designated(const Formula& f) const;

  // Re-checks the defining constraints on the closure.
  bool legal() const;

private:
  std::shared_ptr<const SwapNmatrix> matrix_;
  std::vector<Formula> formulas_;           // closure order
  std::vector<std::size_t> values_;         // snapshot indices
  std::map<Formula, std::size_t> position_;
};

struct PropVerdict {
  bool holds = true;
  std::optional<PropValuation> countermodel;
};

// Backtracking search for a valuation designating all premises but not the
// goal. Snapshots are tried in the matrix's canonical order; the first
// countermodel in that order is returned.
PropVerdict prop_consequence(const std::vector<Formula>& premises,
                             const Formula& goal,
                             std::shared_ptr<const SwapNmatrix> matrix);

bool is_valid(const Formula& f, std::shared_ptr<const SwapNmatrix> matrix);

// ---- Bivaluations ----
//
// Two-valued non-truth-functional semantics for the same logic. A bivaluation
// satisfies, wherever the participating formulas are present in its domain:
//   (vAnd)  r(a & b) = 1  iff  r(a) = r(b) = 1
//   (vOr)   r(a | b) = 1  iff  r(a) = 1 or r(b) = 1
//   (vImp)  r(a -> b) = 1 iff  r(a) = 0 or r(b) = 1
//   (vNeg)  r(~a) = 0  implies  r(a) = 1
//   (vCon)  r(*a) = 1  implies  r(a) = 0 or r(~a) = 0

class Bivaluation {
public:
  explicit Bivaluation(std::map<Formula, bool> values)
      : values_(std::move(values)) {}

  const std::map<Formula, bool>& values() const { return values_; }
  bool defined(const Formula& f) const { return values_.count(f) != 0; }
  bool operator()(const Formula& f) const;

private:
  std::map<Formula, bool> values_;
};

// Checks the five clauses pointwise on the bivaluation's domain.
bool check_bivaluation(const Bivaluation& rho);

// Closure of the inputs under subformulas plus one layer of ~ and * over
// every member; this is the domain a bivaluation needs for the translation
// into a five-valued valuation.
std::vector<Formula> neg_cons_closure(const std::vector<Formula>& formulas);

// The translation: v(a) = (r(a), r(~a), r(*a)) on every member whose ~/*
// companions are defined. Throws PropError (IllegalBivaluation) when rho
// fails check_bivaluation or a triple falls outside the five-valued domain.
PropValuation bival_to_valuation(const Bivaluation& rho);

struct BivalVerdict {
  bool holds = true;
  std::optional<Bivaluation> countermodel;
};

// Consequence via exhaustive search over bivaluations on the closure.
BivalVerdict bival_consequence(const std::vector<Formula>& premises,
                               const Formula& goal);

// Enumerates bivaluations on the neg/cons closure of the given formulas,
// calling the visitor for each; stops early when the visitor returns false.
// Used by tests and for random sampling (the choices vector, when non-null,
// is filled with rng-driven decisions instead of full enumeration).
void for_each_bivaluation(const std::vector<Formula>& base,
                          const std::function<bool(const Bivaluation&)>& visit);

// One pseudo-random valid bivaluation on the neg/cons closure.
Bivaluation random_bivaluation(const std::vector<Formula>& base,
                               std::uint64_t seed);

}  // namespace lfikit

#endif
