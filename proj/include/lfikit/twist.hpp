#ifndef LFIKIT_TWIST_HPP
#define LFIKIT_TWIST_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lfikit/boolean_algebra.hpp"
#include "lfikit/syntax.hpp"

namespace lfikit {

// Twist structures: the deterministic degenerate case of swap structures.
// A pair (z1, z2) with z1 v z2 = 1 carries the evidence for a formula and
// the evidence against it; all five operations are single-valued, so
// evaluation is an ordinary homomorphism. Over the two-element algebra the
// twist matrix collapses to the familiar three-valued matrix with values
// 1 = (1,0), 1/2 = (1,1), 0 = (0,1) and designated {1, 1/2}.

struct TwistError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TwistPair {
  BAElement truth;     // z1
  BAElement negation;  // z2

  friend bool operator==(const TwistPair&, const TwistPair&) = default;
  friend auto operator<=>(const TwistPair&, const TwistPair&) = default;
};

class TwistMatrix {
public:
  static TwistMatrix over(const FiniteBooleanAlgebra& alg);
  static TwistMatrix lfi1();  // over the two-element algebra, with value names

  const FiniteBooleanAlgebra& algebra() const { return algebra_; }
  const std::vector<TwistPair>& domain() const { return domain_; }
  std::size_t size() const { return domain_.size(); }

  std::size_t index_of(const TwistPair& p) const;
  std::optional<std::size_t> find(const TwistPair& p) const;

  bool designated(const TwistPair& p) const {
    return p.truth == algebra_.top();
  }
  bool designated(std::size_t i) const { return designated(domain_[i]); }

  TwistPair op_and(const TwistPair& a, const TwistPair& b) const;
  TwistPair op_or(const TwistPair& a, const TwistPair& b) const;
  TwistPair op_imp(const TwistPair& a, const TwistPair& b) const;
  TwistPair op_neg(const TwistPair& a) const;
  TwistPair op_cons(const TwistPair& a) const;

  std::string value_name(const TwistPair& p) const;
  std::string value_name(std::size_t i) const { return value_name(domain_[i]); }

private:
  TwistMatrix(FiniteBooleanAlgebra alg, std::vector<TwistPair> domain)
      : algebra_(alg), domain_(std::move(domain)) {}

  void check(const TwistPair& p) const;

  FiniteBooleanAlgebra algebra_;
  std::vector<TwistPair> domain_;
  std::vector<std::string> names_;
};

// All pairs with z1 v z2 = 1 over the algebra, ordered by word encodings;
// the count is 3^atoms.
std::vector<TwistPair> twist_domain(const FiniteBooleanAlgebra& alg);

// Homomorphic evaluation of a propositional formula. Throws TwistError on an
// unmapped atom or non-propositional input.
TwistPair eval_twist(const Formula& f,
                     const std::map<std::string, TwistPair>& atoms,
                     const TwistMatrix& m);

struct TwistVerdict {
  bool holds = true;
  // Falsifying atom map, present when holds is false.
  std::map<std::string, TwistPair> countermodel;
};

// Exhaustive consequence check over all atom maps into the twist domain.
// Deterministic: atoms in name order, values in domain order, first
// countermodel returned.
TwistVerdict twist_consequence(const std::vector<Formula>& premises,
                               const Formula& goal, const TwistMatrix& m);

std::string to_string(const TwistPair& p);

}  // namespace lfikit

#endif
