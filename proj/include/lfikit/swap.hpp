#ifndef LFIKIT_SWAP_HPP
#define LFIKIT_SWAP_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lfikit/boolean_algebra.hpp"

namespace lfikit {

// Swap structures: multialgebras over triples of Boolean-algebra elements.
// A snapshot (z1, z2, z3) simultaneously tracks a value for a formula, for
// its paraconsistent negation, and for its consistency, subject to
// z1 v z2 = 1 and z1 ^ z2 ^ z3 = 0. The full swap structure over an algebra
// takes, for each operation, the largest output set compatible with the
// first-projection laws; the induced Nmatrix designates the snapshots whose
// first coordinate is the top element.

struct SwapError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Snapshot {
  BAElement truth;        // value of the formula itself
  BAElement negation;     // a value for its negation
  BAElement consistency;  // a value for its consistency

  friend bool operator==(const Snapshot&, const Snapshot&) = default;
  friend auto operator<=>(const Snapshot&, const Snapshot&) = default;
};

bool snapshot_constraints_hold(const FiniteBooleanAlgebra& alg,
                               const Snapshot& s);

// All snapshots over the algebra, ordered by the (z1, z2, z3) word encodings.
// The count is 5^atoms.
std::vector<Snapshot> swap_domain(const FiniteBooleanAlgebra& alg);

enum class BinConn { And, Or, Imp };
enum class UnConn { Neg, Cons };

// A restriction of the full swap structure: a sub-domain and explicit
// multioperation tables over it.
struct SwapRestriction {
  std::vector<Snapshot> domain;
  // key: operation + operand positions within `domain`
  std::map<std::pair<BinConn, std::pair<std::size_t, std::size_t>>,
           std::vector<std::size_t>>
      binary;
  std::map<std::pair<UnConn, std::size_t>, std::vector<std::size_t>> unary;
};

class SwapNmatrix {
public:
  static SwapNmatrix full(const FiniteBooleanAlgebra& alg);
  static SwapNmatrix m5();

  // Validates a restriction: nonempty outputs, outputs within the stated
  // domain, first-projection laws, snapshot constraints. Throws SwapError
  // with a specific message on violation.
  static SwapNmatrix restricted(const FiniteBooleanAlgebra& alg,
                                const SwapRestriction& r);

  const FiniteBooleanAlgebra& algebra() const { return algebra_; }
  const std::vector<Snapshot>& domain() const { return domain_; }
  std::size_t size() const { return domain_.size(); }

  std::size_t index_of(const Snapshot& s) const;  // throws if absent
  std::optional<std::size_t> find(const Snapshot& s) const;

  bool designated(std::size_t i) const {
    return domain_[i].truth == algebra_.top();
  }
  std::vector<std::size_t> designated_indices() const;

  // Multioperations, as sorted index sets into domain().
  const std::vector<std::size_t>& binary(BinConn op, std::size_t x,
                                         std::size_t y) const;
  const std::vector<std::size_t>& unary(UnConn op, std::size_t x) const;

  bool is_full() const { return full_; }

  // Value names are attached for the five-valued matrix ("T", "t", "t0",
  // "F", "f0"); elsewhere a snapshot prints as its coordinate triple.
  std::string value_name(std::size_t i) const;

private:
  SwapNmatrix(FiniteBooleanAlgebra alg, std::vector<Snapshot> domain, bool full)
      : algebra_(alg), domain_(std::move(domain)), full_(full) {}

  FiniteBooleanAlgebra algebra_;
  std::vector<Snapshot> domain_;
  bool full_;
  std::vector<std::string> names_;

  // Tables for restricted structures; memoized outputs for full ones.
  std::map<std::pair<BinConn, std::pair<std::size_t, std::size_t>>,
           std::vector<std::size_t>>
      binary_table_;
  std::map<std::pair<UnConn, std::size_t>, std::vector<std::size_t>> unary_table_;
  mutable std::map<std::pair<int, std::pair<std::size_t, std::size_t>>,
                   std::vector<std::size_t>>
      memo_;
};

std::string to_string(const Snapshot& s);

// First-coordinate law for the binary connectives.
BAElement bin_conn_apply(BinConn op, const BAElement& x, const BAElement& y);

}  // namespace lfikit

#endif
