#ifndef LFIKIT_BOOLEAN_ALGEBRA_HPP
#define LFIKIT_BOOLEAN_ALGEBRA_HPP

#include <compare>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace lfikit {

// Finite Boolean algebras are realized as powerset algebras on a fixed set of
// atoms. Elements are atom subsets packed into a machine word; every finite
// Boolean algebra is isomorphic to one of these, and finiteness gives us all
// infima/suprema for free.

struct AlgebraError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class BAElement {
public:
  BAElement() = default;
  BAElement(std::uint32_t bits, unsigned atoms) : bits_(bits), atoms_(atoms) {}

  std::uint32_t bits() const { return bits_; }
  unsigned atoms() const { return atoms_; }

  std::vector<unsigned> atom_list() const;

  friend bool operator==(const BAElement&, const BAElement&) = default;
  friend auto operator<=>(const BAElement& a, const BAElement& b) {
    if (auto c = a.atoms_ <=> b.atoms_; c != 0) return c;
    return a.bits_ <=> b.bits_;
  }

private:
  std::uint32_t bits_ = 0;
  unsigned atoms_ = 0;
};

class FiniteBooleanAlgebra {
public:
  static constexpr unsigned kMaxAtoms = 16;

  explicit FiniteBooleanAlgebra(unsigned atom_count);

  static FiniteBooleanAlgebra two() { return FiniteBooleanAlgebra(1); }

  unsigned atoms() const { return atoms_; }
  std::size_t size() const { return std::size_t(1) << atoms_; }
  std::uint32_t mask() const { return mask_; }

  BAElement bottom() const { return {0, atoms_}; }
  BAElement top() const { return {mask_, atoms_}; }
  BAElement atom(unsigned i) const;
  BAElement element(std::uint32_t bits) const;
  BAElement from_atom_list(const std::vector<unsigned>& idx) const;

  bool contains(const BAElement& x) const {
    return x.atoms() == atoms_ && (x.bits() & ~mask_) == 0;
  }

  friend bool operator==(const FiniteBooleanAlgebra&,
                         const FiniteBooleanAlgebra&) = default;

private:
  unsigned atoms_;
  std::uint32_t mask_;
};

BAElement meet(const BAElement& x, const BAElement& y);
BAElement join(const BAElement& x, const BAElement& y);
BAElement complement(const BAElement& x);
BAElement imp(const BAElement& x, const BAElement& y);
bool leq(const BAElement& x, const BAElement& y);

// Empty families yield top (infimum) and bottom (supremum).
BAElement big_meet(const FiniteBooleanAlgebra& alg, std::span<const BAElement> xs);
BAElement big_join(const FiniteBooleanAlgebra& alg, std::span<const BAElement> xs);

std::string to_string(const BAElement& x);

}  // namespace lfikit

#endif
