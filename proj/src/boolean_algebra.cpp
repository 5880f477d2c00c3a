#include "lfikit/boolean_algebra.hpp"

namespace lfikit {

namespace {

void check_same(const BAElement& x, const BAElement& y) {
  if (x.atoms() != y.atoms())
    throw AlgebraError("elements belong to different algebras (" +
                       std::to_string(x.atoms()) + " vs " +
                       std::to_string(y.atoms()) + " atoms)");
}

}  // namespace

std::vector<unsigned> BAElement::atom_list() const {
  std::vector<unsigned> out;
  for (unsigned i = 0; i < atoms_; ++i)
    if (bits_ & (std::uint32_t(1) << i)) out.push_back(i);
  return out;
}

FiniteBooleanAlgebra::FiniteBooleanAlgebra(unsigned atom_count)
    : atoms_(atom_count) {
  if (atom_count > kMaxAtoms)
    throw AlgebraError("atom count " + std::to_string(atom_count) +
                       " exceeds cap of " + std::to_string(kMaxAtoms));
  mask_ = atom_count == 0 ? 0 : (std::uint32_t(1) << atom_count) - 1;
}

BAElement FiniteBooleanAlgebra::atom(unsigned i) const {
  if (i >= atoms_) throw AlgebraError("atom index out of range");
  return {std::uint32_t(1) << i, atoms_};
}

BAElement FiniteBooleanAlgebra::element(std::uint32_t bits) const {
  if (bits & ~mask_) throw AlgebraError("element bits outside algebra");
  return {bits, atoms_};
}

BAElement FiniteBooleanAlgebra::from_atom_list(
    const std::vector<unsigned>& idx) const {
  std::uint32_t bits = 0;
  for (unsigned i : idx) {
    if (i >= atoms_) throw AlgebraError("atom index out of range");
    bits |= std::uint32_t(1) << i;
  }
  return {bits, atoms_};
}

BAElement meet(const BAElement& x, const BAElement& y) {
  check_same(x, y);
  return {x.bits() & y.bits(), x.atoms()};
}

BAElement join(const BAElement& x, const BAElement& y) {
  check_same(x, y);
  return {x.bits() | y.bits(), x.atoms()};
}

BAElement complement(const BAElement& x) {
  std::uint32_t mask =
      x.atoms() == 0 ? 0 : (std::uint32_t(1) << x.atoms()) - 1;
  return {~x.bits() & mask, x.atoms()};
}

BAElement imp(const BAElement& x, const BAElement& y) {
  return join(complement(x), y);
}

bool leq(const BAElement& x, const BAElement& y) {
  check_same(x, y);
  return (x.bits() & ~y.bits()) == 0;
}

BAElement big_meet(const FiniteBooleanAlgebra& alg,
                   std::span<const BAElement> xs) {
  BAElement acc = alg.top();
  for (const auto& x : xs) acc = meet(acc, x);
  return acc;
}

BAElement big_join(const FiniteBooleanAlgebra& alg,
                   std::span<const BAElement> xs) {
  BAElement acc = alg.bottom();
  for (const auto& x : xs) acc = join(acc, x);
  return acc;
}

std::string to_string(const BAElement& x) {
  std::string out = "{";
  bool first = true;
  for (unsigned i : x.atom_list()) {
    if (!first) out += ",";
    out += std::to_string(i);
    first = false;
  }
  out += "}";
  return out;
}

}  // namespace lfikit
