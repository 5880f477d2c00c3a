#include "lfikit/twist.hpp"

#include <algorithm>

namespace lfikit {

std::vector<TwistPair> twist_domain(const FiniteBooleanAlgebra& alg) {
  // z1 v z2 = 1 holds bitwise, so per atom the patterns are (1,0), (1,1),
  // (0,1); the domain is their n-fold product.
  static constexpr std::uint32_t kPatterns[3][2] = {{1, 0}, {1, 1}, {0, 1}};
  const unsigned n = alg.atoms();
  std::size_t count = 1;
  for (unsigned i = 0; i < n; ++i) count *= 3;
  std::vector<TwistPair> out;
  out.reserve(count);
  std::vector<unsigned> choice(n, 0);
  for (std::size_t k = 0; k < count; ++k) {
    std::uint32_t b1 = 0, b2 = 0;
    for (unsigned i = 0; i < n; ++i) {
      b1 |= kPatterns[choice[i]][0] << i;
      b2 |= kPatterns[choice[i]][1] << i;
    }
    out.push_back({alg.element(b1), alg.element(b2)});
    for (unsigned i = 0; i < n; ++i) {
      if (++choice[i] < 3) break;
      choice[i] = 0;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

TwistMatrix TwistMatrix::over(const FiniteBooleanAlgebra& alg) {
  return TwistMatrix(alg, twist_domain(alg));
}

TwistMatrix TwistMatrix::lfi1() {
  TwistMatrix m = over(FiniteBooleanAlgebra::two());
  m.names_.resize(m.domain_.size());
  auto name = [&m](std::uint32_t a, std::uint32_t b, const char* n) {
    m.names_[m.index_of({m.algebra_.element(a), m.algebra_.element(b)})] = n;
  };
  name(1, 0, "1");
  name(1, 1, "1/2");
  name(0, 1, "0");
  return m;
}

void TwistMatrix::check(const TwistPair& p) const {
  if (!algebra_.contains(p.truth) || !algebra_.contains(p.negation) ||
      join(p.truth, p.negation) != algebra_.top())
    throw TwistError("pair " + to_string(p) + " is not in the twist domain");
}

std::size_t TwistMatrix::index_of(const TwistPair& p) const {
  auto idx = find(p);
  if (!idx) throw TwistError("pair " + to_string(p) + " not in domain");
  return *idx;
}

std::optional<std::size_t> TwistMatrix::find(const TwistPair& p) const {
  auto it = std::lower_bound(domain_.begin(), domain_.end(), p);
  if (it != domain_.end() && *it == p)
    return static_cast<std::size_t>(it - domain_.begin());
  return std::nullopt;
}

TwistPair TwistMatrix::op_and(const TwistPair& a, const TwistPair& b) const {
  check(a);
  check(b);
  return {meet(a.truth, b.truth), join(a.negation, b.negation)};
}

TwistPair TwistMatrix::op_or(const TwistPair& a, const TwistPair& b) const {
  check(a);
  check(b);
  return {join(a.truth, b.truth), meet(a.negation, b.negation)};
}

TwistPair TwistMatrix::op_imp(const TwistPair& a, const TwistPair& b) const {
  check(a);
  check(b);
  return {imp(a.truth, b.truth), meet(a.truth, b.negation)};
}

TwistPair TwistMatrix::op_neg(const TwistPair& a) const {
  check(a);
  return {a.negation, a.truth};
}

TwistPair TwistMatrix::op_cons(const TwistPair& a) const {
  check(a);
  BAElement both = meet(a.truth, a.negation);
  return {complement(both), both};
}

std::string TwistMatrix::value_name(const TwistPair& p) const {
  if (!names_.empty()) {
    if (auto i = find(p); i && !names_[*i].empty()) return names_[*i];
  }
  return to_string(p);
}

TwistPair eval_twist(const Formula& f,
                     const std::map<std::string, TwistPair>& atoms,
                     const TwistMatrix& m) {
  switch (f.kind()) {
    case Formula::Kind::Atom: {
      if (!f.terms().empty())
        throw TwistError("non-propositional atom " + to_string(f));
      auto it = atoms.find(f.pred());
      if (it == atoms.end()) throw TwistError("unmapped atom " + f.pred());
      return it->second;
    }
    case Formula::Kind::Neg: return m.op_neg(eval_twist(f.child(), atoms, m));
    case Formula::Kind::Cons: return m.op_cons(eval_twist(f.child(), atoms, m));
    case Formula::Kind::And:
      return m.op_and(eval_twist(f.lhs(), atoms, m),
                      eval_twist(f.rhs(), atoms, m));
    case Formula::Kind::Or:
      return m.op_or(eval_twist(f.lhs(), atoms, m),
                     eval_twist(f.rhs(), atoms, m));
    case Formula::Kind::Imp:
      return m.op_imp(eval_twist(f.lhs(), atoms, m),
                      eval_twist(f.rhs(), atoms, m));
    default:
      throw TwistError("formula " + to_string(f) + " is not propositional");
  }
}

TwistVerdict twist_consequence(const std::vector<Formula>& premises,
                               const Formula& goal, const TwistMatrix& m) {
  std::set<std::string> atom_names;
  auto collect = [&atom_names](const Formula& f) {
    for (const auto& g : subformulas(f))
      if (g.kind() == Formula::Kind::Atom) {
        if (!g.terms().empty())
          throw TwistError("non-propositional atom " + to_string(g));
        atom_names.insert(g.pred());
      } else if (g.kind() == Formula::Kind::Eq || g.is_quantifier()) {
        throw TwistError("formula " + to_string(f) + " is not propositional");
      }
  };
  for (const auto& p : premises) collect(p);
  collect(goal);

  std::vector<std::string> names(atom_names.begin(), atom_names.end());
  const auto& dom = m.domain();
  std::vector<std::size_t> choice(names.size(), 0);
  const std::size_t k = names.size();
  while (true) {
    std::map<std::string, TwistPair> map;
    for (std::size_t i = 0; i < k; ++i) map[names[i]] = dom[choice[i]];
    bool premises_ok = true;
    for (const auto& p : premises)
      if (!m.designated(eval_twist(p, map, m))) {
        premises_ok = false;
        break;
      }
    if (premises_ok && !m.designated(eval_twist(goal, map, m)))
      return {false, std::move(map)};
    // odometer, last atom fastest
    std::size_t i = k;
    while (i > 0) {
      --i;
      if (++choice[i] < dom.size()) break;
      choice[i] = 0;
      if (i == 0) return {true, {}};
    }
    if (k == 0) return {true, {}};
  }
}

std::string to_string(const TwistPair& p) {
  return "(" + to_string(p.truth) + "," + to_string(p.negation) + ")";
}

}  // namespace lfikit
