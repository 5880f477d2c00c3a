#include "lfikit/prop.hpp"

#include <algorithm>
#include <random>
#include <tuple>

namespace lfikit {

namespace {

void closure_walk(const Formula& f, std::map<Formula, std::size_t>& pos,
                  std::vector<Formula>& out) {
  if (pos.count(f)) return;
  switch (f.kind()) {
    case Formula::Kind::Atom:
      if (!f.terms().empty())
        throw PropError("atom " + to_string(f) + " is not propositional");
      break;
    case Formula::Kind::Eq:
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
      throw PropError("formula " + to_string(f) + " is not propositional");
    case Formula::Kind::Neg:
    case Formula::Kind::Cons:
      closure_walk(f.child(), pos, out);
      break;
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Imp:
      closure_walk(f.lhs(), pos, out);
      closure_walk(f.rhs(), pos, out);
      break;
  }
  if (!pos.count(f)) {
    pos[f] = out.size();
    out.push_back(f);
  }
}

}  // namespace

std::vector<Formula> closure(const std::vector<Formula>& formulas) {
  std::map<Formula, std::size_t> pos;
  std::vector<Formula> out;
  for (const auto& f : formulas) closure_walk(f, pos, out);
  return out;
}

PropValuation::PropValuation(std::shared_ptr<const SwapNmatrix> matrix,
                             std::vector<Formula> formulas,
                             std::vector<std::size_t> values)
    : matrix_(std::move(matrix)),
      formulas_(std::move(formulas)),
      values_(std::move(values)) {
  if (formulas_.size() != values_.size())
    throw PropError("valuation arity mismatch");
  for (std::size_t i = 0; i < formulas_.size(); ++i)
    position_[formulas_[i]] = i;
}

std::size_t PropValuation::value_index(const Formula& f) const {
  auto it = position_.find(f);
  if (it == position_.end())
    throw PropError("formula " + to_string(f) + " not in valuation domain");
  return values_[it->second];
}

const Snapshot& PropValuation::value(const Formula& f) const {
  return matrix_->domain()[value_index(f)];
}

bool PropValuation::designated(const Formula& f) const {
  return matrix_->designated(value_index(f));
}

bool PropValuation::legal() const {
  for (std::size_t i = 0; i < formulas_.size(); ++i) {
    const Formula& f = formulas_[i];
    const std::size_t v = values_[i];
    auto member = [](const std::vector<std::size_t>& set, std::size_t x) {
      return std::binary_search(set.begin(), set.end(), x);
    };
    switch (f.kind()) {
      case Formula::Kind::Atom: break;
      case Formula::Kind::Neg:
        if (!member(matrix_->unary(UnConn::Neg, value_index(f.child())), v))
          return false;
        break;
      case Formula::Kind::Cons:
        if (!member(matrix_->unary(UnConn::Cons, value_index(f.child())), v))
          return false;
        break;
      case Formula::Kind::And:
      case Formula::Kind::Or:
      case Formula::Kind::Imp: {
        BinConn op = f.kind() == Formula::Kind::And  ? BinConn::And
                     : f.kind() == Formula::Kind::Or ? BinConn::Or
                                                     : BinConn::Imp;
        if (!member(matrix_->binary(op, value_index(f.lhs()),
                                    value_index(f.rhs())),
                    v))
          return false;
        break;
      }
      default: return false;
    }
  }
  return true;
}

namespace {

struct SearchSpace {
  std::shared_ptr<const SwapNmatrix> matrix;
  std::vector<Formula> order;
  std::map<Formula, std::size_t> pos;
  std::vector<int> premise_mark;  // 1 = must be designated, -1 = must not
  // Which coordinates of an entry's snapshot any parent actually reads: the
  // first coordinate always matters (designation, binary laws); the second
  // and third only feed negation resp. consistency parents. Values agreeing
  // on the observed coordinates are interchangeable, so the search branches
  // over one representative per observable class. The representative is the
  // canonically first member, which keeps the first countermodel identical
  // to the unpruned search.
  std::vector<bool> neg_parent, cons_parent;

  void compute_observed() {
    neg_parent.assign(order.size(), false);
    cons_parent.assign(order.size(), false);
    for (const auto& f : order) {
      if (f.kind() == Formula::Kind::Neg)
        neg_parent[pos.at(f.child())] = true;
      else if (f.kind() == Formula::Kind::Cons)
        cons_parent[pos.at(f.child())] = true;
    }
  }

  std::vector<std::size_t> candidates(std::size_t i,
                                      const std::vector<std::size_t>& vals) const {
    const Formula& f = order[i];
    const std::vector<std::size_t>* out = nullptr;
    std::vector<std::size_t> atoms_all;
    switch (f.kind()) {
      case Formula::Kind::Atom: {
        atoms_all.resize(matrix->size());
        for (std::size_t k = 0; k < atoms_all.size(); ++k) atoms_all[k] = k;
        out = &atoms_all;
        break;
      }
      case Formula::Kind::Neg:
        out = &matrix->unary(UnConn::Neg, vals[pos.at(f.child())]);
        break;
      case Formula::Kind::Cons:
        out = &matrix->unary(UnConn::Cons, vals[pos.at(f.child())]);
        break;
      case Formula::Kind::And:
        out = &matrix->binary(BinConn::And, vals[pos.at(f.lhs())],
                              vals[pos.at(f.rhs())]);
        break;
      case Formula::Kind::Or:
        out = &matrix->binary(BinConn::Or, vals[pos.at(f.lhs())],
                              vals[pos.at(f.rhs())]);
        break;
      case Formula::Kind::Imp:
        out = &matrix->binary(BinConn::Imp, vals[pos.at(f.lhs())],
                              vals[pos.at(f.rhs())]);
        break;
      default:
        throw PropError("non-propositional entry");
    }
    // one representative per observable class, in canonical order
    std::vector<std::size_t> reps;
    std::set<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>> seen;
    for (std::size_t v : *out) {
      const Snapshot& s = matrix->domain()[v];
      auto k = std::make_tuple(s.truth.bits(),
                               neg_parent[i] ? s.negation.bits() : 0,
                               cons_parent[i] ? s.consistency.bits() : 0);
      if (seen.insert(k).second) reps.push_back(v);
    }
    return reps;
  }

  bool search(std::size_t i, std::vector<std::size_t>& vals) {
    if (i == order.size()) return true;
    for (std::size_t v : candidates(i, vals)) {
      if (premise_mark[i] == 1 && !matrix->designated(v)) continue;
      if (premise_mark[i] == -1 && matrix->designated(v)) continue;
      vals[i] = v;
      if (search(i + 1, vals)) return true;
    }
    return false;
  }
};

}  // namespace

PropVerdict prop_consequence(const std::vector<Formula>& premises,
                             const Formula& goal,
                             std::shared_ptr<const SwapNmatrix> matrix) {
  std::vector<Formula> all = premises;
  all.push_back(goal);
  SearchSpace space;
  space.matrix = matrix;
  space.order = closure(all);
  for (std::size_t i = 0; i < space.order.size(); ++i)
    space.pos[space.order[i]] = i;
  space.premise_mark.assign(space.order.size(), 0);
  for (const auto& p : premises) space.premise_mark[space.pos.at(p)] = 1;
  // the goal being a premise settles it
  for (const auto& p : premises)
    if (p == goal) return {true, std::nullopt};
  space.premise_mark[space.pos.at(goal)] = -1;  // goal must be undesignated
  space.compute_observed();

  std::vector<std::size_t> vals(space.order.size(), 0);
  if (space.search(0, vals))
    return {false, PropValuation(matrix, space.order, vals)};
  return {true, std::nullopt};
}

bool is_valid(const Formula& f, std::shared_ptr<const SwapNmatrix> matrix) {
  return prop_consequence({}, f, std::move(matrix)).holds;
}

// ---- Bivaluations ----

bool Bivaluation::operator()(const Formula& f) const {
  auto it = values_.find(f);
  if (it == values_.end())
    throw PropError("bivaluation undefined at " + to_string(f));
  return it->second;
}

bool check_bivaluation(const Bivaluation& rho) {
  const auto& vals = rho.values();
  auto get = [&vals](const Formula& f) -> std::optional<bool> {
    auto it = vals.find(f);
    if (it == vals.end()) return std::nullopt;
    return it->second;
  };
  for (const auto& [f, v] : vals) {
    switch (f.kind()) {
      case Formula::Kind::And: {
        auto a = get(f.lhs()), b = get(f.rhs());
        if (a && b && v != (*a && *b)) return false;
        break;
      }
      case Formula::Kind::Or: {
        auto a = get(f.lhs()), b = get(f.rhs());
        if (a && b && v != (*a || *b)) return false;
        break;
      }
      case Formula::Kind::Imp: {
        auto a = get(f.lhs()), b = get(f.rhs());
        if (a && b && v != (!*a || *b)) return false;
        break;
      }
      case Formula::Kind::Neg: {
        auto a = get(f.child());
        if (a && !v && !*a) return false;  // vNeg
        break;
      }
      case Formula::Kind::Cons: {
        auto a = get(f.child());
        auto na = get(Formula::neg(f.child()));
        if (v && a && na && *a && *na) return false;  // vCon
        break;
      }
      default: break;
    }
  }
  return true;
}

std::vector<Formula> neg_cons_closure(const std::vector<Formula>& formulas) {
  std::vector<Formula> base = closure(formulas);
  std::vector<Formula> out = base;
  std::map<Formula, bool> seen;
  for (const auto& f : out) seen[f] = true;
  for (const auto& f : base) {
    for (Formula g : {Formula::neg(f), Formula::cons(f)}) {
      if (!seen.count(g)) {
        seen[g] = true;
        out.push_back(g);
      }
    }
  }
  return out;
}

PropValuation bival_to_valuation(const Bivaluation& rho) {
  if (!check_bivaluation(rho))
    throw PropError("illegal bivaluation: closure clauses violated");
  auto matrix = std::make_shared<SwapNmatrix>(SwapNmatrix::m5());
  const auto& alg = matrix->algebra();
  auto bit = [&alg](bool b) { return b ? alg.top() : alg.bottom(); };

  std::vector<Formula> members;
  std::vector<std::size_t> values;
  for (const auto& [f, v] : rho.values()) {
    Formula nf = Formula::neg(f);
    Formula cf = Formula::cons(f);
    if (!rho.defined(nf) || !rho.defined(cf)) continue;
    Snapshot s{bit(v), bit(rho(nf)), bit(rho(cf))};
    auto idx = matrix->find(s);
    if (!idx)
      throw PropError("illegal bivaluation: triple " + to_string(s) +
                      " at " + to_string(f) + " is not a snapshot");
    members.push_back(f);
    values.push_back(*idx);
  }
  return PropValuation(matrix, std::move(members), std::move(values));
}

namespace {

// Assigns 0/1 values along a subformula-closed list. Binary connectives are
// forced by their clauses; atoms, negations and consistency formulas branch
// (within what vNeg/vCon permit). Values of ~a / *a that lie outside the
// list never constrain it, so searching the closure alone is exhaustive.
struct BivalSearch {
  std::vector<Formula> order;
  std::map<Formula, std::size_t> pos;
  std::vector<int> premise_mark;
  std::vector<bool> vals;
  const std::function<bool(const std::vector<bool>&)>* accept = nullptr;

  std::optional<bool> forced(const Formula& f) const {
    switch (f.kind()) {
      case Formula::Kind::And:
        return vals[pos.at(f.lhs())] && vals[pos.at(f.rhs())];
      case Formula::Kind::Or:
        return vals[pos.at(f.lhs())] || vals[pos.at(f.rhs())];
      case Formula::Kind::Imp:
        return !vals[pos.at(f.lhs())] || vals[pos.at(f.rhs())];
      default: return std::nullopt;
    }
  }

  bool admissible(const Formula& f, bool v) const {
    if (f.kind() == Formula::Kind::Neg) {
      if (!v && !vals[pos.at(f.child())]) return false;  // vNeg
    } else if (f.kind() == Formula::Kind::Cons) {
      if (v && vals[pos.at(f.child())]) {
        auto it = pos.find(Formula::neg(f.child()));
        if (it != pos.end() && it->second < pos.at(f) && vals[it->second])
          return false;  // vCon, when ~a is also present
      }
    }
    return true;
  }

  // vCon can also bite in the other direction: *a may be assigned before ~a
  // when ~a sits later in the closure order. Recheck when assigning ~a.
  bool recheck_cons(const Formula& f, bool v) const {
    if (f.kind() != Formula::Kind::Neg || !v) return true;
    auto it = pos.find(Formula::cons(f.child()));
    if (it == pos.end() || it->second > pos.at(f)) return true;
    if (vals[it->second] && vals[pos.at(f.child())]) return false;
    return true;
  }

  bool search(std::size_t i) {
    if (i == order.size()) return (*accept)(vals);
    const Formula& f = order[i];
    auto fv = forced(f);
    for (bool v : {false, true}) {
      if (fv && *fv != v) continue;
      if (premise_mark[i] == 1 && !v) continue;
      if (premise_mark[i] == -1 && v) continue;
      if (!admissible(f, v)) continue;
      if (!recheck_cons(f, v)) continue;
      vals[i] = v;
      if (search(i + 1)) return true;
    }
    return false;
  }
};

}  // namespace

BivalVerdict bival_consequence(const std::vector<Formula>& premises,
                               const Formula& goal) {
  for (const auto& p : premises)
    if (p == goal) return {true, std::nullopt};
  std::vector<Formula> all = premises;
  all.push_back(goal);
  BivalSearch s;
  s.order = closure(all);
  for (std::size_t i = 0; i < s.order.size(); ++i) s.pos[s.order[i]] = i;
  s.premise_mark.assign(s.order.size(), 0);
  for (const auto& p : premises) s.premise_mark[s.pos.at(p)] = 1;
  s.premise_mark[s.pos.at(goal)] = -1;
  s.vals.assign(s.order.size(), false);
  std::function<bool(const std::vector<bool>&)> accept =
      [](const std::vector<bool>&) { return true; };
  s.accept = &accept;
  if (s.search(0)) {
    std::map<Formula, bool> out;
    for (std::size_t i = 0; i < s.order.size(); ++i) out[s.order[i]] = s.vals[i];
    return {false, Bivaluation(std::move(out))};
  }
  return {true, std::nullopt};
}

void for_each_bivaluation(
    const std::vector<Formula>& base,
    const std::function<bool(const Bivaluation&)>& visit) {
  BivalSearch s;
  s.order = neg_cons_closure(base);
  for (std::size_t i = 0; i < s.order.size(); ++i) s.pos[s.order[i]] = i;
  s.premise_mark.assign(s.order.size(), 0);
  s.vals.assign(s.order.size(), false);
  bool keep_going = true;
  std::function<bool(const std::vector<bool>&)> accept =
      [&](const std::vector<bool>& vals) {
        std::map<Formula, bool> out;
        for (std::size_t i = 0; i < s.order.size(); ++i) out[s.order[i]] = vals[i];
        keep_going = visit(Bivaluation(std::move(out)));
        return !keep_going;  // search stops when we "succeed"
      };
  s.accept = &accept;
  s.search(0);
}

Bivaluation random_bivaluation(const std::vector<Formula>& base,
                               std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Formula> order = neg_cons_closure(base);
  std::map<Formula, std::size_t> pos;
  for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
  std::vector<bool> vals(order.size(), false);
  for (std::size_t i = 0; i < order.size(); ++i) {
    const Formula& f = order[i];
    bool v;
    switch (f.kind()) {
      case Formula::Kind::And:
        v = vals[pos.at(f.lhs())] && vals[pos.at(f.rhs())];
        break;
      case Formula::Kind::Or:
        v = vals[pos.at(f.lhs())] || vals[pos.at(f.rhs())];
        break;
      case Formula::Kind::Imp:
        v = !vals[pos.at(f.lhs())] || vals[pos.at(f.rhs())];
        break;
      case Formula::Kind::Neg: {
        if (!vals[pos.at(f.child())]) {
          v = true;  // vNeg
        } else {
          // an earlier *a with value 1 forces ~a to 0 (vCon)
          auto it = pos.find(Formula::cons(f.child()));
          bool cons_set = it != pos.end() && it->second < i && vals[it->second];
          v = cons_set ? false : (rng() & 1);
        }
        break;
      }
      case Formula::Kind::Cons: {
        auto it = pos.find(Formula::neg(f.child()));
        bool both = vals[pos.at(f.child())] &&
                    (it != pos.end() && it->second < i && vals[it->second]);
        v = both ? false : (rng() & 1);  // vCon
        break;
      }
      default:
        v = rng() & 1;
        break;
    }
    vals[i] = v;
  }
  std::map<Formula, bool> out;
  for (std::size_t i = 0; i < order.size(); ++i) out[order[i]] = vals[i];
  return Bivaluation(std::move(out));
}

}  // namespace lfikit
