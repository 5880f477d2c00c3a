#include "lfikit/fo.hpp"

#include <algorithm>

namespace lfikit {

namespace {

std::size_t ipow(std::size_t base, unsigned exp) {
  std::size_t out = 1;
  while (exp--) out *= base;
  return out;
}

std::size_t table_index(const std::vector<std::size_t>& args, std::size_t u) {
  std::size_t idx = 0;
  for (std::size_t a : args) idx = idx * u + a;
  return idx;
}

}  // namespace

FOStructure::FOStructure(FOStructureData data) : data_(std::move(data)) {
  if (data_.domain.empty()) throw FOError("universe must be nonempty");
  if (data_.signature.predicates().empty())
    throw FOError("signature needs at least one predicate symbol");
  // Keep the matrix domain enumerable: 5^n snapshots resp. 3^n pairs.
  if (data_.kind == SemanticsKind::Swap && data_.algebra_atoms > 6)
    throw FOError("swap structures support at most 6 algebra atoms");
  if (data_.kind == SemanticsKind::Twist && data_.algebra_atoms > 10)
    throw FOError("twist structures support at most 10 algebra atoms");
  FiniteBooleanAlgebra alg(data_.algebra_atoms);
  // the two-element variants carry the customary value names
  if (data_.kind == SemanticsKind::Swap)
    swap_ = std::make_shared<SwapNmatrix>(
        alg.atoms() == 1 ? SwapNmatrix::m5() : SwapNmatrix::full(alg));
  else
    twist_ = std::make_shared<TwistMatrix>(
        alg.atoms() == 1 ? TwistMatrix::lfi1() : TwistMatrix::over(alg));

  const std::size_t u = data_.domain.size();
  const std::size_t msize = matrix_size();

  for (const auto& c : data_.signature.constants()) {
    auto it = data_.constants.find(c);
    if (it == data_.constants.end())
      throw FOError("constant '" + c + "' has no interpretation");
    if (it->second >= u)
      throw FOError("constant '" + c + "' maps outside the universe");
  }
  for (const auto& [f, arity] : data_.signature.functions()) {
    auto it = data_.functions.find(f);
    if (it == data_.functions.end())
      throw FOError("function '" + f + "' has no interpretation");
    if (it->second.arity != arity || it->second.values.size() != ipow(u, arity))
      throw FOError("function table for '" + f + "' is not total");
    for (std::size_t v : it->second.values)
      if (v >= u) throw FOError("function '" + f + "' maps outside the universe");
  }
  for (const auto& [p, arity] : data_.signature.predicates()) {
    auto it = data_.predicates.find(p);
    if (it == data_.predicates.end())
      throw FOError("predicate '" + p + "' has no interpretation");
    if (it->second.arity != arity || it->second.values.size() != ipow(u, arity))
      throw FOError("predicate table for '" + p + "' is not total");
    for (std::size_t v : it->second.values)
      if (v >= msize)
        throw FOError("predicate '" + p + "' maps outside the matrix domain");
  }
  if (data_.signature.has_equality() && !data_.equality)
    throw FOError("signature has equality but no equality table was given");
  if (data_.equality) {
    if (data_.equality->arity != 2 || data_.equality->values.size() != u * u)
      throw FOError("equality table is not total");
    for (std::size_t v : data_.equality->values)
      if (v >= msize) throw FOError("equality maps outside the matrix domain");
    if (!check_standard_equality(*this))
      throw FOError("equality table is not standard "
                    "(designated exactly on the diagonal)");
  }
}

const FiniteBooleanAlgebra& FOStructure::algebra() const {
  return swap_ ? swap_->algebra() : twist_->algebra();
}

std::size_t FOStructure::constant_value(const std::string& name) const {
  auto it = data_.constants.find(name);
  if (it == data_.constants.end())
    throw FOError("no interpretation for constant '" + name + "'");
  return it->second;
}

std::size_t FOStructure::function_value(
    const std::string& name, const std::vector<std::size_t>& args) const {
  auto it = data_.functions.find(name);
  if (it == data_.functions.end())
    throw FOError("no interpretation for function '" + name + "'");
  return it->second.values[table_index(args, data_.domain.size())];
}

std::size_t FOStructure::predicate_value(
    const std::string& name, const std::vector<std::size_t>& args) const {
  auto it = data_.predicates.find(name);
  if (it == data_.predicates.end())
    throw FOError("no interpretation for predicate '" + name + "'");
  return it->second.values[table_index(args, data_.domain.size())];
}

std::size_t FOStructure::equality_value(std::size_t a, std::size_t b) const {
  if (!data_.equality) throw FOError("structure has no equality");
  return data_.equality->values[a * data_.domain.size() + b];
}

bool FOStructure::value_designated(std::size_t i) const {
  return swap_ ? swap_->designated(i) : twist_->designated(i);
}

BAElement FOStructure::value_truth(std::size_t i) const {
  return swap_ ? swap_->domain()[i].truth : twist_->domain()[i].truth;
}

std::string FOStructure::value_name(std::size_t i) const {
  return swap_ ? swap_->value_name(i) : twist_->value_name(i);
}

std::size_t FOStructure::matrix_size() const {
  return swap_ ? swap_->size() : twist_->size();
}

PredicateTable make_equality_table(SemanticsKind kind, const SwapNmatrix* swap,
                                   const TwistMatrix* twist,
                                   std::size_t universe,
                                   EqualityDefault which) {
  std::size_t eq_val, neq_val;
  if (kind == SemanticsKind::Swap) {
    const auto& alg = swap->algebra();
    Snapshot on{alg.top(), alg.bottom(), alg.top()};
    Snapshot mid{alg.top(), alg.top(), alg.bottom()};
    Snapshot off{alg.bottom(), alg.top(), alg.top()};
    eq_val = swap->index_of(which == EqualityDefault::Classical ? on : mid);
    neq_val = swap->index_of(off);
  } else {
    const auto& alg = twist->algebra();
    TwistPair on{alg.top(), alg.bottom()};
    TwistPair mid{alg.top(), alg.top()};
    TwistPair off{alg.bottom(), alg.top()};
    eq_val = twist->index_of(which == EqualityDefault::Classical ? on : mid);
    neq_val = twist->index_of(off);
  }
  PredicateTable t;
  t.arity = 2;
  t.values.resize(universe * universe);
  for (std::size_t a = 0; a < universe; ++a)
    for (std::size_t b = 0; b < universe; ++b)
      t.values[a * universe + b] = a == b ? eq_val : neq_val;
  return t;
}

PredicateTable make_equality_table(SemanticsKind kind, const FOStructure& like,
                                   EqualityDefault which) {
  return make_equality_table(kind, like.swap_matrix().get(),
                             like.twist_matrix().get(), like.universe_size(),
                             which);
}

bool check_standard_equality(const FOStructure& s) {
  if (!s.has_equality()) return false;
  const std::size_t u = s.universe_size();
  for (std::size_t a = 0; a < u; ++a)
    for (std::size_t b = 0; b < u; ++b)
      if (s.value_designated(s.equality_value(a, b)) != (a == b)) return false;
  return true;
}

// ---- Terms ----

std::size_t eval_term(const FOStructure& s, const Assignment& mu,
                      const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Var: {
      auto it = mu.find(t.name());
      if (it == mu.end()) throw FOError("unmapped variable '" + t.name() + "'");
      if (it->second >= s.universe_size())
        throw FOError("assignment maps '" + t.name() + "' outside the universe");
      return it->second;
    }
    case Term::Kind::Const: return s.constant_value(t.name());
    case Term::Kind::DomainConst:
      if (t.domain_index() >= s.universe_size())
        throw FOError("domain constant " + to_string(t) + " out of range");
      return t.domain_index();
    case Term::Kind::App: {
      std::vector<std::size_t> args;
      args.reserve(t.args().size());
      for (const auto& a : t.args()) args.push_back(eval_term(s, mu, a));
      return s.function_value(t.name(), args);
    }
  }
  throw FOError("bad term");
}

namespace {

Term collapse_term(const FOStructure& s, const Term& t) {
  if (t.kind() == Term::Kind::DomainConst) return t;
  if (t.is_closed()) return Term::domain_const(eval_term(s, {}, t));
  if (t.kind() == Term::Kind::App) {
    std::vector<Term> args;
    args.reserve(t.args().size());
    for (const auto& a : t.args()) args.push_back(collapse_term(s, a));
    return Term::app(t.name(), std::move(args));
  }
  return t;  // open variable
}

Term apply_assignment(const Term& t, const Assignment& mu,
                      const std::set<std::string>& bound) {
  switch (t.kind()) {
    case Term::Kind::Var: {
      if (bound.count(t.name())) return t;
      auto it = mu.find(t.name());
      if (it == mu.end()) throw FOError("unmapped variable '" + t.name() + "'");
      return Term::domain_const(it->second);
    }
    case Term::Kind::Const:
    case Term::Kind::DomainConst: return t;
    case Term::Kind::App: {
      std::vector<Term> args;
      args.reserve(t.args().size());
      for (const auto& a : t.args()) args.push_back(apply_assignment(a, mu, bound));
      return Term::app(t.name(), std::move(args));
    }
  }
  return t;
}

Formula canonicalize_walk(const FOStructure& s, const Formula& f,
                          const Assignment& mu, std::set<std::string>& bound) {
  switch (f.kind()) {
    case Formula::Kind::Atom: {
      std::vector<Term> args;
      args.reserve(f.terms().size());
      for (const auto& t : f.terms())
        args.push_back(collapse_term(s, apply_assignment(t, mu, bound)));
      return Formula::atom(f.pred(), std::move(args));
    }
    case Formula::Kind::Eq:
      return Formula::eq(
          collapse_term(s, apply_assignment(f.terms()[0], mu, bound)),
          collapse_term(s, apply_assignment(f.terms()[1], mu, bound)));
    case Formula::Kind::Neg:
      return Formula::neg(canonicalize_walk(s, f.child(), mu, bound));
    case Formula::Kind::Cons:
      return Formula::cons(canonicalize_walk(s, f.child(), mu, bound));
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Imp:
      return Formula::binary(f.kind(), canonicalize_walk(s, f.lhs(), mu, bound),
                             canonicalize_walk(s, f.rhs(), mu, bound));
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: {
      bool inserted = bound.insert(f.bound_var()).second;
      Formula body = canonicalize_walk(s, f.body(), mu, bound);
      if (inserted) bound.erase(f.bound_var());
      return Formula::quantifier(f.kind(), f.bound_var(), std::move(body));
    }
  }
  return f;
}

}  // namespace

GroundSentence canonicalize(const FOStructure& s, const Formula& f,
                            const Assignment& mu) {
  std::set<std::string> bound;
  Formula g = canonicalize_walk(s, f, mu, bound);
  if (!is_sentence(g))
    throw FOError("assignment does not cover the free variables of " +
                  to_string(f));
  return GroundSentence(std::move(g));
}

// ---- Twist interpretation ----

namespace {

TwistPair interpret_ground(const FOStructure& s, const Formula& f) {
  const TwistMatrix& m = *s.twist_matrix();
  switch (f.kind()) {
    case Formula::Kind::Atom: {
      std::vector<std::size_t> args;
      args.reserve(f.terms().size());
      for (const auto& t : f.terms()) args.push_back(eval_term(s, {}, t));
      return m.domain()[s.predicate_value(f.pred(), args)];
    }
    case Formula::Kind::Eq: {
      std::size_t a = eval_term(s, {}, f.terms()[0]);
      std::size_t b = eval_term(s, {}, f.terms()[1]);
      return m.domain()[s.equality_value(a, b)];
    }
    case Formula::Kind::Neg: return m.op_neg(interpret_ground(s, f.child()));
    case Formula::Kind::Cons: return m.op_cons(interpret_ground(s, f.child()));
    case Formula::Kind::And:
      return m.op_and(interpret_ground(s, f.lhs()), interpret_ground(s, f.rhs()));
    case Formula::Kind::Or:
      return m.op_or(interpret_ground(s, f.lhs()), interpret_ground(s, f.rhs()));
    case Formula::Kind::Imp:
      return m.op_imp(interpret_ground(s, f.lhs()), interpret_ground(s, f.rhs()));
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: {
      std::vector<BAElement> firsts, seconds;
      for (std::size_t a = 0; a < s.universe_size(); ++a) {
        Formula inst = substitute(f.body(), f.bound_var(), Term::domain_const(a));
        TwistPair p = interpret_ground(s, inst);
        firsts.push_back(p.truth);
        seconds.push_back(p.negation);
      }
      const auto& alg = m.algebra();
      if (f.kind() == Formula::Kind::Forall)
        return {big_meet(alg, firsts), big_join(alg, seconds)};
      return {big_join(alg, firsts), big_meet(alg, seconds)};
    }
  }
  throw FOError("bad formula");
}

}  // namespace

TwistPair qlfi1_interpret(const FOStructure& s, const GroundSentence& sigma) {
  if (s.kind() != SemanticsKind::Twist)
    throw FOError("interpretation map requires twist semantics");
  return interpret_ground(s, sigma.formula());
}

namespace {

// Enumerates assignments for the sorted variable list, last variable fastest.
template <typename Fn>
bool for_each_assignment(const std::vector<std::string>& vars, std::size_t u,
                         Fn&& fn) {
  std::vector<std::size_t> choice(vars.size(), 0);
  while (true) {
    Assignment mu;
    for (std::size_t i = 0; i < vars.size(); ++i) mu[vars[i]] = choice[i];
    if (!fn(mu)) return false;
    std::size_t i = vars.size();
    bool advanced = false;
    while (i > 0) {
      --i;
      if (++choice[i] < u) {
        advanced = true;
        break;
      }
      choice[i] = 0;
    }
    if (!advanced) return true;
  }
}

}  // namespace

QLFI1Verdict qlfi1_consequence(const std::vector<Formula>& premises,
                               const Formula& goal, const FOStructure& s) {
  if (s.kind() != SemanticsKind::Twist)
    throw FOError("qlfi1 consequence requires twist semantics");
  const std::size_t u = s.universe_size();
  const TwistMatrix& m = *s.twist_matrix();

  // Premises must be designated under every assignment; otherwise the
  // consequence holds vacuously on this structure.
  for (const auto& p : premises) {
    auto pv = free_vars(p);
    std::vector<std::string> vars(pv.begin(), pv.end());
    bool all = for_each_assignment(vars, u, [&](const Assignment& mu) {
      return m.designated(qlfi1_interpret(s, canonicalize(s, p, mu)));
    });
    if (!all) return {true, {}, std::nullopt};
  }

  auto gv = free_vars(goal);
  std::vector<std::string> vars(gv.begin(), gv.end());
  QLFI1Verdict verdict;
  for_each_assignment(vars, u, [&](const Assignment& mu) {
    TwistPair val = qlfi1_interpret(s, canonicalize(s, goal, mu));
    if (!m.designated(val)) {
      verdict.holds = false;
      verdict.assignment = mu;
      verdict.value = val;
      return false;
    }
    return true;
  });
  return verdict;
}

// ---- Ground closure and swap-mode search ----

namespace {

class ClosureGraph {
public:
  struct Entry {
    Formula representative;
    Formula key;  // variant normal form
    Formula::Kind kind;
    std::vector<std::size_t> children;  // entry indices
    std::vector<std::size_t> fixed_candidates;  // atoms: the table value
  };

  ClosureGraph(const FOStructure& s, std::size_t cap) : s_(s), cap_(cap) {}

  std::size_t add(const Formula& ground) {
    Formula key = variant_normal_form(ground);
    auto it = index_.find(key);
    if (it != index_.end()) return it->second;

    std::vector<std::size_t> children;
    std::vector<std::size_t> fixed;
    switch (ground.kind()) {
      case Formula::Kind::Atom: {
        std::vector<std::size_t> args;
        for (const auto& t : ground.terms())
          args.push_back(eval_term(s_, {}, t));
        fixed = {s_.predicate_value(ground.pred(), args)};
        break;
      }
      case Formula::Kind::Eq: {
        std::size_t a = eval_term(s_, {}, ground.terms()[0]);
        std::size_t b = eval_term(s_, {}, ground.terms()[1]);
        fixed = {s_.equality_value(a, b)};
        break;
      }
      case Formula::Kind::Neg:
      case Formula::Kind::Cons:
        children = {add(ground.child())};
        break;
      case Formula::Kind::And:
      case Formula::Kind::Or:
      case Formula::Kind::Imp:
        children = {add(ground.lhs()), add(ground.rhs())};
        break;
      case Formula::Kind::Forall:
      case Formula::Kind::Exists: {
        for (std::size_t a = 0; a < s_.universe_size(); ++a) {
          Formula inst = substitute(ground.body(), ground.bound_var(),
                                    Term::domain_const(a));
          // collapsing newly closed terms keeps instances canonical
          inst = canonicalize(s_, inst, {}).formula();
          children.push_back(add(inst));
        }
        break;
      }
    }
    // the recursive adds above may have grown the graph; re-check the key
    if (auto again = index_.find(key); again != index_.end())
      return again->second;
    if (entries_.size() >= cap_)
      throw ClosureCapError("ground closure exceeds cap of " +
                            std::to_string(cap_));
    std::size_t idx = entries_.size();
    index_[key] = idx;
    entries_.push_back(Entry{ground, std::move(key), ground.kind(),
                             std::move(children), std::move(fixed)});
    return idx;
  }

  const std::vector<Entry>& entries() const { return entries_; }
  std::optional<std::size_t> find_key(const Formula& key) const {
    auto it = index_.find(key);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

private:
  const FOStructure& s_;
  std::size_t cap_;
  std::vector<Entry> entries_;
  std::map<Formula, std::size_t> index_;
};

struct SwapSearch {
  const FOStructure* s;
  const SwapNmatrix* m;
  const ClosureGraph* graph;
  std::vector<int> mark;  // 1 premise, -1 goal
  std::map<std::uint32_t, std::vector<std::size_t>> by_truth;
  bool filter_equality = false;
  // As in the propositional search: branch over one representative per
  // observable class. Only negation and consistency parents read the second
  // resp. third coordinate of a child's snapshot; everything else (binary
  // laws, quantifier laws, designation marks, the equality clause) reads
  // first coordinates only.
  std::vector<bool> neg_parent, cons_parent;

  void compute_observed() {
    neg_parent.assign(graph->entries().size(), false);
    cons_parent.assign(graph->entries().size(), false);
    for (const auto& e : graph->entries()) {
      if (e.kind == Formula::Kind::Neg)
        neg_parent[e.children[0]] = true;
      else if (e.kind == Formula::Kind::Cons)
        cons_parent[e.children[0]] = true;
    }
  }

  const std::vector<std::size_t>& indices_with_truth(const BAElement& e) {
    auto it = by_truth.find(e.bits());
    if (it != by_truth.end()) return it->second;
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < m->size(); ++i)
      if (m->domain()[i].truth == e) out.push_back(i);
    return by_truth.emplace(e.bits(), std::move(out)).first->second;
  }

  std::vector<std::size_t> full_candidates(const ClosureGraph::Entry& e,
                                           const std::vector<std::size_t>& vals) {
    switch (e.kind) {
      case Formula::Kind::Atom:
      case Formula::Kind::Eq:
        return e.fixed_candidates;
      case Formula::Kind::Neg:
        return m->unary(UnConn::Neg, vals[e.children[0]]);
      case Formula::Kind::Cons:
        return m->unary(UnConn::Cons, vals[e.children[0]]);
      case Formula::Kind::And:
        return m->binary(BinConn::And, vals[e.children[0]], vals[e.children[1]]);
      case Formula::Kind::Or:
        return m->binary(BinConn::Or, vals[e.children[0]], vals[e.children[1]]);
      case Formula::Kind::Imp:
        return m->binary(BinConn::Imp, vals[e.children[0]], vals[e.children[1]]);
      case Formula::Kind::Forall:
      case Formula::Kind::Exists: {
        std::vector<BAElement> firsts;
        firsts.reserve(e.children.size());
        for (std::size_t c : e.children)
          firsts.push_back(m->domain()[vals[c]].truth);
        BAElement wanted = e.kind == Formula::Kind::Forall
                               ? big_meet(m->algebra(), firsts)
                               : big_join(m->algebra(), firsts);
        return indices_with_truth(wanted);
      }
    }
    return {};
  }

  std::vector<std::size_t> candidates(std::size_t i,
                                      const std::vector<std::size_t>& vals) {
    auto full = full_candidates(graph->entries()[i], vals);
    std::vector<std::size_t> reps;
    std::set<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>> seen;
    for (std::size_t v : full) {
      const Snapshot& sv = m->domain()[v];
      auto k = std::make_tuple(sv.truth.bits(),
                               neg_parent[i] ? sv.negation.bits() : 0,
                               cons_parent[i] ? sv.consistency.bits() : 0);
      if (seen.insert(k).second) reps.push_back(v);
    }
    return reps;
  }

  FOValuation make_valuation(const std::vector<std::size_t>& vals) const {
    std::vector<Formula> sentences, keys;
    for (const auto& e : graph->entries()) {
      sentences.push_back(e.representative);
      keys.push_back(e.key);
    }
    return FOValuation(s, std::move(sentences), std::move(keys), vals);
  }

  // visit returns false to stop the enumeration
  bool search(std::size_t i, std::vector<std::size_t>& vals,
              const std::function<bool(const std::vector<std::size_t>&)>& found) {
    if (i == graph->entries().size()) {
      if (filter_equality && !satisfies_equality_clause(make_valuation(vals)))
        return true;  // keep searching
      return found(vals);
    }
    for (std::size_t v : candidates(i, vals)) {
      if (mark[i] == 1 && !m->designated(v)) continue;
      if (mark[i] == -1 && m->designated(v)) continue;
      vals[i] = v;
      if (!search(i + 1, vals, found)) return false;
    }
    return true;
  }
};

}  // namespace

std::vector<GroundSentence> ground_closure(const FOStructure& s,
                                           const std::vector<GroundSentence>& roots,
                                           std::size_t cap) {
  ClosureGraph g(s, cap);
  for (const auto& r : roots) g.add(r.formula());
  std::vector<GroundSentence> out;
  out.reserve(g.entries().size());
  for (const auto& e : g.entries()) out.push_back(GroundSentence(e.representative));
  return out;
}

FOValuation::FOValuation(const FOStructure* s, std::vector<Formula> sentences,
                         std::vector<Formula> keys,
                         std::vector<std::size_t> values)
    : structure_(s),
      sentences_(std::move(sentences)),
      keys_(std::move(keys)),
      values_(std::move(values)) {
  for (std::size_t i = 0; i < keys_.size(); ++i) position_[keys_[i]] = i;
}

std::size_t FOValuation::value_index(const Formula& ground_sentence) const {
  auto it = position_.find(variant_normal_form(ground_sentence));
  if (it == position_.end())
    throw FOError("sentence " + to_string(ground_sentence) +
                  " not in the valuation's closure");
  return values_[it->second];
}

bool FOValuation::designated(const Formula& ground_sentence) const {
  return structure_->value_designated(value_index(ground_sentence));
}

bool FOValuation::consistent() const {
  const SwapNmatrix& m = *structure_->swap_matrix();
  auto member = [](const std::vector<std::size_t>& set, std::size_t x) {
    return std::binary_search(set.begin(), set.end(), x);
  };
  for (std::size_t i = 0; i < sentences_.size(); ++i) {
    const Formula& f = sentences_[i];
    std::size_t v = values_[i];
    switch (f.kind()) {
      case Formula::Kind::Atom: {
        std::vector<std::size_t> args;
        for (const auto& t : f.terms())
          args.push_back(eval_term(*structure_, {}, t));
        if (v != structure_->predicate_value(f.pred(), args)) return false;
        break;
      }
      case Formula::Kind::Eq: {
        std::size_t a = eval_term(*structure_, {}, f.terms()[0]);
        std::size_t b = eval_term(*structure_, {}, f.terms()[1]);
        if (v != structure_->equality_value(a, b)) return false;
        break;
      }
      case Formula::Kind::Neg:
        if (!member(m.unary(UnConn::Neg, value_index(f.child())), v))
          return false;
        break;
      case Formula::Kind::Cons:
        if (!member(m.unary(UnConn::Cons, value_index(f.child())), v))
          return false;
        break;
      case Formula::Kind::And:
      case Formula::Kind::Or:
      case Formula::Kind::Imp: {
        BinConn op = f.kind() == Formula::Kind::And  ? BinConn::And
                     : f.kind() == Formula::Kind::Or ? BinConn::Or
                                                     : BinConn::Imp;
        if (!member(m.binary(op, value_index(f.lhs()), value_index(f.rhs())), v))
          return false;
        break;
      }
      case Formula::Kind::Forall:
      case Formula::Kind::Exists: {
        std::vector<BAElement> firsts;
        for (std::size_t a = 0; a < structure_->universe_size(); ++a) {
          Formula inst =
              canonicalize(*structure_,
                           substitute(f.body(), f.bound_var(),
                                      Term::domain_const(a)),
                           {})
                  .formula();
          firsts.push_back(m.domain()[value_index(inst)].truth);
        }
        BAElement wanted = f.kind() == Formula::Kind::Forall
                               ? big_meet(m.algebra(), firsts)
                               : big_join(m.algebra(), firsts);
        if (m.domain()[v].truth != wanted) return false;
        break;
      }
    }
  }
  if (structure_->has_equality() && !satisfies_equality_clause(*this))
    return false;
  return true;
}

bool satisfies_equality_clause(const FOValuation& v) {
  const FOStructure& s = v.structure();
  if (!s.has_equality()) return true;
  const std::size_t u = s.universe_size();
  const std::size_t n = v.size();
  for (std::size_t a = 0; a < u; ++a) {
    for (std::size_t b = 0; b < u; ++b) {
      if (a == b) continue;
      BAElement eq1 = s.value_truth(s.equality_value(a, b));
      if (eq1 == s.algebra().bottom()) continue;
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          if (!partial_domain_replace_ok(v.sentences()[i], v.sentences()[j], a, b))
            continue;
          BAElement from = s.value_truth(v.value_at(i));
          BAElement to = s.value_truth(v.value_at(j));
          if (!leq(meet(eq1, from), to)) return false;
        }
      }
    }
  }
  return true;
}

std::vector<FOValuation> qmbc_eq_filter(std::vector<FOValuation> vals) {
  std::vector<FOValuation> out;
  for (auto& v : vals)
    if (satisfies_equality_clause(v)) out.push_back(std::move(v));
  return out;
}

QmbCVerdict qmbc_consequence(const std::vector<Formula>& premises,
                             const Formula& goal, const FOStructure& s,
                             std::size_t cap) {
  if (s.kind() != SemanticsKind::Swap)
    throw FOError("qmbc consequence requires swap semantics");

  ClosureGraph graph(s, cap);
  std::vector<std::size_t> premise_ids;
  for (const auto& p : premises)
    premise_ids.push_back(
        graph.add(canonicalize(s, universal_closure(p), {}).formula()));
  std::size_t goal_id =
      graph.add(canonicalize(s, universal_closure(goal), {}).formula());
  // The goal being (a variant of) a premise settles it outright.
  for (std::size_t id : premise_ids)
    if (id == goal_id) return {true, std::nullopt};

  SwapSearch search;
  search.s = &s;
  search.m = s.swap_matrix().get();
  search.graph = &graph;
  search.mark.assign(graph.entries().size(), 0);
  for (std::size_t id : premise_ids) search.mark[id] = 1;
  search.mark[goal_id] = -1;
  search.filter_equality = s.has_equality();
  search.compute_observed();

  std::vector<std::size_t> vals(graph.entries().size(), 0);
  std::optional<FOValuation> counter;
  search.search(0, vals, [&](const std::vector<std::size_t>& found) {
    counter = search.make_valuation(found);
    return false;  // stop at the first witness
  });
  if (counter) return {false, std::move(counter)};
  return {true, std::nullopt};
}

void enumerate_qmbc_valuations(
    const FOStructure& s, const std::vector<GroundSentence>& roots,
    const std::function<bool(const FOValuation&)>& visit, std::size_t cap) {
  if (s.kind() != SemanticsKind::Swap)
    throw FOError("valuation enumeration requires swap semantics");
  ClosureGraph graph(s, cap);
  for (const auto& r : roots) graph.add(r.formula());

  SwapSearch search;
  search.s = &s;
  search.m = s.swap_matrix().get();
  search.graph = &graph;
  search.mark.assign(graph.entries().size(), 0);
  search.filter_equality = s.has_equality();
  search.compute_observed();

  std::vector<std::size_t> vals(graph.entries().size(), 0);
  search.search(0, vals, [&](const std::vector<std::size_t>& found) {
    return visit(search.make_valuation(found));
  });
}

std::vector<std::size_t> swap_attainable_values(const FOStructure& s,
                                                const GroundSentence& sigma,
                                                std::size_t cap) {
  if (s.kind() != SemanticsKind::Swap)
    throw FOError("attainable-value analysis requires swap semantics");
  ClosureGraph graph(s, cap);
  std::size_t root = graph.add(sigma.formula());

  SwapSearch search;
  search.s = &s;
  search.m = s.swap_matrix().get();
  search.graph = &graph;
  search.mark.assign(graph.entries().size(), 0);
  search.filter_equality = s.has_equality();
  search.compute_observed();

  // The enumeration visits one representative per observable class, but a
  // root has no parents, so within one visited valuation the root may take
  // any member of its (children-determined) candidate set.
  std::set<std::size_t> seen;
  std::vector<std::size_t> vals(graph.entries().size(), 0);
  search.search(0, vals, [&](const std::vector<std::size_t>& found) {
    for (std::size_t v : search.full_candidates(graph.entries()[root], found))
      seen.insert(v);
    return true;
  });
  return {seen.begin(), seen.end()};
}

// ---- Tiny-model enumeration ----

std::vector<FOStructure> enumerate_structures(const Signature& sig,
                                              SemanticsKind kind,
                                              unsigned algebra_atoms,
                                              std::size_t universe_size,
                                              EnumerationLimits limits) {
  if (universe_size == 0 || universe_size > limits.max_universe)
    throw FOError("universe size outside enumeration limits");
  if (algebra_atoms > limits.max_algebra_atoms)
    throw FOError("algebra outside enumeration limits");

  FiniteBooleanAlgebra alg(algebra_atoms);
  std::size_t msize = kind == SemanticsKind::Swap ? swap_domain(alg).size()
                                                  : twist_domain(alg).size();
  std::vector<std::string> domain;
  for (std::size_t i = 0; i < universe_size; ++i)
    domain.push_back(std::string(1, static_cast<char>('a' + i)));

  // Collect every free slot: constants, function table cells, predicate
  // table cells. Each slot ranges over the universe or the matrix domain.
  struct Slot {
    enum class What { Constant, Function, Predicate } what;
    std::string name;
    std::size_t cell;
    std::size_t range;
  };
  std::vector<Slot> slots;
  for (const auto& c : sig.constants())
    slots.push_back({Slot::What::Constant, c, 0, universe_size});
  for (const auto& [f, ar] : sig.functions())
    for (std::size_t cell = 0; cell < ipow(universe_size, ar); ++cell)
      slots.push_back({Slot::What::Function, f, cell, universe_size});
  for (const auto& [p, ar] : sig.predicates())
    for (std::size_t cell = 0; cell < ipow(universe_size, ar); ++cell)
      slots.push_back({Slot::What::Predicate, p, cell, msize});

  std::size_t total = 1;
  for (const auto& s : slots) {
    total *= s.range;
    if (total > limits.max_structures)
      throw FOError("structure enumeration exceeds limit");
  }

  std::optional<PredicateTable> fixed_equality;
  if (sig.has_equality()) {
    std::shared_ptr<SwapNmatrix> sm;
    std::shared_ptr<TwistMatrix> tm;
    if (kind == SemanticsKind::Swap)
      sm = std::make_shared<SwapNmatrix>(SwapNmatrix::full(alg));
    else
      tm = std::make_shared<TwistMatrix>(TwistMatrix::over(alg));
    fixed_equality = make_equality_table(kind, sm.get(), tm.get(),
                                         universe_size,
                                         EqualityDefault::Classical);
  }

  std::vector<FOStructure> out;
  out.reserve(total);
  std::vector<std::size_t> choice(slots.size(), 0);
  for (std::size_t k = 0; k < total; ++k) {
    FOStructureData data;
    data.signature = sig;
    data.kind = kind;
    data.algebra_atoms = algebra_atoms;
    data.domain = domain;
    for (const auto& [f, ar] : sig.functions()) {
      FunctionTable t;
      t.arity = ar;
      t.values.resize(ipow(universe_size, ar));
      data.functions[f] = std::move(t);
    }
    for (const auto& [p, ar] : sig.predicates()) {
      PredicateTable t;
      t.arity = ar;
      t.values.resize(ipow(universe_size, ar));
      data.predicates[p] = std::move(t);
    }
    for (std::size_t i = 0; i < slots.size(); ++i) {
      const Slot& s = slots[i];
      switch (s.what) {
        case Slot::What::Constant: data.constants[s.name] = choice[i]; break;
        case Slot::What::Function:
          data.functions[s.name].values[s.cell] = choice[i];
          break;
        case Slot::What::Predicate:
          data.predicates[s.name].values[s.cell] = choice[i];
          break;
      }
    }
    if (fixed_equality) data.equality = fixed_equality;
    out.push_back(FOStructure(std::move(data)));
    for (std::size_t i = slots.size(); i-- > 0;) {
      if (++choice[i] < slots[i].range) break;
      choice[i] = 0;
    }
  }
  return out;
}

}  // namespace lfikit
