#include "lfikit/selftest.hpp"

#include <memory>
#include <sstream>

#include "lfikit/prop.hpp"
#include "lfikit/swap.hpp"
#include "lfikit/twist.hpp"

namespace lfikit {

namespace {

// Condensed five-valued tables, rows and columns ordered T, t, t0, F, f0.
// 'D' marks the output set {T,t,t0}, 'N' the set {F,f0}.
constexpr const char* kM5And[5] = {"DDDNN", "DDDNN", "DDDNN", "NNNNN", "NNNNN"};
constexpr const char* kM5Or[5] = {"DDDDD", "DDDDD", "DDDDD", "DDDNN", "DDDNN"};
constexpr const char* kM5Imp[5] = {"DDDNN", "DDDNN", "DDDNN", "DDDDD", "DDDDD"};
constexpr const char* kM5Neg = "NDNDD";
constexpr const char* kM5Cons = "DNNDN";

const char* kM5Names[5] = {"T", "t", "t0", "F", "f0"};

// Three-valued tables, rows and columns ordered 1, 1/2, 0.
constexpr const char* kLfi1And[3] = {"1h0", "hh0", "000"};
constexpr const char* kLfi1Or[3] = {"111", "1hh", "1h0"};
constexpr const char* kLfi1Imp[3] = {"1h0", "1h0", "111"};
constexpr const char* kLfi1Neg = "0h1";
constexpr const char* kLfi1Cons = "101";

const char* kLfi1Names[3] = {"1", "1/2", "0"};

std::vector<std::size_t> named_order(const SwapNmatrix& m) {
  std::vector<std::size_t> order;
  for (const char* n : kM5Names)
    for (std::size_t i = 0; i < m.size(); ++i)
      if (m.value_name(i) == n) order.push_back(i);
  return order;
}

bool output_is(const SwapNmatrix& m, const std::vector<std::size_t>& out,
               char expected) {
  std::vector<std::size_t> want;
  for (std::size_t i = 0; i < m.size(); ++i)
    if (m.designated(i) == (expected == 'D')) want.push_back(i);
  return out == want;
}

}  // namespace

SelfTestResult golden_m5_tables() {
  SelfTestResult r{"golden tables: five-valued matrix", true, ""};
  SwapNmatrix m = SwapNmatrix::m5();
  auto order = named_order(m);
  if (order.size() != 5) return {r.name, false, "value naming is broken"};

  std::ostringstream bad;
  auto check_bin = [&](BinConn op, const char* const table[5], const char* sym) {
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j)
        if (!output_is(m, m.binary(op, order[i], order[j]), table[i][j]))
          bad << " " << kM5Names[i] << sym << kM5Names[j];
  };
  check_bin(BinConn::And, kM5And, "&");
  check_bin(BinConn::Or, kM5Or, "|");
  check_bin(BinConn::Imp, kM5Imp, "->");
  for (int i = 0; i < 5; ++i) {
    if (!output_is(m, m.unary(UnConn::Neg, order[i]), kM5Neg[i]))
      bad << " ~" << kM5Names[i];
    if (!output_is(m, m.unary(UnConn::Cons, order[i]), kM5Cons[i]))
      bad << " *" << kM5Names[i];
  }
  if (!bad.str().empty()) return {r.name, false, "mismatch at" + bad.str()};
  return r;
}

SelfTestResult golden_lfi1_tables() {
  SelfTestResult r{"golden tables: three-valued matrix", true, ""};
  TwistMatrix m = TwistMatrix::lfi1();
  TwistPair v1{m.algebra().top(), m.algebra().bottom()};
  TwistPair vh{m.algebra().top(), m.algebra().top()};
  TwistPair v0{m.algebra().bottom(), m.algebra().top()};
  const TwistPair vals[3] = {v1, vh, v0};
  auto decode = [&](char c) { return c == '1' ? v1 : c == 'h' ? vh : v0; };

  std::ostringstream bad;
  auto check_bin = [&](TwistPair (TwistMatrix::*op)(const TwistPair&,
                                                    const TwistPair&) const,
                       const char* const table[3], const char* sym) {
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        if ((m.*op)(vals[i], vals[j]) != decode(table[i][j]))
          bad << " " << kLfi1Names[i] << sym << kLfi1Names[j];
  };
  check_bin(&TwistMatrix::op_and, kLfi1And, "&");
  check_bin(&TwistMatrix::op_or, kLfi1Or, "|");
  check_bin(&TwistMatrix::op_imp, kLfi1Imp, "->");
  for (int i = 0; i < 3; ++i) {
    if (m.op_neg(vals[i]) != decode(kLfi1Neg[i])) bad << " ~" << kLfi1Names[i];
    if (m.op_cons(vals[i]) != decode(kLfi1Cons[i])) bad << " *" << kLfi1Names[i];
  }
  if (!bad.str().empty()) return {r.name, false, "mismatch at" + bad.str()};
  return r;
}

SelfTestResult domain_cardinalities(unsigned max_atoms) {
  SelfTestResult r{"domain cardinalities 5^n and 3^n", true, ""};
  for (unsigned n = 0; n <= max_atoms; ++n) {
    FiniteBooleanAlgebra alg(n);
    std::size_t want5 = 1, want3 = 1;
    for (unsigned i = 0; i < n; ++i) want5 *= 5, want3 *= 3;
    if (swap_domain(alg).size() != want5)
      return {r.name, false, "snapshot count wrong at n=" + std::to_string(n)};
    if (twist_domain(alg).size() != want3)
      return {r.name, false, "twist count wrong at n=" + std::to_string(n)};
  }
  return r;
}

SelfTestResult lfi_laws_m5() {
  SelfTestResult r{"paraconsistency laws over the five-valued matrix", true, ""};
  auto m5 = std::make_shared<SwapNmatrix>(SwapNmatrix::m5());
  Formula p = Formula::atom("p"), q = Formula::atom("q");

  if (prop_consequence({p, Formula::neg(p)}, q, m5).holds)
    return {r.name, false, "p, ~p |= q should fail"};
  if (!prop_consequence({Formula::cons(p), p, Formula::neg(p)}, q, m5).holds)
    return {r.name, false, "*p, p, ~p |= q should hold"};
  if (!is_valid(Formula::disj(p, Formula::neg(p)), m5))
    return {r.name, false, "p | ~p should be valid"};
  if (is_valid(Formula::imp(Formula::neg(Formula::neg(p)), p), m5))
    return {r.name, false, "~~p -> p should be invalid"};
  if (is_valid(Formula::imp(Formula::neg(Formula::conj(p, Formula::neg(p))),
                            Formula::cons(p)),
               m5))
    return {r.name, false, "~(p & ~p) -> *p should be invalid"};
  return r;
}

SelfTestResult lfi1_axioms_twist(unsigned max_atoms) {
  SelfTestResult r{"three-valued axioms over twist matrices", true, ""};
  Formula p = Formula::atom("p"), q = Formula::atom("q");
  std::vector<std::pair<std::string, Formula>> axioms = {
      {"ci", Formula::imp(Formula::neg(Formula::cons(p)),
                          Formula::conj(p, Formula::neg(p)))},
      {"dneg", make_iff(Formula::neg(Formula::neg(p)), p)},
      {"negOr", make_iff(Formula::neg(Formula::disj(p, q)),
                         Formula::conj(Formula::neg(p), Formula::neg(q)))},
      {"negAnd", make_iff(Formula::neg(Formula::conj(p, q)),
                          Formula::disj(Formula::neg(p), Formula::neg(q)))},
      {"negImp", make_iff(Formula::neg(Formula::imp(p, q)),
                          Formula::conj(p, Formula::neg(q)))},
  };
  for (unsigned n = 0; n <= max_atoms; ++n) {
    TwistMatrix m = TwistMatrix::over(FiniteBooleanAlgebra(n));
    for (const auto& [name, ax] : axioms)
      if (!twist_consequence({}, ax, m).holds)
        return {r.name, false,
                name + " fails over the " + std::to_string(n) + "-atom algebra"};
  }
  return r;
}

Formula random_prop_formula(std::mt19937_64& rng,
                            const std::vector<std::string>& atoms,
                            unsigned depth) {
  auto pick_atom = [&]() {
    return Formula::atom(atoms[rng() % atoms.size()]);
  };
  if (depth == 0) return pick_atom();
  switch (rng() % 6) {
    case 0: return pick_atom();
    case 1: return Formula::neg(random_prop_formula(rng, atoms, depth - 1));
    case 2: return Formula::cons(random_prop_formula(rng, atoms, depth - 1));
    case 3:
      return Formula::conj(random_prop_formula(rng, atoms, depth - 1),
                           random_prop_formula(rng, atoms, depth - 1));
    case 4:
      return Formula::disj(random_prop_formula(rng, atoms, depth - 1),
                           random_prop_formula(rng, atoms, depth - 1));
    default:
      return Formula::imp(random_prop_formula(rng, atoms, depth - 1),
                          random_prop_formula(rng, atoms, depth - 1));
  }
}

SelfTestResult oracle_equivalence(std::size_t instances, std::uint64_t seed) {
  SelfTestResult r{"five-valued vs bivaluation consequence", true, ""};
  std::mt19937_64 rng(seed);
  auto m5 = std::make_shared<SwapNmatrix>(SwapNmatrix::m5());
  std::vector<std::string> atoms = {"p", "q", "r"};
  for (std::size_t k = 0; k < instances; ++k) {
    std::size_t n_premises = rng() % 3;
    std::vector<Formula> premises;
    for (std::size_t i = 0; i < n_premises; ++i)
      premises.push_back(random_prop_formula(rng, atoms, 3));
    Formula goal = random_prop_formula(rng, atoms, 3);
    bool nmatrix = prop_consequence(premises, goal, m5).holds;
    bool bival = bival_consequence(premises, goal).holds;
    if (nmatrix != bival) {
      std::string detail = "disagreement on instance " + std::to_string(k) + ": ";
      for (const auto& p : premises) detail += to_string(p) + "; ";
      detail += "goal " + to_string(goal);
      return {r.name, false, detail};
    }
  }
  r.detail = std::to_string(instances) + " instances agree";
  return r;
}

std::vector<SelfTestResult> run_selftests(std::uint64_t seed) {
  return {
      golden_m5_tables(),
      golden_lfi1_tables(),
      domain_cardinalities(4),
      lfi_laws_m5(),
      lfi1_axioms_twist(2),
      oracle_equivalence(50, seed),
  };
}

}  // namespace lfikit
