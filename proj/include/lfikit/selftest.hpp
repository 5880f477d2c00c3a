#ifndef LFIKIT_SELFTEST_HPP
#define LFIKIT_SELFTEST_HPP

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "lfikit/syntax.hpp"

namespace lfikit {

// Built-in verification fixtures: the five-valued and three-valued golden
// tables, domain cardinalities, the characteristic paraconsistency laws,
// and the agreement between the Nmatrix route and the bivaluation route to
// propositional consequence. The CLI `selftest` subcommand runs all of
// them; the acceptance suite builds on the same checks.

struct SelfTestResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

SelfTestResult golden_m5_tables();
SelfTestResult golden_lfi1_tables();
SelfTestResult domain_cardinalities(unsigned max_atoms = 4);
SelfTestResult lfi_laws_m5();
SelfTestResult lfi1_axioms_twist(unsigned max_atoms = 2);
SelfTestResult oracle_equivalence(std::size_t instances, std::uint64_t seed);

std::vector<SelfTestResult> run_selftests(std::uint64_t seed);

// Random propositional formula over the given atoms, connective depth
// bounded by `depth`.
Formula random_prop_formula(std::mt19937_64& rng,
                            const std::vector<std::string>& atoms,
                            unsigned depth);

}  // namespace lfikit

#endif
