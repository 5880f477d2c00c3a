#ifndef LFIKIT_PROOF_HPP
#define LFIKIT_PROOF_HPP

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "lfikit/syntax.hpp"

namespace lfikit {

// Derivation checker for the Hilbert calculi. Steps carry explicit
// justifications; the checker verifies, it never searches for proofs.

enum class LogicId { MbC, QmbC, LFI1o, QLFI1o, QmbCEq };

std::optional<LogicId> logic_from_string(const std::string& s);
std::string to_string(LogicId id);

struct Schema {
  std::string id;
  std::string display;                         // human-readable schema text
  std::function<bool(const Formula&)> matches;
  Formula sample;                              // a canonical instance
};

class SchemaCatalog {
public:
  static const SchemaCatalog& instance();

  const std::vector<const Schema*>& for_logic(LogicId id) const;
  const Schema* find(const std::string& schema_id) const;
  // Whether the logic admits the quantifier rules.
  static bool first_order(LogicId id);

private:
  SchemaCatalog();
  std::vector<Schema> all_;
  std::vector<std::vector<const Schema*>> per_logic_;
};

// True iff the formula instantiates the schema (side conditions included).
bool match_axiom(const std::string& schema_id, const Formula& f);

struct Justification {
  enum class Kind { Premise, Axiom, MP, ExistsIn, ForallIn };
  Kind kind;
  std::string schema_id;   // Axiom
  std::size_t ref1 = 0;    // MP: minor premise; rules: source step
  std::size_t ref2 = 0;    // MP: implication step
};

struct Step {
  Formula formula;
  Justification by;
};

struct Derivation {
  LogicId logic = LogicId::MbC;
  std::vector<Formula> premises;
  std::vector<Step> steps;

  const Formula& conclusion() const;
};

struct StepVerdict {
  bool ok = true;
  std::string reason;  // empty when ok
};

StepVerdict check_step(const Derivation& d, std::size_t index);

struct DerivationVerdict {
  bool valid = true;
  std::size_t failed_step = 0;  // 0-based, meaningful when !valid
  std::string reason;
};

DerivationVerdict check_derivation(const Derivation& d);

}  // namespace lfikit

#endif
