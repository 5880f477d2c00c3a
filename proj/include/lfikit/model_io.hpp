#ifndef LFIKIT_MODEL_IO_HPP
#define LFIKIT_MODEL_IO_HPP

#include <string>

#include "lfikit/fo.hpp"
#include "lfikit/proof.hpp"

namespace lfikit {

// JSON wire formats.
//
// Model file:
//   {
//     "semantics": "swap" | "twist",
//     "algebra": {"type": "powerset", "atoms": n},
//     "domain": ["a", "b"],
//     "constants": {"c": "a"},
//     "functions": {"f": {"a": "b", "b": "a"}},        keys are comma-joined
//     "predicates": {"P": {"a": [[0], []], ...}},       argument tuples
//     "equality": "standard-classical" | "standard-mid" | explicit table
//   }
// Predicate values are element encodings (sorted atom-index lists): three for
// swap snapshots, two for twist pairs.

struct ModelIOError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

FOStructure parse_model(const std::string& json_text);
FOStructure load_model_file(const std::string& path);
std::string model_to_json(const FOStructure& s);

// Proof script: {"logic": "...", "premises": ["..."], "steps": [
//   {"formula": "...", "by": "premise" | "axiom:A11" | "mp:1,2"
//                           | "exists-in:3" | "forall-in:3"}]}
// Step references are 1-based. The signature used for parsing formulas may
// be given inline as {"signature": {...}} or defaults to loose parsing.
Derivation parse_proof_script(const std::string& json_text);
Derivation load_proof_file(const std::string& path);

// Signature block: {"constants": [...], "functions": {"f": 1},
//                   "predicates": {"P": 1}, "equality": true}
Signature parse_signature_json(const std::string& json_text);

}  // namespace lfikit

#endif
