#include "lfikit/model_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace lfikit {

using nlohmann::json;

namespace {

std::size_t domain_index(const std::vector<std::string>& domain,
                         const std::string& name) {
  for (std::size_t i = 0; i < domain.size(); ++i)
    if (domain[i] == name) return i;
  throw ModelIOError("'" + name + "' is not a domain element");
}

// "a,b" -> indices of a and b
std::vector<std::size_t> parse_tuple_key(const std::vector<std::string>& domain,
                                         const std::string& key) {
  std::vector<std::size_t> out;
  std::stringstream ss(key);
  std::string part;
  while (std::getline(ss, part, ',')) out.push_back(domain_index(domain, part));
  return out;
}

std::string tuple_key(const std::vector<std::string>& domain,
                      const std::vector<std::size_t>& args) {
  std::string out;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ",";
    out += domain[args[i]];
  }
  return out;
}

std::size_t tuple_cell(const std::vector<std::size_t>& args, std::size_t u) {
  std::size_t idx = 0;
  for (std::size_t a : args) idx = idx * u + a;
  return idx;
}

std::size_t value_index_from_json(const json& j, const FiniteBooleanAlgebra& alg,
                                  SemanticsKind kind, const SwapNmatrix* swap,
                                  const TwistMatrix* twist) {
  if (!j.is_array())
    throw ModelIOError("matrix value must be a list of element encodings");
  auto element = [&alg](const json& enc) {
    std::vector<unsigned> atoms;
    for (const auto& a : enc) atoms.push_back(a.get<unsigned>());
    return alg.from_atom_list(atoms);
  };
  if (kind == SemanticsKind::Swap) {
    if (j.size() != 3)
      throw ModelIOError("swap predicate values need 3 element encodings");
    Snapshot s{element(j[0]), element(j[1]), element(j[2])};
    auto idx = swap->find(s);
    if (!idx)
      throw ModelIOError("triple " + to_string(s) + " is not a snapshot");
    return *idx;
  }
  if (j.size() != 2)
    throw ModelIOError("twist predicate values need 2 element encodings");
  TwistPair p{element(j[0]), element(j[1])};
  auto idx = twist->find(p);
  if (!idx)
    throw ModelIOError("pair " + to_string(p) + " is not a twist pair");
  return *idx;
}

json value_index_to_json(const FOStructure& s, std::size_t idx) {
  json out = json::array();
  auto enc = [](const BAElement& e) {
    json j = json::array();
    for (unsigned a : e.atom_list()) j.push_back(a);
    return j;
  };
  if (s.kind() == SemanticsKind::Swap) {
    const Snapshot& snap = s.swap_matrix()->domain()[idx];
    out.push_back(enc(snap.truth));
    out.push_back(enc(snap.negation));
    out.push_back(enc(snap.consistency));
  } else {
    const TwistPair& p = s.twist_matrix()->domain()[idx];
    out.push_back(enc(p.truth));
    out.push_back(enc(p.negation));
  }
  return out;
}

}  // namespace

FOStructure parse_model(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ModelIOError(std::string("model is not valid JSON: ") + e.what());
  }

  FOStructureData data;
  std::string sem = j.value("semantics", "");
  if (sem == "swap")
    data.kind = SemanticsKind::Swap;
  else if (sem == "twist")
    data.kind = SemanticsKind::Twist;
  else
    throw ModelIOError("\"semantics\" must be \"swap\" or \"twist\"");

  if (!j.contains("algebra") || j["algebra"].value("type", "") != "powerset")
    throw ModelIOError("\"algebra\" must be {\"type\":\"powerset\",\"atoms\":n}");
  data.algebra_atoms = j["algebra"].value("atoms", 0u);

  if (!j.contains("domain") || !j["domain"].is_array() || j["domain"].empty())
    throw ModelIOError("\"domain\" must be a nonempty list of element names");
  for (const auto& d : j["domain"])
    data.domain.push_back(d.get<std::string>());

  FiniteBooleanAlgebra alg(data.algebra_atoms);
  std::shared_ptr<SwapNmatrix> swap;
  std::shared_ptr<TwistMatrix> twist;
  if (data.kind == SemanticsKind::Swap)
    swap = std::make_shared<SwapNmatrix>(SwapNmatrix::full(alg));
  else
    twist = std::make_shared<TwistMatrix>(TwistMatrix::over(alg));

  const std::size_t u = data.domain.size();

  if (j.contains("constants")) {
    for (auto& [name, val] : j["constants"].items()) {
      data.signature.add_constant(name);
      data.constants[name] = domain_index(data.domain, val.get<std::string>());
    }
  }
  if (j.contains("functions")) {
    for (auto& [name, table] : j["functions"].items()) {
      unsigned arity = 0;
      FunctionTable t;
      std::map<std::size_t, std::size_t> cells;
      for (auto& [key, val] : table.items()) {
        auto args = parse_tuple_key(data.domain, key);
        if (arity == 0) arity = static_cast<unsigned>(args.size());
        if (args.size() != arity)
          throw ModelIOError("inconsistent arity in table for '" + name + "'");
        cells[tuple_cell(args, u)] =
            domain_index(data.domain, val.get<std::string>());
      }
      if (arity == 0)
        throw ModelIOError("empty function table for '" + name + "'");
      t.arity = arity;
      t.values.resize(cells.size());
      std::size_t expected = 1;
      for (unsigned i = 0; i < arity; ++i) expected *= u;
      if (cells.size() != expected)
        throw ModelIOError("function table for '" + name + "' is not total");
      t.values.resize(expected);
      for (auto& [cell, v] : cells) t.values[cell] = v;
      data.signature.add_function(name, arity);
      data.functions[name] = std::move(t);
    }
  }
  if (!j.contains("predicates") || j["predicates"].empty())
    throw ModelIOError("model needs at least one predicate");
  for (auto& [name, table] : j["predicates"].items()) {
    unsigned arity = 0;
    std::map<std::size_t, std::size_t> cells;
    for (auto& [key, val] : table.items()) {
      auto args = parse_tuple_key(data.domain, key);
      if (arity == 0) arity = static_cast<unsigned>(args.size());
      if (args.size() != arity)
        throw ModelIOError("inconsistent arity in table for '" + name + "'");
      cells[tuple_cell(args, u)] =
          value_index_from_json(val, alg, data.kind, swap.get(), twist.get());
    }
    if (arity == 0)
      throw ModelIOError("empty predicate table for '" + name + "'");
    std::size_t expected = 1;
    for (unsigned i = 0; i < arity; ++i) expected *= u;
    if (cells.size() != expected)
      throw ModelIOError("predicate table for '" + name + "' is not total");
    PredicateTable t;
    t.arity = arity;
    t.values.resize(expected);
    for (auto& [cell, v] : cells) t.values[cell] = v;
    data.signature.add_predicate(name, arity);
    data.predicates[name] = std::move(t);
  }

  if (j.contains("equality")) {
    data.signature.set_equality(true);
    const json& eq = j["equality"];
    if (eq.is_string()) {
      std::string which = eq.get<std::string>();
      EqualityDefault d;
      if (which == "standard-classical")
        d = EqualityDefault::Classical;
      else if (which == "standard-mid")
        d = EqualityDefault::Mid;
      else
        throw ModelIOError("unknown equality default '" + which + "'");
      data.equality =
          make_equality_table(data.kind, swap.get(), twist.get(), u, d);
    } else {
      std::map<std::size_t, std::size_t> cells;
      for (auto& [key, val] : eq.items()) {
        auto args = parse_tuple_key(data.domain, key);
        if (args.size() != 2)
          throw ModelIOError("equality table keys must be pairs");
        cells[args[0] * u + args[1]] =
            value_index_from_json(val, alg, data.kind, swap.get(), twist.get());
      }
      if (cells.size() != u * u)
        throw ModelIOError("equality table is not total");
      PredicateTable t;
      t.arity = 2;
      t.values.resize(u * u);
      for (auto& [cell, v] : cells) t.values[cell] = v;
      data.equality = std::move(t);
    }
  }

  try {
    return FOStructure(std::move(data));
  } catch (const FOError& e) {
    throw ModelIOError(e.what());
  }
}

FOStructure load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelIOError("cannot open model file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_model(ss.str());
}

std::string model_to_json(const FOStructure& s) {
  const auto& d = s.data();
  json j;
  j["semantics"] = d.kind == SemanticsKind::Swap ? "swap" : "twist";
  j["algebra"] = {{"type", "powerset"}, {"atoms", d.algebra_atoms}};
  j["domain"] = d.domain;
  if (!d.constants.empty()) {
    json c = json::object();
    for (const auto& [name, v] : d.constants) c[name] = d.domain[v];
    j["constants"] = c;
  }
  if (!d.functions.empty()) {
    json fs = json::object();
    const std::size_t u = d.domain.size();
    for (const auto& [name, t] : d.functions) {
      json table = json::object();
      std::vector<std::size_t> args(t.arity, 0);
      for (std::size_t cell = 0; cell < t.values.size(); ++cell) {
        std::size_t rest = cell;
        for (unsigned i = t.arity; i-- > 0;) {
          args[i] = rest % u;
          rest /= u;
        }
        table[tuple_key(d.domain, args)] = d.domain[t.values[cell]];
      }
      fs[name] = table;
    }
    j["functions"] = fs;
  }
  json ps = json::object();
  const std::size_t u = d.domain.size();
  for (const auto& [name, t] : d.predicates) {
    json table = json::object();
    std::vector<std::size_t> args(t.arity, 0);
    for (std::size_t cell = 0; cell < t.values.size(); ++cell) {
      std::size_t rest = cell;
      for (unsigned i = t.arity; i-- > 0;) {
        args[i] = rest % u;
        rest /= u;
      }
      table[tuple_key(d.domain, args)] = value_index_to_json(s, t.values[cell]);
    }
    ps[name] = table;
  }
  j["predicates"] = ps;
  if (d.equality) {
    json table = json::object();
    for (std::size_t a = 0; a < u; ++a)
      for (std::size_t b = 0; b < u; ++b)
        table[tuple_key(d.domain, {a, b})] =
            value_index_to_json(s, d.equality->values[a * u + b]);
    j["equality"] = table;
  }
  return j.dump(2);
}

Signature parse_signature_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ModelIOError(std::string("signature is not valid JSON: ") + e.what());
  }
  Signature sig;
  if (j.contains("constants"))
    for (const auto& c : j["constants"]) sig.add_constant(c.get<std::string>());
  if (j.contains("functions"))
    for (auto& [name, ar] : j["functions"].items())
      sig.add_function(name, ar.get<unsigned>());
  if (j.contains("predicates"))
    for (auto& [name, ar] : j["predicates"].items())
      sig.add_predicate(name, ar.get<unsigned>());
  if (j.value("equality", false)) sig.set_equality(true);
  return sig;
}

namespace {

Justification parse_justification(const std::string& by) {
  Justification out;
  auto split_refs = [&by](std::size_t pos) {
    std::vector<std::size_t> refs;
    std::stringstream ss(by.substr(pos));
    std::string part;
    while (std::getline(ss, part, ','))
      refs.push_back(std::stoull(part));
    return refs;
  };
  if (by == "premise") {
    out.kind = Justification::Kind::Premise;
  } else if (by.rfind("axiom:", 0) == 0) {
    out.kind = Justification::Kind::Axiom;
    out.schema_id = by.substr(6);
  } else if (by.rfind("mp:", 0) == 0) {
    out.kind = Justification::Kind::MP;
    auto refs = split_refs(3);
    if (refs.size() != 2 || refs[0] == 0 || refs[1] == 0)
      throw ModelIOError("mp needs two 1-based step references");
    out.ref1 = refs[0] - 1;
    out.ref2 = refs[1] - 1;
  } else if (by.rfind("exists-in:", 0) == 0) {
    out.kind = Justification::Kind::ExistsIn;
    auto refs = split_refs(10);
    if (refs.size() != 1 || refs[0] == 0)
      throw ModelIOError("exists-in needs one 1-based step reference");
    out.ref1 = refs[0] - 1;
  } else if (by.rfind("forall-in:", 0) == 0) {
    out.kind = Justification::Kind::ForallIn;
    auto refs = split_refs(10);
    if (refs.size() != 1 || refs[0] == 0)
      throw ModelIOError("forall-in needs one 1-based step reference");
    out.ref1 = refs[0] - 1;
  } else {
    throw ModelIOError("unknown justification '" + by + "'");
  }
  return out;
}

}  // namespace

Derivation parse_proof_script(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ModelIOError(std::string("proof script is not valid JSON: ") + e.what());
  }
  // A bare array is a step list; logic and premises then come from the
  // caller (the CLI flags).
  if (j.is_array()) j = json{{"steps", j}};
  Derivation d;
  auto logic = logic_from_string(j.value("logic", "mbc"));
  if (!logic) throw ModelIOError("unknown logic '" + j.value("logic", "") + "'");
  d.logic = *logic;

  Signature sig;
  ParseOptions opts;
  if (j.contains("signature")) {
    sig = parse_signature_json(j["signature"].dump());
  } else {
    opts.auto_declare_predicates = true;
    if (d.logic == LogicId::QmbCEq) sig.set_equality(true);
  }

  if (j.contains("premises"))
    for (const auto& p : j["premises"])
      d.premises.push_back(parse_formula(p.get<std::string>(), sig, opts));
  if (!j.contains("steps") || !j["steps"].is_array())
    throw ModelIOError("proof script needs a \"steps\" list");
  for (const auto& step : j["steps"]) {
    Formula f = parse_formula(step.at("formula").get<std::string>(), sig, opts);
    Justification by = parse_justification(step.at("by").get<std::string>());
    d.steps.push_back({std::move(f), std::move(by)});
  }
  return d;
}

Derivation load_proof_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelIOError("cannot open proof file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_proof_script(ss.str());
}

}  // namespace lfikit
