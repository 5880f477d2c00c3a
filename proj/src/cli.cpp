#include "lfikit/cli.hpp"

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "lfikit/fo.hpp"
#include "lfikit/model_io.hpp"
#include "lfikit/proof.hpp"
#include "lfikit/prop.hpp"
#include "lfikit/selftest.hpp"

namespace lfikit {

namespace {

using nlohmann::json;

struct MatrixSelector {
  bool swap = true;       // swap vs twist semantics
  unsigned atoms = 1;
  bool named = false;     // m5 / lfi1 value naming
};

MatrixSelector parse_matrix_selector(const std::string& sel) {
  if (sel == "m5") return {true, 1, true};
  if (sel == "lfi1") return {false, 1, true};
  auto parse_n = [&sel](std::size_t prefix) {
    return static_cast<unsigned>(std::stoul(sel.substr(prefix)));
  };
  if (sel.rfind("swap:", 0) == 0) return {true, parse_n(5), false};
  if (sel.rfind("twist:", 0) == 0) return {false, parse_n(6), false};
  throw CLI::ValidationError("--matrix",
                             "expected m5, lfi1, swap:<n> or twist:<n>");
}

Formula parse_loose(const std::string& text) {
  ParseOptions opts;
  opts.auto_declare_predicates = true;
  return parse_formula(text, Signature{}, opts);
}

json term_ast(const Term& t);

json formula_ast(const Formula& f) {
  json j;
  switch (f.kind()) {
    case Formula::Kind::Atom: {
      j["node"] = "atom";
      j["pred"] = f.pred();
      json args = json::array();
      for (const auto& t : f.terms()) args.push_back(term_ast(t));
      if (!args.empty()) j["args"] = args;
      break;
    }
    case Formula::Kind::Eq:
      j["node"] = "eq";
      j["lhs"] = term_ast(f.terms()[0]);
      j["rhs"] = term_ast(f.terms()[1]);
      break;
    case Formula::Kind::Neg:
      j["node"] = "neg";
      j["child"] = formula_ast(f.child());
      break;
    case Formula::Kind::Cons:
      j["node"] = "cons";
      j["child"] = formula_ast(f.child());
      break;
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Imp:
      j["node"] = f.kind() == Formula::Kind::And  ? "and"
                  : f.kind() == Formula::Kind::Or ? "or"
                                                  : "imp";
      j["lhs"] = formula_ast(f.lhs());
      j["rhs"] = formula_ast(f.rhs());
      break;
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
      j["node"] = f.kind() == Formula::Kind::Forall ? "forall" : "exists";
      j["var"] = f.bound_var();
      j["body"] = formula_ast(f.body());
      break;
  }
  return j;
}

json term_ast(const Term& t) {
  json j;
  switch (t.kind()) {
    case Term::Kind::Var: j["var"] = t.name(); break;
    case Term::Kind::Const: j["const"] = t.name(); break;
    case Term::Kind::DomainConst: j["domain"] = t.domain_index(); break;
    case Term::Kind::App: {
      j["fn"] = t.name();
      json args = json::array();
      for (const auto& a : t.args()) args.push_back(term_ast(a));
      j["args"] = args;
      break;
    }
  }
  return j;
}

// ---- table printing ----

std::vector<std::size_t> display_order(const SwapNmatrix& m);

std::string set_cell(const SwapNmatrix& m, const std::vector<std::size_t>& out) {
  std::string cell = "{";
  bool first = true;
  for (std::size_t i : display_order(m)) {
    if (std::find(out.begin(), out.end(), i) == out.end()) continue;
    if (!first) cell += ",";
    cell += m.value_name(i);
    first = false;
  }
  return cell + "}";
}

std::string condensed_cell(const SwapNmatrix& m,
                           const std::vector<std::size_t>& out) {
  std::vector<std::size_t> designated, nondesignated;
  for (std::size_t i = 0; i < m.size(); ++i)
    (m.designated(i) ? designated : nondesignated).push_back(i);
  if (out == designated) return "D";
  if (out == nondesignated) return "ND";
  return set_cell(m, out);
}

std::vector<std::size_t> display_order(const SwapNmatrix& m) {
  // customary order for the named matrix, canonical order otherwise
  static const char* named[5] = {"T", "t", "t0", "F", "f0"};
  std::vector<std::size_t> order;
  if (m.size() == 5) {
    for (const char* n : named)
      for (std::size_t i = 0; i < m.size(); ++i)
        if (m.value_name(i) == n) order.push_back(i);
    if (order.size() == 5) return order;
    order.clear();
  }
  for (std::size_t i = 0; i < m.size(); ++i) order.push_back(i);
  return order;
}

void print_grid(std::ostream& os, const std::vector<std::vector<std::string>>& g) {
  std::vector<std::size_t> width;
  for (const auto& row : g)
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (width.size() <= c) width.resize(c + 1, 0);
      width[c] = std::max(width[c], row[c].size());
    }
  for (const auto& row : g) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      os << row[c] << std::string(width[c] - row[c].size(), ' ');
      os << (c + 1 < row.size() ? "  " : "");
    }
    os << "\n";
  }
}

void print_swap_tables(std::ostream& os, const SwapNmatrix& m, bool condensed) {
  auto order = display_order(m);
  auto cell = [&](const std::vector<std::size_t>& out) {
    return condensed ? condensed_cell(m, out) : set_cell(m, out);
  };
  struct Bin {
    BinConn op;
    const char* sym;
  };
  for (const Bin& b : {Bin{BinConn::And, "&"}, Bin{BinConn::Or, "|"},
                       Bin{BinConn::Imp, "->"}}) {
    std::vector<std::vector<std::string>> grid;
    std::vector<std::string> head = {b.sym};
    for (std::size_t j : order) head.push_back(m.value_name(j));
    grid.push_back(head);
    for (std::size_t i : order) {
      std::vector<std::string> row = {m.value_name(i)};
      for (std::size_t j : order) row.push_back(cell(m.binary(b.op, i, j)));
      grid.push_back(row);
    }
    print_grid(os, grid);
    os << "\n";
  }
  std::vector<std::vector<std::string>> grid = {{"", "~", "*"}};
  for (std::size_t i : order)
    grid.push_back({m.value_name(i), cell(m.unary(UnConn::Neg, i)),
                    cell(m.unary(UnConn::Cons, i))});
  print_grid(os, grid);
}

void print_twist_tables(std::ostream& os, const TwistMatrix& m) {
  std::vector<std::size_t> order;
  if (m.size() == 3) {
    for (const char* n : {"1", "1/2", "0"})
      for (std::size_t i = 0; i < m.size(); ++i)
        if (m.value_name(i) == n) order.push_back(i);
  }
  if (order.size() != m.size()) {
    order.clear();
    for (std::size_t i = 0; i < m.size(); ++i) order.push_back(i);
  }
  struct Bin {
    TwistPair (TwistMatrix::*op)(const TwistPair&, const TwistPair&) const;
    const char* sym;
  };
  for (const Bin& b :
       {Bin{&TwistMatrix::op_and, "&"}, Bin{&TwistMatrix::op_or, "|"},
        Bin{&TwistMatrix::op_imp, "->"}}) {
    std::vector<std::vector<std::string>> grid;
    std::vector<std::string> head = {b.sym};
    for (std::size_t j : order) head.push_back(m.value_name(j));
    grid.push_back(head);
    for (std::size_t i : order) {
      std::vector<std::string> row = {m.value_name(i)};
      for (std::size_t j : order)
        row.push_back(m.value_name((m.*b.op)(m.domain()[i], m.domain()[j])));
      grid.push_back(row);
    }
    print_grid(os, grid);
    os << "\n";
  }
  std::vector<std::vector<std::string>> grid = {{"", "~", "*"}};
  for (std::size_t i : order)
    grid.push_back({m.value_name(i), m.value_name(m.op_neg(m.domain()[i])),
                    m.value_name(m.op_cons(m.domain()[i]))});
  print_grid(os, grid);
}

// ---- consequence front ends ----

int prop_or_twist_check(std::ostream& out, const MatrixSelector& sel,
                        const std::vector<std::string>& premise_texts,
                        const std::string& goal_text, bool json_format,
                        bool validity) {
  const char* pass_word = validity ? "valid" : "holds";
  const char* fail_word = validity ? "invalid" : "countermodel";
  std::vector<Formula> premises;
  for (const auto& t : premise_texts) premises.push_back(parse_loose(t));
  Formula goal = parse_loose(goal_text);

  if (sel.swap) {
    auto m = std::make_shared<SwapNmatrix>(
        sel.named ? SwapNmatrix::m5()
                  : SwapNmatrix::full(FiniteBooleanAlgebra(sel.atoms)));
    PropVerdict v = prop_consequence(premises, goal, m);
    if (json_format) {
      json j;
      j["verdict"] = v.holds ? pass_word : fail_word;
      if (!v.holds) {
        json cm = json::object();
        for (const auto& f : v.countermodel->formulas())
          cm[to_string(f)] = m->value_name(v.countermodel->value_index(f));
        j["countermodel"] = cm;
      }
      out << j.dump(2) << "\n";
    } else if (v.holds) {
      out << pass_word << "\n";
    } else {
      out << fail_word << ", countermodel:\n";
      for (const auto& f : v.countermodel->formulas())
        out << "  " << to_string(f) << "  ->  "
            << m->value_name(v.countermodel->value_index(f)) << "\n";
    }
    return v.holds ? 0 : 1;
  }

  TwistMatrix m = sel.named ? TwistMatrix::lfi1()
                            : TwistMatrix::over(FiniteBooleanAlgebra(sel.atoms));
  TwistVerdict v = twist_consequence(premises, goal, m);
  if (json_format) {
    json j;
    j["verdict"] = v.holds ? pass_word : fail_word;
    if (!v.holds) {
      json cm = json::object();
      for (const auto& [atom, val] : v.countermodel)
        cm[atom] = m.value_name(val);
      j["countermodel"] = cm;
    }
    out << j.dump(2) << "\n";
  } else if (v.holds) {
    out << pass_word << "\n";
  } else {
    out << fail_word << ", countermodel:\n";
    for (const auto& [atom, val] : v.countermodel)
      out << "  " << atom << "  ->  " << m.value_name(val) << "\n";
  }
  return v.holds ? 0 : 1;
}

std::vector<Formula> parse_with_model(const FOStructure& s,
                                      const std::vector<std::string>& texts) {
  std::vector<Formula> out;
  for (const auto& t : texts)
    out.push_back(parse_formula(t, s.signature()));
  return out;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"workbench for paraconsistent swap/twist semantics and proofs"};
  app.require_subcommand(1);
  std::string format = "text";
  app.add_option("--format", format, "output format: text or json")
      ->check(CLI::IsMember({"text", "json"}));

  // parse
  auto* cmd_parse = app.add_subcommand("parse", "parse a formula and print it");
  std::string parse_text;
  std::string sig_file;
  cmd_parse->add_option("formula", parse_text, "formula text")->required();
  cmd_parse->add_option("--signature", sig_file,
                        "JSON signature file (loose parsing otherwise)");

  // tables
  auto* cmd_tables =
      app.add_subcommand("tables", "print the operation tables of a matrix");
  std::string tables_sel;
  bool tables_full = false;
  cmd_tables->add_option("matrix", tables_sel, "m5 | lfi1 | swap:n | twist:n")
      ->required();
  cmd_tables->add_flag("--full", tables_full,
                       "swap tables: print full snapshot sets instead of D/ND");

  // check-valid
  auto* cmd_valid = app.add_subcommand("check-valid", "validity in a matrix");
  std::string valid_matrix = "m5";
  std::string valid_text;
  cmd_valid->add_option("--matrix", valid_matrix, "m5 | lfi1 | swap:n | twist:n");
  cmd_valid->add_option("formula", valid_text, "formula text")->required();

  // check-conseq
  auto* cmd_conseq = app.add_subcommand("check-conseq", "consequence in a matrix");
  std::string conseq_matrix = "m5";
  std::vector<std::string> conseq_premises;
  std::string conseq_goal;
  cmd_conseq->add_option("--matrix", conseq_matrix, "m5 | lfi1 | swap:n | twist:n");
  cmd_conseq->add_option("--premise", conseq_premises, "premise (repeatable)");
  cmd_conseq->add_option("--goal", conseq_goal, "goal formula")->required();

  // fo-eval
  auto* cmd_foeval =
      app.add_subcommand("fo-eval", "evaluate a sentence in a model");
  std::string foeval_model, foeval_sentence;
  cmd_foeval->add_option("--model", foeval_model, "model JSON file")->required();
  cmd_foeval->add_option("--sentence", foeval_sentence, "sentence text")
      ->required();

  // fo-conseq
  auto* cmd_foconseq =
      app.add_subcommand("fo-conseq", "consequence over a model");
  std::string foconseq_model, foconseq_goal;
  std::vector<std::string> foconseq_premises;
  std::size_t closure_cap = kDefaultClosureCap;
  cmd_foconseq->add_option("--model", foconseq_model, "model JSON file")
      ->required();
  cmd_foconseq->add_option("--premise", foconseq_premises, "premise (repeatable)");
  cmd_foconseq->add_option("--goal", foconseq_goal, "goal formula")->required();
  cmd_foconseq->add_option("--closure-cap", closure_cap,
                           "ground-closure size cap");

  // prove-check
  auto* cmd_prove = app.add_subcommand("prove-check", "check a derivation");
  std::string prove_logic = "mbc", prove_proof, prove_premises_file;
  cmd_prove->add_option("--logic", prove_logic,
                        "mbc | qmbc | lfi1o | qlfi1o | qmbceq");
  cmd_prove->add_option("--proof", prove_proof, "proof script JSON")->required();
  cmd_prove->add_option("--premises", prove_premises_file,
                        "text file, one premise per line");

  // axioms
  auto* cmd_axioms = app.add_subcommand("axioms", "list the axiom schemas");
  std::string axioms_logic;
  cmd_axioms->add_option("logic", axioms_logic, "mbc | qmbc | lfi1o | qlfi1o | qmbceq")
      ->required();

  // selftest
  auto* cmd_selftest =
      app.add_subcommand("selftest", "run the built-in verification fixtures");
  std::uint64_t seed = 20240901;
  cmd_selftest->add_option("--seed", seed, "seed for the randomized fixtures");

  std::vector<std::string> argv = args;
  std::reverse(argv.begin(), argv.end());  // CLI11 wants reversed argv
  try {
    app.parse(argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      out << app.help();
      return 0;
    }
    err << e.what() << "\n";
    return 2;
  }

  bool as_json = format == "json";

  try {
    if (*cmd_parse) {
      Signature sig;
      ParseOptions opts;
      if (!sig_file.empty()) {
        std::ifstream in(sig_file);
        if (!in) {
          err << "cannot open signature file\n";
          return 2;
        }
        std::stringstream ss;
        ss << in.rdbuf();
        sig = parse_signature_json(ss.str());
      } else {
        opts.auto_declare_predicates = true;
      }
      Formula f = parse_formula(parse_text, sig, opts);
      if (as_json) {
        json j;
        j["formula"] = to_string(f);
        j["ast"] = formula_ast(f);
        json fv = json::array();
        for (const auto& v : free_vars_ordered(f)) fv.push_back(v);
        j["free_vars"] = fv;
        out << j.dump(2) << "\n";
      } else {
        out << to_string(f) << "\n";
      }
      return 0;
    }

    if (*cmd_tables) {
      MatrixSelector sel = parse_matrix_selector(tables_sel);
      if (sel.swap) {
        SwapNmatrix m = sel.named
                            ? SwapNmatrix::m5()
                            : SwapNmatrix::full(FiniteBooleanAlgebra(sel.atoms));
        if (m.size() > 125) {
          err << "matrix too large to print (" << m.size() << " values)\n";
          return 2;
        }
        print_swap_tables(out, m, !tables_full);
        if (!tables_full) {
          out << "\n";
          print_swap_tables(out, m, false);
        }
      } else {
        TwistMatrix m = sel.named
                            ? TwistMatrix::lfi1()
                            : TwistMatrix::over(FiniteBooleanAlgebra(sel.atoms));
        if (m.size() > 81) {
          err << "matrix too large to print (" << m.size() << " values)\n";
          return 2;
        }
        print_twist_tables(out, m);
      }
      return 0;
    }

    if (*cmd_valid)
      return prop_or_twist_check(out, parse_matrix_selector(valid_matrix), {},
                                 valid_text, as_json, true);
    if (*cmd_conseq)
      return prop_or_twist_check(out, parse_matrix_selector(conseq_matrix),
                                 conseq_premises, conseq_goal, as_json, false);

    if (*cmd_foeval) {
      FOStructure s = load_model_file(foeval_model);
      Formula f = parse_formula(foeval_sentence, s.signature());
      if (!is_sentence(f)) {
        err << "fo-eval needs a sentence (no free variables)\n";
        return 2;
      }
      GroundSentence sigma = canonicalize(s, f, {});
      if (s.kind() == SemanticsKind::Twist) {
        TwistPair v = qlfi1_interpret(s, sigma);
        bool d = s.twist_matrix()->designated(v);
        if (as_json) {
          json j;
          j["value"] = s.twist_matrix()->value_name(v);
          j["designated"] = d;
          out << j.dump(2) << "\n";
        } else {
          out << s.twist_matrix()->value_name(v)
              << (d ? "  (designated)" : "  (not designated)") << "\n";
        }
        return d ? 0 : 1;
      }
      // Swap semantics: report every value the sentence takes across legal
      // valuations of its closure.
      auto values = swap_attainable_values(s, sigma);
      bool all_designated = true;
      for (std::size_t v : values)
        all_designated = all_designated && s.value_designated(v);
      if (as_json) {
        json j = json::array();
        for (std::size_t v : values) j.push_back(s.value_name(v));
        json res;
        res["attainable"] = j;
        res["all_designated"] = all_designated;
        out << res.dump(2) << "\n";
      } else {
        out << "attainable values:";
        for (std::size_t v : values) out << " " << s.value_name(v);
        out << "\n";
      }
      return all_designated ? 0 : 1;
    }

    if (*cmd_foconseq) {
      FOStructure s = load_model_file(foconseq_model);
      std::vector<Formula> premises = parse_with_model(s, foconseq_premises);
      Formula goal = parse_formula(foconseq_goal, s.signature());
      if (s.kind() == SemanticsKind::Twist) {
        QLFI1Verdict v = qlfi1_consequence(premises, goal, s);
        if (as_json) {
          json j;
          j["verdict"] = v.holds ? "holds" : "countermodel";
          if (!v.holds) {
            json mu = json::object();
            for (const auto& [var, val] : v.assignment)
              mu[var] = s.domain()[val];
            j["assignment"] = mu;
            j["value"] = s.twist_matrix()->value_name(*v.value);
          }
          out << j.dump(2) << "\n";
        } else if (v.holds) {
          out << "holds\n";
        } else {
          out << "countermodel assignment:";
          for (const auto& [var, val] : v.assignment)
            out << " " << var << "=" << s.domain()[val];
          out << "\n  goal value " << s.twist_matrix()->value_name(*v.value)
              << "\n";
        }
        return v.holds ? 0 : 1;
      }
      QmbCVerdict v = qmbc_consequence(premises, goal, s, closure_cap);
      if (as_json) {
        json j;
        j["verdict"] = v.holds ? "holds" : "countermodel";
        if (!v.holds) {
          json cm = json::object();
          for (const auto& f : v.countermodel->sentences())
            cm[to_string(f)] = s.value_name(v.countermodel->value_index(f));
          j["countermodel"] = cm;
          j["note"] = "closure-level witness";
        }
        out << j.dump(2) << "\n";
      } else if (v.holds) {
        out << "holds\n";
      } else {
        out << "countermodel (closure-level witness):\n";
        for (const auto& f : v.countermodel->sentences())
          out << "  " << to_string(f) << "  ->  "
              << s.value_name(v.countermodel->value_index(f)) << "\n";
      }
      return v.holds ? 0 : 1;
    }

    if (*cmd_prove) {
      std::ifstream in(prove_proof);
      if (!in) {
        err << "cannot open proof file\n";
        return 2;
      }
      std::stringstream ss;
      ss << in.rdbuf();
      Derivation d = parse_proof_script(ss.str());
      auto logic = logic_from_string(prove_logic);
      if (!logic) {
        err << "unknown logic '" << prove_logic << "'\n";
        return 2;
      }
      d.logic = *logic;
      if (!prove_premises_file.empty()) {
        std::ifstream pin(prove_premises_file);
        if (!pin) {
          err << "cannot open premises file\n";
          return 2;
        }
        ParseOptions opts;
        opts.auto_declare_predicates = true;
        Signature sig;
        if (d.logic == LogicId::QmbCEq) sig.set_equality(true);
        std::string line;
        d.premises.clear();
        while (std::getline(pin, line)) {
          if (line.empty()) continue;
          d.premises.push_back(parse_formula(line, sig, opts));
        }
      }
      DerivationVerdict v = check_derivation(d);
      if (as_json) {
        json j;
        j["verdict"] = v.valid ? "accepted" : "rejected";
        if (!v.valid) {
          j["failed_step"] = v.failed_step + 1;
          j["reason"] = v.reason;
        } else {
          j["conclusion"] = to_string(d.conclusion());
        }
        out << j.dump(2) << "\n";
      } else if (v.valid) {
        out << "accepted: " << to_string(d.conclusion()) << "\n";
      } else {
        out << "rejected at step " << (v.failed_step + 1) << ": " << v.reason
            << "\n";
      }
      return v.valid ? 0 : 1;
    }

    if (*cmd_axioms) {
      auto logic = logic_from_string(axioms_logic);
      if (!logic) {
        err << "unknown logic '" << axioms_logic << "'\n";
        return 2;
      }
      const auto& schemas = SchemaCatalog::instance().for_logic(*logic);
      if (as_json) {
        json j = json::array();
        for (const Schema* s : schemas)
          j.push_back({{"id", s->id}, {"schema", s->display}});
        out << j.dump(2) << "\n";
      } else {
        for (const Schema* s : schemas)
          out << s->id << "\t" << s->display << "\n";
      }
      return 0;
    }

    if (*cmd_selftest) {
      auto results = run_selftests(seed);
      bool all = true;
      for (const auto& r : results) {
        all = all && r.pass;
        out << (r.pass ? "[PASS] " : "[FAIL] ") << r.name;
        if (!r.detail.empty()) out << " — " << r.detail;
        out << "\n";
      }
      out << (all ? "selftest passed" : "selftest FAILED") << "\n";
      return all ? 0 : 1;
    }
  } catch (const CLI::ValidationError& e) {
    err << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  err << "no subcommand\n";
  return 2;
}

}  // namespace lfikit
