#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "lfikit/syntax.hpp"

using namespace lfikit;

namespace {

Signature fo_sig() {
  Signature sig;
  sig.add_constant("c");
  sig.add_constant("d");
  sig.add_function("f", 1);
  sig.add_function("g", 2);
  sig.add_predicate("P", 1);
  sig.add_predicate("Q", 2);
  sig.add_predicate("p", 0);
  sig.add_predicate("q", 0);
  sig.set_equality(true);
  return sig;
}

// Random formulas over the FO signature (quantifiers included), for the
// variant/printer property tests.
Formula random_term_formula(std::mt19937& rng, unsigned depth) {
  static const std::vector<std::string> vars = {"x", "y", "z"};
  auto term = [&](auto&& self, unsigned d) -> Term {
    switch (rng() % (d == 0 ? 3 : 4)) {
      case 0: return Term::var(vars[rng() % vars.size()]);
      case 1: return Term::constant(rng() % 2 ? "c" : "d");
      case 2: return Term::domain_const(rng() % 3);
      default: {
        if (rng() % 2) return Term::app("f", {self(self, d - 1)});
        return Term::app("g", {self(self, d - 1), self(self, d - 1)});
      }
    }
  };
  auto atom = [&]() -> Formula {
    switch (rng() % 4) {
      case 0: return Formula::atom("P", {term(term, 1)});
      case 1: return Formula::atom("Q", {term(term, 1), term(term, 1)});
      case 2: return Formula::eq(term(term, 1), term(term, 1));
      default: return Formula::atom(rng() % 2 ? "p" : "q");
    }
  };
  if (depth == 0) return atom();
  switch (rng() % 8) {
    case 0: return atom();
    case 1: return Formula::neg(random_term_formula(rng, depth - 1));
    case 2: return Formula::cons(random_term_formula(rng, depth - 1));
    case 3:
      return Formula::conj(random_term_formula(rng, depth - 1),
                           random_term_formula(rng, depth - 1));
    case 4:
      return Formula::disj(random_term_formula(rng, depth - 1),
                           random_term_formula(rng, depth - 1));
    case 5:
      return Formula::imp(random_term_formula(rng, depth - 1),
                          random_term_formula(rng, depth - 1));
    case 6:
      return Formula::forall(vars[rng() % vars.size()],
                             random_term_formula(rng, depth - 1));
    default:
      return Formula::exists(vars[rng() % vars.size()],
                             random_term_formula(rng, depth - 1));
  }
}

}  // namespace

TEST_CASE("parser: basic shapes") {
  Signature sig = fo_sig();

  Formula f = parse_formula("~P(c) & *P(c)", sig);
  REQUIRE(f.kind() == Formula::Kind::And);
  CHECK(f.lhs().kind() == Formula::Kind::Neg);
  CHECK(f.lhs().child().kind() == Formula::Kind::Atom);
  CHECK(f.rhs().kind() == Formula::Kind::Cons);

  Formula g = parse_formula("forall x. P(x) -> exists y. Q(x,y)", sig);
  REQUIRE(g.kind() == Formula::Kind::Forall);  // quantifier swallows the arrow
  REQUIRE(g.body().kind() == Formula::Kind::Imp);
  CHECK(g.body().rhs().kind() == Formula::Kind::Exists);
}

TEST_CASE("parser: error positions and undeclared symbols") {
  Signature sig = fo_sig();
  try {
    parse_formula("P(x,", sig);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.offset == 4);
  }
  CHECK_THROWS_AS(parse_formula("R(x)", sig), ParseError);     // undeclared
  CHECK_THROWS_AS(parse_formula("P(x,y)", sig), ParseError);   // arity
  CHECK_THROWS_AS(parse_formula("P(f(x,y))", sig), ParseError);
}

TEST_CASE("parser: precedence and associativity") {
  Signature sig = fo_sig();
  Formula f = parse_formula("p -> q -> p", sig);
  REQUIRE(f.kind() == Formula::Kind::Imp);
  CHECK(f.rhs().kind() == Formula::Kind::Imp);  // right-associative

  Formula g = parse_formula("~p & q | p -> q", sig);
  // (((~p) & q) | p) -> q
  REQUIRE(g.kind() == Formula::Kind::Imp);
  REQUIRE(g.lhs().kind() == Formula::Kind::Or);
  REQUIRE(g.lhs().lhs().kind() == Formula::Kind::And);
  CHECK(g.lhs().lhs().lhs().kind() == Formula::Kind::Neg);

  Formula h = parse_formula("c = d & p", sig);
  REQUIRE(h.kind() == Formula::Kind::And);
  CHECK(h.lhs().kind() == Formula::Kind::Eq);

  Formula dc = parse_formula("P(@1)", sig);
  CHECK(dc.terms()[0].kind() == Term::Kind::DomainConst);
  CHECK(dc.terms()[0].domain_index() == 1);
}

TEST_CASE("parser and printer round-trip on random formulas") {
  Signature sig = fo_sig();
  std::mt19937 rng(42);
  for (int k = 0; k < 1000; ++k) {
    Formula f = random_term_formula(rng, 4);
    Formula back = parse_formula(to_string(f), sig);
    CHECK(back == f);
  }
}

TEST_CASE("free variables") {
  Signature sig = fo_sig();
  CHECK(free_vars(parse_formula("forall x. Q(x,y)", sig)) ==
        std::set<std::string>{"y"});
  CHECK(free_vars(parse_formula("P(c)", sig)).empty());
  CHECK(free_vars(parse_formula("(forall x. P(x)) & P(x)", sig)) ==
        std::set<std::string>{"x"});
  CHECK(free_vars_ordered(parse_formula("Q(y,x) -> P(x)", sig)) ==
        std::vector<std::string>{"y", "x"});
}

TEST_CASE("substitution") {
  Signature sig = fo_sig();
  Formula px = parse_formula("P(x)", sig);
  CHECK(substitute(px, "x", Term::constant("c")) == parse_formula("P(c)", sig));

  Formula all = parse_formula("forall x. P(x)", sig);
  CHECK(substitute(all, "x", Term::constant("c")) == all);  // no free x

  Formula cap = parse_formula("forall y. Q(x,y)", sig);
  CHECK_THROWS_AS(substitute(cap, "x", Term::app("f", {Term::var("y")})),
                  CaptureError);
}

TEST_CASE("free-for side condition") {
  Signature sig = fo_sig();
  Formula f = parse_formula("forall y. Q(x,y)", sig);
  CHECK(is_free_for(Term::constant("c"), "x", f));
  CHECK_FALSE(is_free_for(Term::var("y"), "x", f));
  // identity substitution is always free
  std::mt19937 rng(3);
  for (int k = 0; k < 50; ++k) {
    Formula g = random_term_formula(rng, 3);
    CHECK(is_free_for(Term::var("x"), "x", g));
  }
}

TEST_CASE("substitution interacts with free variables as expected") {
  std::mt19937 rng(5);
  Term t = Term::app("g", {Term::var("u"), Term::constant("c")});
  for (int k = 0; k < 200; ++k) {
    Formula f = random_term_formula(rng, 3);
    if (!free_vars(f).count("x")) continue;
    if (!is_free_for(t, "x", f)) continue;
    auto fv = free_vars(f);
    fv.erase("x");
    fv.insert("u");
    CHECK(free_vars(substitute(f, "x", t)) == fv);
  }
}

TEST_CASE("variants") {
  Signature sig = fo_sig();
  CHECK(is_variant(parse_formula("forall x. P(x)", sig),
                   parse_formula("forall z. P(z)", sig)));
  CHECK(is_variant(parse_formula("forall y. P(c)", sig),
                   parse_formula("P(c)", sig)));  // void quantifier
  CHECK_FALSE(is_variant(parse_formula("forall x. P(x)", sig),
                         parse_formula("exists x. P(x)", sig)));
  CHECK_FALSE(is_variant(parse_formula("P(x)", sig),
                         parse_formula("P(y)", sig)));  // free vars must match
  CHECK(is_variant(
      parse_formula("forall x. forall y. Q(x,y)", sig),
      parse_formula("forall y. forall x. Q(y,x)", sig)));
}

TEST_CASE("variant relation is an equivalence on random formulas") {
  std::mt19937 rng(9);
  std::vector<Formula> pool;
  for (int k = 0; k < 60; ++k) pool.push_back(random_term_formula(rng, 3));
  for (const auto& f : pool) CHECK(is_variant(f, f));
  for (int k = 0; k < 300; ++k) {
    const Formula& a = pool[rng() % pool.size()];
    const Formula& b = pool[rng() % pool.size()];
    const Formula& c = pool[rng() % pool.size()];
    CHECK(is_variant(a, b) == is_variant(b, a));
    if (is_variant(a, b) && is_variant(b, c)) CHECK(is_variant(a, c));
  }
}

TEST_CASE("universal closure") {
  Signature sig = fo_sig();
  Formula f = parse_formula("Q(x,y)", sig);
  Formula closed = universal_closure(f);
  CHECK(closed == parse_formula("forall x. forall y. Q(x,y)", sig));

  Formula sent = parse_formula("forall x. P(x)", sig);
  CHECK(universal_closure(sent) == sent);

  // first-occurrence order
  Formula g = parse_formula("P(y) -> q & P(x)", sig);
  CHECK(universal_closure(g) ==
        parse_formula("forall y. forall x. (P(y) -> q & P(x))", sig));

  std::mt19937 rng(13);
  for (int k = 0; k < 200; ++k)
    CHECK(free_vars(universal_closure(random_term_formula(rng, 3))).empty());
}

TEST_CASE("derived connectives") {
  Signature sig = fo_sig();
  Formula p = parse_formula("p", sig), q = parse_formula("q", sig);
  CHECK(derived_bottom(p) == parse_formula("p & (~p & *p)", sig));
  CHECK(derived_strong_neg(q, p) == parse_formula("q -> p & (~p & *p)", sig));
  CHECK(make_iff(p, q) == parse_formula("(p -> q) & (q -> p)", sig));
}

TEST_CASE("partial replacement") {
  Signature sig = fo_sig();
  auto ok = [&sig](const char* a, const char* b) {
    return partial_replace_ok(parse_formula(a, sig), parse_formula(b, sig),
                              "x", "y");
  };
  CHECK(ok("Q(x,x)", "Q(x,y)"));   // replace one occurrence
  CHECK(ok("Q(x,x)", "Q(y,y)"));   // replace all
  CHECK(ok("Q(x,x)", "Q(x,x)"));   // replace none
  CHECK_FALSE(ok("P(x)", "Q(x,x)"));
  CHECK_FALSE(ok("P(x)", "P(c)"));
  // bound occurrences stay fixed
  CHECK_FALSE(partial_replace_ok(parse_formula("forall x. P(x)", sig),
                                 parse_formula("forall x. P(y)", sig), "x", "y"));
}

TEST_CASE("signature invariants") {
  Signature sig;
  sig.add_predicate("P", 1);
  CHECK_THROWS_AS(sig.add_constant("P"), SyntaxError);  // name collision
  CHECK_THROWS_AS(sig.add_function("h", 0), SyntaxError);
  CHECK_THROWS_AS(sig.add_constant("@1"), SyntaxError);  // reserved namespace
}
