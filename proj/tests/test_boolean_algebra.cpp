#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "lfikit/boolean_algebra.hpp"

using namespace lfikit;

TEST_CASE("powerset algebra sizes and extremes") {
  FiniteBooleanAlgebra a0(0);
  CHECK(a0.size() == 1);
  CHECK(a0.top() == a0.bottom());  // degenerate: 0 = 1

  FiniteBooleanAlgebra a1(1);
  CHECK(a1.size() == 2);
  CHECK(a1.top() != a1.bottom());

  FiniteBooleanAlgebra a3(3);
  CHECK(a3.size() == 8);

  CHECK_THROWS_AS(FiniteBooleanAlgebra(17), AlgebraError);
}

TEST_CASE("two-element algebra implication") {
  auto a2 = FiniteBooleanAlgebra::two();
  CHECK(imp(a2.top(), a2.bottom()) == a2.bottom());
  CHECK(imp(a2.bottom(), a2.bottom()) == a2.top());
  CHECK(imp(a2.top(), a2.top()) == a2.top());
}

TEST_CASE("binary meet/join/compl on concrete subsets") {
  FiniteBooleanAlgebra alg(2);
  auto x = alg.from_atom_list({0});
  auto y = alg.from_atom_list({1});
  CHECK(meet(x, y) == alg.bottom());
  CHECK(join(x, y) == alg.top());
  CHECK(complement(alg.top()) == alg.bottom());
  CHECK(complement(x) == y);
}

TEST_CASE("mixed-algebra operations are hard errors") {
  FiniteBooleanAlgebra a2(2), a3(3);
  CHECK_THROWS_AS(meet(a2.top(), a3.top()), AlgebraError);
  CHECK_THROWS_AS(leq(a2.bottom(), a3.bottom()), AlgebraError);
}

TEST_CASE("boolean algebra laws on random triples") {
  std::mt19937 rng(7);
  for (unsigned n : {1u, 3u, 5u}) {
    FiniteBooleanAlgebra alg(n);
    for (int k = 0; k < 200; ++k) {
      auto x = alg.element(rng() & alg.mask());
      auto y = alg.element(rng() & alg.mask());
      auto z = alg.element(rng() & alg.mask());
      // distributivity
      CHECK(meet(x, join(y, z)) == join(meet(x, y), meet(x, z)));
      CHECK(join(x, meet(y, z)) == meet(join(x, y), join(x, z)));
      // De Morgan
      CHECK(complement(meet(x, y)) == join(complement(x), complement(y)));
      CHECK(complement(join(x, y)) == meet(complement(x), complement(y)));
      // complementation
      CHECK(meet(x, complement(x)) == alg.bottom());
      CHECK(join(x, complement(x)) == alg.top());
      // residuation: imp(x,y) = top iff x <= y
      CHECK((imp(x, y) == alg.top()) == leq(x, y));
    }
  }
}

TEST_CASE("big meet/join agree with iterated binary versions") {
  std::mt19937 rng(11);
  FiniteBooleanAlgebra alg(4);
  for (int k = 0; k < 100; ++k) {
    std::size_t len = 1 + rng() % 6;
    std::vector<BAElement> xs;
    for (std::size_t i = 0; i < len; ++i)
      xs.push_back(alg.element(rng() & alg.mask()));
    BAElement m = xs[0], j = xs[0];
    for (std::size_t i = 1; i < len; ++i) {
      m = meet(m, xs[i]);
      j = join(j, xs[i]);
    }
    CHECK(big_meet(alg, xs) == m);
    CHECK(big_join(alg, xs) == j);
  }
}

TEST_CASE("empty infimum is top, empty supremum is bottom") {
  FiniteBooleanAlgebra alg(3);
  CHECK(big_meet(alg, {}) == alg.top());
  CHECK(big_join(alg, {}) == alg.bottom());

  std::vector<BAElement> both = {alg.bottom(), alg.top()};
  CHECK(big_join(alg, both) == alg.top());

  std::vector<BAElement> two = {alg.from_atom_list({0}),
                                alg.from_atom_list({0, 1})};
  CHECK(big_meet(alg, two) == alg.from_atom_list({0}));
}

TEST_CASE("atom list round-trips") {
  FiniteBooleanAlgebra alg(5);
  auto x = alg.from_atom_list({0, 2, 4});
  CHECK(x.atom_list() == std::vector<unsigned>{0, 2, 4});
  CHECK(alg.from_atom_list(x.atom_list()) == x);
  CHECK(to_string(x) == "{0,2,4}");
}
