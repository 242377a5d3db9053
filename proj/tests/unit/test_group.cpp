#include <random>
#include <set>

#include "doctest.h"
#include "finsec/errors.hpp"
#include "finsec/group.hpp"

using namespace finsec;

namespace {

Element random_element(const Group& g, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> coord(-4, 4);
  switch (g.kind()) {
    case GroupKind::IntegerLattice: {
      std::vector<std::int64_t> v(static_cast<std::size_t>(g.rank()));
      for (auto& x : v) x = coord(rng);
      return g.element(v);
    }
    case GroupKind::Heisenberg:
      return g.element({coord(rng), coord(rng), coord(rng)});
    case GroupKind::FreeGroup: {
      std::uniform_int_distribution<int> len(0, 6);
      std::uniform_int_distribution<int> letter(1, g.rank());
      std::vector<std::int64_t> w;
      for (int i = len(rng); i > 0; --i) w.push_back(letter(rng) * (rng() % 2 ? 1 : -1));
      return g.element(w);
    }
  }
  return g.identity();
}

}  // namespace

TEST_CASE("group axioms hold on random triples") {
  std::mt19937_64 rng(7);
  for (const auto& g : {Group::integer_lattice(2), Group::free_group(2), Group::heisenberg()}) {
    for (int i = 0; i < 300; ++i) {
      auto a = random_element(g, rng);
      auto b = random_element(g, rng);
      auto c = random_element(g, rng);
      CHECK(g.mul(g.mul(a, b), c) == g.mul(a, g.mul(b, c)));
      CHECK(g.mul(a, g.identity()) == a);
      CHECK(g.mul(g.identity(), a) == a);
      CHECK(g.mul(a, g.inv(a)) == g.identity());
      CHECK(g.mul(g.inv(a), a) == g.identity());
    }
  }
}

TEST_CASE("heisenberg arithmetic") {
  auto h = Group::heisenberg();
  auto a = h.element({1, 1, 1});
  CHECK(h.inv(a) == h.element({-1, -1, 0}));
  auto x = h.element({1, 0, 0});
  auto y = h.element({0, 1, 0});
  // [x, y] = x y x^-1 y^-1 = (0, 0, 1).
  auto comm = h.mul(h.mul(x, y), h.mul(h.inv(x), h.inv(y)));
  CHECK(comm == h.element({0, 0, 1}));
  CHECK(word_length(h, comm) == 4);
  CHECK(h.pow(x, 3) == h.element({3, 0, 0}));
}

TEST_CASE("free group words reduce") {
  auto f = Group::free_group(2);
  CHECK(f.word("aA") == f.identity());
  CHECK(f.word("abBa") == f.word("aa"));
  CHECK(f.format(f.word("aBA")) == "aBA");
  CHECK(f.inv(f.word("ab")) == f.word("BA"));
  CHECK_THROWS_AS(f.word("a1"), InvalidInput);
  CHECK_THROWS_AS(f.word("c"), InvalidInput);
}

TEST_CASE("ball sizes") {
  SUBCASE("Z with {-1, 0, 1}") {
    auto z = Group::integer_lattice(1);
    for (int n = 0; n <= 20; ++n) CHECK(ball(z, n).size() == static_cast<std::size_t>(2 * n + 1));
  }
  SUBCASE("Z^2 cross") {
    auto z2 = Group::integer_lattice(2);
    auto sizes = growth_profile(z2, 3);
    CHECK(sizes == std::vector<std::size_t>{1, 5, 13, 25});
  }
  SUBCASE("F2 is 2*3^n - 1") {
    auto f = Group::free_group(2);
    auto sizes = growth_profile(f, 6);
    std::size_t p = 1;
    for (int n = 0; n <= 6; ++n) {
      CHECK(sizes[static_cast<std::size_t>(n)] == 2 * p - 1);
      p *= 3;
    }
  }
  SUBCASE("Heisenberg against brute-force word enumeration") {
    // Frozen from enumerating all words of length n over {e, x^+-1, y^+-1}.
    const std::vector<std::size_t> expected{1, 5, 17, 53, 135, 299, 593, 1069};
    CHECK(growth_profile(Group::heisenberg(), 7) == expected);
  }
}

TEST_CASE("word length closed forms agree with BFS") {
  auto z2 = Group::integer_lattice(2);
  auto layers = balls(z2, 5);
  for (int n = 1; n <= 5; ++n) {
    for (const auto& g : layers[static_cast<std::size_t>(n)]) {
      if (!layers[static_cast<std::size_t>(n - 1)].contains(g)) CHECK(word_length(z2, g) == n);
    }
  }
  auto f = Group::free_group(2);
  CHECK(word_length(f, f.word("abAB")) == 4);
}

TEST_CASE("non-standard generating sets") {
  auto z = Group::integer_lattice(1, {Element(GroupKind::IntegerLattice, {-2}),
                                      Element(GroupKind::IntegerLattice, {3}),
                                      Element(GroupKind::IntegerLattice, {0})});
  CHECK(z.generators().size() == 3);
  CHECK(ball(z, 1).size() == 3);
  CHECK(word_length(z, Element(GroupKind::IntegerLattice, {1})) == 2);
  // {0, 2} generates only the even integers.
  CHECK_THROWS_AS(Group::integer_lattice(1, {Element(GroupKind::IntegerLattice, {0}),
                                             Element(GroupKind::IntegerLattice, {2})}),
                  InvalidInput);
}

TEST_CASE("capacity bound on balls") {
  auto f = Group::free_group(2).with_max_ball_size(1000);
  CHECK_NOTHROW(ball(f, 5));
  CHECK_THROWS_AS(ball(f, 7), CapacityExceeded);
}

TEST_CASE("product and inverse sets") {
  auto z = Group::integer_lattice(1);
  auto s = product_set(z, ball(z, 1), ball(z, 2));
  CHECK(s == ball(z, 3));
  auto f = Group::free_group(2);
  FiniteSet a({f.word("ab"), f.word("B")});
  CHECK(inverse_set(f, a) == FiniteSet({f.word("BA"), f.word("b")}));
}
