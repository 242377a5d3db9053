#include <memory>
#include <random>

#include "doctest.h"
#include "finsec/limit_operator.hpp"
#include "random_ops.hpp"

using namespace finsec;

namespace {

Element z(std::int64_t x) { return Element(GroupKind::IntegerLattice, {x}); }

}  // namespace

TEST_CASE("exceptions vanish in the limit") {
  auto g = std::make_shared<const Group>(Group::integer_lattice(1));
  auto a = BandOperator::multiplication(g, Diagonal::perturbed(1.0, {{z(0), 0.0}, {z(3), 2.0}}));
  for (auto dir : {z(1), z(-1), z(5)}) {
    auto r = limit_operator(a, SequenceSpec::ray(dir));
    REQUIRE(r.converged());
    REQUIRE(r.branches.size() == 1);
    CHECK(r.branches[0].op == BandOperator::identity(g));
  }
}

TEST_CASE("constant coefficients are fixed points") {
  auto f = std::make_shared<const Group>(Group::free_group(2));
  BandOperator a(f);
  a.add_term(f->word("a"), Diagonal::constant(2.0));
  a.add_term(f->word("B"), Diagonal::constant({0, 1}));
  for (const char* w : {"a", "b", "A", "ab"}) {
    auto r = limit_operator(a, SequenceSpec::ray(f->word(w)));
    REQUIRE(r.converged());
    CHECK(r.branches[0].op == a);
  }
  auto path = GeodesicPath{{f->word("a")}, {f->word("b"), f->word("a")}};
  auto r = limit_operator(a, SequenceSpec::inverse_geodesic(path));
  REQUIRE(r.converged());
  CHECK(r.branches[0].op == a);
}

TEST_CASE("periodic coefficients give one limit per visited residue") {
  auto g = std::make_shared<const Group>(Group::integer_lattice(1));
  auto d = Diagonal::periodic({2}, {2.0, 0.5});
  auto a = BandOperator::multiplication(g, d);
  auto even = limit_operator(a, SequenceSpec::ray(z(2)));
  REQUIRE(even.converged());
  CHECK(even.branches.size() == 1);
  CHECK(even.branches[0].op == a);
  auto odd = limit_operator(a, SequenceSpec::ray(z(1)));
  REQUIRE(odd.converged());
  CHECK(odd.branches.size() == 2);
  // Offsets 0 and 1: the second branch swaps the table.
  CHECK(odd.branches[1].op == BandOperator::multiplication(g, Diagonal::periodic({2}, {0.5, 2.0})));

  auto path = GeodesicPath::ray(z(1));
  auto geo = limit_operator(a, SequenceSpec::inverse_geodesic(path));
  REQUIRE(geo.converged());
  CHECK(geo.branches.size() == 2);
}

TEST_CASE("limit operators along shifts match shifted kernels") {
  auto g = std::make_shared<const Group>(Group::integer_lattice(1));
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    auto a = finsec::testing::random_operator(g, rng);
    auto r = limit_operator(a, SequenceSpec::ray(z(1)));
    REQUIRE(r.converged());
    for (const auto& br : r.branches) {
      // Far out along the subsequence h(n) = offset + n P the shifted
      // kernel equals the limit kernel on a fixed window.
      const auto period = common_period(a)[0];
      const Element h = g->mul(br.offset, z(40 * period));
      for (int t = -3; t <= 3; ++t) {
        for (int s = -3; s <= 3; ++s) {
          CHECK(br.op.kernel(z(t), z(s)) == a.kernel(g->mul(z(t), g->inv(h)), g->mul(z(s), g->inv(h))));
        }
      }
    }
  }
}

TEST_CASE("non-convergent sequences are reported") {
  auto g = std::make_shared<const Group>(Group::integer_lattice(1));
  auto a = BandOperator::shift(g, z(1));
  CHECK_FALSE(limit_operator(a, SequenceSpec::ray(z(0))).converged());
  CHECK_FALSE(limit_operator(a, SequenceSpec::inverse_geodesic(GeodesicPath{{z(1)}, {}})).converged());
  CHECK_FALSE(limit_operator(a, SequenceSpec::inverse_geodesic(GeodesicPath{{}, {z(1), z(-1)}})).converged());

  auto p = BandOperator::multiplication(g, Diagonal::periodic({2}, {1.0, 3.0}));
  std::vector<Element> pts;
  for (int n = 1; n <= 10; ++n) pts.push_back(z(n));
  auto r = limit_operator(p, SequenceSpec::explicit_points(pts));
  REQUIRE_FALSE(r.converged());
  CHECK(r.failure->band_element.has_value());

  std::vector<Element> evens;
  for (int n = 1; n <= 10; ++n) evens.push_back(z(2 * n));
  auto ok = limit_operator(p, SequenceSpec::explicit_points(evens));
  REQUIRE(ok.converged());
  CHECK(ok.branches[0].op == p);

  std::vector<Element> stuck(8, z(3));
  CHECK_FALSE(limit_operator(p, SequenceSpec::explicit_points(stuck)).converged());
}

TEST_CASE("limits are multiplicative on structured pairs") {
  std::mt19937_64 rng(8);
  for (auto g : {std::make_shared<const Group>(Group::integer_lattice(1)),
                 std::make_shared<const Group>(Group::free_group(2))}) {
    for (int trial = 0; trial < 20; ++trial) {
      auto a = finsec::testing::random_operator(g, rng);
      auto b = finsec::testing::random_operator(g, rng);
      auto off = finsec::testing::random_element(*g, rng, 2);
      CHECK(limit_along_offset(compose(a, b), off) ==
            compose(limit_along_offset(a, off), limit_along_offset(b, off)));
    }
  }
}

TEST_CASE("sequence evaluation") {
  auto g = Group::integer_lattice(1);
  CHECK(SequenceSpec::ray(z(2)).at(g, 3) == z(6));
  CHECK(SequenceSpec::inverse_geodesic(GeodesicPath::ray(z(1))).at(g, 4) == z(-4));
  CHECK(SequenceSpec::ray(z(2)).describe(g) == "ray(2)");
}
