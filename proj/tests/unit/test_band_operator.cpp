#include <memory>
#include <random>

#include "doctest.h"
#include "finsec/band_operator.hpp"
#include "finsec/errors.hpp"
#include "random_ops.hpp"

using namespace finsec;
using finsec::testing::random_element;
using finsec::testing::random_operator;

namespace {

std::vector<std::shared_ptr<const Group>> groups() {
  return {std::make_shared<const Group>(Group::integer_lattice(1)),
          std::make_shared<const Group>(Group::integer_lattice(2)),
          std::make_shared<const Group>(Group::free_group(2)),
          std::make_shared<const Group>(Group::heisenberg())};
}

Element z(std::int64_t x) { return Element(GroupKind::IntegerLattice, {x}); }

}  // namespace

TEST_CASE("diagonal normalisation") {
  auto d = Diagonal::periodic({4}, {1, 2, 1, 2});
  CHECK(d.period() == std::vector<std::int64_t>{2});
  CHECK(Diagonal::periodic({3}, {5, 5, 5}) == Diagonal::constant(5));
  CHECK(Diagonal::perturbed(1, {{z(0), 1.0}}) == Diagonal::constant(1));
  CHECK(Diagonal::perturbed(1, {{z(0), 0.0}}).rule() == Diagonal::Rule::PerturbedConstant);
  auto p = Diagonal::periodic({2}, {2, 0.5});
  CHECK(p(z(0)) == Complex(2));
  CHECK(p(z(-1)) == Complex(0.5));
  CHECK(p(z(7)) == Complex(0.5));
  CHECK_THROWS_AS(Diagonal::periodic({2}, {1, 2, 3}), InvalidInput);
}

TEST_CASE("diagonal arithmetic is pointwise") {
  std::mt19937_64 rng(5);
  auto g = Group::integer_lattice(1);
  for (int i = 0; i < 50; ++i) {
    auto a = finsec::testing::random_diagonal(g, rng);
    auto b = finsec::testing::random_diagonal(g, rng);
    auto r = random_element(g, rng, 3);
    auto sum = a + b;
    auto prod = a * b;
    auto rt = right_translate(a, g, r);
    for (int t = -8; t <= 8; ++t) {
      CHECK(sum(z(t)) == a(z(t)) + b(z(t)));
      CHECK(prod(z(t)) == a(z(t)) * b(z(t)));
      CHECK(rt(z(t)) == a(g.mul(z(t), g.inv(r))));
    }
  }
}

TEST_CASE("periodic rules only on lattices") {
  auto f = std::make_shared<const Group>(Group::free_group(2));
  BandOperator a(f);
  CHECK_THROWS_AS(a.add_term(f->identity(), Diagonal::periodic({2}, {1, 2})), InvalidInput);
  auto z2 = std::make_shared<const Group>(Group::integer_lattice(2));
  BandOperator b(z2);
  CHECK_THROWS_AS(b.add_term(z2->identity(), Diagonal::periodic({2}, {1, 2})), InvalidInput);
}

TEST_CASE("kernel of simple operators") {
  auto g = std::make_shared<const Group>(Group::integer_lattice(1));
  auto l1 = BandOperator::shift(g, z(1));
  CHECK(l1.kernel(z(3), z(2)) == Complex(1));
  CHECK(l1.kernel(z(2), z(3)) == Complex(0));
  auto zero = l1 - l1;
  CHECK(zero.is_zero());
  CHECK(l1.band_width() == FiniteSet({z(1)}));
}

TEST_CASE("compose, adjoint and shift conjugation against kernel sums") {
  std::mt19937_64 rng(42);
  for (const auto& g : groups()) {
    for (int trial = 0; trial < 10; ++trial) {
      auto a = random_operator(g, rng);
      auto b = random_operator(g, rng);
      auto ab = compose(a, b);
      auto as = adjoint(a);
      auto r = random_element(*g, rng, 2);
      auto ar = conjugate_shift(a, r);
      auto window = ball(*g, 2);
      auto middle = ball(*g, 4);
      for (const auto& t : window) {
        for (const auto& s : window) {
          Complex sum{};
          for (const auto& m : middle) sum += a.kernel(t, m) * b.kernel(m, s);
          CHECK(ab.kernel(t, s) == sum);
          CHECK(as.kernel(t, s) == std::conj(a.kernel(s, t)));
          CHECK(ar.kernel(t, s) == a.kernel(g->mul(t, g->inv(r)), g->mul(s, g->inv(r))));
        }
      }
      CHECK(adjoint(adjoint(a)) == a);
      CHECK(compose(a, BandOperator::identity(g)) == a);
      CHECK(compose(BandOperator::identity(g), a) == a);
    }
  }
}

TEST_CASE("apply matches the kernel") {
  std::mt19937_64 rng(9);
  for (const auto& g : groups()) {
    auto a = random_operator(g, rng);
    WindowVector u{ball(*g, 1), {}};
    for (std::size_t i = 0; i < u.window.size(); ++i) u.values.push_back(finsec::testing::random_complex(rng));
    auto v = apply(a, u);
    CHECK(v.window == product_set(*g, a.band_width(), u.window));
    for (const auto& t : ball(*g, 3)) {
      Complex expected{};
      for (const auto& s : u.window) expected += a.kernel(t, s) * u.at(s);
      CHECK(v.at(t) == expected);
    }
  }
}

TEST_CASE("operator algebra") {
  std::mt19937_64 rng(1);
  auto g = std::make_shared<const Group>(Group::free_group(2));
  auto a = random_operator(g, rng);
  auto b = random_operator(g, rng);
  auto c = random_operator(g, rng);
  CHECK(compose(compose(a, b), c) == compose(a, compose(b, c)));
  CHECK(compose(a, b + c) == compose(a, b) + compose(a, c));
  CHECK(adjoint(compose(a, b)) == compose(adjoint(b), adjoint(a)));
  CHECK((Complex(2) * a) == a + a);
  CHECK(a.approx_equal(a + Complex(1e-15) * BandOperator::identity(g), 1e-12));
}

TEST_CASE("operators on different groups do not mix") {
  auto g1 = std::make_shared<const Group>(Group::integer_lattice(1));
  auto g2 = std::make_shared<const Group>(Group::integer_lattice(2));
  CHECK_THROWS_AS(BandOperator::identity(g1) + BandOperator::identity(g2), ContextMismatch);
}
