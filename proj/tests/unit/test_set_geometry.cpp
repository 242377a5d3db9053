#include <random>

#include "doctest.h"
#include "finsec/errors.hpp"
#include "finsec/set_geometry.hpp"

using namespace finsec;

namespace {

Element z(std::int64_t x) { return Element(GroupKind::IntegerLattice, {x}); }
Element z2(std::int64_t x, std::int64_t y) { return Element(GroupKind::IntegerLattice, {x, y}); }

}  // namespace

TEST_CASE("interior and boundary on Z") {
  auto g = Group::integer_lattice(1);
  for (int n = 1; n <= 10; ++n) {
    CHECK(boundary(g, ball(g, n)) == FiniteSet({z(-n), z(n)}));
    CHECK(interior(g, ball(g, n)) == ball(g, n - 1));
  }
  CHECK(boundary(g, ball(g, 0)) == FiniteSet({z(0)}));
  // A gap splits the boundary.
  FiniteSet a({z(0), z(1), z(2), z(4), z(5), z(6)});
  CHECK(boundary(g, a) == FiniteSet({z(0), z(2), z(4), z(6)}));
}

TEST_CASE("boundary on Z^2 is the l1 sphere") {
  auto g = Group::integer_lattice(2);
  auto layers = balls(g, 6);
  for (int n = 1; n <= 6; ++n) {
    auto sphere = set_difference(layers[static_cast<std::size_t>(n)], layers[static_cast<std::size_t>(n - 1)]);
    CHECK(boundary(g, layers[static_cast<std::size_t>(n)]) == sphere);
    CHECK(sphere.size() == static_cast<std::size_t>(4 * n));
  }
  FiniteSet square({z2(0, 0), z2(0, 1), z2(1, 0), z2(1, 1)});
  CHECK(interior(g, square).empty());
}

TEST_CASE("boundary in F2 and Heisenberg") {
  auto f = Group::free_group(2);
  auto b2 = ball(f, 2);
  auto edge = boundary(f, b2);
  CHECK(edge.size() == 12);
  for (const auto& w : edge) CHECK(w.size() == 2);
  auto h = Group::heisenberg();
  auto layers = balls(h, 3);
  // Interior of a ball always contains the smaller ball.
  CHECK(layers[2].is_subset_of(interior(h, layers[3])));
}

TEST_CASE("nesting check") {
  auto g = Group::integer_lattice(1);
  auto report = check_nesting(SectionSequence::balls(g), 10);
  CHECK(report.all_nested());
  CHECK(report.entries.size() == 9);

  // Y_n = [0, n] is not nested in the interior sense.
  std::vector<FiniteSet> sets;
  for (int n = 1; n <= 5; ++n) {
    std::vector<Element> pts;
    for (int k = 0; k <= n; ++k) pts.push_back(z(k));
    sets.emplace_back(pts);
  }
  auto bad = check_nesting(SectionSequence::explicit_sets(g, sets), 5);
  CHECK_FALSE(bad.all_nested());
  CHECK(bad.first_failure() == 2);
  CHECK(bad.entries[0].witness == z(0));
  CHECK_THROWS_AS(check_nesting(SectionSequence::balls(g), 1), InvalidInput);
}

TEST_CASE("section sequences") {
  auto g = Group::integer_lattice(1);
  auto seq = SectionSequence::balls(g, 2, 1);
  CHECK(seq.at(3) == ball(g, 7));
  auto r = seq.range(1, 3);
  CHECK(r[0] == ball(g, 3));
  CHECK(r[2] == ball(g, 7));
  CHECK_THROWS_AS(seq.at(0), InvalidInput);
}

TEST_CASE("inflating sequences are disjoint") {
  for (const auto& g : {Group::integer_lattice(1), Group::integer_lattice(2), Group::free_group(2),
                        Group::heisenberg()}) {
    auto seq = SectionSequence::balls(g);
    auto inf = build_inflating(seq, 3);
    CHECK(inf.v.size() == 3);
    CHECK(is_inflating(g, inf.targets, inf.v));
    for (std::size_t k = 0; k < 3; ++k) {
      CHECK(inf.blocks[k] == right_translate(g, seq.at(static_cast<int>(k) + 1), g.inv(inf.v[k])));
    }
  }
  auto g = Group::integer_lattice(1);
  CHECK_FALSE(is_inflating(g, {ball(g, 1), ball(g, 1)}, {z(0), z(2)}));
  CHECK(is_inflating(g, {ball(g, 1), ball(g, 1)}, {z(0), z(3)}));
}

TEST_CASE("inflating along a direction and with admissibility") {
  auto g = Group::integer_lattice(1);
  InflateOptions opt;
  opt.direction = z(-1);
  opt.search_radius = 100;
  auto inf = build_inflating(SectionSequence::balls(g), 4, opt);
  CHECK(is_inflating(g, inf.targets, inf.v));
  for (const auto& v : inf.v) CHECK(v[0] <= 0);

  InflateOptions even;
  even.admissible = [](const Element& v) { return v[0] % 2 == 0; };
  auto inf2 = build_inflating(SectionSequence::balls(g), 3, even);
  for (const auto& v : inf2.v) CHECK(v[0] % 2 == 0);

  InflateOptions strong;
  strong.strong = true;
  auto inf3 = build_inflating(SectionSequence::balls(g), 3, strong);
  CHECK(is_inflating(g, inf3.targets, inf3.v));
  CHECK(inf3.targets[0] == strong_target(g, ball(g, 1), 1));
}

TEST_CASE("geodesic paths") {
  auto f = Group::free_group(2);
  WordMetric metric(f, 20);
  GeodesicPath p{{f.word("a")}, {f.word("b"), f.word("a")}};
  CHECK(p.letter(1) == f.word("a"));
  CHECK(p.letter(2) == f.word("b"));
  CHECK(p.letter(4) == f.word("b"));
  CHECK(p.nu(f, 3) == f.word("aba"));
  CHECK(p.eta(f, 3) == f.word("ABA"));
  CHECK_FALSE(first_non_geodesic(f, p, 10, metric));
  GeodesicPath back{{f.word("a"), f.word("A")}, {}};
  CHECK(first_non_geodesic(f, back, 2, metric) == 2);

  auto h = Group::heisenberg();
  WordMetric hm(h, 10);
  std::mt19937_64 rng(3);
  auto rp = random_geodesic_path(h, 8, rng, hm);
  CHECK(rp.prefix.size() == 8);
  CHECK_FALSE(first_non_geodesic(h, rp, 8, hm));
}

TEST_CASE("limit sets") {
  auto g = Group::integer_lattice(1);
  auto path = GeodesicPath::ray(z(1));
  auto layers = limit_set_layers(g, path, 4);
  // Omega_n eta_n = [-2n, 0].
  for (int n = 0; n <= 4; ++n) {
    std::vector<Element> pts;
    for (int k = -2 * n; k <= 0; ++k) pts.push_back(z(k));
    CHECK(layers[static_cast<std::size_t>(n)] == FiniteSet(pts));
  }
  WordMetric metric(g, 20);
  CHECK_FALSE(first_limit_set_gap(g, path, 10, metric));

  // A letter outside Omega breaks monotonicity at once.
  GeodesicPath jump{{z(2)}, {}};
  CHECK(first_limit_set_gap(g, jump, 1, metric) == 0);

  auto f = Group::free_group(2);
  WordMetric fm(f, 10);
  std::mt19937_64 rng(11);
  for (int i = 0; i < 5; ++i) {
    auto p = random_geodesic_path(f, 8, rng, fm);
    CHECK_FALSE(first_limit_set_gap(f, p, 7, fm));
    auto ls = limit_set_layers(f, p, 5);
    for (std::size_t n = 0; n + 1 < ls.size(); ++n) CHECK(ls[n].is_subset_of(ls[n + 1]));
  }
}

TEST_CASE("boundary lengths") {
  auto g = Group::integer_lattice(2);
  WordMetric metric(g, 10);
  CHECK(min_boundary_length(g, ball(g, 4), metric) == 4);
  CHECK_FALSE(min_boundary_length(g, FiniteSet{}, metric));
  CHECK(generator_diameter(g) == 1);
}
