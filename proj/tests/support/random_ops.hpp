#pragma once

#include <memory>
#include <random>

#include "finsec/band_operator.hpp"
#include "finsec/group.hpp"

namespace finsec::testing {

inline Complex random_complex(std::mt19937_64& rng) {
  // Quarter-integers keep sums and products exact in double precision.
  std::uniform_int_distribution<int> q(-8, 8);
  return {q(rng) / 4.0, q(rng) / 4.0};
}

inline Element random_element(const Group& g, std::mt19937_64& rng, int radius) {
  auto layers = ball(g, radius);
  std::uniform_int_distribution<std::size_t> pick(0, layers.size() - 1);
  return layers[pick(rng)];
}

/// Random structured diagonal: constant or periodic base (lattices only),
/// optionally with exceptions near the identity.
inline Diagonal random_diagonal(const Group& g, std::mt19937_64& rng) {
  std::map<Element, Complex> exc;
  std::uniform_int_distribution<int> count(0, 2);
  for (int k = count(rng); k > 0; --k) exc[random_element(g, rng, 2)] = random_complex(rng);
  if (g.kind() == GroupKind::IntegerLattice && rng() % 2 == 0) {
    std::uniform_int_distribution<std::int64_t> per(1, 3);
    std::vector<std::int64_t> period(static_cast<std::size_t>(g.rank()));
    std::size_t n = 1;
    for (auto& p : period) {
      p = per(rng);
      n *= static_cast<std::size_t>(p);
    }
    std::vector<Complex> table(n);
    for (auto& v : table) v = random_complex(rng);
    return Diagonal::periodic(period, table, exc);
  }
  return Diagonal::perturbed(random_complex(rng), exc);
}

inline BandOperator random_operator(const std::shared_ptr<const Group>& g, std::mt19937_64& rng,
                                    int terms = 3, int radius = 1) {
  BandOperator a(g);
  for (int k = 0; k < terms; ++k) a.add_term(random_element(*g, rng, radius), random_diagonal(*g, rng));
  return a;
}

}  // namespace finsec::testing
