#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "finsec/band_operator.hpp"
#include "finsec/set_geometry.hpp"

namespace finsec {

/// A sequence h : N -> Gamma tending to infinity.
struct SequenceSpec {
  /// h(n) = g^n.
  struct Ray {
    Element direction;
  };
  /// h(n) = eta_n = w_n^{-1} ... w_1^{-1} for an infinite geodesic path.
  struct InverseGeodesic {
    GeodesicPath path;
  };
  /// h(1), ..., h(K) given explicitly.
  struct Explicit {
    std::vector<Element> points;
  };

  std::variant<Ray, InverseGeodesic, Explicit> kind;

  static SequenceSpec ray(Element direction) { return {Ray{std::move(direction)}}; }
  static SequenceSpec inverse_geodesic(GeodesicPath path) {
    return {InverseGeodesic{std::move(path)}};
  }
  static SequenceSpec explicit_points(std::vector<Element> points) {
    return {Explicit{std::move(points)}};
  }

  /// h(n), n >= 1.
  Element at(const Group& group, int n) const;
  std::string describe(const Group& group) const;
};

/// One subsequential limit: the operator obtained along the subsequence
/// whose shifts agree with `offset` modulo every period of A.
struct LimitBranch {
  Element offset;
  BandOperator op;
};

/// Two probe evaluations of the shifted operators that keep disagreeing.
struct NotConvergent {
  std::string reason;
  std::optional<Element> band_element;
  std::optional<Element> point;
  int index_a = 0;
  int index_b = 0;
  Complex value_a{};
  Complex value_b{};
};

struct LimitResult {
  std::vector<LimitBranch> branches;
  std::optional<NotConvergent> failure;

  bool converged() const noexcept { return !failure.has_value(); }
};

struct LimitOptions {
  /// Probe window Omega_r for explicit sequences.
  int probe_radius = 6;
  double tolerance = 1e-12;
};

/// Exceptions dropped, base shifted: conjugate_shift(A without exceptions, offset).
BandOperator limit_along_offset(const BandOperator& a, const Element& offset);

/// Limit operators of A along h.
///
/// Exceptions escape every fixed point, so only the base of each diagonal
/// survives. Periodic bases on Z^d give one limit per residue class that the
/// tail of h visits infinitely often; constant bases give a single limit.
/// Explicit sequences are checked on a probe window and reported as
/// NotConvergent when the tail keeps changing there.
LimitResult limit_operator(const BandOperator& a, const SequenceSpec& h,
                           const LimitOptions& options = {});

/// Componentwise lcm of the periods of all diagonals (all ones if none).
std::vector<std::int64_t> common_period(const BandOperator& a);

}  // namespace finsec
