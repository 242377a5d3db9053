#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "finsec/element.hpp"
#include "finsec/finite_set.hpp"

namespace finsec {

enum class GrowthClass : std::uint8_t { Polynomial, Exponential };

inline constexpr std::size_t kDefaultMaxBallSize = 1'000'000;

/// A concrete finitely generated group together with its generating set
/// Omega. Omega always contains the identity and must generate the group as
/// a semigroup.
class Group {
 public:
  /// Z^d with Omega = {e, +-e_1, ..., +-e_d}.
  static Group integer_lattice(int dim);
  static Group integer_lattice(int dim, std::vector<Element> omega);
  /// F_N with Omega = {e, a_1^{+-1}, ..., a_N^{+-1}}.
  static Group free_group(int rank);
  static Group free_group(int rank, std::vector<Element> omega);
  /// Discrete Heisenberg group with Omega = {e, x^{+-1}, y^{+-1}}.
  static Group heisenberg();
  static Group heisenberg(std::vector<Element> omega);

  GroupKind kind() const noexcept { return kind_; }
  /// Lattice dimension d, free rank N, or 3 for Heisenberg.
  int rank() const noexcept { return rank_; }
  GrowthClass growth_class() const noexcept;
  /// Torsion-free infinite groups always have a non-cyclic element
  /// (w^n != e for all n > 0); true for every kind supported here.
  bool has_noncyclic_element() const noexcept { return true; }

  /// Omega in canonical order; the identity is its first element.
  const FiniteSet& generators() const noexcept { return omega_; }
  /// True when Omega is the standard generating set of the kind, in which
  /// case word lengths have a closed form (except for Heisenberg).
  bool has_standard_generators() const noexcept { return standard_; }

  std::size_t max_ball_size() const noexcept { return max_ball_size_; }
  Group with_max_ball_size(std::size_t limit) const;

  Element identity() const;
  Element mul(const Element& a, const Element& b) const;
  Element inv(const Element& a) const;
  Element pow(const Element& a, std::int64_t n) const;

  /// Builds a validated canonical element from a raw payload. Free-group
  /// payloads are freely reduced.
  Element element(std::vector<std::int64_t> payload) const;
  /// Free-group word literal: lowercase letter = generator, uppercase =
  /// inverse, "e" or "" = identity.
  Element word(std::string_view letters) const;

  void check(const Element& g) const;
  bool belongs(const Element& g) const noexcept;
  std::string format(const Element& g) const;

  friend bool operator==(const Group& a, const Group& b) {
    return a.kind_ == b.kind_ && a.rank_ == b.rank_ && a.omega_ == b.omega_;
  }

 private:
  Group(GroupKind kind, int rank, std::vector<Element> omega);
  void validate_generation() const;

  GroupKind kind_;
  int rank_;
  FiniteSet omega_;
  bool standard_ = false;
  std::size_t max_ball_size_ = kDefaultMaxBallSize;
};

/// Omega_n: all products of at most n letters from Omega.
FiniteSet ball(const Group& group, int n);
/// Omega_0, ..., Omega_n from one breadth-first enumeration.
std::vector<FiniteSet> balls(const Group& group, int n);
/// |Omega_0|, ..., |Omega_{n_max}|.
std::vector<std::size_t> growth_profile(const Group& group, int n_max);

/// min{n : g in Omega_n}. Throws CapacityExceeded if g is not reached
/// within `depth_bound` letters.
int word_length(const Group& group, const Element& g, int depth_bound = 64);

/// {a b : a in A, b in B}.
FiniteSet product_set(const Group& group, const FiniteSet& a, const FiniteSet& b);
/// {a^{-1} : a in A}.
FiniteSet inverse_set(const Group& group, const FiniteSet& a);

/// Word lengths with memoised breadth-first layers.
///
/// For standard generators on lattices and free groups the closed form is
/// used and no enumeration happens.
class WordMetric {
 public:
  WordMetric(const Group& group, int depth);

  int depth() const noexcept { return depth_; }
  /// Word length, or nullopt when it exceeds the metric depth.
  std::optional<int> length(const Element& g) const;
  /// g in Omega_n, for n <= depth().
  bool in_ball(const Element& g, int n) const;

 private:
  Group group_;
  int depth_;
  bool closed_form_;
  std::unordered_map<Element, int> lengths_;
};

}  // namespace finsec
