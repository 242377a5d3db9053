#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "finsec/element.hpp"
#include "finsec/finite_set.hpp"
#include "finsec/group.hpp"

namespace finsec {

/// int_Omega A = {a in A : Omega a is a subset of A}.
FiniteSet interior(const Group& group, const FiniteSet& a);
/// A minus its Omega-interior; always a subset of A.
FiniteSet boundary(const Group& group, const FiniteSet& a);
/// A s = {a s : a in A}.
FiniteSet right_translate(const Group& group, const FiniteSet& a, const Element& s);

/// The increasing sequence (Y_n)_{n >= 1} of finite sections.
///
/// Either Y_n = Omega_{scale * n + offset} or an explicit list Y_1..Y_K.
class SectionSequence {
 public:
  static SectionSequence balls(const Group& group, int scale = 1, int offset = 0);
  static SectionSequence explicit_sets(const Group& group, std::vector<FiniteSet> sets);

  const Group& group() const noexcept { return group_; }
  bool is_ball_sequence() const noexcept { return explicit_.empty(); }
  int scale() const noexcept { return scale_; }
  int offset() const noexcept { return offset_; }
  /// Number of explicit sets, or nullopt for the unbounded ball schedule.
  std::optional<int> length() const;

  /// Y_n, n >= 1.
  FiniteSet at(int n) const;
  /// Y_lo, ..., Y_hi using one ball enumeration.
  std::vector<FiniteSet> range(int lo, int hi) const;

 private:
  explicit SectionSequence(const Group& group) : group_(group) {}

  Group group_;
  int scale_ = 1;
  int offset_ = 0;
  std::vector<FiniteSet> explicit_;
};

struct NestingEntry {
  int n = 0;
  bool nested = false;            // Y_{n-1} subset of int_Omega Y_n
  std::optional<Element> witness; // element of Y_{n-1} outside int_Omega Y_n
};

struct NestingReport {
  std::vector<NestingEntry> entries;
  bool all_nested() const;
  std::optional<int> first_failure() const;
};

/// Checks Y_{n-1} subset of int_Omega Y_n for n = 2..n_max.
NestingReport check_nesting(const SectionSequence& seq, int n_max);

struct InflateOptions {
  /// Optional restriction v_n in V.
  std::function<bool(const Element&)> admissible;
  /// Use (Y_n u Omega_n)(Y_n u Omega_n)^{-1}(Y_n u Omega_n) as targets.
  bool strong = false;
  /// Candidate source. Empty: canonical ball order. Otherwise the powers
  /// direction^0, direction^1, ... are scanned.
  std::optional<Element> direction;
  /// Largest candidate radius (ball mode) or power (direction mode).
  int search_radius = 40;
};

/// v_1..v_N with the translated targets Z_n v_n^{-1} pairwise disjoint.
struct InflatingSequence {
  std::vector<Element> v;
  /// Z_n, the sets made disjoint (Y_n, or the enlarged targets in strong mode).
  std::vector<FiniteSet> targets;
  /// Y_n v_n^{-1}, the block supports used by the Op assembly.
  std::vector<FiniteSet> blocks;
  bool strong = false;
};

/// Greedy construction: candidates are scanned in order and accepted when
/// Z_n v^{-1} misses all earlier translated targets.
InflatingSequence build_inflating(const SectionSequence& seq, int count,
                                  const InflateOptions& options = {});

/// Exact pairwise disjointness of the translated targets.
bool is_inflating(const Group& group, const std::vector<FiniteSet>& targets,
                  const std::vector<Element>& v);

/// Enlarged inflating target (Y u Omega_n)(Y u Omega_n)^{-1}(Y u Omega_n).
FiniteSet strong_target(const Group& group, const FiniteSet& y, int n);

/// Letters w_1, w_2, ... of a path in the Cayley graph, given as a finite
/// prefix followed by a cycle repeated forever (the cycle may be empty for
/// finite paths).
struct GeodesicPath {
  std::vector<Element> prefix;
  std::vector<Element> cycle;

  static GeodesicPath ray(const Element& letter) { return {{}, {letter}}; }

  bool is_infinite() const noexcept { return !cycle.empty(); }
  /// Number of letters available, or nullopt for infinite paths.
  std::optional<int> length() const;
  /// w_n, n >= 1.
  const Element& letter(int n) const;
  /// nu_n = w_1 ... w_n (nu_0 = e).
  Element nu(const Group& group, int n) const;
  /// eta_n = nu_n^{-1} = w_n^{-1} ... w_1^{-1}.
  Element eta(const Group& group, int n) const;
};

/// Checks w_n in Omega minus {e} and nu_n in Omega_n minus Omega_{n-1} for
/// n = 1..n_max. Returns the first offending n.
std::optional<int> first_non_geodesic(const Group& group, const GeodesicPath& path, int n_max,
                                      const WordMetric& metric);

/// Random geodesic path of the given length (no cycle). Letters are tried
/// in random order, backing out of dead ends.
GeodesicPath random_geodesic_path(const Group& group, int length, std::mt19937_64& rng,
                                  const WordMetric& metric);

/// Omega_n eta_n for n = 0..n_max.
std::vector<FiniteSet> limit_set_layers(const Group& group, const GeodesicPath& path, int n_max);
/// Truncation of the limit set: union of Omega_n eta_n over n <= n_max.
FiniteSet limit_set(const Group& group, const GeodesicPath& path, int n_max);

/// Verifies Omega_n eta_n subset of Omega_{n+1} eta_{n+1} for n = 0..n_max-1
/// element by element (x in Omega_{n+1} eta_{n+1} iff x nu_{n+1} in
/// Omega_{n+1}). Returns the first n where the inclusion fails.
std::optional<int> first_limit_set_gap(const Group& group, const GeodesicPath& path, int n_max,
                                       const WordMetric& metric);

/// Smallest word length over the Omega-boundary of A (nullopt for empty A).
std::optional<int> min_boundary_length(const Group& group, const FiniteSet& a,
                                       const WordMetric& metric);

/// max word length over Omega.
int generator_diameter(const Group& group);

}  // namespace finsec
