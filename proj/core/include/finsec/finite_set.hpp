#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "finsec/element.hpp"

namespace finsec {

/// Finite subset of a group, stored as a sorted duplicate-free vector in
/// canonical element order. Position in that vector is the matrix index
/// used by section matrices.
class FiniteSet {
 public:
  using const_iterator = std::vector<Element>::const_iterator;

  FiniteSet() = default;
  explicit FiniteSet(std::vector<Element> elements);

  /// Skips the sort; `elements` must already be strictly increasing.
  static FiniteSet from_sorted(std::vector<Element> elements);

  std::size_t size() const noexcept { return elements_.size(); }
  bool empty() const noexcept { return elements_.empty(); }
  const Element& operator[](std::size_t i) const { return elements_[i]; }
  const_iterator begin() const noexcept { return elements_.begin(); }
  const_iterator end() const noexcept { return elements_.end(); }
  const std::vector<Element>& elements() const noexcept { return elements_; }

  bool contains(const Element& g) const;
  std::optional<std::size_t> index_of(const Element& g) const;

  bool is_subset_of(const FiniteSet& other) const;
  bool is_disjoint_from(const FiniteSet& other) const;

  friend bool operator==(const FiniteSet&, const FiniteSet&) = default;

 private:
  std::vector<Element> elements_;
};

FiniteSet set_union(const FiniteSet& a, const FiniteSet& b);
FiniteSet set_intersection(const FiniteSet& a, const FiniteSet& b);
FiniteSet set_difference(const FiniteSet& a, const FiniteSet& b);

}  // namespace finsec
