#include "finsec/finite_set.hpp"

#include <algorithm>
#include <iterator>

namespace finsec {

FiniteSet::FiniteSet(std::vector<Element> elements) : elements_(std::move(elements)) {
  std::sort(elements_.begin(), elements_.end());
  elements_.erase(std::unique(elements_.begin(), elements_.end()), elements_.end());
}

FiniteSet FiniteSet::from_sorted(std::vector<Element> elements) {
  FiniteSet s;
  s.elements_ = std::move(elements);
  return s;
}

bool FiniteSet::contains(const Element& g) const {
  return std::binary_search(elements_.begin(), elements_.end(), g);
}

std::optional<std::size_t> FiniteSet::index_of(const Element& g) const {
  auto it = std::lower_bound(elements_.begin(), elements_.end(), g);
  if (it == elements_.end() || *it != g) return std::nullopt;
  return static_cast<std::size_t>(it - elements_.begin());
}

bool FiniteSet::is_subset_of(const FiniteSet& other) const {
  return std::includes(other.begin(), other.end(), begin(), end());
}

bool FiniteSet::is_disjoint_from(const FiniteSet& other) const {
  auto a = begin();
  auto b = other.begin();
  while (a != end() && b != other.end()) {
    if (*a < *b) {
      ++a;
    } else if (*b < *a) {
      ++b;
    } else {
      return false;
    }
  }
  return true;
}

FiniteSet set_union(const FiniteSet& a, const FiniteSet& b) {
  std::vector<Element> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return FiniteSet::from_sorted(std::move(out));
}

FiniteSet set_intersection(const FiniteSet& a, const FiniteSet& b) {
  std::vector<Element> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return FiniteSet::from_sorted(std::move(out));
}

FiniteSet set_difference(const FiniteSet& a, const FiniteSet& b) {
  std::vector<Element> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return FiniteSet::from_sorted(std::move(out));
}

}  // namespace finsec
