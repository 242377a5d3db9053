#include "finsec/element.hpp"

#include <algorithm>
#include <cstdlib>

namespace finsec {

namespace {

std::int64_t compute_key(GroupKind kind, const std::vector<std::int64_t>& data) {
  if (kind == GroupKind::FreeGroup) {
    return static_cast<std::int64_t>(data.size());
  }
  std::int64_t key = 0;
  for (auto v : data) key += std::llabs(v);
  return key;
}

}  // namespace

Element::Element(GroupKind kind, std::vector<std::int64_t> data)
    : kind_(kind), key_(compute_key(kind, data)), data_(std::move(data)) {}

std::size_t Element::hash() const noexcept {
  // FNV-1a over the payload, salted with the kind.
  std::uint64_t h = 1469598103934665603ULL ^ static_cast<std::uint64_t>(kind_);
  for (auto v : data_) {
    auto u = static_cast<std::uint64_t>(v);
    for (int byte = 0; byte < 8; ++byte) {
      h ^= (u >> (8 * byte)) & 0xffU;
      h *= 1099511628211ULL;
    }
  }
  h ^= data_.size();
  return static_cast<std::size_t>(h);
}

std::strong_ordering operator<=>(const Element& a, const Element& b) noexcept {
  if (auto c = a.kind_ <=> b.kind_; c != 0) return c;
  if (auto c = a.key_ <=> b.key_; c != 0) return c;
  if (auto c = a.data_.size() <=> b.data_.size(); c != 0) return c;
  return std::lexicographical_compare_three_way(a.data_.begin(), a.data_.end(), b.data_.begin(),
                                                b.data_.end());
}

}  // namespace finsec
