#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace finsec {

enum class GroupKind : std::uint8_t { IntegerLattice, FreeGroup, Heisenberg };

/// Canonical form of a group element.
///
/// The payload depends on the group kind:
///   - IntegerLattice: the coordinate vector (length d).
///   - FreeGroup: a freely reduced word; letter +i is a_i, -i is a_i^{-1}.
///   - Heisenberg: the triple (x, y, z).
///
/// Elements are immutable and totally ordered. The order compares a
/// length key first (l1 norm for lattices and Heisenberg triples, word
/// length for free groups), then the payload lexicographically, which gives
/// the canonical order used to index section matrices.
class Element {
 public:
  Element() = default;
  Element(GroupKind kind, std::vector<std::int64_t> data);
  Element(GroupKind kind, std::initializer_list<std::int64_t> data)
      : Element(kind, std::vector<std::int64_t>(data)) {}

  GroupKind kind() const noexcept { return kind_; }
  std::span<const std::int64_t> data() const noexcept { return data_; }
  std::size_t size() const noexcept { return data_.size(); }
  std::int64_t operator[](std::size_t i) const { return data_[i]; }
  std::int64_t length_key() const noexcept { return key_; }

  std::size_t hash() const noexcept;

  friend bool operator==(const Element& a, const Element& b) noexcept {
    return a.kind_ == b.kind_ && a.data_ == b.data_;
  }
  friend std::strong_ordering operator<=>(const Element& a, const Element& b) noexcept;

 private:
  GroupKind kind_ = GroupKind::IntegerLattice;
  std::int64_t key_ = 0;
  std::vector<std::int64_t> data_;
};

}  // namespace finsec

template <>
struct std::hash<finsec::Element> {
  std::size_t operator()(const finsec::Element& e) const noexcept { return e.hash(); }
};
