#include "finsec/group.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <iterator>
#include <unordered_set>

#include "finsec/errors.hpp"

namespace finsec {

namespace {

constexpr int kGenerationCheckDepth = 8;
constexpr std::size_t kGenerationCheckSize = 200'000;

std::vector<Element> standard_letters(GroupKind kind, int rank) {
  std::vector<Element> letters;
  switch (kind) {
    case GroupKind::IntegerLattice:
      for (int i = 0; i < rank; ++i) {
        for (int sign : {1, -1}) {
          std::vector<std::int64_t> v(rank, 0);
          v[i] = sign;
          letters.emplace_back(kind, std::move(v));
        }
      }
      break;
    case GroupKind::FreeGroup:
      for (int i = 1; i <= rank; ++i) {
        letters.emplace_back(kind, std::vector<std::int64_t>{i});
        letters.emplace_back(kind, std::vector<std::int64_t>{-i});
      }
      break;
    case GroupKind::Heisenberg:
      letters.push_back(Element(kind, {1, 0, 0}));
      letters.push_back(Element(kind, {-1, 0, 0}));
      letters.push_back(Element(kind, {0, 1, 0}));
      letters.push_back(Element(kind, {0, -1, 0}));
      break;
  }
  return letters;
}

Element identity_of(GroupKind kind, int rank) {
  switch (kind) {
    case GroupKind::IntegerLattice:
      return Element(kind, std::vector<std::int64_t>(rank, 0));
    case GroupKind::FreeGroup:
      return Element(kind, std::vector<std::int64_t>{});
    case GroupKind::Heisenberg:
      return Element(kind, {0, 0, 0});
  }
  return {};
}

std::vector<Element> with_identity(GroupKind kind, int rank, std::vector<Element> letters) {
  letters.push_back(identity_of(kind, rank));
  return letters;
}

// Breadth-first layers; calls visit(element, depth) for every new element.
// Stops when visit returns true or when depth exceeds max_depth.
template <typename Visit>
void breadth_first(const Group& group, int max_depth, std::size_t cap, Visit&& visit) {
  const Element e = group.identity();
  std::unordered_set<Element> seen{e};
  std::vector<Element> frontier{e};
  if (visit(e, 0)) return;
  for (int depth = 1; depth <= max_depth && !frontier.empty(); ++depth) {
    std::vector<Element> next;
    for (const auto& x : frontier) {
      for (const auto& w : group.generators()) {
        if (w == e) continue;
        Element y = group.mul(w, x);
        if (seen.insert(y).second) {
          if (seen.size() > cap) {
            throw CapacityExceeded("ball enumeration exceeds " + std::to_string(cap) +
                                   " elements at radius " + std::to_string(depth));
          }
          if (visit(y, depth)) return;
          next.push_back(std::move(y));
        }
      }
    }
    frontier = std::move(next);
  }
}

}  // namespace

Group::Group(GroupKind kind, int rank, std::vector<Element> omega)
    : kind_(kind), rank_(rank), omega_(std::move(omega)) {
  for (const auto& w : omega_) check(w);
  if (!omega_.contains(identity())) {
    throw InvalidInput("generating set must contain the identity");
  }
  standard_ = omega_ == FiniteSet(with_identity(kind, rank, standard_letters(kind, rank)));
  if (!standard_) validate_generation();
}

Group Group::integer_lattice(int dim) {
  if (dim < 1) throw InvalidInput("lattice dimension must be >= 1");
  auto kind = GroupKind::IntegerLattice;
  return Group(kind, dim, with_identity(kind, dim, standard_letters(kind, dim)));
}

Group Group::integer_lattice(int dim, std::vector<Element> omega) {
  if (dim < 1) throw InvalidInput("lattice dimension must be >= 1");
  return Group(GroupKind::IntegerLattice, dim, std::move(omega));
}

Group Group::free_group(int rank) {
  if (rank < 1 || rank > 26) throw InvalidInput("free group rank must be in [1, 26]");
  auto kind = GroupKind::FreeGroup;
  return Group(kind, rank, with_identity(kind, rank, standard_letters(kind, rank)));
}

Group Group::free_group(int rank, std::vector<Element> omega) {
  if (rank < 1 || rank > 26) throw InvalidInput("free group rank must be in [1, 26]");
  return Group(GroupKind::FreeGroup, rank, std::move(omega));
}

Group Group::heisenberg() {
  auto kind = GroupKind::Heisenberg;
  return Group(kind, 3, with_identity(kind, 3, standard_letters(kind, 3)));
}

Group Group::heisenberg(std::vector<Element> omega) {
  return Group(GroupKind::Heisenberg, 3, std::move(omega));
}

GrowthClass Group::growth_class() const noexcept {
  if (kind_ == GroupKind::FreeGroup && rank_ >= 2) return GrowthClass::Exponential;
  return GrowthClass::Polynomial;
}

Group Group::with_max_ball_size(std::size_t limit) const {
  Group g = *this;
  g.max_ball_size_ = limit;
  return g;
}

void Group::validate_generation() const {
  auto targets = standard_letters(kind_, rank_);
  std::unordered_set<Element> missing(targets.begin(), targets.end());
  try {
    breadth_first(*this, kGenerationCheckDepth, kGenerationCheckSize,
                  [&](const Element& g, int) {
                    missing.erase(g);
                    return missing.empty();
                  });
  } catch (const CapacityExceeded&) {
    // Fall through: judged on what was reached.
  }
  if (!missing.empty()) {
    throw InvalidInput("generating set does not generate the group as a semigroup (" +
                       format(*missing.begin()) + " unreachable within " +
                       std::to_string(kGenerationCheckDepth) + " letters)");
  }
}

Element Group::identity() const { return identity_of(kind_, rank_); }

bool Group::belongs(const Element& g) const noexcept {
  if (g.kind() != kind_) return false;
  switch (kind_) {
    case GroupKind::IntegerLattice:
      return g.size() == static_cast<std::size_t>(rank_);
    case GroupKind::Heisenberg:
      return g.size() == 3;
    case GroupKind::FreeGroup: {
      auto d = g.data();
      for (std::size_t i = 0; i < d.size(); ++i) {
        if (d[i] == 0 || std::llabs(d[i]) > rank_) return false;
        if (i > 0 && d[i] == -d[i - 1]) return false;
      }
      return true;
    }
  }
  return false;
}

void Group::check(const Element& g) const {
  if (g.kind() != kind_) throw ContextMismatch("element belongs to a different group kind");
  if (!belongs(g)) throw InvalidInput("malformed element " + format(g));
}

Element Group::mul(const Element& a, const Element& b) const {
  if (a.kind() != kind_ || b.kind() != kind_) {
    throw ContextMismatch("cannot multiply elements of different groups");
  }
  auto x = a.data();
  auto y = b.data();
  switch (kind_) {
    case GroupKind::IntegerLattice: {
      if (x.size() != y.size()) throw ContextMismatch("lattice dimension mismatch");
      std::vector<std::int64_t> r(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[i] + y[i];
      return Element(kind_, std::move(r));
    }
    case GroupKind::FreeGroup: {
      std::size_t cancel = 0;
      while (cancel < x.size() && cancel < y.size() &&
             x[x.size() - 1 - cancel] == -y[cancel]) {
        ++cancel;
      }
      std::vector<std::int64_t> r;
      r.reserve(x.size() + y.size() - 2 * cancel);
      r.insert(r.end(), x.begin(), x.end() - static_cast<std::ptrdiff_t>(cancel));
      r.insert(r.end(), y.begin() + static_cast<std::ptrdiff_t>(cancel), y.end());
      return Element(kind_, std::move(r));
    }
    case GroupKind::Heisenberg:
      return Element(kind_, {x[0] + y[0], x[1] + y[1], x[2] + y[2] + x[0] * y[1]});
  }
  return {};
}

Element Group::inv(const Element& a) const {
  if (a.kind() != kind_) throw ContextMismatch("element belongs to a different group kind");
  auto x = a.data();
  switch (kind_) {
    case GroupKind::IntegerLattice: {
      std::vector<std::int64_t> r(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) r[i] = -x[i];
      return Element(kind_, std::move(r));
    }
    case GroupKind::FreeGroup: {
      std::vector<std::int64_t> r(x.rbegin(), x.rend());
      for (auto& v : r) v = -v;
      return Element(kind_, std::move(r));
    }
    case GroupKind::Heisenberg:
      return Element(kind_, {-x[0], -x[1], -x[2] + x[0] * x[1]});
  }
  return {};
}

Element Group::pow(const Element& a, std::int64_t n) const {
  Element base = n < 0 ? inv(a) : a;
  auto k = static_cast<std::uint64_t>(n < 0 ? -n : n);
  Element result = identity();
  while (k > 0) {
    if (k & 1U) result = mul(result, base);
    k >>= 1U;
    if (k > 0) base = mul(base, base);
  }
  return result;
}

Element Group::element(std::vector<std::int64_t> payload) const {
  if (kind_ == GroupKind::FreeGroup) {
    std::vector<std::int64_t> reduced;
    for (auto letter : payload) {
      if (letter == 0 || std::llabs(letter) > rank_) {
        throw InvalidInput("free group letter out of range: " + std::to_string(letter));
      }
      if (!reduced.empty() && reduced.back() == -letter) {
        reduced.pop_back();
      } else {
        reduced.push_back(letter);
      }
    }
    return Element(kind_, std::move(reduced));
  }
  Element g(kind_, std::move(payload));
  check(g);
  return g;
}

Element Group::word(std::string_view letters) const {
  if (kind_ != GroupKind::FreeGroup) throw InvalidInput("word literals need a free group");
  if (letters == "e") return identity();
  std::vector<std::int64_t> payload;
  for (char c : letters) {
    if (std::islower(static_cast<unsigned char>(c))) {
      payload.push_back(c - 'a' + 1);
    } else if (std::isupper(static_cast<unsigned char>(c))) {
      payload.push_back(-(c - 'A' + 1));
    } else {
      throw InvalidInput(std::string("invalid letter '") + c + "' in free group word");
    }
  }
  return element(std::move(payload));
}

std::string Group::format(const Element& g) const {
  auto d = g.data();
  if (g.kind() == GroupKind::FreeGroup) {
    if (d.empty()) return "e";
    std::string s;
    for (auto v : d) {
      s.push_back(v > 0 ? static_cast<char>('a' + v - 1) : static_cast<char>('A' - v - 1));
    }
    return s;
  }
  if (g.kind() == GroupKind::IntegerLattice && d.size() == 1) return std::to_string(d[0]);
  std::string s = "(";
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (i > 0) s += ",";
    s += std::to_string(d[i]);
  }
  return s + ")";
}

std::vector<FiniteSet> balls(const Group& group, int n) {
  if (n < 0) throw InvalidInput("ball radius must be non-negative");
  std::vector<std::vector<Element>> layers(static_cast<std::size_t>(n) + 1);
  breadth_first(group, n, group.max_ball_size(), [&](const Element& g, int depth) {
    layers[static_cast<std::size_t>(depth)].push_back(g);
    return false;
  });
  std::vector<FiniteSet> out;
  out.reserve(layers.size());
  std::vector<Element> acc;
  for (auto& layer : layers) {
    std::sort(layer.begin(), layer.end());
    std::vector<Element> merged;
    merged.reserve(acc.size() + layer.size());
    std::merge(acc.begin(), acc.end(), layer.begin(), layer.end(), std::back_inserter(merged));
    acc = std::move(merged);
    out.push_back(FiniteSet::from_sorted(acc));
  }
  return out;
}

FiniteSet ball(const Group& group, int n) { return std::move(balls(group, n).back()); }

std::vector<std::size_t> growth_profile(const Group& group, int n_max) {
  std::vector<std::size_t> sizes;
  for (const auto& b : balls(group, n_max)) sizes.push_back(b.size());
  return sizes;
}

namespace {

std::optional<int> closed_form_length(const Group& group, const Element& g) {
  if (!group.has_standard_generators()) return std::nullopt;
  if (group.kind() == GroupKind::FreeGroup) return static_cast<int>(g.size());
  if (group.kind() == GroupKind::IntegerLattice) return static_cast<int>(g.length_key());
  return std::nullopt;
}

}  // namespace

int word_length(const Group& group, const Element& g, int depth_bound) {
  group.check(g);
  if (auto len = closed_form_length(group, g)) {
    if (*len > depth_bound) {
      throw CapacityExceeded("word length exceeds depth bound " + std::to_string(depth_bound));
    }
    return *len;
  }
  int found = -1;
  breadth_first(group, depth_bound, group.max_ball_size(), [&](const Element& x, int depth) {
    if (x == g) found = depth;
    return found >= 0;
  });
  if (found < 0) {
    throw CapacityExceeded(group.format(g) + " not reached within depth bound " +
                           std::to_string(depth_bound));
  }
  return found;
}

FiniteSet product_set(const Group& group, const FiniteSet& a, const FiniteSet& b) {
  std::vector<Element> out;
  out.reserve(a.size() * b.size());
  for (const auto& x : a) {
    for (const auto& y : b) out.push_back(group.mul(x, y));
  }
  return FiniteSet(std::move(out));
}

FiniteSet inverse_set(const Group& group, const FiniteSet& a) {
  std::vector<Element> out;
  out.reserve(a.size());
  for (const auto& x : a) out.push_back(group.inv(x));
  return FiniteSet(std::move(out));
}

WordMetric::WordMetric(const Group& group, int depth)
    : group_(group), depth_(depth), closed_form_(false) {
  closed_form_ = closed_form_length(group_, group_.identity()).has_value();
  if (!closed_form_) {
    breadth_first(group_, depth_, group_.max_ball_size(), [&](const Element& g, int d) {
      lengths_.emplace(g, d);
      return false;
    });
  }
}

std::optional<int> WordMetric::length(const Element& g) const {
  if (closed_form_) {
    int len = *closed_form_length(group_, g);
    if (len > depth_) return std::nullopt;
    return len;
  }
  auto it = lengths_.find(g);
  if (it == lengths_.end()) return std::nullopt;
  return it->second;
}

bool WordMetric::in_ball(const Element& g, int n) const {
  if (n > depth_) throw CapacityExceeded("ball radius exceeds metric depth");
  auto len = length(g);
  return len && *len <= n;
}

}  // namespace finsec
