#include "finsec/band_operator.hpp"

#include <algorithm>

#include "finsec/errors.hpp"

namespace finsec {

namespace {

void require_same_group(const BandOperator& a, const BandOperator& b) {
  if (a.group_ptr() != b.group_ptr() && !(a.group() == b.group())) {
    throw ContextMismatch("operators act on different groups");
  }
}

}  // namespace

BandOperator::BandOperator(std::shared_ptr<const Group> group) : group_(std::move(group)) {
  if (!group_) throw InvalidInput("band operator needs a group");
}

BandOperator::BandOperator(std::shared_ptr<const Group> group, const Terms& terms)
    : BandOperator(std::move(group)) {
  for (const auto& [t, b] : terms) add_term(t, b);
}

BandOperator BandOperator::identity(std::shared_ptr<const Group> group) {
  BandOperator a(std::move(group));
  a.add_term(a.group().identity(), Diagonal::constant(1.0));
  return a;
}

BandOperator BandOperator::shift(std::shared_ptr<const Group> group, const Element& t) {
  BandOperator a(std::move(group));
  a.add_term(t, Diagonal::constant(1.0));
  return a;
}

BandOperator BandOperator::multiplication(std::shared_ptr<const Group> group, const Diagonal& b) {
  BandOperator a(std::move(group));
  a.add_term(a.group().identity(), b);
  return a;
}

FiniteSet BandOperator::band_width() const {
  std::vector<Element> keys;
  keys.reserve(terms_.size());
  for (const auto& [t, b] : terms_) keys.push_back(t);
  return FiniteSet::from_sorted(std::move(keys));
}

bool BandOperator::has_constant_coefficients() const noexcept {
  return std::all_of(terms_.begin(), terms_.end(), [](const auto& kv) {
    return kv.second.rule() == Diagonal::Rule::Constant;
  });
}

bool BandOperator::has_exceptions() const noexcept {
  return std::any_of(terms_.begin(), terms_.end(),
                     [](const auto& kv) { return !kv.second.exceptions().empty(); });
}

void BandOperator::check_diagonal(const Diagonal& b) const {
  if (b.has_periodic_base()) {
    if (group_->kind() != GroupKind::IntegerLattice) {
      throw InvalidInput("lattice-periodic diagonals require an integer lattice group");
    }
    if (b.period().size() != static_cast<std::size_t>(group_->rank())) {
      throw InvalidInput("period vector length must equal the lattice dimension");
    }
  }
  for (const auto& [x, v] : b.exceptions()) group_->check(x);
}

void BandOperator::add_term(const Element& t, const Diagonal& b) {
  group_->check(t);
  check_diagonal(b);
  auto it = terms_.find(t);
  if (it == terms_.end()) {
    if (!b.is_zero()) terms_.emplace(t, b);
    return;
  }
  it->second = it->second + b;
  if (it->second.is_zero()) terms_.erase(it);
}

Complex BandOperator::kernel(const Element& t, const Element& s) const {
  auto it = terms_.find(group_->mul(t, group_->inv(s)));
  if (it == terms_.end()) return {};
  return it->second(t);
}

BandOperator BandOperator::without_exceptions() const {
  BandOperator out(group_);
  for (const auto& [t, b] : terms_) out.add_term(t, b.base());
  return out;
}

bool BandOperator::approx_equal(const BandOperator& other, double tol) const {
  if (!(*group_ == *other.group_)) return false;
  // Terms whose diagonals are within tol of zero may be missing on one side.
  auto small = [tol](const Diagonal& d) { return d.approx_equal(Diagonal{}, tol); };
  for (const auto& [t, b] : terms_) {
    auto it = other.terms_.find(t);
    if (it == other.terms_.end() ? !small(b) : !b.approx_equal(it->second, tol)) return false;
  }
  for (const auto& [t, b] : other.terms_) {
    if (!terms_.count(t) && !small(b)) return false;
  }
  return true;
}

bool operator==(const BandOperator& a, const BandOperator& b) {
  return a.group() == b.group() && a.terms() == b.terms();
}

BandOperator operator+(const BandOperator& a, const BandOperator& b) {
  require_same_group(a, b);
  BandOperator out = a;
  for (const auto& [t, d] : b.terms()) out.add_term(t, d);
  return out;
}

BandOperator operator-(const BandOperator& a, const BandOperator& b) { return a + (-1.0 * b); }

BandOperator operator*(Complex s, const BandOperator& a) {
  BandOperator out(a.group_ptr());
  for (const auto& [t, d] : a.terms()) out.add_term(t, scale(d, s));
  return out;
}

BandOperator compose(const BandOperator& a, const BandOperator& b) {
  require_same_group(a, b);
  const auto& group = a.group();
  BandOperator out(a.group_ptr());
  for (const auto& [ti, bi] : a.terms()) {
    for (const auto& [tj, bj] : b.terms()) {
      out.add_term(group.mul(ti, tj), bi * left_translate(bj, group, ti));
    }
  }
  return out;
}

BandOperator adjoint(const BandOperator& a) {
  const auto& group = a.group();
  BandOperator out(a.group_ptr());
  for (const auto& [t, b] : a.terms()) {
    Element tinv = group.inv(t);
    out.add_term(tinv, conj(left_translate(b, group, tinv)));
  }
  return out;
}

BandOperator conjugate_shift(const BandOperator& a, const Element& r) {
  const auto& group = a.group();
  BandOperator out(a.group_ptr());
  for (const auto& [t, b] : a.terms()) out.add_term(t, right_translate(b, group, r));
  return out;
}

Complex WindowVector::at(const Element& g) const {
  auto idx = window.index_of(g);
  return idx ? values[*idx] : Complex{};
}

WindowVector apply(const BandOperator& a, const WindowVector& u) {
  if (u.values.size() != u.window.size()) throw InvalidInput("vector does not match its window");
  const auto& group = a.group();
  WindowVector out;
  out.window = product_set(group, a.band_width(), u.window);
  out.values.assign(out.window.size(), Complex{});
  for (std::size_t j = 0; j < u.window.size(); ++j) {
    const auto& s = u.window[j];
    for (const auto& [ti, bi] : a.terms()) {
      Element t = group.mul(ti, s);
      out.values[*out.window.index_of(t)] += bi(t) * u.values[j];
    }
  }
  return out;
}

}  // namespace finsec
