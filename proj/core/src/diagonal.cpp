#include "finsec/diagonal.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "finsec/errors.hpp"

namespace finsec {

namespace {

std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

std::size_t table_size(const std::vector<std::int64_t>& period) {
  std::size_t n = 1;
  for (auto p : period) n *= static_cast<std::size_t>(p);
  return n;
}

// Residue multi-index for a row-major flat index.
std::vector<std::int64_t> unflatten(std::size_t idx, const std::vector<std::int64_t>& period) {
  std::vector<std::int64_t> r(period.size());
  for (std::size_t i = period.size(); i-- > 0;) {
    auto p = static_cast<std::size_t>(period[i]);
    r[i] = static_cast<std::int64_t>(idx % p);
    idx /= p;
  }
  return r;
}

std::vector<std::int64_t> combined_period(const Diagonal& a, const Diagonal& b) {
  if (!a.has_periodic_base()) return b.period();
  if (!b.has_periodic_base()) return a.period();
  if (a.period().size() != b.period().size()) {
    throw ContextMismatch("periodic diagonals of different lattice dimension");
  }
  std::vector<std::int64_t> p(a.period().size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::lcm(a.period()[i], b.period()[i]);
  return p;
}

template <typename Op>
Diagonal combine(const Diagonal& a, const Diagonal& b, Op op) {
  auto period = combined_period(a, b);
  std::vector<Complex> table;
  if (period.empty()) {
    table.push_back(op(a.table()[0], b.table()[0]));
  } else {
    std::size_t n = table_size(period);
    table.reserve(n);
    for (std::size_t idx = 0; idx < n; ++idx) {
      auto r = unflatten(idx, period);
      table.push_back(op(a.base_at_coords(r), b.base_at_coords(r)));
    }
  }
  std::map<Element, Complex> exceptions;
  for (const auto& [x, v] : a.exceptions()) exceptions.emplace(x, op(v, b(x)));
  for (const auto& [x, v] : b.exceptions()) {
    if (!exceptions.count(x)) exceptions.emplace(x, op(a(x), v));
  }
  if (period.empty()) return Diagonal::perturbed(table[0], std::move(exceptions));
  return Diagonal::periodic(std::move(period), std::move(table), std::move(exceptions));
}

}  // namespace

Diagonal Diagonal::constant(Complex c) {
  Diagonal d;
  d.table_ = {c};
  return d;
}

Diagonal Diagonal::perturbed(Complex c, std::map<Element, Complex> exceptions) {
  Diagonal d;
  d.table_ = {c};
  d.exceptions_ = std::move(exceptions);
  d.normalize();
  return d;
}

Diagonal Diagonal::periodic(std::vector<std::int64_t> period, std::vector<Complex> table,
                            std::map<Element, Complex> exceptions) {
  if (period.empty()) throw InvalidInput("periodic diagonal needs a period vector");
  for (auto p : period) {
    if (p < 1) throw InvalidInput("period entries must be positive");
  }
  if (table.size() != table_size(period)) {
    throw InvalidInput("periodic table must have prod(period) entries");
  }
  for (const auto& [x, v] : exceptions) {
    if (x.kind() != GroupKind::IntegerLattice || x.size() != period.size()) {
      throw InvalidInput("periodic diagonal exceptions must be lattice points of matching dimension");
    }
  }
  Diagonal d;
  d.period_ = std::move(period);
  d.table_ = std::move(table);
  d.exceptions_ = std::move(exceptions);
  d.normalize();
  return d;
}

Diagonal::Rule Diagonal::rule() const noexcept {
  if (period_.empty()) return exceptions_.empty() ? Rule::Constant : Rule::PerturbedConstant;
  return exceptions_.empty() ? Rule::LatticePeriodic : Rule::PeriodicPerturbed;
}

std::size_t Diagonal::residue_index(std::span<const std::int64_t> coords) const {
  if (coords.size() != period_.size()) {
    throw ContextMismatch("periodic diagonal evaluated off its lattice");
  }
  std::size_t idx = 0;
  for (std::size_t i = 0; i < period_.size(); ++i) {
    idx = idx * static_cast<std::size_t>(period_[i]) +
          static_cast<std::size_t>(floor_mod(coords[i], period_[i]));
  }
  return idx;
}

Complex Diagonal::base_at_coords(std::span<const std::int64_t> coords) const {
  if (period_.empty()) return table_[0];
  return table_[residue_index(coords)];
}

Complex Diagonal::base_at(const Element& t) const {
  if (period_.empty()) return table_[0];
  if (t.kind() != GroupKind::IntegerLattice) {
    throw ContextMismatch("periodic diagonal evaluated on a non-lattice element");
  }
  return table_[residue_index(t.data())];
}

Complex Diagonal::operator()(const Element& t) const {
  if (!exceptions_.empty()) {
    auto it = exceptions_.find(t);
    if (it != exceptions_.end()) return it->second;
  }
  return base_at(t);
}

bool Diagonal::is_zero() const noexcept {
  return exceptions_.empty() &&
         std::all_of(table_.begin(), table_.end(), [](Complex c) { return c == Complex{}; });
}

Diagonal Diagonal::base() const {
  Diagonal d = *this;
  d.exceptions_.clear();
  return d;
}

bool Diagonal::approx_equal(const Diagonal& other, double tol) const {
  if (period_ != other.period_ || table_.size() != other.table_.size()) return false;
  for (std::size_t i = 0; i < table_.size(); ++i) {
    if (std::abs(table_[i] - other.table_[i]) > tol) return false;
  }
  if (exceptions_.size() != other.exceptions_.size()) return false;
  auto it = other.exceptions_.begin();
  for (const auto& [x, v] : exceptions_) {
    if (it->first != x || std::abs(it->second - v) > tol) return false;
    ++it;
  }
  return true;
}

void Diagonal::normalize() {
  // Shrink each axis to its minimal period.
  bool reduced = true;
  while (reduced && !period_.empty()) {
    reduced = false;
    for (std::size_t axis = 0; axis < period_.size() && !reduced; ++axis) {
      auto p = period_[axis];
      for (std::int64_t q = 1; q < p && !reduced; ++q) {
        if (p % q != 0) continue;
        bool invariant = true;
        for (std::size_t idx = 0; idx < table_.size() && invariant; ++idx) {
          auto r = unflatten(idx, period_);
          r[axis] %= q;
          invariant = table_[idx] == table_[residue_index(r)];
        }
        if (!invariant) continue;
        auto smaller = period_;
        smaller[axis] = q;
        std::vector<Complex> table(table_size(smaller));
        for (std::size_t idx = 0; idx < table.size(); ++idx) {
          table[idx] = table_[residue_index(unflatten(idx, smaller))];
        }
        period_ = std::move(smaller);
        table_ = std::move(table);
        reduced = true;
      }
    }
  }
  if (!period_.empty() &&
      std::all_of(period_.begin(), period_.end(), [](auto p) { return p == 1; })) {
    period_.clear();
    table_.resize(1);
  }
  std::erase_if(exceptions_, [this](const auto& kv) { return kv.second == base_at(kv.first); });
}

Diagonal operator+(const Diagonal& a, const Diagonal& b) {
  return combine(a, b, std::plus<Complex>{});
}

Diagonal operator*(const Diagonal& a, const Diagonal& b) {
  return combine(a, b, std::multiplies<Complex>{});
}

Diagonal scale(const Diagonal& d, Complex s) {
  Diagonal out = d;
  for (auto& v : out.table_) v *= s;
  for (auto& [x, v] : out.exceptions_) v *= s;
  out.normalize();
  return out;
}

Diagonal conj(const Diagonal& d) {
  Diagonal out = d;
  for (auto& v : out.table_) v = std::conj(v);
  for (auto& [x, v] : out.exceptions_) v = std::conj(v);
  return out;
}

namespace {

// Base table of t -> base(t - s) on Z^d.
std::vector<Complex> shifted_table(const Diagonal& d, std::span<const std::int64_t> s) {
  const auto& period = d.period();
  std::vector<Complex> table(d.table().size());
  for (std::size_t idx = 0; idx < table.size(); ++idx) {
    auto r = unflatten(idx, period);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= s[i];
    table[idx] = d.base_at_coords(r);
  }
  return table;
}

}  // namespace

Diagonal right_translate(const Diagonal& d, const Group& group, const Element& r) {
  group.check(r);
  Diagonal out;
  out.period_ = d.period_;
  out.table_ = d.period_.empty() ? d.table_ : shifted_table(d, r.data());
  for (const auto& [x, v] : d.exceptions_) out.exceptions_.emplace(group.mul(x, r), v);
  out.normalize();
  return out;
}

Diagonal left_translate(const Diagonal& d, const Group& group, const Element& g) {
  group.check(g);
  Diagonal out;
  out.period_ = d.period_;
  out.table_ = d.period_.empty() ? d.table_ : shifted_table(d, g.data());
  for (const auto& [x, v] : d.exceptions_) out.exceptions_.emplace(group.mul(g, x), v);
  out.normalize();
  return out;
}

const char* rule_name(Diagonal::Rule rule) {
  switch (rule) {
    case Diagonal::Rule::Constant:
      return "constant";
    case Diagonal::Rule::PerturbedConstant:
      return "perturbed";
    case Diagonal::Rule::LatticePeriodic:
      return "periodic";
    case Diagonal::Rule::PeriodicPerturbed:
      return "periodic_perturbed";
  }
  return "unknown";
}

}  // namespace finsec
