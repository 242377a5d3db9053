#include "finsec/limit_operator.hpp"

#include <numeric>
#include <set>

#include "finsec/errors.hpp"

namespace finsec {

namespace {

std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

std::vector<std::int64_t> residue(const Element& g, const std::vector<std::int64_t>& modulus) {
  std::vector<std::int64_t> r(modulus.size());
  for (std::size_t i = 0; i < modulus.size(); ++i) r[i] = floor_mod(g[i], modulus[i]);
  return r;
}

bool is_trivial_period(const std::vector<std::int64_t>& period) {
  for (auto p : period) {
    if (p != 1) return false;
  }
  return true;
}

// Residues of step^0, step^1, ... modulo `modulus` until they repeat.
std::vector<Element> cyclic_offsets(const Group& group, const Element& step,
                                    const std::vector<std::int64_t>& modulus) {
  std::vector<Element> out;
  std::set<std::vector<std::int64_t>> seen;
  Element g = group.identity();
  while (seen.insert(residue(g, modulus)).second) {
    out.push_back(g);
    g = group.mul(g, step);
  }
  return out;
}

LimitResult from_offsets(const BandOperator& a, const std::vector<Element>& offsets) {
  LimitResult result;
  for (const auto& off : offsets) result.branches.push_back({off, limit_along_offset(a, off)});
  return result;
}

LimitResult failure(std::string reason) {
  LimitResult r;
  NotConvergent nc;
  nc.reason = std::move(reason);
  r.failure = std::move(nc);
  return r;
}

LimitResult ray_limit(const BandOperator& a, const SequenceSpec::Ray& ray) {
  const auto& group = a.group();
  group.check(ray.direction);
  if (ray.direction == group.identity()) {
    return failure("ray direction is the identity; h does not tend to infinity");
  }
  auto period = common_period(a);
  if (group.kind() != GroupKind::IntegerLattice || is_trivial_period(period)) {
    return from_offsets(a, {group.identity()});
  }
  return from_offsets(a, cyclic_offsets(group, ray.direction, period));
}

LimitResult geodesic_limit(const BandOperator& a, const SequenceSpec::InverseGeodesic& spec) {
  const auto& group = a.group();
  const auto& path = spec.path;
  if (!path.is_infinite()) return failure("finite path; h does not tend to infinity");
  Element cycle_product = group.identity();
  for (const auto& w : path.cycle) cycle_product = group.mul(cycle_product, w);
  if (cycle_product == group.identity()) {
    return failure("path cycle multiplies to the identity; h stays bounded");
  }
  auto period = common_period(a);
  if (group.kind() != GroupKind::IntegerLattice || is_trivial_period(period)) {
    return from_offsets(a, {group.identity()});
  }
  // On Z^d, eta_{n + L q} = eta_n - q D with D the cycle displacement, so the
  // residues of the tail repeat after L * order(D) steps.
  const int start = static_cast<int>(path.prefix.size()) + 1;
  const auto order = static_cast<int>(cyclic_offsets(group, cycle_product, period).size());
  const int span = static_cast<int>(path.cycle.size()) * order;
  std::vector<Element> offsets;
  std::set<std::vector<std::int64_t>> seen;
  Element eta = path.eta(group, start - 1);
  for (int n = start; n < start + span; ++n) {
    eta = group.mul(group.inv(path.letter(n)), eta);
    if (seen.insert(residue(eta, period)).second) offsets.push_back(eta);
  }
  return from_offsets(a, offsets);
}

LimitResult explicit_limit(const BandOperator& a, const SequenceSpec::Explicit& spec,
                           const LimitOptions& options) {
  const auto& group = a.group();
  const auto& pts = spec.points;
  for (const auto& p : pts) group.check(p);
  const std::size_t first_tail = pts.size() / 2;
  if (pts.size() - first_tail < 2) {
    return failure("explicit sequence too short to judge convergence");
  }
  {
    std::set<Element> distinct(pts.begin() + static_cast<std::ptrdiff_t>(first_tail), pts.end());
    if (distinct.size() != pts.size() - first_tail) {
      return failure("explicit sequence repeats in its tail; h does not tend to infinity");
    }
  }
  const auto window = ball(group, options.probe_radius);
  const auto candidate = limit_along_offset(a, pts.back());
  for (const auto& [key, diag] : a.terms()) {
    auto cand_it = candidate.terms().find(key);
    for (const auto& t : window) {
      const Complex limit_value = cand_it == candidate.terms().end() ? Complex{} : cand_it->second(t);
      for (std::size_t m = first_tail; m < pts.size(); ++m) {
        const Complex v = diag(group.mul(t, group.inv(pts[m])));
        if (std::abs(v - limit_value) > options.tolerance) {
          LimitResult r;
          NotConvergent nc;
          nc.reason = "shifted diagonals keep changing on the probe window";
          nc.band_element = key;
          nc.point = t;
          nc.index_a = static_cast<int>(m) + 1;
          nc.index_b = static_cast<int>(pts.size());
          nc.value_a = v;
          nc.value_b = limit_value;
          r.failure = std::move(nc);
          return r;
        }
      }
    }
  }
  return from_offsets(a, {pts.back()});
}

}  // namespace

Element SequenceSpec::at(const Group& group, int n) const {
  if (n < 1) throw InvalidInput("sequence index starts at 1");
  if (const auto* r = std::get_if<Ray>(&kind)) return group.pow(r->direction, n);
  if (const auto* g = std::get_if<InverseGeodesic>(&kind)) return g->path.eta(group, n);
  const auto& pts = std::get<Explicit>(kind).points;
  if (n > static_cast<int>(pts.size())) throw InvalidInput("explicit sequence index out of range");
  return pts[static_cast<std::size_t>(n - 1)];
}

std::string SequenceSpec::describe(const Group& group) const {
  if (const auto* r = std::get_if<Ray>(&kind)) return "ray(" + group.format(r->direction) + ")";
  if (const auto* g = std::get_if<InverseGeodesic>(&kind)) {
    std::string s = "inverse_geodesic(";
    for (const auto& w : g->path.prefix) s += group.format(w) + " ";
    s += "[";
    for (std::size_t i = 0; i < g->path.cycle.size(); ++i) {
      if (i > 0) s += " ";
      s += group.format(g->path.cycle[i]);
    }
    return s + "]*)";
  }
  return "explicit(" + std::to_string(std::get<Explicit>(kind).points.size()) + " points)";
}

std::vector<std::int64_t> common_period(const BandOperator& a) {
  const auto& group = a.group();
  if (group.kind() != GroupKind::IntegerLattice) return {};
  std::vector<std::int64_t> period(static_cast<std::size_t>(group.rank()), 1);
  for (const auto& [t, b] : a.terms()) {
    if (!b.has_periodic_base()) continue;
    for (std::size_t i = 0; i < period.size(); ++i) period[i] = std::lcm(period[i], b.period()[i]);
  }
  return period;
}

BandOperator limit_along_offset(const BandOperator& a, const Element& offset) {
  return conjugate_shift(a.without_exceptions(), offset);
}

LimitResult limit_operator(const BandOperator& a, const SequenceSpec& h,
                           const LimitOptions& options) {
  if (const auto* r = std::get_if<SequenceSpec::Ray>(&h.kind)) return ray_limit(a, *r);
  if (const auto* g = std::get_if<SequenceSpec::InverseGeodesic>(&h.kind)) {
    return geodesic_limit(a, *g);
  }
  return explicit_limit(a, std::get<SequenceSpec::Explicit>(h.kind), options);
}

}  // namespace finsec
