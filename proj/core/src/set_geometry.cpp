#include "finsec/set_geometry.hpp"

#include <algorithm>
#include <unordered_set>

#include "finsec/errors.hpp"

namespace finsec {

FiniteSet interior(const Group& group, const FiniteSet& a) {
  std::vector<Element> out;
  for (const auto& x : a) {
    bool inner = true;
    for (const auto& w : group.generators()) {
      if (!a.contains(group.mul(w, x))) {
        inner = false;
        break;
      }
    }
    if (inner) out.push_back(x);
  }
  return FiniteSet::from_sorted(std::move(out));
}

FiniteSet boundary(const Group& group, const FiniteSet& a) {
  return set_difference(a, interior(group, a));
}

FiniteSet right_translate(const Group& group, const FiniteSet& a, const Element& s) {
  std::vector<Element> out;
  out.reserve(a.size());
  for (const auto& x : a) out.push_back(group.mul(x, s));
  return FiniteSet(std::move(out));
}

SectionSequence SectionSequence::balls(const Group& group, int scale, int offset) {
  if (scale < 1 || offset < 0) throw InvalidInput("ball schedule needs scale >= 1, offset >= 0");
  SectionSequence s(group);
  s.scale_ = scale;
  s.offset_ = offset;
  return s;
}

SectionSequence SectionSequence::explicit_sets(const Group& group, std::vector<FiniteSet> sets) {
  if (sets.empty()) throw InvalidInput("explicit section sequence is empty");
  for (const auto& y : sets) {
    for (const auto& g : y) group.check(g);
  }
  SectionSequence s(group);
  s.explicit_ = std::move(sets);
  return s;
}

std::optional<int> SectionSequence::length() const {
  if (explicit_.empty()) return std::nullopt;
  return static_cast<int>(explicit_.size());
}

FiniteSet SectionSequence::at(int n) const {
  if (n < 1) throw InvalidInput("section index starts at 1");
  if (explicit_.empty()) return ball(group_, scale_ * n + offset_);
  if (n > static_cast<int>(explicit_.size())) {
    throw InvalidInput("section index " + std::to_string(n) + " beyond explicit sequence");
  }
  return explicit_[static_cast<std::size_t>(n - 1)];
}

std::vector<FiniteSet> SectionSequence::range(int lo, int hi) const {
  if (lo < 1 || hi < lo) throw InvalidInput("invalid section range");
  std::vector<FiniteSet> out;
  if (explicit_.empty()) {
    auto all = finsec::balls(group_, scale_ * hi + offset_);
    for (int n = lo; n <= hi; ++n) out.push_back(all[static_cast<std::size_t>(scale_ * n + offset_)]);
  } else {
    for (int n = lo; n <= hi; ++n) out.push_back(at(n));
  }
  return out;
}

bool NestingReport::all_nested() const {
  return std::all_of(entries.begin(), entries.end(), [](const auto& e) { return e.nested; });
}

std::optional<int> NestingReport::first_failure() const {
  for (const auto& e : entries) {
    if (!e.nested) return e.n;
  }
  return std::nullopt;
}

NestingReport check_nesting(const SectionSequence& seq, int n_max) {
  if (n_max < 2) throw InvalidInput("nesting check needs n_max >= 2");
  const auto& group = seq.group();
  auto sets = seq.range(1, n_max);
  NestingReport report;
  for (int n = 2; n <= n_max; ++n) {
    const auto& prev = sets[static_cast<std::size_t>(n - 2)];
    auto inner = interior(group, sets[static_cast<std::size_t>(n - 1)]);
    NestingEntry entry{n, true, std::nullopt};
    for (const auto& g : prev) {
      if (!inner.contains(g)) {
        entry.nested = false;
        entry.witness = g;
        break;
      }
    }
    report.entries.push_back(std::move(entry));
  }
  return report;
}

FiniteSet strong_target(const Group& group, const FiniteSet& y, int n) {
  auto core = set_union(y, ball(group, n));
  return product_set(group, product_set(group, core, inverse_set(group, core)), core);
}

bool is_inflating(const Group& group, const std::vector<FiniteSet>& targets,
                  const std::vector<Element>& v) {
  if (targets.size() != v.size()) throw InvalidInput("targets and shifts differ in length");
  std::unordered_set<Element> seen;
  for (std::size_t n = 0; n < v.size(); ++n) {
    auto shifted = right_translate(group, targets[n], group.inv(v[n]));
    for (const auto& g : shifted) {
      if (!seen.insert(g).second) return false;
    }
  }
  return true;
}

namespace {

// Visits candidates in canonical order of growing balls, or along powers of
// a direction, until visit returns true.
template <typename Visit>
bool scan_candidates(const Group& group, const InflateOptions& options, Visit&& visit) {
  if (options.direction) {
    Element g = group.identity();
    for (int k = 0; k <= options.search_radius; ++k) {
      if (visit(g)) return true;
      g = group.mul(g, *options.direction);
    }
    return false;
  }
  // Breadth-first layers, each visited in canonical order; the enumeration
  // stops as soon as a candidate is accepted.
  const Element e = group.identity();
  std::unordered_set<Element> seen{e};
  std::vector<Element> layer{e};
  for (int r = 0; r <= options.search_radius && !layer.empty(); ++r) {
    std::sort(layer.begin(), layer.end());
    for (const auto& g : layer) {
      if (visit(g)) return true;
    }
    std::vector<Element> next;
    for (const auto& x : layer) {
      for (const auto& w : group.generators()) {
        Element y = group.mul(w, x);
        if (seen.insert(y).second) {
          if (seen.size() > group.max_ball_size()) {
            throw CapacityExceeded("inflating candidate search exceeds " +
                                   std::to_string(group.max_ball_size()) + " elements");
          }
          next.push_back(std::move(y));
        }
      }
    }
    layer = std::move(next);
  }
  return false;
}

}  // namespace

InflatingSequence build_inflating(const SectionSequence& seq, int count,
                                  const InflateOptions& options) {
  if (count < 1) throw InvalidInput("inflating sequence length must be >= 1");
  const auto& group = seq.group();
  InflatingSequence result;
  result.strong = options.strong;
  auto ys = seq.range(1, count);
  std::unordered_set<Element> occupied;
  for (int n = 1; n <= count; ++n) {
    const auto& y = ys[static_cast<std::size_t>(n - 1)];
    FiniteSet target = options.strong ? strong_target(group, y, n) : y;
    std::optional<Element> chosen;
    scan_candidates(group, options, [&](const Element& v) {
      if (options.admissible && !options.admissible(v)) return false;
      Element vinv = group.inv(v);
      for (const auto& z : target) {
        if (occupied.count(group.mul(z, vinv))) return false;
      }
      chosen = v;
      return true;
    });
    if (!chosen) {
      throw CapacityExceeded("no admissible inflating element for n = " + std::to_string(n) +
                             " within search radius " + std::to_string(options.search_radius));
    }
    Element vinv = group.inv(*chosen);
    for (const auto& z : target) occupied.insert(group.mul(z, vinv));
    result.blocks.push_back(right_translate(group, y, vinv));
    result.targets.push_back(std::move(target));
    result.v.push_back(*chosen);
  }
  return result;
}

std::optional<int> GeodesicPath::length() const {
  if (is_infinite()) return std::nullopt;
  return static_cast<int>(prefix.size());
}

const Element& GeodesicPath::letter(int n) const {
  if (n < 1) throw InvalidInput("path letters are indexed from 1");
  auto idx = static_cast<std::size_t>(n - 1);
  if (idx < prefix.size()) return prefix[idx];
  if (cycle.empty()) throw InvalidInput("finite path has no letter " + std::to_string(n));
  return cycle[(idx - prefix.size()) % cycle.size()];
}

Element GeodesicPath::nu(const Group& group, int n) const {
  Element g = group.identity();
  for (int k = 1; k <= n; ++k) g = group.mul(g, letter(k));
  return g;
}

Element GeodesicPath::eta(const Group& group, int n) const { return group.inv(nu(group, n)); }

std::optional<int> first_non_geodesic(const Group& group, const GeodesicPath& path, int n_max,
                                      const WordMetric& metric) {
  Element nu = group.identity();
  for (int n = 1; n <= n_max; ++n) {
    const auto& w = path.letter(n);
    if (w == group.identity() || !group.generators().contains(w)) return n;
    nu = group.mul(nu, w);
    auto len = metric.length(nu);
    if (!len) {
      throw CapacityExceeded("geodesic check exceeds metric depth at n = " + std::to_string(n));
    }
    if (*len != n) return n;
  }
  return std::nullopt;
}

GeodesicPath random_geodesic_path(const Group& group, int length, std::mt19937_64& rng,
                                  const WordMetric& metric) {
  if (length > metric.depth()) throw CapacityExceeded("path length exceeds metric depth");
  // Depth-first search with random letter order; dead ends (elements no
  // letter moves further from e) are backed out of.
  constexpr std::size_t kMaxSteps = 1'000'000;
  std::vector<Element> letters;
  for (const auto& w : group.generators()) {
    if (w != group.identity()) letters.push_back(w);
  }
  struct Frame {
    Element nu;
    std::vector<Element> untried;
  };
  auto frame_at = [&](const Element& nu) {
    Frame f{nu, letters};
    std::shuffle(f.untried.begin(), f.untried.end(), rng);
    return f;
  };
  GeodesicPath path;
  std::vector<Frame> stack{frame_at(group.identity())};
  std::size_t steps = 0;
  while (static_cast<int>(path.prefix.size()) < length) {
    if (++steps > kMaxSteps) throw CapacityExceeded("geodesic path search did not terminate");
    auto& top = stack.back();
    if (top.untried.empty()) {
      stack.pop_back();
      if (stack.empty()) throw CapacityExceeded("no geodesic path of the requested length");
      path.prefix.pop_back();
      continue;
    }
    Element w = top.untried.back();
    top.untried.pop_back();
    Element next = group.mul(top.nu, w);
    auto len = metric.length(next);
    if (len && *len == static_cast<int>(path.prefix.size()) + 1) {
      path.prefix.push_back(w);
      stack.push_back(frame_at(next));
    }
  }
  return path;
}

std::vector<FiniteSet> limit_set_layers(const Group& group, const GeodesicPath& path, int n_max) {
  if (n_max < 0) throw InvalidInput("limit set depth must be non-negative");
  auto bs = balls(group, n_max);
  std::vector<FiniteSet> out;
  Element eta = group.identity();
  for (int n = 0; n <= n_max; ++n) {
    if (n > 0) eta = group.mul(group.inv(path.letter(n)), eta);
    out.push_back(right_translate(group, bs[static_cast<std::size_t>(n)], eta));
  }
  return out;
}

FiniteSet limit_set(const Group& group, const GeodesicPath& path, int n_max) {
  FiniteSet acc;
  for (auto& layer : limit_set_layers(group, path, n_max)) acc = set_union(acc, layer);
  return acc;
}

std::optional<int> first_limit_set_gap(const Group& group, const GeodesicPath& path, int n_max,
                                       const WordMetric& metric) {
  if (n_max > metric.depth()) throw CapacityExceeded("limit set check exceeds metric depth");
  auto bs = balls(group, std::max(n_max - 1, 0));
  Element eta = group.identity();
  for (int n = 0; n + 1 <= n_max; ++n) {
    if (n > 0) eta = group.mul(group.inv(path.letter(n)), eta);
    Element nu_next = group.inv(group.mul(group.inv(path.letter(n + 1)), eta));
    for (const auto& w : bs[static_cast<std::size_t>(n)]) {
      Element x = group.mul(w, eta);
      if (!metric.in_ball(group.mul(x, nu_next), n + 1)) return n;
    }
  }
  return std::nullopt;
}

std::optional<int> min_boundary_length(const Group& group, const FiniteSet& a,
                                       const WordMetric& metric) {
  std::optional<int> best;
  for (const auto& g : boundary(group, a)) {
    auto len = metric.length(g);
    if (!len) throw CapacityExceeded("boundary element beyond metric depth");
    if (!best || *len < *best) best = *len;
  }
  return best;
}

int generator_diameter(const Group& group) {
  int diameter = 0;
  for (const auto& w : group.generators()) {
    diameter = std::max(diameter, word_length(group, w, 64));
  }
  return diameter;
}

}  // namespace finsec
