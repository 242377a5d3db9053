#include "finsec/finite_sections.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

#include "finsec/errors.hpp"

namespace finsec {

std::size_t max_matrix_dim() {
  if (const char* env = std::getenv("FINSEC_MAX_DIM")) {
    char* end = nullptr;
    auto v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return kDefaultMaxDim;
}

void check_dimension(std::size_t n) {
  if (n > max_matrix_dim()) {
    throw CapacityExceeded("matrix dimension " + std::to_string(n) + " exceeds limit " +
                           std::to_string(max_matrix_dim()));
  }
}

SectionMatrix truncate(const BandOperator& a, const FiniteSet& y) {
  check_dimension(y.size());
  const auto& group = a.group();
  const auto n = static_cast<Eigen::Index>(y.size());
  SectionMatrix m{y, Matrix::Zero(n, n), "truncate"};
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto& s = y[static_cast<std::size_t>(j)];
    for (const auto& [ti, bi] : a.terms()) {
      Element t = group.mul(ti, s);
      if (auto i = y.index_of(t)) m.entries(static_cast<Eigen::Index>(*i), j) += bi(t);
    }
  }
  return m;
}

SectionMatrix quasicommutator(const BandOperator& a, const BandOperator& b, const FiniteSet& y) {
  auto ab = truncate(compose(a, b), y);
  auto pa = truncate(a, y);
  auto pb = truncate(b, y);
  return {y, ab.entries - pa.entries * pb.entries, "quasicommutator"};
}

SectionMatrix ideal_generator(const Group& group, const Element& omega, const FiniteSet& y) {
  if (!group.generators().contains(omega)) {
    throw InvalidInput("ideal generator needs omega in the generating set");
  }
  check_dimension(y.size());
  auto gp = std::make_shared<const Group>(group);
  auto zone = set_union(y, product_set(group, FiniteSet({omega}), y));
  auto l_omega = truncate(BandOperator::shift(gp, omega), zone).entries;
  auto l_back = truncate(BandOperator::shift(gp, group.inv(omega)), zone).entries;
  const auto n = static_cast<Eigen::Index>(zone.size());
  Matrix p = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (y.contains(zone[static_cast<std::size_t>(i)])) p(i, i) = 1.0;
  }
  Matrix q = Matrix::Identity(n, n) - p;
  Matrix full = p * l_back * q * l_omega * p;

  const auto m = static_cast<Eigen::Index>(y.size());
  SectionMatrix out{y, Matrix::Zero(m, m), "ideal_generator"};
  for (Eigen::Index i = 0; i < m; ++i) {
    auto zi = static_cast<Eigen::Index>(*zone.index_of(y[static_cast<std::size_t>(i)]));
    for (Eigen::Index j = 0; j < m; ++j) {
      auto zj = static_cast<Eigen::Index>(*zone.index_of(y[static_cast<std::size_t>(j)]));
      out.entries(i, j) = full(zi, zj);
    }
  }
  return out;
}

SectionMatrix boundary_projection(const Group& group, const FiniteSet& y) {
  check_dimension(y.size());
  auto edge = boundary(group, y);
  const auto n = static_cast<Eigen::Index>(y.size());
  SectionMatrix out{y, Matrix::Zero(n, n), "boundary_projection"};
  for (Eigen::Index i = 0; i < n; ++i) {
    if (edge.contains(y[static_cast<std::size_t>(i)])) out.entries(i, i) = 1.0;
  }
  return out;
}

SectionMatrix compress(const SectionMatrix& m, const FiniteSet& w) {
  const auto n = static_cast<Eigen::Index>(w.size());
  std::vector<Eigen::Index> idx(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    auto k = m.window.index_of(w[i]);
    if (!k) throw InvalidInput("compression window is not inside the matrix window");
    idx[i] = static_cast<Eigen::Index>(*k);
  }
  SectionMatrix out{w, Matrix(n, n), m.provenance};
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      out.entries(i, j) = m.entries(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
    }
  }
  return out;
}

std::vector<SectionMatrix> sequence_product(std::span<const SectionMatrix> a,
                                            std::span<const SectionMatrix> b) {
  if (a.size() != b.size()) throw InvalidInput("section sequences differ in length");
  std::vector<SectionMatrix> out;
  out.reserve(a.size());
  for (std::size_t n = 0; n < a.size(); ++n) {
    if (!(a[n].window == b[n].window)) throw InvalidInput("section windows differ");
    out.push_back({a[n].window, a[n].entries * b[n].entries, "product"});
  }
  return out;
}

StrongLimitResult strong_limit_w(std::span<const SectionMatrix> sequence, const FiniteSet& w,
                                 double tol) {
  std::vector<std::pair<int, SectionMatrix>> usable;
  for (std::size_t n = 0; n < sequence.size(); ++n) {
    if (w.is_subset_of(sequence[n].window)) {
      usable.emplace_back(static_cast<int>(n) + 1, compress(sequence[n], w));
    }
  }
  StrongLimitResult result;
  if (usable.size() < 2) {
    result.failure = Oscillation{};
    result.failure->reason = "fewer than two sections contain the probe window";
    return result;
  }
  // Walk back from the end while consecutive compressions agree.
  std::size_t k = usable.size() - 1;
  while (k > 0) {
    const Matrix diff = usable[k].second.entries - usable[k - 1].second.entries;
    Eigen::Index r = 0;
    Eigen::Index c = 0;
    if (diff.size() > 0 && diff.cwiseAbs().maxCoeff(&r, &c) > tol) {
      if (k == usable.size() - 1) {
        result.failure = Oscillation{static_cast<std::size_t>(r), static_cast<std::size_t>(c),
                                     usable[k - 1].first, usable[k].first,
                                     usable[k - 1].second.entries(r, c),
                                     usable[k].second.entries(r, c),
                                     "compressions still change at the last index"};
        return result;
      }
      break;
    }
    --k;
  }
  result.stabilized_from = usable[k].first;
  result.limit = usable.back().second;
  result.limit->provenance = "strong_limit";
  return result;
}

AssembledOp assemble_op(const Group& group, std::span<const SectionMatrix> sections,
                        const InflatingSequence& inflating, const FiniteSet& w) {
  if (sections.size() > inflating.v.size()) {
    throw InvalidInput("more sections than inflating shifts");
  }
  check_dimension(w.size());
  const auto n = static_cast<Eigen::Index>(w.size());
  AssembledOp out;
  out.window = w;
  out.entries = Matrix::Zero(n, n);
  std::vector<bool> covered(w.size(), false);
  for (std::size_t k = 0; k < sections.size(); ++k) {
    const auto& y = sections[k].window;
    const auto& v = inflating.v[k];
    const Element vinv = group.inv(v);
    auto block = right_translate(group, y, vinv);
    out.blocks.push_back(block);
    out.shifts.push_back(v);
    std::vector<Eigen::Index> rows;
    std::vector<Eigen::Index> src;
    bool complete = true;
    for (const auto& t : block) {
      if (auto i = w.index_of(t)) {
        covered[*i] = true;
        rows.push_back(static_cast<Eigen::Index>(*i));
        src.push_back(static_cast<Eigen::Index>(*y.index_of(group.mul(t, v))));
      } else {
        complete = false;
      }
    }
    if (!complete) {
      out.dropped.push_back(static_cast<int>(k) + 1);
      out.warnings.push_back("block " + std::to_string(k + 1) +
                             " is not contained in the assembly window and was dropped");
      continue;
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (std::size_t j = 0; j < rows.size(); ++j) {
        out.entries(rows[i], rows[j]) = sections[k].entries(src[i], src[j]);
      }
    }
  }
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!covered[i]) out.entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 1.0;
  }
  bool any_full = out.dropped.size() < sections.size();
  if (!any_full && !sections.empty()) {
    out.warnings.push_back("assembly window contains no complete block");
  }
  return out;
}

FiniteSet default_assembly_window(const Group& group, const InflatingSequence& inflating,
                                  int max_radius) {
  int radius = 0;
  for (const auto& block : inflating.blocks) {
    for (const auto& t : block) radius = std::max(radius, word_length(group, t, max_radius));
  }
  return ball(group, radius);
}

FiniteSet block_union_window(const InflatingSequence& inflating) {
  FiniteSet acc;
  for (const auto& block : inflating.blocks) acc = set_union(acc, block);
  return acc;
}

}  // namespace finsec
