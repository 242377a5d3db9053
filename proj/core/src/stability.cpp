#include "finsec/stability.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <numbers>
#include <thread>

#include <Eigen/SVD>

#include "finsec/errors.hpp"

namespace finsec {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

thread_local bool in_worker = false;

// Runs body(0..n-1) on a few threads. Results must be written to
// preallocated slots; the first exception is rethrown.
template <class F>
void parallel_for(std::size_t n, F&& body) {
  const std::size_t workers =
      std::min<std::size_t>(n, std::max(1u, std::thread::hardware_concurrency()));
  // Nested calls run inline on the worker that issued them.
  if (workers <= 1 || in_worker) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      in_worker = true;
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

// A zero column of a tall matrix (or zero row of a wide one) forces a zero
// singular value.
bool has_zero_line(const Matrix& m) {
  if (m.rows() <= m.cols()) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if ((m.row(i).array() == Complex{}).all()) return true;
    }
  }
  if (m.cols() <= m.rows()) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if ((m.col(j).array() == Complex{}).all()) return true;
    }
  }
  return false;
}

Verdict threshold_verdict(double value, const Thresholds& th) {
  if (value < th.zero) return Verdict::Unstable;
  if (value >= th.tau_inv) return Verdict::Stable;
  return Verdict::Inconclusive;
}

// Largest m <= depth with |Omega_m| <= cap, or 0.
int max_radius_within(const Group& group, int depth, std::size_t cap) {
  int m = 0;
  while (m < depth) {
    auto layers = balls(group, m + 1);
    if (layers.back().size() > cap) break;
    ++m;
  }
  return m;
}


// Sample grid sizes per axis, capped so the total sample count stays moderate.
std::vector<int> symbol_grid(int dim, int max_samples) {
  constexpr double kBudget = 1 << 20;
  std::vector<int> out;
  for (int k : {16, 64, 256, 1024}) {
    if (k > max_samples) break;
    if (std::pow(static_cast<double>(k), dim) > kBudget) break;
    out.push_back(k);
  }
  if (out.empty()) out.push_back(std::max(1, std::min(16, max_samples)));
  return out;
}

Probe symbol_probe(const BandOperator& a, const InventoryConfig& config) {
  const auto& group = a.group();
  const auto dim = static_cast<std::size_t>(group.rank());
  const auto period = common_period(a);
  std::size_t block = 1;
  for (auto p : period) block *= static_cast<std::size_t>(p);

  // Residue multi-indices in row-major order.
  std::vector<std::vector<std::int64_t>> residues;
  residues.reserve(block);
  {
    std::vector<std::int64_t> r(dim, 0);
    for (std::size_t k = 0; k < block; ++k) {
      residues.push_back(r);
      for (std::size_t ax = dim; ax-- > 0;) {
        if (++r[ax] < period[ax]) break;
        r[ax] = 0;
      }
    }
  }
  auto index_of = [&](const std::vector<std::int64_t>& r) {
    std::size_t idx = 0;
    for (std::size_t ax = 0; ax < dim; ++ax) idx = idx * static_cast<std::size_t>(period[ax]) + r[ax];
    return idx;
  };

  // Each term contributes b(r) exp(i theta . q) at (r, r') with
  // r - t = r' + P q.
  struct Entry {
    std::size_t row;
    std::size_t col;
    Complex value;
    std::vector<std::int64_t> q;
  };
  std::vector<Entry> entries;
  for (const auto& [t, b] : a.terms()) {
    for (std::size_t k = 0; k < block; ++k) {
      const auto& r = residues[k];
      std::vector<std::int64_t> rp(dim);
      std::vector<std::int64_t> q(dim);
      for (std::size_t ax = 0; ax < dim; ++ax) {
        const std::int64_t d = r[ax] - t[ax];
        const std::int64_t p = period[ax];
        std::int64_t m = d % p;
        if (m < 0) m += p;
        rp[ax] = m;
        q[ax] = (d - m) / p;
      }
      entries.push_back({k, index_of(rp), b.base_at_coords(r), std::move(q)});
    }
  }

  Probe probe;
  probe.method = ProbeMethod::Symbol;
  for (int k : symbol_grid(static_cast<int>(dim), config.symbol_samples)) {
    std::size_t total = 1;
    for (std::size_t ax = 0; ax < dim; ++ax) total *= static_cast<std::size_t>(k);
    const unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t chunks = std::min<std::size_t>(total, threads);
    std::vector<double> chunk_min(chunks, kInf);
    parallel_for(chunks, [&](std::size_t c) {
      Matrix s(static_cast<Eigen::Index>(block), static_cast<Eigen::Index>(block));
      std::vector<double> theta(dim);
      for (std::size_t sample = c; sample < total; sample += chunks) {
        std::size_t rest = sample;
        for (std::size_t ax = dim; ax-- > 0;) {
          theta[ax] = 2.0 * std::numbers::pi * static_cast<double>(rest % static_cast<std::size_t>(k)) / k;
          rest /= static_cast<std::size_t>(k);
        }
        s.setZero();
        for (const auto& e : entries) {
          double phase = 0.0;
          for (std::size_t ax = 0; ax < dim; ++ax) phase += theta[ax] * static_cast<double>(e.q[ax]);
          s(static_cast<Eigen::Index>(e.row), static_cast<Eigen::Index>(e.col)) +=
              e.value * std::polar(1.0, phase);
        }
        const double v = block == 1 ? std::abs(s(0, 0)) : sigma_min(s);
        chunk_min[c] = std::min(chunk_min[c], v);
      }
    });
    probe.curve.push_back({static_cast<std::size_t>(k),
                           *std::min_element(chunk_min.begin(), chunk_min.end())});
  }
  probe.verdict = threshold_verdict(probe.min_sigma(), config.thresholds);
  return probe;
}

// Columns W, rows (Gamma_0 W) filtered by `keep`: the matrix of A restricted
// to l^2(W) and followed by the projection onto the kept rows.
Matrix column_block(const BandOperator& a, const FiniteSet& cols,
                    const std::function<bool(const Element&)>& keep) {
  const auto& group = a.group();
  auto reach = product_set(group, a.band_width(), cols);
  std::vector<Element> kept;
  for (const auto& t : reach) {
    if (!keep || keep(t)) kept.push_back(t);
  }
  auto rows = FiniteSet::from_sorted(std::move(kept));
  check_dimension(rows.size());
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) {
    for (const auto& [ti, bi] : a.terms()) {
      Element t = group.mul(ti, cols[j]);
      if (auto i = rows.index_of(t)) {
        m(static_cast<Eigen::Index>(*i), static_cast<Eigen::Index>(j)) += bi(t);
      }
    }
  }
  return m;
}

// inf ||M u|| / ||u||; zero when M has fewer rows than columns.
double lower_norm(const Matrix& m) { return m.rows() < m.cols() ? 0.0 : sigma_min(m); }

// min(nu_W(A), nu_W(A*)) with nu_W(B) = inf ||B u|| / ||u|| over u in l^2(W).
// Both decrease to the lower norms of A and A*, which are positive iff A is
// invertible.
Probe lower_norm_probe(const BandOperator& a, const std::vector<FiniteSet>& windows,
                       ProbeMethod method, const std::function<bool(const Element&)>& keep,
                       const Thresholds& thresholds) {
  const auto star = adjoint(a);
  Probe probe;
  probe.method = method;
  probe.curve.resize(windows.size());
  parallel_for(windows.size(), [&](std::size_t k) {
    if (windows[k].empty()) throw InvalidInput("empty probe window");
    const double s = std::min(lower_norm(column_block(a, windows[k], keep)),
                              lower_norm(column_block(star, windows[k], keep)));
    probe.curve[k] = {windows[k].size(), s};
  });
  std::vector<double> sigma;
  for (const auto& p : probe.curve) sigma.push_back(p.sigma_min);
  probe.verdict = classify_trajectory(sigma, thresholds.tau_inv, thresholds);
  return probe;
}

Probe ball_probe(const BandOperator& a, const InventoryConfig& config) {
  const auto& group = a.group();
  const int m = max_radius_within(group, config.probe_depth, config.probe_max_dim);
  auto layers = balls(group, m);
  std::vector<FiniteSet> windows(layers.begin() + 1, layers.end());
  return lower_norm_probe(a, windows, ProbeMethod::LowerNorm, {}, config.thresholds);
}

int band_radius(const BandOperator& a) {
  int r = 0;
  for (const auto& [t, b] : a.terms()) r = std::max(r, word_length(a.group(), t));
  return r;
}

std::vector<GeodesicPath> inventory_directions(const Group& group, const InventoryConfig& config) {
  std::vector<GeodesicPath> out;
  if (config.letter_rays) {
    const int depth = std::max(1, max_radius_within(group, std::min(config.probe_depth, 12), 200'000));
    WordMetric metric(group, depth);
    for (const auto& w : group.generators()) {
      if (w == group.identity()) continue;
      auto path = GeodesicPath::ray(w);
      if (!first_non_geodesic(group, path, depth, metric)) out.push_back(path);
    }
  }
  out.insert(out.end(), config.directions.begin(), config.directions.end());
  return out;
}

std::string path_label(const Group& group, const GeodesicPath& path) {
  return SequenceSpec::inverse_geodesic(path).describe(group);
}

}  // namespace

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Stable: return "stable";
    case Verdict::Unstable: return "unstable";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

const char* candidate_kind_name(CandidateKind k) {
  switch (k) {
    case CandidateKind::Identity: return "identity";
    case CandidateKind::OperatorItself: return "operator";
    case CandidateKind::Shifted: return "shifted";
    case CandidateKind::LimitOperator: return "limit_operator";
    case CandidateKind::BoundaryCompression: return "boundary_compression";
  }
  return "?";
}

const char* probe_method_name(ProbeMethod m) {
  switch (m) {
    case ProbeMethod::Symbol: return "symbol";
    case ProbeMethod::LowerNorm: return "lower_norm";
    case ProbeMethod::LimitSetLowerNorm: return "limit_set_lower_norm";
  }
  return "?";
}

const char* agreement_name(Agreement a) {
  switch (a) {
    case Agreement::Agree: return "agree";
    case Agreement::Disagree: return "disagree";
    case Agreement::Inconclusive: return "inconclusive";
  }
  return "?";
}

double sigma_min(const Matrix& m) {
  if (m.rows() == 0 || m.cols() == 0) throw InvalidInput("sigma_min of an empty matrix");
  if (has_zero_line(m)) return 0.0;
  Eigen::BDCSVD<Matrix> svd(m);
  return svd.singularValues().minCoeff();
}

std::pair<double, double> singular_range(const Matrix& m) {
  if (m.rows() == 0 || m.cols() == 0) throw InvalidInput("singular values of an empty matrix");
  Eigen::BDCSVD<Matrix> svd(m);
  const auto& s = svd.singularValues();
  const double lo = has_zero_line(m) ? 0.0 : s.minCoeff();
  return {lo, s.maxCoeff()};
}

Verdict classify_trajectory(std::span<const double> sigma, double floor,
                            const Thresholds& thresholds) {
  if (sigma.empty()) return Verdict::Inconclusive;
  const auto tail = sigma.subspan(sigma.size() / 2);
  if (std::any_of(tail.begin(), tail.end(), [&](double s) { return s < thresholds.zero; })) {
    return Verdict::Unstable;
  }
  if (sigma.size() >= 2) {
    bool non_increasing = true;
    for (std::size_t k = 1; k < sigma.size(); ++k) non_increasing &= sigma[k] <= sigma[k - 1];
    if (non_increasing && sigma.front() >= thresholds.decay_factor * sigma.back()) {
      return Verdict::Unstable;
    }
  }
  const double tail_min = *std::min_element(tail.begin(), tail.end());
  if (tail_min < floor) return Verdict::Inconclusive;
  const double keep = 1.0 - thresholds.trend;
  for (std::size_t k = 1; k < tail.size(); ++k) {
    if (tail[k] < keep * tail[k - 1]) return Verdict::Inconclusive;
  }
  if (tail_min < keep * tail.front()) return Verdict::Inconclusive;
  return Verdict::Stable;
}

StabilityReport stability_scan(const BandOperator& a, const SectionSequence& seq, int n_lo,
                               int n_hi, const Thresholds& thresholds) {
  if (n_lo < 1 || n_hi < n_lo) throw InvalidInput("scan range must satisfy 1 <= n_lo <= n_hi");
  if (!(seq.group() == a.group())) throw ContextMismatch("section sequence is over another group");
  auto windows = seq.range(n_lo, n_hi);
  for (const auto& w : windows) check_dimension(w.size());

  StabilityReport report;
  report.thresholds = thresholds;
  report.records.resize(windows.size());
  parallel_for(windows.size(), [&](std::size_t k) {
    auto [lo, hi] = singular_range(truncate(a, windows[k]).entries);
    report.records[k] = {n_lo + static_cast<int>(k), windows[k].size(), lo,
                         lo > 0.0 ? hi / lo : kInf};
  });
  std::vector<double> sigma;
  for (const auto& r : report.records) sigma.push_back(r.sigma_min);
  report.verdict = classify_trajectory(sigma, thresholds.tau_stab, thresholds);
  return report;
}

double Probe::min_sigma() const {
  if (curve.empty()) return std::numeric_limits<double>::quiet_NaN();
  double m = kInf;
  for (const auto& p : curve) m = std::min(m, p.sigma_min);
  return m;
}

Probe probe_operator(const BandOperator& a, const InventoryConfig& config) {
  if (a.group().kind() == GroupKind::IntegerLattice) {
    if (!a.has_exceptions()) return symbol_probe(a, config);
  }
  return ball_probe(a, config);
}

Probe probe_compression(const BandOperator& a, const GeodesicPath& path, const Element& w_star,
                        const InventoryConfig& config) {
  const auto& group = a.group();
  group.check(w_star);
  const int m = max_radius_within(group, config.probe_depth, config.probe_max_dim);
  // Rows are kept when they lie in Omega_M eta_M w*, the truncation of the
  // limit set deep enough to contain every reachable row that belongs to it.
  const int depth = m + band_radius(a) + 1;
  const WordMetric metric(group, depth);
  const Element nu = path.nu(group, depth);
  const Element w_inv = group.inv(w_star);
  auto keep = [&](const Element& x) {
    return metric.in_ball(group.mul(group.mul(x, w_inv), nu), depth);
  };
  auto layers = limit_set_layers(group, path, m);
  std::vector<FiniteSet> windows;
  for (std::size_t k = 1; k < layers.size(); ++k) {
    windows.push_back(right_translate(group, layers[k], w_star));
  }
  return lower_norm_probe(conjugate_shift(a, w_star), windows, ProbeMethod::LimitSetLowerNorm,
                          keep, config.thresholds);
}

LimitOperatorInventory enumerate_candidates(const BandOperator& a, const InventoryConfig& config) {
  const auto& group = a.group();
  const auto gp = a.group_ptr();
  const Element w_star = config.w_star.value_or(group.identity());
  LimitOperatorInventory inv;

  auto push_operator = [&](CandidateKind kind, std::string label, BandOperator op,
                           std::optional<GeodesicPath> path = {},
                           std::optional<Element> shift = {},
                           std::optional<Element> offset = {}) {
    // Shifts and limits that coincide with an existing candidate add nothing.
    if (kind == CandidateKind::Shifted || kind == CandidateKind::LimitOperator) {
      for (const auto& c : inv.candidates) {
        if (c.kind != CandidateKind::BoundaryCompression && c.op == op) return;
      }
    }
    inv.candidates.push_back(
        {kind, std::move(label), std::move(op), std::move(path), std::move(shift), std::move(offset), {}});
  };

  push_operator(CandidateKind::Identity, "I", BandOperator::identity(gp));
  push_operator(CandidateKind::OperatorItself, "A", a);
  for (const auto& v : config.shifts) {
    group.check(v);
    push_operator(CandidateKind::Shifted, "shift(" + group.format(v) + ")", conjugate_shift(a, v),
                  std::nullopt, v);
  }

  struct CompressionJob {
    std::size_t candidate;
    GeodesicPath path;
  };
  std::vector<CompressionJob> compressions;
  for (const auto& path : inventory_directions(group, config)) {
    const auto label = path_label(group, path);
    auto result = limit_operator(a, SequenceSpec::inverse_geodesic(path));
    if (!result.converged()) {
      inv.not_convergent.push_back(label + ": " + result.failure->reason);
      continue;
    }
    for (const auto& branch : result.branches) {
      const std::string suffix =
          result.branches.size() > 1 ? " @" + group.format(branch.offset) : std::string{};
      push_operator(CandidateKind::LimitOperator, "limit " + label + suffix, branch.op, path,
                    std::nullopt, branch.offset);
      compressions.push_back({inv.candidates.size(), path});
      inv.candidates.push_back({CandidateKind::BoundaryCompression,
                                "compression " + label + suffix + " w*=" + group.format(w_star),
                                branch.op,
                                path,
                                w_star,
                                branch.offset,
                                {}});
    }
  }

  parallel_for(inv.candidates.size(), [&](std::size_t k) {
    auto& c = inv.candidates[k];
    if (c.kind == CandidateKind::BoundaryCompression) {
      c.probe = probe_compression(c.op, *c.path, w_star, config);
    } else {
      c.probe = probe_operator(c.op, config);
    }
  });
  return inv;
}

Prediction predict_stability(const BandOperator& a, const InventoryConfig& config) {
  Prediction p;
  p.inventory = enumerate_candidates(a, config);
  bool any_unstable = false;
  bool all_stable = true;
  for (const auto& c : p.inventory.candidates) {
    any_unstable |= c.probe.verdict == Verdict::Unstable;
    all_stable &= c.probe.verdict == Verdict::Stable;
  }
  const auto& group = a.group();
  if (!(group.growth_class() == GrowthClass::Polynomial && group.has_noncyclic_element())) {
    p.uniform_bound_checked = true;
    double bound = 0.0;
    for (const auto& c : p.inventory.candidates) {
      const double s = c.probe.min_sigma();
      bound = std::max(bound, s > 0.0 ? 1.0 / s : kInf);
    }
    p.uniform_bound = bound;
    if (!(bound <= 1.0 / config.thresholds.tau_inv)) all_stable = false;
  }
  if (any_unstable) {
    p.verdict = Verdict::Unstable;
    p.note = "a candidate probes singular";
  } else if (all_stable && p.inventory.not_convergent.empty()) {
    p.verdict = Verdict::Stable;
    p.note = "every candidate probes invertible over the sampled directions";
  } else {
    p.verdict = Verdict::Inconclusive;
    p.note = p.inventory.not_convergent.empty() ? "some candidate probes are inconclusive"
                                                : "some directions have no limit operator";
  }
  return p;
}

Comparison compare(const StabilityReport& scan, const Prediction& prediction) {
  Comparison c;
  c.scan = scan.verdict;
  c.prediction = prediction.verdict;
  if (c.scan == Verdict::Inconclusive || c.prediction == Verdict::Inconclusive) {
    c.agreement = Agreement::Inconclusive;
  } else {
    c.agreement = c.scan == c.prediction ? Agreement::Agree : Agreement::Disagree;
  }
  return c;
}

}  // namespace finsec
