#include <cmath>
#include <memory>

#include "doctest.h"
#include "finsec/errors.hpp"
#include "finsec/stability.hpp"

using namespace finsec;

namespace {

Element z(std::int64_t x) { return Element(GroupKind::IntegerLattice, {x}); }

std::shared_ptr<const Group> zgroup() {
  return std::make_shared<const Group>(Group::integer_lattice(1));
}

BandOperator toeplitz(const std::shared_ptr<const Group>& g) {
  return BandOperator::identity(g) - Complex(0.5) * BandOperator::shift(g, z(1));
}

}  // namespace

TEST_CASE("sigma_min examples") {
  CHECK(sigma_min(Matrix::Identity(6, 6)) == doctest::Approx(1.0).epsilon(1e-14));
  Matrix shift = Matrix::Zero(6, 6);
  for (int i = 1; i < 6; ++i) shift(i, i - 1) = 1.0;
  CHECK(sigma_min(shift) == 0.0);
  Matrix bidiag = Matrix::Identity(50, 50);
  for (int i = 1; i < 50; ++i) bidiag(i, i - 1) = -0.5;
  const double s = sigma_min(bidiag);
  CHECK(s >= 0.5);
  CHECK(s <= 1.5);
  // Known 2x2: singular values of [[3, 0], [4, 5]] are 3*sqrt(5) and sqrt(5).
  Matrix m(2, 2);
  m << 3.0, 0.0, 4.0, 5.0;
  CHECK(sigma_min(m) == doctest::Approx(std::sqrt(5.0)).epsilon(1e-12));
  CHECK_THROWS_AS(sigma_min(Matrix(0, 0)), InvalidInput);
}

TEST_CASE("trajectory classification") {
  Thresholds th;
  std::vector<double> flat(10, 0.7);
  CHECK(classify_trajectory(flat, th.tau_stab, th) == Verdict::Stable);
  std::vector<double> zero{1.0, 0.5, 0.0, 0.0};
  CHECK(classify_trajectory(zero, th.tau_stab, th) == Verdict::Unstable);
  std::vector<double> decay{1.0, 0.5, 0.25, 0.125, 0.0625, 0.03};
  CHECK(classify_trajectory(decay, th.tau_stab, th) == Verdict::Unstable);
  std::vector<double> dip{1.0, 1.0, 1.0, 1.0, 0.5, 1.0};
  CHECK(classify_trajectory(dip, th.tau_stab, th) == Verdict::Inconclusive);
  std::vector<double> tiny(6, 1e-8);
  CHECK(classify_trajectory(tiny, th.tau_stab, th) == Verdict::Inconclusive);
  CHECK(classify_trajectory({}, th.tau_stab, th) == Verdict::Inconclusive);
}

TEST_CASE("scan of I - 0.5 L_1 is stable") {
  auto g = zgroup();
  auto report = stability_scan(toeplitz(g), SectionSequence::balls(*g), 1, 40);
  REQUIRE(report.records.size() == 40);
  for (const auto& r : report.records) {
    CHECK(r.sigma_min >= 0.5 - 1e-9);
    CHECK(r.size == static_cast<std::size_t>(2 * r.n + 1));
    CHECK(std::isfinite(r.condition));
  }
  CHECK(report.verdict == Verdict::Stable);
}

TEST_CASE("scan of L_1 is unstable with exact zeros") {
  auto g = zgroup();
  auto report = stability_scan(BandOperator::shift(g, z(1)), SectionSequence::balls(*g), 1, 20);
  for (const auto& r : report.records) {
    CHECK(r.sigma_min == 0.0);
    CHECK(std::isinf(r.condition));
  }
  CHECK(report.verdict == Verdict::Unstable);
}

TEST_CASE("one zero coefficient") {
  auto g = zgroup();
  auto a = BandOperator::multiplication(g, Diagonal::perturbed(1.0, {{z(0), 0.0}}));
  auto report = stability_scan(a, SectionSequence::balls(*g), 1, 10);
  for (const auto& r : report.records) CHECK(r.sigma_min == 0.0);
  CHECK(report.verdict == Verdict::Unstable);
  auto p = predict_stability(a);
  CHECK(p.verdict == Verdict::Unstable);
  CHECK(compare(report, p).agreement == Agreement::Agree);
}

TEST_CASE("inventory contents") {
  auto g = zgroup();
  InventoryConfig cfg;
  cfg.shifts = {z(3)};
  auto inv = enumerate_candidates(toeplitz(g), cfg);
  // Constant coefficients: shifts and limits collapse onto A.
  int identity = 0, itself = 0, shifted = 0, limits = 0, compressions = 0;
  for (const auto& c : inv.candidates) {
    switch (c.kind) {
      case CandidateKind::Identity: ++identity; break;
      case CandidateKind::OperatorItself: ++itself; break;
      case CandidateKind::Shifted: ++shifted; break;
      case CandidateKind::LimitOperator: ++limits; break;
      case CandidateKind::BoundaryCompression: ++compressions; break;
    }
  }
  CHECK(identity == 1);
  CHECK(itself == 1);
  CHECK(shifted == 0);
  CHECK(limits == 0);
  CHECK(compressions == 2);
  CHECK(inv.not_convergent.empty());
  for (const auto& c : inv.candidates) CHECK(c.probe.verdict == Verdict::Stable);
}

TEST_CASE("unitary candidates probe one") {
  auto g = zgroup();
  InventoryConfig cfg;
  auto probe = probe_operator(BandOperator::shift(g, z(1)), cfg);
  CHECK(probe.method == ProbeMethod::Symbol);
  CHECK(std::abs(probe.min_sigma() - 1.0) < 1e-12);
  auto heis = std::make_shared<const Group>(Group::heisenberg());
  auto hp = probe_operator(BandOperator::shift(heis, heis->element({1, 0, 0})), cfg);
  CHECK(hp.method == ProbeMethod::LowerNorm);
  for (const auto& p : hp.curve) CHECK(std::abs(p.sigma_min - 1.0) < 1e-12);
}

TEST_CASE("probes are shift invariant") {
  auto g = zgroup();
  InventoryConfig cfg;
  auto a = BandOperator::multiplication(g, Diagonal::periodic({2}, {2.0, 0.5})) +
           Complex(0.1) * BandOperator::shift(g, z(1));
  auto base = probe_compression(a, GeodesicPath::ray(z(1)), z(0), cfg);
  auto moved = probe_compression(a, GeodesicPath::ray(z(1)), z(7), cfg);
  REQUIRE(base.curve.size() == moved.curve.size());
  for (std::size_t k = 0; k < base.curve.size(); ++k) {
    CHECK(std::abs(base.curve[k].sigma_min - moved.curve[k].sigma_min) < 1e-10);
  }
}

TEST_CASE("predictions on the classical cases") {
  auto g = zgroup();
  auto stable = predict_stability(toeplitz(g));
  CHECK(stable.verdict == Verdict::Stable);
  CHECK_FALSE(stable.uniform_bound_checked);

  auto shift = predict_stability(BandOperator::shift(g, z(1)));
  CHECK(shift.verdict == Verdict::Unstable);
  for (const auto& c : shift.inventory.candidates) {
    if (c.kind == CandidateKind::OperatorItself) CHECK(std::abs(c.probe.min_sigma() - 1.0) < 1e-12);
    if (c.kind == CandidateKind::BoundaryCompression) {
      for (const auto& p : c.probe.curve) CHECK(p.sigma_min == 0.0);
    }
  }

  auto id = predict_stability(BandOperator::identity(g));
  CHECK(id.verdict == Verdict::Stable);
  for (const auto& c : id.inventory.candidates) CHECK(std::abs(c.probe.min_sigma() - 1.0) < 1e-12);
}

TEST_CASE("free group prediction samples the uniform bound") {
  auto f = std::make_shared<const Group>(Group::free_group(2));
  InventoryConfig cfg;
  cfg.probe_max_dim = 200;
  auto p = predict_stability(BandOperator::identity(f), cfg);
  CHECK(p.uniform_bound_checked);
  REQUIRE(p.uniform_bound);
  CHECK(*p.uniform_bound == doctest::Approx(1.0));
  CHECK(p.verdict == Verdict::Stable);
}

TEST_CASE("comparison") {
  StabilityReport s;
  Prediction p;
  s.verdict = Verdict::Stable;
  p.verdict = Verdict::Stable;
  CHECK(compare(s, p).agreement == Agreement::Agree);
  p.verdict = Verdict::Unstable;
  CHECK(compare(s, p).agreement == Agreement::Disagree);
  p.verdict = Verdict::Inconclusive;
  CHECK(compare(s, p).agreement == Agreement::Inconclusive);
}
