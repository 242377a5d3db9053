#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "finsec/band_operator.hpp"
#include "finsec/finite_sections.hpp"
#include "finsec/limit_operator.hpp"
#include "finsec/set_geometry.hpp"

namespace finsec {

enum class Verdict { Stable, Unstable, Inconclusive };
const char* verdict_name(Verdict v);

struct Thresholds {
  /// Floor for the scanned sigma_min tail to call sections stable.
  double tau_stab = 1e-6;
  /// Floor for a candidate's probe to call it invertible.
  double tau_inv = 1e-6;
  /// Allowed relative dip of a tail that is otherwise non-decreasing.
  double trend = 0.1;
  /// Values below this count as exact zeros.
  double zero = 1e-10;
  /// A monotone decay by at least this factor across the range is unstable.
  double decay_factor = 10.0;
};

/// Smallest of the min(rows, cols) singular values. A zero column of a tall
/// or square matrix, or a zero row of a wide or square one, gives 0 exactly.
double sigma_min(const Matrix& m);
/// Smallest and largest singular values in one decomposition.
std::pair<double, double> singular_range(const Matrix& m);

/// Verdict for a trajectory of sigma_min values over growing sections.
///
/// The tail is the second half of the trajectory. Unstable when a tail value
/// is below `thresholds.zero` or when the whole trajectory decreases
/// monotonically by `decay_factor` or more. Stable when the tail minimum is
/// at least `floor` and no tail value drops more than `trend` below its
/// predecessor or below the first tail value. Inconclusive otherwise.
Verdict classify_trajectory(std::span<const double> sigma, double floor,
                            const Thresholds& thresholds);

struct ScanRecord {
  int n = 0;
  std::size_t size = 0;
  double sigma_min = 0.0;
  /// sigma_max / sigma_min; infinite for singular sections.
  double condition = 0.0;
};

struct StabilityReport {
  std::vector<ScanRecord> records;
  Verdict verdict = Verdict::Inconclusive;
  Thresholds thresholds;
};

/// sigma_min of truncate(A, Y_n) for n in [n_lo, n_hi].
StabilityReport stability_scan(const BandOperator& a, const SectionSequence& seq, int n_lo,
                               int n_hi, const Thresholds& thresholds = {});

enum class CandidateKind { Identity, OperatorItself, Shifted, LimitOperator, BoundaryCompression };
const char* candidate_kind_name(CandidateKind k);

enum class ProbeMethod { Symbol, LowerNorm, LimitSetLowerNorm };
const char* probe_method_name(ProbeMethod m);

struct ProbePoint {
  /// Window size (lower norm) or samples per axis (symbol).
  std::size_t size = 0;
  double sigma_min = 0.0;
};

struct Probe {
  ProbeMethod method = ProbeMethod::LowerNorm;
  std::vector<ProbePoint> curve;
  Verdict verdict = Verdict::Inconclusive;

  double min_sigma() const;
};

struct Candidate {
  CandidateKind kind = CandidateKind::OperatorItself;
  std::string label;
  BandOperator op;
  /// Direction of a limit operator or boundary compression.
  std::optional<GeodesicPath> path;
  /// v* for shifts, w* for compressions.
  std::optional<Element> shift;
  /// Residue representative of the limit branch.
  std::optional<Element> offset;
  Probe probe;
};

struct InventoryConfig {
  /// Include the inverse geodesic ray w, w, w, ... for every letter w of Omega
  /// whose powers are geodesic.
  bool letter_rays = true;
  std::vector<GeodesicPath> directions;
  std::vector<Element> shifts;
  /// w* for boundary compressions (identity when unset).
  std::optional<Element> w_star;
  /// Largest m for probe windows Omega_m or Omega_m eta_m.
  int probe_depth = 40;
  /// Largest probe window.
  std::size_t probe_max_dim = 600;
  /// Symbol samples per lattice axis.
  int symbol_samples = 1024;
  Thresholds thresholds;
};

struct LimitOperatorInventory {
  std::vector<Candidate> candidates;
  /// Directions whose limit operator could not be determined.
  std::vector<std::string> not_convergent;
};

/// Probe of invertibility on all of l^2(Gamma).
///
/// Z^d without exceptions: minimum of sigma_min of the block symbol over a
/// sampling grid of the torus, refined 16, 64, 256, 1024 per axis.
/// Otherwise: the lower norms of A and A* restricted to l^2(Omega_m), i.e.
/// sigma_min of the tall matrices with columns Omega_m and rows
/// Gamma_0 Omega_m. These decrease in m towards a limit that is positive iff
/// A is invertible; a finite m only gives an upper estimate.
Probe probe_operator(const BandOperator& a, const InventoryConfig& config);

/// Probe of P_Y A P_Y on im P_Y for the limit set Y of an inverse geodesic
/// path, right-translated by w*: lower norms of the compression and its
/// adjoint on l^2((Omega_m eta_m) w*), rows restricted to Y w*.
Probe probe_compression(const BandOperator& a, const GeodesicPath& path, const Element& w_star,
                        const InventoryConfig& config);

/// Identity, A, its shifts, its limit operators along every direction and the
/// boundary compressions P_Y A_g P_Y + (I - P_Y), each with its probe.
LimitOperatorInventory enumerate_candidates(const BandOperator& a, const InventoryConfig& config);

struct Prediction {
  Verdict verdict = Verdict::Inconclusive;
  LimitOperatorInventory inventory;
  /// True when the sup of inverse norms over the inventory was sampled.
  bool uniform_bound_checked = false;
  std::optional<double> uniform_bound;
  std::string note;
};

/// Stable iff every candidate probes invertible, Unstable if any probes
/// singular. The uniform inverse bound is sampled only when the group is
/// not of polynomial growth with a non-cyclic element.
Prediction predict_stability(const BandOperator& a, const InventoryConfig& config = {});

enum class Agreement { Agree, Disagree, Inconclusive };
const char* agreement_name(Agreement a);

struct Comparison {
  Agreement agreement = Agreement::Inconclusive;
  Verdict scan = Verdict::Inconclusive;
  Verdict prediction = Verdict::Inconclusive;
};

Comparison compare(const StabilityReport& scan, const Prediction& prediction);

}  // namespace finsec
