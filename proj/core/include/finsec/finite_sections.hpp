#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "finsec/band_operator.hpp"
#include "finsec/finite_set.hpp"
#include "finsec/set_geometry.hpp"

namespace finsec {

using Matrix = Eigen::MatrixXcd;

inline constexpr std::size_t kDefaultMaxDim = 2000;

/// Dimension cap for dense matrices: FINSEC_MAX_DIM if set, else 2000.
std::size_t max_matrix_dim();
/// Throws CapacityExceeded when n exceeds max_matrix_dim().
void check_dimension(std::size_t n);

/// A dense matrix indexed by a window in canonical order.
struct SectionMatrix {
  FiniteSet window;
  Matrix entries;
  std::string provenance;

  std::size_t dim() const noexcept { return window.size(); }
};

/// P_Y A P_Y: entries[i, j] = kernel(A, Y[i], Y[j]).
SectionMatrix truncate(const BandOperator& a, const FiniteSet& y);

/// P_Y A B P_Y - (P_Y A P_Y)(P_Y B P_Y).
SectionMatrix quasicommutator(const BandOperator& a, const BandOperator& b, const FiniteSet& y);

/// P_Y L_{omega^{-1}} Q_Y L_omega P_Y, evaluated as a matrix product on
/// Y u omega Y. Diagonal 0/1 with a one at y iff omega y is outside Y.
SectionMatrix ideal_generator(const Group& group, const Element& omega, const FiniteSet& y);

/// P_{boundary(Y)} as a diagonal 0/1 matrix on Y.
SectionMatrix boundary_projection(const Group& group, const FiniteSet& y);

/// P_W M P_W for W inside M's window.
SectionMatrix compress(const SectionMatrix& m, const FiniteSet& w);

/// Entrywise product of two section sequences with matching windows.
std::vector<SectionMatrix> sequence_product(std::span<const SectionMatrix> a,
                                            std::span<const SectionMatrix> b);

struct Oscillation {
  std::size_t row = 0;
  std::size_t col = 0;
  int index_a = 0;
  int index_b = 0;
  Complex value_a{};
  Complex value_b{};
  std::string reason;
};

struct StrongLimitResult {
  std::optional<SectionMatrix> limit;
  /// 1-based index into the input from which compressions agree.
  int stabilized_from = 0;
  std::optional<Oscillation> failure;

  bool converged() const noexcept { return limit.has_value(); }
};

/// Strong limit of A_n P_{Y_n} seen through P_W: the sequence of
/// compressions P_W A_n P_W (for the A_n whose window contains W) must be
/// constant, within `tol`, from some index through the last one.
StrongLimitResult strong_limit_w(std::span<const SectionMatrix> sequence, const FiniteSet& w,
                                 double tol = 1e-12);

/// Finite piece of Op(A_n) + P_{Gamma'} on a window W.
struct AssembledOp {
  FiniteSet window;
  Matrix entries;
  /// Y_n v_n^{-1}.
  std::vector<FiniteSet> blocks;
  std::vector<Element> shifts;
  /// 1-based indices of blocks not contained in W; their entries are zero.
  std::vector<int> dropped;
  std::vector<std::string> warnings;
};

/// Places R_{v_n} A_n R_{v_n}^{-1} on the block Y_n v_n^{-1}, i.e.
/// entries[t, s] = A_n[t v_n, s v_n], and the identity on the rest of W.
AssembledOp assemble_op(const Group& group, std::span<const SectionMatrix> sections,
                        const InflatingSequence& inflating, const FiniteSet& w);

/// Smallest ball Omega_M containing every block of the inflating sequence.
FiniteSet default_assembly_window(const Group& group, const InflatingSequence& inflating,
                                  int max_radius = 64);
/// Union of the blocks Y_n v_n^{-1}; block-complete and far smaller than the
/// default window on groups of exponential growth.
FiniteSet block_union_window(const InflatingSequence& inflating);

}  // namespace finsec
