#pragma once

#include <map>
#include <memory>
#include <vector>

#include "finsec/diagonal.hpp"
#include "finsec/element.hpp"
#include "finsec/finite_set.hpp"
#include "finsec/group.hpp"

namespace finsec {

/// A band operator A = sum_i b_i L_{t_i} on l^2(Gamma).
///
/// Stored as the map t_i -> b_i with every b_i non-zero, which makes the
/// representation unique. The kernel is k(t, s) = b_i(t) when t s^{-1} = t_i
/// and 0 otherwise; (L_r u)(t) = u(r^{-1} t).
class BandOperator {
 public:
  using Terms = std::map<Element, Diagonal>;

  explicit BandOperator(std::shared_ptr<const Group> group);
  BandOperator(std::shared_ptr<const Group> group, const Terms& terms);

  static BandOperator identity(std::shared_ptr<const Group> group);
  /// L_t.
  static BandOperator shift(std::shared_ptr<const Group> group, const Element& t);
  /// bI.
  static BandOperator multiplication(std::shared_ptr<const Group> group, const Diagonal& b);

  const Group& group() const noexcept { return *group_; }
  const std::shared_ptr<const Group>& group_ptr() const noexcept { return group_; }
  const Terms& terms() const noexcept { return terms_; }

  /// Gamma_0, the set of band elements with a non-zero diagonal.
  FiniteSet band_width() const;
  bool is_zero() const noexcept { return terms_.empty(); }
  /// Every diagonal is a constant (operator in the shift algebra).
  bool has_constant_coefficients() const noexcept;
  bool has_exceptions() const noexcept;

  /// Adds b to the diagonal at t; a resulting zero diagonal is removed.
  void add_term(const Element& t, const Diagonal& b);

  Complex kernel(const Element& t, const Element& s) const;

  /// Same operator with every exception table dropped.
  BandOperator without_exceptions() const;

  bool approx_equal(const BandOperator& other, double tol) const;
  friend bool operator==(const BandOperator& a, const BandOperator& b);

 private:
  void check_diagonal(const Diagonal& b) const;

  std::shared_ptr<const Group> group_;
  Terms terms_;
};

BandOperator operator+(const BandOperator& a, const BandOperator& b);
BandOperator operator-(const BandOperator& a, const BandOperator& b);
BandOperator operator*(Complex s, const BandOperator& a);

/// A B. The term at t_i t_j collects t -> b_i(t) b'_j(t_i^{-1} t).
BandOperator compose(const BandOperator& a, const BandOperator& b);
inline BandOperator operator*(const BandOperator& a, const BandOperator& b) {
  return compose(a, b);
}

/// A*: terms t_i^{-1} -> (t -> conj(b_i(t_i t))).
BandOperator adjoint(const BandOperator& a);

/// R_r^{-1} A R_r with (R_r f)(t) = f(t r): diagonals become t -> b_i(t r^{-1}).
BandOperator conjugate_shift(const BandOperator& a, const Element& r);

/// A function supported on a finite window, values in window order.
struct WindowVector {
  FiniteSet window;
  std::vector<Complex> values;

  Complex at(const Element& g) const;
};

/// (A u)(t) = sum_i b_i(t) u(t_i^{-1} t) on the window Gamma_0 W.
WindowVector apply(const BandOperator& a, const WindowVector& u);

}  // namespace finsec
