#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "finsec/element.hpp"
#include "finsec/group.hpp"

namespace finsec {

using Complex = std::complex<double>;

/// A structured coefficient function b : Gamma -> C.
///
/// The base is either a constant or (on Z^d only) a lattice-periodic table;
/// a finite exception map overrides the base pointwise. The four rule kinds
/// are the combinations of these two choices. Values are kept normalised:
/// the period is minimal per axis, an all-ones period collapses to a
/// constant, and exceptions equal to the base value are dropped, so two
/// diagonals describing the same function compare equal.
class Diagonal {
 public:
  enum class Rule { Constant, PerturbedConstant, LatticePeriodic, PeriodicPerturbed };

  Diagonal() = default;
  static Diagonal constant(Complex c);
  static Diagonal perturbed(Complex c, std::map<Element, Complex> exceptions);
  /// Table indexed by residues in row-major order (last axis fastest).
  static Diagonal periodic(std::vector<std::int64_t> period, std::vector<Complex> table,
                           std::map<Element, Complex> exceptions = {});

  Rule rule() const noexcept;
  bool has_periodic_base() const noexcept { return !period_.empty(); }
  /// Empty for a constant base.
  const std::vector<std::int64_t>& period() const noexcept { return period_; }
  const std::vector<Complex>& table() const noexcept { return table_; }
  const std::map<Element, Complex>& exceptions() const noexcept { return exceptions_; }

  Complex operator()(const Element& t) const;
  Complex base_at(const Element& t) const;
  /// Base value at a residue multi-index (coordinates are reduced first).
  Complex base_at_coords(std::span<const std::int64_t> coords) const;

  bool is_zero() const noexcept;
  /// Same base, no exceptions.
  Diagonal base() const;

  /// Structural equality within `tol` on table entries and exception values.
  bool approx_equal(const Diagonal& other, double tol) const;

  friend bool operator==(const Diagonal&, const Diagonal&) = default;

  friend Diagonal operator+(const Diagonal& a, const Diagonal& b);
  friend Diagonal operator*(const Diagonal& a, const Diagonal& b);

 private:
  void normalize();
  std::size_t residue_index(std::span<const std::int64_t> coords) const;

  std::vector<std::int64_t> period_;
  std::vector<Complex> table_{Complex{}};
  std::map<Element, Complex> exceptions_;

  friend Diagonal scale(const Diagonal& d, Complex s);
  friend Diagonal conj(const Diagonal& d);
  friend Diagonal right_translate(const Diagonal& d, const Group& group, const Element& r);
  friend Diagonal left_translate(const Diagonal& d, const Group& group, const Element& g);
};

Diagonal scale(const Diagonal& d, Complex s);
Diagonal conj(const Diagonal& d);
/// t -> d(t r^{-1}).
Diagonal right_translate(const Diagonal& d, const Group& group, const Element& r);
/// t -> d(g^{-1} t).
Diagonal left_translate(const Diagonal& d, const Group& group, const Element& g);

const char* rule_name(Diagonal::Rule rule);

}  // namespace finsec
