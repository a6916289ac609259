#pragma once

#include <complex>
#include <vector>

#include "scnlse/grid.hpp"

namespace scnlse {

using cplx = std::complex<double>;

/// Complex samples on a grid at a given time and hbar.
struct ComplexField {
  Grid grid;
  std::vector<cplx> values;
  double time = 0.0;
  double hbar = 1.0;

  ComplexField() = default;
  ComplexField(Grid g, double t, double h) : grid(g), values(g.size()), time(t), hbar(h) {}
  ComplexField(Grid g, std::vector<cplx> v, double t, double h);

  std::size_t size() const noexcept { return values.size(); }
  cplx& operator[](std::size_t i) noexcept { return values[i]; }
  const cplx& operator[](std::size_t i) const noexcept { return values[i]; }

  /// Throws scnlse::Error on NaN/Inf samples or a size mismatch with the grid.
  void check_finite() const;
};

/// Real samples on a grid.
struct RealField {
  Grid grid;
  std::vector<double> values;
};

/// Periodic Riemann sum of conj(a) * b times the cell volume.
/// Throws if the grids or times differ.
cplx inner_product(const ComplexField& a, const ComplexField& b);

/// <psi|psi>; throws for an all-zero field (not a state).
double norm_squared(const ComplexField& psi);

/// max_j |a_j - b_j| on identical grids.
double max_abs_diff(const ComplexField& a, const ComplexField& b);

/// ||a - b|| / ||b|| in the discrete L2 norm.
double relative_l2_error(const ComplexField& a, const ComplexField& reference);

}  // namespace scnlse
