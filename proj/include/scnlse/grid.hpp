#pragma once

#include <array>
#include <cstddef>

namespace scnlse {

/// Spatial point or vector; components beyond the grid dimension are zero.
using Coord = std::array<double, 2>;
/// Symmetric 2x2 (or leading 1x1) matrix of second derivatives.
using Hessian = std::array<std::array<double, 2>, 2>;

/// Uniform periodic grid in one or two dimensions.
///
/// Index j on an axis maps to lo + j * spacing; the point hi is the periodic
/// image of lo and never appears as a sample. Storage order for 2D data is
/// row-major with axis 1 (y) fastest.
class Grid {
 public:
  int dim() const noexcept { return dim_; }
  std::size_t n(int axis) const noexcept { return n_[axis]; }
  double lo(int axis) const noexcept { return lo_[axis]; }
  double hi(int axis) const noexcept { return hi_[axis]; }
  double spacing(int axis) const noexcept { return (hi_[axis] - lo_[axis]) / double(n_[axis]); }
  double length(int axis) const noexcept { return hi_[axis] - lo_[axis]; }

  /// Total number of samples.
  std::size_t size() const noexcept { return dim_ == 1 ? n_[0] : n_[0] * n_[1]; }
  /// Product of spacings (quadrature weight).
  double cell_volume() const noexcept;

  double coordinate(int axis, std::size_t j) const noexcept {
    return lo_[axis] + double(j) * spacing(axis);
  }
  /// Coordinates of the flat sample index.
  Coord point(std::size_t flat) const noexcept;

  bool operator==(const Grid& other) const noexcept = default;

 private:
  friend Grid make_uniform_grid(int, const Coord&, const Coord&, std::size_t);
  friend Grid make_uniform_grid(int, double, double, std::size_t);

  int dim_ = 1;
  Coord lo_{};
  Coord hi_{};
  std::array<std::size_t, 2> n_{1, 1};
};

/// Builds a periodic grid with n points per axis on [lo, hi).
/// Throws scnlse::Error for non-power-of-two n, n < 16, hi <= lo or dim
/// outside {1, 2}.
Grid make_uniform_grid(int dim, const Coord& lo, const Coord& hi, std::size_t n);
/// Same bounds on every axis.
Grid make_uniform_grid(int dim, double lo, double hi, std::size_t n);

/// Square 2D grid of half-width L shifted by half a cell, so the origin lies
/// at a cell centre and no sample has r = 0. Samples are symmetric under
/// x -> -x and y -> -y.
Grid make_axis_offset_grid(double half_width, std::size_t n);

}  // namespace scnlse
