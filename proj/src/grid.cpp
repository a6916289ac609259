#include "scnlse/grid.hpp"

#include <cmath>
#include <string>

#include "scnlse/error.hpp"

namespace scnlse {

namespace {
constexpr std::size_t kMinPoints = 16;

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }
}  // namespace

double Grid::cell_volume() const noexcept {
  double v = spacing(0);
  if (dim_ == 2) v *= spacing(1);
  return v;
}

Coord Grid::point(std::size_t flat) const noexcept {
  if (dim_ == 1) return {coordinate(0, flat), 0.0};
  return {coordinate(0, flat / n_[1]), coordinate(1, flat % n_[1])};
}

Grid make_uniform_grid(int dim, const Coord& lo, const Coord& hi, std::size_t n) {
  if (dim != 1 && dim != 2) throw Error("grid dimension must be 1 or 2, got " + std::to_string(dim));
  if (n < kMinPoints) throw Error("grid needs at least 16 points per axis, got " + std::to_string(n));
  if (!is_power_of_two(n)) throw Error("grid size must be a power of two, got " + std::to_string(n));
  Grid g;
  g.dim_ = dim;
  for (int a = 0; a < dim; ++a) {
    if (!std::isfinite(lo[a]) || !std::isfinite(hi[a]) || !(hi[a] > lo[a]))
      throw Error("grid bounds must satisfy lo < hi on axis " + std::to_string(a));
    g.lo_[a] = lo[a];
    g.hi_[a] = hi[a];
    g.n_[a] = n;
  }
  return g;
}

Grid make_uniform_grid(int dim, double lo, double hi, std::size_t n) {
  return make_uniform_grid(dim, Coord{lo, lo}, Coord{hi, hi}, n);
}

Grid make_axis_offset_grid(double half_width, std::size_t n) {
  if (!(half_width > 0)) throw Error("axis-offset grid needs a positive half-width");
  const double shift = half_width / double(n);  // half of one cell of width 2L/n
  return make_uniform_grid(2, -half_width + shift, half_width + shift, n);
}

}  // namespace scnlse
