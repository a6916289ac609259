#include "scnlse/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "scnlse/error.hpp"

namespace scnlse {

namespace {

double simpson_recurse(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
                       double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol, int max_depth) {
  if (a == b) return 0.0;
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double v = simpson_recurse(f, a, b, fa, fm, fb, whole, tol, max_depth);
  if (!std::isfinite(v)) throw Error("adaptive_simpson: non-finite integral");
  return v;
}

CumulativeTable::CumulativeTable(std::function<double(double)> integrand, double lo, double hi, double anchor,
                                 std::size_t cells, double tol)
    : f_(std::move(integrand)), lo_(lo), hi_(hi) {
  if (!(hi > lo)) throw Error("CumulativeTable: empty range");
  if (cells < 2) throw Error("CumulativeTable: need at least two cells");
  h_ = (hi - lo) / double(cells);
  nodes_.resize(cells + 1);
  slopes_.resize(cells + 1);
  const double cell_tol = tol * h_ / (hi - lo);
  nodes_[0] = 0.0;
  slopes_[0] = f_(lo);
  for (std::size_t k = 0; k < cells; ++k) {
    const double a = lo + double(k) * h_, b = lo + double(k + 1) * h_;
    nodes_[k + 1] = nodes_[k] + adaptive_simpson(f_, a, b, cell_tol);
    slopes_[k + 1] = f_(b);
  }
  for (double s : slopes_)
    if (!std::isfinite(s)) throw Error("CumulativeTable: integrand is not finite on the range");
  // Shift so the table vanishes at the anchor.
  offset_ = 0.0;
  offset_ = (*this)(anchor);
}

double CumulativeTable::operator()(double x) const {
  const double margin = 0.01 * (hi_ - lo_);
  if (x < lo_ - margin || x > hi_ + margin)
    throw Error("CumulativeTable: x=" + std::to_string(x) + " outside tabulated range");
  const std::size_t cells = nodes_.size() - 1;
  const double u = (x - lo_) / h_;
  std::size_t k = u <= 0 ? 0 : std::min(static_cast<std::size_t>(u), cells - 1);
  const double t = (x - (lo_ + double(k) * h_)) / h_;
  const double t2 = t * t, t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
  return h00 * nodes_[k] + h10 * h_ * slopes_[k] + h01 * nodes_[k + 1] + h11 * h_ * slopes_[k + 1] - offset_;
}

}  // namespace scnlse
