#pragma once

#include <functional>
#include <vector>

namespace scnlse {

/// Adaptive Simpson quadrature of f on [a, b] to absolute tolerance `tol`.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int max_depth = 40);

/// Dense tabulation of F(x) = integral_{anchor}^{x} f(s) ds on [lo, hi].
///
/// Node values come from adaptive Simpson per cell; between nodes F is the
/// cubic Hermite interpolant using the exact integrand as slope. Queries up to
/// 1% of the range outside [lo, hi] extrapolate from the end cell; further
/// out they throw.
class CumulativeTable {
 public:
  CumulativeTable() = default;
  CumulativeTable(std::function<double(double)> integrand, double lo, double hi, double anchor,
                  std::size_t cells = 8192, double tol = 1e-10);

  double operator()(double x) const;
  /// The integrand itself (exact derivative of the tabulated function).
  double derivative(double x) const { return f_(x); }

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  bool empty() const noexcept { return nodes_.empty(); }

 private:
  std::function<double(double)> f_;
  double lo_ = 0.0, hi_ = 0.0, h_ = 0.0, offset_ = 0.0;
  std::vector<double> nodes_;   // G(x_k) = integral_{lo}^{x_k} f
  std::vector<double> slopes_;  // f(x_k)
};

}  // namespace scnlse
