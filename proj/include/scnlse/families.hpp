#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "scnlse/field.hpp"
#include "scnlse/params.hpp"
#include "scnlse/potential.hpp"
#include "scnlse/wkb_fields.hpp"

namespace scnlse {

/// Analytic function of one complex variable with its first two derivatives.
struct AnalyticFunction {
  std::function<cplx(cplx)> f;
  std::function<cplx(cplx)> df;
  std::function<cplx(cplx)> d2f;

  static AnalyticFunction zero();
  /// sum_k c_k z^k
  static AnalyticFunction polynomial(std::vector<cplx> coeffs);
  bool is_zero() const noexcept { return zero_; }

 private:
  bool zero_ = false;
};

/// One-soliton family: S = a1 t + a2 x + phi0, sigma = b1 t + b2 (x - x0),
/// S1 + i sigma1 = f(x - a t), with a2 = 2 xi, b2 = 2 eta.
struct SolitonParams {
  double xi = 0.0;
  double eta = 0.5;
  double x0 = 0.0;
  double phi0 = 0.0;
  AnalyticFunction f = AnalyticFunction::zero();

  double alpha2() const noexcept { return 2.0 * xi; }
  double beta2() const noexcept { return 2.0 * eta; }
  double alpha1(double mass) const noexcept { return (beta2() * beta2() - alpha2() * alpha2()) / (2.0 * mass); }
  double beta1(double mass) const noexcept { return -alpha2() * beta2() / mass; }
  cplx a(double mass) const noexcept { return cplx(alpha2(), beta2()) / mass; }
  void validate() const;
};

/// Closed interval used for tabulating quadrature-defined phases.
struct Interval {
  double lo = -1.0;
  double hi = 1.0;
};

/// Separated potential V = v0(t) + v1(x), 1D, as used by both separated classes.
struct SeparatedTerms {
  std::function<double(double)> v0;          // empty means 0
  std::function<double(double)> v0_integral;  // integral_0^t v0; empty -> quadrature
  std::function<double(double)> v1;          // empty means 0
  std::function<double(double)> v1_prime;    // empty -> central differences

  double V0(double t) const { return v0 ? v0(t) : 0.0; }
  double V1(double x) const { return v1 ? v1(x) : 0.0; }
  double V1_prime(double x) const;
  double V0_integral(double t) const;
  /// The matching PotentialSpec.
  PotentialSpec potential() const;
};

/// First separated class: S = c1 t - int v0, sigma = int sqrt(2m(c1 + v1)),
/// S1 = c2 t + c3, sigma1 = (3/2) log|sigma_x| + m c2 int 1/sigma_x + c4.
/// Quadratures are anchored at `anchor` (sigma(anchor) = 0 places the
/// wave's centre there).
struct SeparatedClass1Params {
  double c1 = 0.5, c2 = 0.0, c3 = 0.0, c4 = 0.0;
  SeparatedTerms terms;
  double anchor = 0.0;
  std::size_t cells = 8192;
};

/// Second separated class: S = c3 t - int v0 + p(x) + c4,
/// sigma = c1 [t - m int dx/p'] + c2, S1 = a1 t + a3 + f(x),
/// sigma1 = a2 t + a4 + g(x), with p', f', g' from their algebraic relations.
struct SeparatedClass2Params {
  double c1 = 1.0, c2 = 0.0, c3 = 0.0, c4 = 0.0;
  double a1 = 0.0, a2 = 0.0, a3 = 0.0, a4 = 0.0;
  SeparatedTerms terms;
  int p_sign = 1;
  double anchor = 0.0;
  std::size_t cells = 8192;
};

/// Radially symmetric solution in the plane.
struct CylindricalParams {
  double c1 = 1.0, c2 = 0.0, c3 = 0.0;
  double a1 = 0.0, a2 = 0.0, a3 = 0.0;
  double b1 = 0.0;
};

/// Closed-form one-soliton field, including its overall minus sign.
ComplexField one_soliton(const SolitonParams& sp, const Grid& grid, double t, const PhysParams& params);
/// Analytic time derivative of one_soliton.
ComplexField one_soliton_time_derivative(const SolitonParams& sp, const Grid& grid, double t,
                                         const PhysParams& params);

WkbFields soliton_correction_fields(const SolitonParams& sp, const PhysParams& params);
WkbFields separated_class1(const SeparatedClass1Params& p1, const Interval& domain, const PhysParams& params);
WkbFields separated_class2(const SeparatedClass2Params& p2, const Interval& domain, const PhysParams& params);
WkbFields cylindrical_fields(const CylindricalParams& cp, const PhysParams& params);

/// Closed-form cylindrical special solution on a 2D grid; throws if a sample
/// sits on the axis r = 0.
ComplexField cylindrical_special(const CylindricalParams& cp, const Grid& grid2d, double t, const PhysParams& params);

/// Class-2 helpers exposed for verification: p'(x), p''(x), f'(x), g'(x).
struct Class2Derivatives {
  double p1, p2, f1, g1;
};
Class2Derivatives class2_derivatives(const SeparatedClass2Params& p2, double x, double mass);

}  // namespace scnlse
