#pragma once

#include <functional>
#include <string>

#include "scnlse/grid.hpp"

namespace scnlse {

/// Real scalar field f(x, t) with optional analytic derivative evaluators.
///
/// Missing spatial derivatives fall back to central differences with step
/// 1e-6 * scale (Hessians difference the gradient when it is analytic, and
/// use step 1e-4 * scale on values otherwise). Families built in this library
/// provide all time derivatives analytically; the finite-difference fallback
/// in t exists for user-assembled fields only.
struct ScalarField {
  using ValueFn = std::function<double(const Coord&, double)>;
  using VectorFn = std::function<Coord(const Coord&, double)>;
  using MatrixFn = std::function<Hessian(const Coord&, double)>;

  int dim = 1;
  double scale = 1.0;
  ValueFn value;
  VectorFn grad;
  MatrixFn hess;
  ValueFn dt;       // d/dt
  VectorFn grad_dt;  // grad of d/dt

  double operator()(const Coord& x, double t) const { return value(x, t); }
  Coord gradient(const Coord& x, double t) const;
  Hessian hessian(const Coord& x, double t) const;
  double laplacian(const Coord& x, double t) const;
  double time_derivative(const Coord& x, double t) const;
  Coord gradient_time_derivative(const Coord& x, double t) const;

  /// Field that is identically `c`.
  static ScalarField constant(int dim, double c);
};

/// The four real phase functions of the WKB solitary wave:
///   psi ~ rho(theta) exp(i S/hbar + i S1),  theta = sigma/hbar + sigma1.
struct WkbFields {
  int dim = 1;
  std::string family;
  ScalarField S;
  ScalarField sigma;
  ScalarField S1;
  ScalarField sigma1;
};

double dot(const Coord& a, const Coord& b, int dim);

/// sech computed without overflow for any finite argument.
double stable_sech(double theta) noexcept;

}  // namespace scnlse
