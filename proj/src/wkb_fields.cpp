#include "scnlse/wkb_fields.hpp"

#include <algorithm>
#include <cmath>

namespace scnlse {

double dot(const Coord& a, const Coord& b, int dim) {
  double s = 0.0;
  for (int i = 0; i < dim; ++i) s += a[i] * b[i];
  return s;
}

double stable_sech(double theta) noexcept {
  const double e = std::exp(-std::abs(theta));
  return 2.0 * e / (1.0 + e * e);
}

namespace {
double step(double scale, double x, double rel) { return rel * std::max(scale, std::abs(x)); }
}  // namespace

Coord ScalarField::gradient(const Coord& x, double t) const {
  if (grad) return grad(x, t);
  Coord g{0.0, 0.0};
  for (int i = 0; i < dim; ++i) {
    const double h = step(scale, x[i], 1e-6);
    Coord xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    g[i] = (value(xp, t) - value(xm, t)) / (2.0 * h);
  }
  return g;
}

Hessian ScalarField::hessian(const Coord& x, double t) const {
  if (hess) return hess(x, t);
  Hessian H{};
  if (grad) {
    for (int i = 0; i < dim; ++i) {
      const double h = step(scale, x[i], 1e-6);
      Coord xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      const Coord gp = grad(xp, t), gm = grad(xm, t);
      for (int j = 0; j < dim; ++j) H[j][i] = (gp[j] - gm[j]) / (2.0 * h);
    }
    for (int i = 0; i < dim; ++i)
      for (int j = i + 1; j < dim; ++j) H[i][j] = H[j][i] = 0.5 * (H[i][j] + H[j][i]);
    return H;
  }
  const double f0 = value(x, t);
  for (int i = 0; i < dim; ++i) {
    const double h = step(scale, x[i], 1e-4);
    Coord xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    H[i][i] = (value(xp, t) - 2.0 * f0 + value(xm, t)) / (h * h);
  }
  if (dim == 2) {
    const double h0 = step(scale, x[0], 1e-4), h1 = step(scale, x[1], 1e-4);
    auto at = [&](double s0, double s1) { return value(Coord{x[0] + s0 * h0, x[1] + s1 * h1}, t); };
    H[0][1] = H[1][0] = (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) / (4.0 * h0 * h1);
  }
  return H;
}

double ScalarField::laplacian(const Coord& x, double t) const {
  const Hessian H = hessian(x, t);
  return dim == 1 ? H[0][0] : H[0][0] + H[1][1];
}

double ScalarField::time_derivative(const Coord& x, double t) const {
  if (dt) return dt(x, t);
  const double h = 1e-6 * std::max(1.0, std::abs(t));
  return (value(x, t + h) - value(x, t - h)) / (2.0 * h);
}

Coord ScalarField::gradient_time_derivative(const Coord& x, double t) const {
  if (grad_dt) return grad_dt(x, t);
  if (dt) {
    Coord g{0.0, 0.0};
    for (int i = 0; i < dim; ++i) {
      const double h = step(scale, x[i], 1e-6);
      Coord xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      g[i] = (dt(xp, t) - dt(xm, t)) / (2.0 * h);
    }
    return g;
  }
  const double h = 1e-5 * std::max(1.0, std::abs(t));
  const Coord gp = gradient(x, t + h), gm = gradient(x, t - h);
  return {(gp[0] - gm[0]) / (2.0 * h), (gp[1] - gm[1]) / (2.0 * h)};
}

ScalarField ScalarField::constant(int dim, double c) {
  ScalarField f;
  f.dim = dim;
  f.value = [c](const Coord&, double) { return c; };
  f.grad = [](const Coord&, double) { return Coord{0.0, 0.0}; };
  f.hess = [](const Coord&, double) { return Hessian{}; };
  f.dt = [](const Coord&, double) { return 0.0; };
  f.grad_dt = [](const Coord&, double) { return Coord{0.0, 0.0}; };
  return f;
}

}  // namespace scnlse
