#include "scnlse/potential.hpp"

#include <algorithm>
#include <cmath>

#include "scnlse/error.hpp"

namespace scnlse {

namespace {

double fd_step(double x) { return 1e-6 * std::max(1.0, std::abs(x)); }

template <class F>
Coord central_gradient(F&& f, const Coord& x) {
  Coord g{0.0, 0.0};
  for (int i = 0; i < 2; ++i) {
    const double h = fd_step(x[i]);
    Coord xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    g[i] = (f(xp) - f(xm)) / (2.0 * h);
  }
  return g;
}

// Periodic multilinear interpolation of one time slice.
double interpolate_slice(const Grid& g, const std::vector<double>& s, const Coord& x) {
  auto locate = [&](int axis, std::size_t& j0, std::size_t& j1, double& w) {
    const double u = (x[axis] - g.lo(axis)) / g.spacing(axis);
    const double fl = std::floor(u);
    w = u - fl;
    const auto n = static_cast<long long>(g.n(axis));
    long long j = static_cast<long long>(fl) % n;
    if (j < 0) j += n;
    j0 = std::size_t(j);
    j1 = std::size_t((j + 1) % n);
  };
  std::size_t a0, a1;
  double wa;
  locate(0, a0, a1, wa);
  if (g.dim() == 1) return (1 - wa) * s[a0] + wa * s[a1];
  std::size_t b0, b1;
  double wb;
  locate(1, b0, b1, wb);
  const std::size_t n1 = g.n(1);
  return (1 - wa) * ((1 - wb) * s[a0 * n1 + b0] + wb * s[a0 * n1 + b1]) +
         wa * ((1 - wb) * s[a1 * n1 + b0] + wb * s[a1 * n1 + b1]);
}

// Returns (index, weight) bracketing t; throws outside the table.
std::pair<std::size_t, double> locate_time(const TabulatedPotential& tab, double t) {
  const auto& ts = tab.times;
  if (ts.empty()) throw Error("tabulated potential has no time samples");
  if (t < ts.front() || t > ts.back())
    throw Error("tabulated potential queried at t=" + std::to_string(t) + " outside [" +
                std::to_string(ts.front()) + ", " + std::to_string(ts.back()) + "]");
  if (ts.size() == 1) return {0, 0.0};
  auto it = std::upper_bound(ts.begin(), ts.end(), t);
  std::size_t i = it == ts.end() ? ts.size() - 2 : std::size_t(it - ts.begin()) - 1;
  i = std::min(i, ts.size() - 2);
  return {i, (t - ts[i]) / (ts[i + 1] - ts[i])};
}

}  // namespace

PotentialSpec PotentialSpec::harmonic(Coord omega, Coord center, double mass) {
  PotentialSpec s;
  s.scalar = HarmonicPotential{omega, center, mass};
  return s;
}

PotentialSpec PotentialSpec::separated(std::function<double(double)> v0, std::function<double(const Coord&)> v1,
                                       std::function<Coord(const Coord&)> v1_gradient) {
  PotentialSpec s;
  s.scalar = SeparatedPotential{std::move(v0), std::move(v1), std::move(v1_gradient)};
  return s;
}

double PotentialSpec::V(const Coord& x, double t) const {
  return std::visit(
      [&](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ZeroPotential>) {
          return 0.0;
        } else if constexpr (std::is_same_v<T, HarmonicPotential>) {
          double v = 0.0;
          for (int i = 0; i < 2; ++i) {
            const double d = x[i] - p.center[i];
            v += p.omega[i] * p.omega[i] * d * d;
          }
          return 0.5 * p.mass * v;
        } else if constexpr (std::is_same_v<T, SeparatedPotential>) {
          return (p.v0 ? p.v0(t) : 0.0) + (p.v1 ? p.v1(x) : 0.0);
        } else if constexpr (std::is_same_v<T, TabulatedPotential>) {
          auto [i, w] = locate_time(p, t);
          const double a = interpolate_slice(p.grid, p.samples[i], x);
          if (w == 0.0) return a;
          return (1 - w) * a + w * interpolate_slice(p.grid, p.samples[i + 1], x);
        } else {
          return p.value(x, t);
        }
      },
      scalar);
}

Coord PotentialSpec::grad_V(const Coord& x, double t) const {
  return std::visit(
      [&](const auto& p) -> Coord {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ZeroPotential>) {
          return {0.0, 0.0};
        } else if constexpr (std::is_same_v<T, HarmonicPotential>) {
          return {p.mass * p.omega[0] * p.omega[0] * (x[0] - p.center[0]),
                  p.mass * p.omega[1] * p.omega[1] * (x[1] - p.center[1])};
        } else if constexpr (std::is_same_v<T, SeparatedPotential>) {
          if (!p.v1) return {0.0, 0.0};
          if (p.v1_gradient) return p.v1_gradient(x);
          return central_gradient(p.v1, x);
        } else if constexpr (std::is_same_v<T, TabulatedPotential>) {
          throw Error(
              "tabulated potentials are not differentiable; use a built-in or expression potential for "
              "classical dynamics");
        } else {
          if (p.gradient) return p.gradient(x, t);
          return central_gradient([&](const Coord& y) { return p.value(y, t); }, x);
        }
      },
      scalar);
}

Coord PotentialSpec::A(const Coord& x, double t) const {
  return std::visit(
      [&](const auto& p) -> Coord {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ZeroVectorPotential>) {
          return {0.0, 0.0};
        } else if constexpr (std::is_same_v<T, UniformVectorPotential>) {
          return p.value(t);
        } else {
          return p.value(x, t);
        }
      },
      vector);
}

Hessian PotentialSpec::jacobian_A(const Coord& x, double t) const {
  if (const auto* e = std::get_if<ExpressionVectorPotential>(&vector)) {
    if (e->jacobian) return e->jacobian(x, t);
    Hessian J{};
    for (int i = 0; i < 2; ++i) {
      const double h = fd_step(x[i]);
      Coord xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      const Coord ap = e->value(xp, t), am = e->value(xm, t);
      for (int j = 0; j < 2; ++j) J[j][i] = (ap[j] - am[j]) / (2.0 * h);
    }
    return J;
  }
  return Hessian{};
}

double PotentialSpec::div_A(const Coord& x, double t, int dim) const {
  if (!std::holds_alternative<ExpressionVectorPotential>(vector)) return 0.0;
  const Hessian J = jacobian_A(x, t);
  double d = 0.0;
  for (int i = 0; i < dim; ++i) d += J[i][i];
  return d;
}

bool PotentialSpec::vector_is_spatially_uniform() const noexcept {
  return !std::holds_alternative<ExpressionVectorPotential>(vector);
}

bool PotentialSpec::is_time_independent() const noexcept {
  const bool scalar_static = std::holds_alternative<ZeroPotential>(scalar) ||
                             std::holds_alternative<HarmonicPotential>(scalar) ||
                             (std::holds_alternative<SeparatedPotential>(scalar) &&
                              !std::get<SeparatedPotential>(scalar).v0);
  return scalar_static && std::holds_alternative<ZeroVectorPotential>(vector);
}

PotentialSamples eval_potential(const PotentialSpec& spec, const Grid& grid, double t) {
  PotentialSamples out;
  const std::size_t n = grid.size();
  out.V.resize(n);
  for (int a = 0; a < grid.dim(); ++a) out.A[a].resize(n);

  if (const auto* tab = std::get_if<TabulatedPotential>(&spec.scalar); tab && tab->grid == grid) {
    auto [i, w] = locate_time(*tab, t);
    for (std::size_t j = 0; j < n; ++j)
      out.V[j] = w == 0.0 ? tab->samples[i][j] : (1 - w) * tab->samples[i][j] + w * tab->samples[i + 1][j];
  } else {
    for (std::size_t j = 0; j < n; ++j) out.V[j] = spec.V(grid.point(j), t);
  }
  if (!std::holds_alternative<ZeroVectorPotential>(spec.vector)) {
    for (std::size_t j = 0; j < n; ++j) {
      const Coord a = spec.A(grid.point(j), t);
      for (int ax = 0; ax < grid.dim(); ++ax) out.A[ax][j] = a[ax];
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (!std::isfinite(out.V[j])) throw Error("potential evaluated to a non-finite value");
  }
  return out;
}

}  // namespace scnlse
