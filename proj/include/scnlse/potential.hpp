#pragma once

#include <functional>
#include <variant>
#include <vector>

#include "scnlse/grid.hpp"

namespace scnlse {

struct ZeroPotential {};

/// V = (1/2) m sum_i omega_i^2 (x_i - c_i)^2.
struct HarmonicPotential {
  Coord omega{1.0, 1.0};
  Coord center{0.0, 0.0};
  double mass = 1.0;
};

/// V = v0(t) + v1(x). `v1_gradient` may be left empty, in which case central
/// differences are used.
struct SeparatedPotential {
  std::function<double(double)> v0;
  std::function<double(const Coord&)> v1;
  std::function<Coord(const Coord&)> v1_gradient;
};

/// Samples on a grid at a sorted list of times; linear in time, multilinear
/// (periodic) in space between samples. Not differentiable.
struct TabulatedPotential {
  Grid grid;
  std::vector<double> times;
  std::vector<std::vector<double>> samples;  // one grid-sized vector per time
};

/// Closed-form V(x, t) with optional analytic gradient.
struct ExpressionPotential {
  std::function<double(const Coord&, double)> value;
  std::function<Coord(const Coord&, double)> gradient;
};

using ScalarPotential =
    std::variant<ZeroPotential, HarmonicPotential, SeparatedPotential, TabulatedPotential, ExpressionPotential>;

struct ZeroVectorPotential {};

/// A(t), constant in space.
struct UniformVectorPotential {
  std::function<Coord(double)> value;
};

/// A(x, t) with optional analytic Jacobian, jacobian[j][i] = dA_j/dx_i.
struct ExpressionVectorPotential {
  std::function<Coord(const Coord&, double)> value;
  std::function<Hessian(const Coord&, double)> jacobian;
};

using VectorPotential = std::variant<ZeroVectorPotential, UniformVectorPotential, ExpressionVectorPotential>;

/// Scalar and vector potential of the equation.
struct PotentialSpec {
  ScalarPotential scalar = ZeroPotential{};
  VectorPotential vector = ZeroVectorPotential{};

  static PotentialSpec zero() { return {}; }
  static PotentialSpec harmonic(Coord omega, Coord center = {0.0, 0.0}, double mass = 1.0);
  static PotentialSpec separated(std::function<double(double)> v0, std::function<double(const Coord&)> v1,
                                 std::function<Coord(const Coord&)> v1_gradient = {});

  double V(const Coord& x, double t) const;
  /// Throws scnlse::Error for tabulated potentials.
  Coord grad_V(const Coord& x, double t) const;
  Coord A(const Coord& x, double t) const;
  /// jacobian[j][i] = dA_j/dx_i.
  Hessian jacobian_A(const Coord& x, double t) const;
  double div_A(const Coord& x, double t, int dim) const;

  bool vector_is_spatially_uniform() const noexcept;
  bool is_time_independent() const noexcept;
};

/// Samples of V and each component of A on a grid.
struct PotentialSamples {
  std::vector<double> V;
  std::vector<double> A[2];
};

/// Throws scnlse::Error when a tabulated spec is queried outside its time range.
PotentialSamples eval_potential(const PotentialSpec& spec, const Grid& grid, double t);

}  // namespace scnlse
