#pragma once

#include <array>
#include <optional>
#include <vector>

#include "scnlse/classical.hpp"
#include "scnlse/field.hpp"

namespace scnlse {

/// Exponents per axis; components beyond the field dimension must be zero.
using MultiIndex = std::array<int, 2>;

/// First and second (Weyl-ordered, centred) moments of a state.
/// `delta2` is indexed by (x_0, .., x_{d-1}, p_0, .., p_{d-1}).
struct MomentRecord {
  double t = 0.0;
  double hbar = 1.0;
  int dim = 1;
  Coord mean_x{0.0, 0.0};
  Coord mean_p{0.0, 0.0};
  std::array<std::array<double, 4>, 4> delta2{};

  double var_x(int axis) const { return delta2[axis][axis]; }
  double var_p(int axis) const { return delta2[dim + axis][dim + axis]; }
  double cov_xp(int axis) const { return delta2[axis][dim + axis]; }
};

/// <x> = integral x |psi|^2 / ||psi||^2 per axis.
Coord mean_position(const ComplexField& psi);

/// Re <psi, -i hbar grad psi> / ||psi||^2 per axis. Throws when the
/// imaginary part exceeds 1e-8 relative to max(1, |<p>|).
Coord mean_momentum(const ComplexField& psi);

/// Weyl-symmetrized centred moment <(p - p(t))^alpha (x - x(t))^beta> for
/// |alpha| + |beta| <= 2. Centred on the field's own means unless `z` is given.
double centered_moment(const ComplexField& psi, const MultiIndex& alpha, const MultiIndex& beta,
                       const std::optional<PhasePoint>& z = std::nullopt);

MomentRecord moment_record(const ComplexField& psi, const std::optional<PhasePoint>& z = std::nullopt);

/// Var(x) Var(p) >= (hbar/2)^2 on every axis, up to `tol` relative.
bool satisfies_uncertainty(const MomentRecord& rec, double tol = 1e-8);

/// Least-squares fit log(value) = slope log(hbar) + intercept.
struct ScalingReport {
  std::vector<double> hbars;
  std::vector<double> values;
  double slope = 0.0;
  double intercept = 0.0;
  /// Filled by concentration_scaling: sqrt(Var p) per hbar and its slope.
  std::vector<double> momentum_values;
  double momentum_slope = 0.0;
};

/// Throws for fewer than 3 points, non-positive data or no spread in hbar.
ScalingReport fit_power_law(const std::vector<double>& hbars, const std::vector<double>& values);

/// Fits log sqrt(Var x) (axis 0) against log hbar over fields ordered by
/// decreasing hbar; also reports the momentum-width slope.
ScalingReport concentration_scaling(const std::vector<ComplexField>& fields,
                                    const std::optional<PhasePoint>& z = std::nullopt);

/// Fraction of ||psi||^2 within `radius` of `center`.
double mass_in_ball(const ComplexField& psi, const Coord& center, double radius);

}  // namespace scnlse
