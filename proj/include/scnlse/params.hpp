#pragma once

namespace scnlse {

/// Physical constants of the nonlinear Schrödinger equation
///   {-i hbar d/dt + (1/2m)(-i hbar grad - A)^2 + V - 2 r |psi|^2} psi = 0.
///
/// `kappa` fixes the solitary-wave amplitude scale (r = kappa^2 for the
/// self-consistent families); `r` is the nonlinearity actually used by the
/// propagator and residual, so it can be varied with the initial data held
/// fixed.
struct PhysParams {
  double hbar = 1.0;
  double mass = 1.0;
  double kappa = 1.0;
  double r = 1.0;

  /// r = kappa^2 exactly.
  static PhysParams with_kappa_squared(double hbar, double mass, double kappa_squared);

  double kappa_squared() const noexcept { return kappa * kappa; }

  /// Throws scnlse::Error unless hbar > 0, mass > 0, kappa > 0 and all are finite.
  void validate() const;
};

}  // namespace scnlse
