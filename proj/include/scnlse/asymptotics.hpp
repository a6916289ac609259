#pragma once

#include <functional>

#include "scnlse/field.hpp"
#include "scnlse/params.hpp"
#include "scnlse/potential.hpp"
#include "scnlse/wkb_fields.hpp"

namespace scnlse {

/// Envelope amplitude b = sqrt((grad sigma)^2 / (2 m kappa^2)).
/// Throws "degenerate envelope" when (grad sigma)^2 vanishes.
double envelope_amplitude(const WkbFields& w, const Coord& x, double t, const PhysParams& params);

/// Fast variable theta = sigma/hbar + sigma1.
double fast_variable(const WkbFields& w, const Coord& x, double t, double hbar);

/// rho = b / cosh(theta).
double envelope_rho(const WkbFields& w, const Coord& x, double t, const PhysParams& params);

/// psi0 = rho exp(i S/hbar + i S1) sampled on the grid.
ComplexField assemble_leading_term(const WkbFields& w, const Grid& grid, double t, const PhysParams& params);

/// Analytic d/dt of assemble_leading_term.
ComplexField leading_term_time_derivative(const WkbFields& w, const Grid& grid, double t, const PhysParams& params);

/// 2 b Z / (1 + |Z|^2) with Z = exp{(i/hbar)[S + i sigma + hbar (S1 + i sigma1)]}.
/// Falls back to the sech form where |theta| > 300.
ComplexField psi_via_representation(const WkbFields& w, const Grid& grid, double t, const PhysParams& params);

/// R = (S + i sigma)_t + V + (1/2m) [grad(S + i sigma) - A]^2.
ComplexField hj_residual(const WkbFields& w, const Grid& grid, double t, const PotentialSpec& pot,
                         const PhysParams& params);

/// Left-hand sides of the two first-order transport equations for S1
/// (`phase`) and sigma1 (`envelope`).
struct TransportResiduals {
  RealField phase;
  RealField envelope;
};

/// General-dimension transport residuals, built from Hessians of sigma:
///   grad log (grad sigma)^2 = 2 H_sigma grad sigma / (grad sigma)^2.
/// Throws where (grad sigma)^2 = 0.
TransportResiduals transport_residuals(const WkbFields& w, const Grid& grid, double t, const PotentialSpec& pot,
                                       const PhysParams& params);

/// The same two equations written out for one space dimension with A = 0:
///   S1_t + S_x S1_x/m - sigma_x sigma1_x/m + 3 sigma_xx/2m,
///   sigma1_t + S_x sigma1_x/m + sigma_x S1_x/m
///     - (1/2)[S_xx/m + 2 sigma_xt/sigma_x + (2/m)(S_x/sigma_x) sigma_xx].
/// Evaluated independently of transport_residuals.
TransportResiduals transport_residuals_1d(const WkbFields& w, const Grid& grid, double t, const PhysParams& params);

/// Residual of rho_theta + sign(theta) sqrt(2 m kappa^2/(grad sigma)^2) sqrt(b^2 - rho^2) rho
/// for rho = envelope_scale * b sech(theta). Throws when |rho| > b.
RealField first_integral_residual(const WkbFields& w, const Grid& grid, double t, const PhysParams& params,
                                  double envelope_scale = 1.0);

/// Free data of the first correction. An empty C1 means C1 = 0.
struct CorrectionParams {
  std::function<double(const Coord&, double)> C1;
};

/// epsilon = sign(sigma), taking +1 on sigma = 0.
inline double correction_sign(double sigma) noexcept { return sigma < 0.0 ? -1.0 : 1.0; }

/// First correction psi = psi0 (1 + hbar (u + i v)). `rho_u` and `rho_v` are
/// the products rho u and rho v, which stay bounded where rho underflows;
/// u and v are set to 0 where rho < 1e-300.
struct FirstCorrection {
  RealField u;
  RealField v;
  RealField rho_u;
  RealField rho_v;
};

FirstCorrection first_correction_uv(const WkbFields& w, const CorrectionParams& cp, const Grid& grid, double t,
                                    const PotentialSpec& pot, const PhysParams& params);

/// (rho + hbar (rho u + i rho v)) exp(i S/hbar + i S1).
ComplexField corrected_field(const WkbFields& w, const CorrectionParams& cp, const Grid& grid, double t,
                             const PotentialSpec& pot, const PhysParams& params);

/// d/dt of corrected_field: analytic in theta, with the slowly varying
/// coefficients differenced in t at fixed theta.
ComplexField corrected_field_time_derivative(const WkbFields& w, const CorrectionParams& cp, const Grid& grid,
                                             double t, const PotentialSpec& pot, const PhysParams& params);

/// (L Z)/Z for the linear operator L = -i hbar d/dt + V + (1/2m)(-i hbar grad - A)^2
/// applied to Z = exp{i (S + i sigma)/hbar + i (S1 + i sigma1)}. Dividing out Z
/// keeps the value finite where Z itself overflows.
ComplexField linear_equation_residual(const WkbFields& w, const Grid& grid, double t, const PotentialSpec& pot,
                                      const PhysParams& params);

}  // namespace scnlse
