#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "scnlse/classical.hpp"
#include "scnlse/families.hpp"
#include "scnlse/field.hpp"
#include "scnlse/moments.hpp"

namespace scnlse {

/// Real polynomial sum_k c_k s^k with derivative and antiderivative from 0.
struct Polynomial {
  std::vector<double> coeffs;

  double operator()(double s) const;
  double derivative(double s) const;
  double integral(double s) const;
  bool empty() const noexcept { return coeffs.empty(); }
};

/// Uniform grid bounds; 2D grids use the same bounds on both axes.
struct GridSpec {
  int dim = 1;
  double lo = -20.0;
  double hi = 20.0;
  std::size_t n = 1024;
};
Grid make_grid(const GridSpec& spec);

/// Scalar potential description shared by configs and experiments.
/// `type` is "zero", "harmonic" (omega, center) or "separated"
/// (v0 polynomial in t, v1 polynomial in x).
struct PotentialConfig {
  std::string type = "zero";
  double omega = 1.0;
  double center = 0.0;
  Polynomial v0;
  Polynomial v1;
};
PotentialSpec build_potential(const PotentialConfig& pc, double mass);
SeparatedTerms separated_terms(const PotentialConfig& pc);

struct PhysScalars {
  double hbar = 1.0;
  double mass = 1.0;
  double kappa_squared = 0.5;
  PhysParams params() const { return PhysParams::with_kappa_squared(hbar, mass, kappa_squared); }
};

// ---------------------------------------------------------------------------
// Exact-soliton propagation and dt convergence

struct PropagationSetup {
  GridSpec grid{1, -20.0, 20.0, 1024};
  PhysScalars phys{1.0, 1.0, 0.5};
  SolitonParams soliton{0.25, 0.5, -5.0, 0.0, AnalyticFunction::zero()};
  double dt = 1e-3;
  double t_end = 10.0;
  std::size_t snapshot_every = 1000;
  bool keep_snapshots = false;
};

struct CentroidSample {
  double t, mean_x, mean_p, classical_x, classical_p;
};

struct PropagationResult {
  double l2_error = 0.0;
  double mass_drift = 0.0;
  double max_step_change = 0.0;
  double velocity = 0.0;
  std::vector<CentroidSample> centroid;
  ComplexField final_field;
  ComplexField exact_field;
  std::vector<ComplexField> snapshots;
};

PropagationResult run_propagation(const PropagationSetup& setup);

struct DtConvergenceResult {
  std::vector<double> dts;
  std::vector<double> exact_errors;      // relative L2 error at t_end against the closed form
  std::vector<double> reference_errors;  // relative L2 distance to a dt/8 run
  double exact_ratio = 0.0;
  double reference_ratio = 0.0;
};

/// Runs the propagation at dt, dt/2 and a dt/8 reference. The reference
/// comparison cancels errors shared by every run, such as the periodic
/// wrap-around of the sech tails, and isolates the splitting error.
DtConvergenceResult run_dt_halving(const PropagationSetup& setup);

// ---------------------------------------------------------------------------
// Centroid against the classical orbit in a harmonic trap

struct EhrenfestSetup {
  GridSpec grid{1, -10.0, 10.0, 4096};
  PhysScalars phys{0.05, 1.0, 0.5};
  double omega = 1.0;
  SolitonParams soliton{0.25, 0.5, 2.0, 0.0, AnalyticFunction::zero()};
  std::vector<double> r_values{0.5, 0.0, 1.0};
  double dt = 1e-3;
  double t_end = 6.283185307179586;
  std::size_t sample_every = 10;
  double classical_dt = 1e-3;
};

struct EhrenfestRun {
  double r = 0.0;
  double max_dx = 0.0;
  double max_dp = 0.0;
  double max_position_law = 0.0;  // max |d<x>/dt - <p>/m|
  double max_momentum_law = 0.0;  // max |d<p>/dt + m omega^2 <x>|
  double mass_drift = 0.0;
  std::vector<CentroidSample> centroid;
};

struct EhrenfestResult {
  Trajectory classical;
  std::vector<EhrenfestRun> runs;
};

EhrenfestResult run_ehrenfest(const EhrenfestSetup& setup);

// ---------------------------------------------------------------------------
// Residual scaling in hbar for the first separated class

struct ResidualScalingSetup {
  GridSpec grid{1, -8.0, 8.0, 4096};
  double mass = 1.0;
  double kappa_squared = 0.5;
  std::vector<double> hbars{0.2, 0.1, 0.05, 0.025};
  SeparatedClass1Params family;
  PotentialConfig potential;
  double t = 0.0;
};

struct ResidualScalingResult {
  std::vector<double> hbars;
  std::vector<double> leading;
  std::vector<double> corrected;
  ScalingReport leading_fit;
  ScalingReport corrected_fit;
};

/// Default setup: v0 = 0, v1 = 0.1 x^2, c1 = 0.5.
ResidualScalingSetup default_residual_scaling();
ResidualScalingResult run_residual_scaling(const ResidualScalingSetup& setup);

// ---------------------------------------------------------------------------
// Concentration of the soliton family

struct ConcentrationSetup {
  GridSpec grid{1, -20.0, 20.0, 8192};
  double mass = 1.0;
  double kappa_squared = 0.5;
  SolitonParams soliton{0.0, 0.5, 0.0, 0.0, AnalyticFunction::zero()};
  std::vector<double> hbars{0.4, 0.2, 0.1, 0.05};
  double reference_hbar = 1.0;
};

struct ConcentrationResult {
  ScalingReport scaling;
  std::vector<MomentRecord> records;
  double reference_variance = 0.0;
  double reference_oracle = 0.0;  // (pi^2/12) (hbar / 2 eta)^2
  double ball_fraction = 0.0;     // at the smallest hbar, radius sqrt(hbar)
  bool uncertainty_ok = true;
};

ConcentrationResult run_concentration(const ConcentrationSetup& setup);

// ---------------------------------------------------------------------------
// Algebraic identities across the four families

struct IdentitySetup {
  double hbar = 0.1;
  double mass = 1.0;
  double kappa_squared = 0.5;
  double t = 0.3;
  std::uint64_t seed = 20240601;
  std::size_t samples = 100;
  SolitonParams soliton{0.25, 0.5, 0.0, 0.0, AnalyticFunction::polynomial({{0.0, 0.0}, {0.1, 0.05}, {0.01, 0.0}})};
  SeparatedClass1Params class1;
  SeparatedClass2Params class2;
  CylindricalParams cylindrical{1.0, 0.0, 0.0, 0.0, 0.2, 0.0, 0.1};
  PotentialConfig potential;  // v1 shared by both separated classes
};

struct IdentityCheck {
  std::string family;
  std::string metric;
  double value;
  double tolerance;
};

/// Default setup: v1 = 0.1 x^2 for the separated classes.
IdentitySetup default_identity_setup();
std::vector<IdentityCheck> run_identity_suite(const IdentitySetup& setup);

// ---------------------------------------------------------------------------
// Cylindrical special solution

struct CylindricalSetup {
  CylindricalParams params{1.0, 0.0, 0.0, 0.0, 0.2, 0.0, 0.1};
  double mass = 1.0;
  double kappa_squared = 0.5;
  std::vector<double> hbars{0.2, 0.1, 0.05};
  std::size_t n = 256;
  double half_width_per_hbar = 40.0;  // domain half-width = factor * hbar
};

struct CylindricalResult {
  std::vector<double> hbars;
  std::vector<double> residuals;
  ScalingReport fit;
  bool monotone = false;
  double symmetry_error = 0.0;  // max over hbar of mirror and swap asymmetry of |psi|
  ComplexField smallest;        // field at the smallest hbar
};

CylindricalResult run_cylindrical(const CylindricalSetup& setup);

}  // namespace scnlse
