#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "scnlse/field.hpp"
#include "scnlse/params.hpp"
#include "scnlse/potential.hpp"
#include "scnlse/spectral.hpp"

namespace scnlse {

struct SolverConfig {
  double dt = 1e-3;
  double t_end = 1.0;
  std::size_t snapshot_every = 100;
  PhysParams params;
  PotentialSpec pot;
  /// When false, evolve() only reports snapshots to the observer.
  bool store_snapshots = true;
};

struct EvolutionRecord {
  std::vector<ComplexField> snapshots;
  std::vector<double> times;
  std::vector<double> norms;    // norm_squared at every snapshot
  double mass_drift = 0.0;      // max_k |N_k - N_0| / N_0 over every step
  double max_step_change = 0.0;  // max relative norm change in a single step
  std::size_t steps = 0;
  ComplexField final_state;
};

/// Strang split-step propagator for i hbar psi_t = H psi with
///   H = (1/2m)(-i hbar grad - A(t))^2 + V - 2 r |psi|^2.
/// Local half step, exact kinetic step in Fourier space, local half step;
/// V and A are sampled at the midpoint of each step. Only A = 0 or a
/// spatially uniform A(t) is supported.
class SplitStepPropagator {
 public:
  SplitStepPropagator(const Grid& grid, const SolverConfig& config);

  /// Advances psi in place from psi.time to psi.time + dt.
  void step(ComplexField& psi, double dt);

 private:
  void local_half_step(ComplexField& psi, double dt, const std::vector<double>& V) const;
  const std::vector<double>& potential_at(double t);

  SolverConfig config_;
  Spectral spectral_;
  std::vector<double> V_;
  bool V_cached_ = false;
};

/// One Strang step of size dt starting at psi.time.
ComplexField split_step(const ComplexField& psi, double dt, const SolverConfig& config);

/// Repeated split steps from psi0.time to config.t_end. The step is the
/// largest h <= config.dt that divides the interval evenly. Snapshots are
/// taken at the start, every `snapshot_every` steps and at the end; each is
/// also passed to `observer` when given. A non-finite sample aborts with the
/// step index.
EvolutionRecord evolve(const ComplexField& psi0, const SolverConfig& config,
                       const std::function<void(const ComplexField&)>& observer = {});

/// Full equation operator
///   {-i hbar d/dt + (1/2m)(-i hbar grad - A)^2 + V - 2 r |psi|^2} psi
/// with spatial derivatives taken spectrally and an analytic time derivative.
ComplexField apply_nlse_operator(const ComplexField& psi, const ComplexField& dpsi_dt, const PotentialSpec& pot,
                                 const PhysParams& params);

/// Same operator with the time derivative from a central difference of three
/// equally spaced snapshots; evaluated at `current`.
ComplexField apply_nlse_operator(const ComplexField& previous, const ComplexField& current, const ComplexField& next,
                                 const PotentialSpec& pot, const PhysParams& params);

/// ||residual|| / ||psi||.
double relative_residual(const ComplexField& residual, const ComplexField& psi);

}  // namespace scnlse
