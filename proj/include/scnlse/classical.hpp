#pragma once

#include <vector>

#include "scnlse/grid.hpp"
#include "scnlse/params.hpp"
#include "scnlse/potential.hpp"

namespace scnlse {

/// Classical state (x, p) at time t; components beyond `dim` are zero.
struct PhasePoint {
  int dim = 1;
  Coord x{0.0, 0.0};
  Coord p{0.0, 0.0};
  double t = 0.0;
};

/// Uniformly stepped, time-ordered phase orbit.
struct Trajectory {
  std::vector<PhasePoint> points;
  double dt = 0.0;
};

struct PhaseVelocity {
  Coord dx{0.0, 0.0};
  Coord dp{0.0, 0.0};
};

/// H_cl = |p - A(x,t)|^2 / 2m + V(x,t).
double classical_hamiltonian(const PhasePoint& z, const PotentialSpec& pot, const PhysParams& params);

/// Canonical equations of H_cl:
///   dx_i/dt = (p_i - A_i)/m,
///   dp_i/dt = -dV/dx_i + sum_j (dA_j/dx_i)(p_j - A_j)/m.
/// Takes no nonlinearity: the centroid law is the same for every r.
PhaseVelocity hamilton_rhs(const PhasePoint& z, const PotentialSpec& pot, double mass);

/// Fixed-step classical RK4 from z0.t to t1. The step is the largest h <= dt
/// that divides [z0.t, t1] evenly, so the last point lands on t1. Throws if
/// the state becomes non-finite.
Trajectory integrate_bicharacteristic(const PhasePoint& z0, double t1, double dt, const PotentialSpec& pot,
                                      const PhysParams& params);

/// Linear interpolation of a trajectory at time t (clamped to its range).
PhasePoint sample_trajectory(const Trajectory& traj, double t);

}  // namespace scnlse
