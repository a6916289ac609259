#include "scnlse/classical.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "scnlse/error.hpp"

namespace scnlse {

double classical_hamiltonian(const PhasePoint& z, const PotentialSpec& pot, const PhysParams& params) {
  const Coord a = pot.A(z.x, z.t);
  double kin = 0.0;
  for (int i = 0; i < z.dim; ++i) {
    const double d = z.p[i] - a[i];
    kin += d * d;
  }
  return kin / (2.0 * params.mass) + pot.V(z.x, z.t);
}

PhaseVelocity hamilton_rhs(const PhasePoint& z, const PotentialSpec& pot, double mass) {
  const Coord a = pot.A(z.x, z.t);
  const Coord gv = pot.grad_V(z.x, z.t);
  PhaseVelocity v;
  Coord kinetic{0.0, 0.0};
  for (int i = 0; i < z.dim; ++i) {
    kinetic[i] = (z.p[i] - a[i]) / mass;
    v.dx[i] = kinetic[i];
  }
  const bool spatial_a = std::holds_alternative<ExpressionVectorPotential>(pot.vector);
  const Hessian J = spatial_a ? pot.jacobian_A(z.x, z.t) : Hessian{};
  for (int i = 0; i < z.dim; ++i) {
    double force = -gv[i];
    for (int j = 0; j < z.dim; ++j) force += J[j][i] * kinetic[j];
    v.dp[i] = force;
  }
  return v;
}

namespace {

PhasePoint advance(const PhasePoint& z, const PhaseVelocity& v, double h) {
  PhasePoint out = z;
  for (int i = 0; i < z.dim; ++i) {
    out.x[i] += h * v.dx[i];
    out.p[i] += h * v.dp[i];
  }
  out.t += h;
  return out;
}

PhasePoint rk4_step(const PhasePoint& z, double h, const PotentialSpec& pot, double mass) {
  const PhaseVelocity k1 = hamilton_rhs(z, pot, mass);
  const PhaseVelocity k2 = hamilton_rhs(advance(z, k1, 0.5 * h), pot, mass);
  const PhaseVelocity k3 = hamilton_rhs(advance(z, k2, 0.5 * h), pot, mass);
  const PhaseVelocity k4 = hamilton_rhs(advance(z, k3, h), pot, mass);
  PhasePoint out = z;
  for (int i = 0; i < z.dim; ++i) {
    out.x[i] += h / 6.0 * (k1.dx[i] + 2.0 * k2.dx[i] + 2.0 * k3.dx[i] + k4.dx[i]);
    out.p[i] += h / 6.0 * (k1.dp[i] + 2.0 * k2.dp[i] + 2.0 * k3.dp[i] + k4.dp[i]);
  }
  out.t = z.t + h;
  return out;
}

bool finite(const PhasePoint& z) {
  for (int i = 0; i < z.dim; ++i)
    if (!std::isfinite(z.x[i]) || !std::isfinite(z.p[i])) return false;
  return std::isfinite(z.t);
}

}  // namespace

Trajectory integrate_bicharacteristic(const PhasePoint& z0, double t1, double dt, const PotentialSpec& pot,
                                      const PhysParams& params) {
  if (!(dt > 0)) throw Error("integrate_bicharacteristic: dt must be positive");
  if (!(t1 > z0.t)) throw Error("integrate_bicharacteristic: t1 must exceed the start time");
  if (z0.dim != 1 && z0.dim != 2) throw Error("integrate_bicharacteristic: dim must be 1 or 2");
  if (!finite(z0)) throw Error("integrate_bicharacteristic: non-finite initial state");

  // Step count chosen so the uniform step lands on t1; dt is the nominal step.
  const double n = std::ceil((t1 - z0.t) / dt - 1e-9);
  if (!(n <= 1e9)) throw Error("integrate_bicharacteristic: more than 1e9 steps requested");
  const auto steps = static_cast<std::size_t>(n);
  const double h = (t1 - z0.t) / double(steps);
  Trajectory traj;
  traj.dt = h;
  traj.points.reserve(steps + 1);
  traj.points.push_back(z0);
  PhasePoint z = z0;
  for (std::size_t s = 0; s < steps; ++s) {
    z = rk4_step(z, h, pot, params.mass);
    z.t = z0.t + double(s + 1) * h;
    if (!finite(z)) throw Error("integrate_bicharacteristic: non-finite state at step " + std::to_string(s + 1));
    traj.points.push_back(z);
  }
  return traj;
}

PhasePoint sample_trajectory(const Trajectory& traj, double t) {
  if (traj.points.empty()) throw Error("sample_trajectory: empty trajectory");
  const auto& pts = traj.points;
  if (t <= pts.front().t) return pts.front();
  if (t >= pts.back().t) return pts.back();
  const double u = (t - pts.front().t) / traj.dt;
  std::size_t i = std::min(static_cast<std::size_t>(u), pts.size() - 2);
  const double w = (t - pts[i].t) / (pts[i + 1].t - pts[i].t);
  PhasePoint z = pts[i];
  for (int k = 0; k < z.dim; ++k) {
    z.x[k] = (1 - w) * pts[i].x[k] + w * pts[i + 1].x[k];
    z.p[k] = (1 - w) * pts[i].p[k] + w * pts[i + 1].p[k];
  }
  z.t = t;
  return z;
}

}  // namespace scnlse
