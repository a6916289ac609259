#include <doctest.h>

#include <cmath>
#include <numbers>

#include "scnlse/classical.hpp"
#include "scnlse/error.hpp"

using namespace scnlse;

namespace {

PhasePoint point1d(double x, double p, double t = 0.0) { return PhasePoint{1, {x, 0.0}, {p, 0.0}, t}; }

PotentialSpec uniform_A(double a0) {
  PotentialSpec s;
  s.vector = UniformVectorPotential{[a0](double) { return Coord{a0, 0.0}; }};
  return s;
}

double energy_drift(double dt) {
  const PhysParams pp;
  const PotentialSpec pot = PotentialSpec::separated({}, [](const Coord& x) { return 0.25 * std::pow(x[0], 4); });
  const Trajectory tr = integrate_bicharacteristic(point1d(1.0, 0.5), 4.0, dt, pot, pp);
  const double h0 = classical_hamiltonian(tr.points.front(), pot, pp);
  double worst = 0.0;
  for (const auto& z : tr.points) worst = std::max(worst, std::abs(classical_hamiltonian(z, pot, pp) - h0));
  return worst;
}

}  // namespace

TEST_CASE("classical Hamiltonian examples") {
  const PhysParams pp;
  CHECK(classical_hamiltonian(point1d(0.0, 2.0), PotentialSpec::zero(), pp) == 2.0);
  CHECK(classical_hamiltonian(point1d(1.0, 0.0), PotentialSpec::harmonic({1.0, 1.0}), pp) == doctest::Approx(0.5));
  CHECK(classical_hamiltonian(point1d(0.0, 1.0), uniform_A(1.0), pp) == 0.0);
}

TEST_CASE("Hamilton's equations examples") {
  const PhaseVelocity free = hamilton_rhs(point1d(0.0, 3.0), PotentialSpec::zero(), 1.0);
  CHECK(free.dx[0] == 3.0);
  CHECK(free.dp[0] == 0.0);
  const PhaseVelocity osc = hamilton_rhs(point1d(1.0, 0.0), PotentialSpec::harmonic({1.0, 1.0}), 1.0);
  CHECK(osc.dx[0] == 0.0);
  CHECK(osc.dp[0] == doctest::Approx(-1.0));
  const PhaseVelocity a = hamilton_rhs(point1d(0.4, 1.5), uniform_A(0.5), 2.0);
  CHECK(a.dx[0] == doctest::Approx(0.5));
  CHECK(a.dp[0] == 0.0);
}

TEST_CASE("magnetic-type vector potential bends the orbit") {
  // A = (-B y/2, B x/2): uniform field B, Lorentz force (dp/dt) with p_kin = p - A
  const double B = 2.0;
  PotentialSpec s;
  s.vector = ExpressionVectorPotential{[B](const Coord& x, double) { return Coord{-0.5 * B * x[1], 0.5 * B * x[0]}; },
                                       [B](const Coord&, double) { return Hessian{{{0.0, -0.5 * B}, {0.5 * B, 0.0}}}; }};
  const PhasePoint z{2, {0.0, 0.0}, {1.0, 0.0}, 0.0};
  const Trajectory tr = integrate_bicharacteristic(z, std::numbers::pi / B, 1e-3, s, PhysParams{});
  // half a cyclotron orbit of radius 1/B, turning towards -y: kinetic momentum reversed
  const PhasePoint end = tr.points.back();
  const Coord A = s.A(end.x, end.t);
  CHECK(end.p[0] - A[0] == doctest::Approx(-1.0).epsilon(1e-8));
  CHECK(end.x[1] == doctest::Approx(-2.0 / B).epsilon(1e-8));
  CHECK(std::abs(end.x[0]) < 1e-8);
}

TEST_CASE("free particle is integrated exactly") {
  const Trajectory tr = integrate_bicharacteristic(point1d(0.0, 2.0), 1.0, 1e-3, PotentialSpec::zero(), PhysParams{});
  CHECK(tr.points.back().t == 1.0);
  CHECK(std::abs(tr.points.back().x[0] - 2.0) < 1e-10);
}

TEST_CASE("harmonic orbit over one period") {
  const PotentialSpec pot = PotentialSpec::harmonic({1.0, 1.0});
  const PhysParams pp;
  const Trajectory tr = integrate_bicharacteristic(point1d(1.0, 0.0), 2 * std::numbers::pi, 1e-3, pot, pp);
  CHECK(std::abs(tr.points.back().x[0] - 1.0) < 1e-8);
  const double h0 = classical_hamiltonian(tr.points.front(), pot, pp);
  double drift = 0.0;
  for (const auto& z : tr.points) drift = std::max(drift, std::abs(classical_hamiltonian(z, pot, pp) - h0) / h0);
  CHECK(drift < 1e-9);
  // closed form at an interior time
  const PhasePoint mid = sample_trajectory(tr, 1.0);
  CHECK(mid.x[0] == doctest::Approx(std::cos(1.0)).epsilon(1e-6));
  CHECK(mid.p[0] == doctest::Approx(-std::sin(1.0)).epsilon(1e-6));
}

TEST_CASE("property: energy error is fourth order in dt") {
  const double e1 = energy_drift(0.02), e2 = energy_drift(0.01);
  const double slope = std::log2(e1 / e2);
  CHECK(slope > 3.6);
  CHECK(slope < 4.6);
}

TEST_CASE("property: time reversal returns to the initial point") {
  const PhysParams pp;
  const PotentialSpec pot = PotentialSpec::separated({}, [](const Coord& x) { return std::cos(x[0]) + 0.1 * x[0] * x[0]; });
  for (double p0 : {-1.0, 0.3, 2.0}) {
    const PhasePoint z0 = point1d(0.2, p0);
    const PhasePoint z1 = integrate_bicharacteristic(z0, 3.0, 1e-3, pot, pp).points.back();
    // reversed orbit: negate momentum, integrate again, negate back
    const PhasePoint back = integrate_bicharacteristic(point1d(z1.x[0], -z1.p[0]), 3.0, 1e-3, pot, pp).points.back();
    CHECK(std::abs(back.x[0] - z0.x[0]) < 1e-8);
    CHECK(std::abs(-back.p[0] - z0.p[0]) < 1e-8);
  }
}

TEST_CASE("step divides the interval evenly") {
  const Trajectory tr = integrate_bicharacteristic(point1d(0.0, 1.0), 1.0, 0.3, PotentialSpec::zero(), PhysParams{});
  CHECK(tr.points.size() == 5u);
  CHECK(tr.dt == doctest::Approx(0.25));
}

TEST_CASE("blow-up is reported") {
  const PotentialSpec pot = PotentialSpec::separated({}, [](const Coord& x) { return -std::pow(x[0], 6); });
  CHECK_THROWS_AS(integrate_bicharacteristic(point1d(2.0, 5.0), 50.0, 0.1, pot, PhysParams{}), Error);
}
