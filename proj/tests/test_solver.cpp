#include <doctest.h>

#include <cmath>
#include <numbers>
#include <string>

#include "scnlse/error.hpp"
#include "scnlse/families.hpp"
#include "scnlse/moments.hpp"
#include "scnlse/solver.hpp"

using namespace scnlse;

namespace {

ComplexField sample(const Grid& g, double t, double hbar, auto f) {
  ComplexField out(g, t, hbar);
  for (std::size_t j = 0; j < g.size(); ++j) out[j] = f(g.point(j)[0]);
  return out;
}

SolverConfig config(double hbar, double r, double dt, double t_end, PotentialSpec pot = PotentialSpec::zero()) {
  SolverConfig c;
  c.dt = dt;
  c.t_end = t_end;
  c.snapshot_every = 1000000;
  c.params = PhysParams::with_kappa_squared(hbar, 1.0, 0.5);
  c.params.r = r;
  c.pot = std::move(pot);
  c.store_snapshots = false;
  return c;
}

ComplexField gaussian(const Grid& g, double hbar, double x0, double p0, double s0) {
  return sample(g, 0.0, hbar, [&](double x) {
    return std::exp(-(x - x0) * (x - x0) / (4 * s0 * s0)) * std::polar(1.0, p0 * x / hbar);
  });
}

}  // namespace

TEST_CASE("plane wave picks up the free dispersion phase") {
  const Grid g = make_uniform_grid(1, -10.0, 10.0, 256);
  const double hbar = 0.7, p0 = hbar * 2 * std::numbers::pi * 3 / 20.0, T = 1.3;
  const ComplexField psi0 = sample(g, 0.0, hbar, [&](double x) { return std::polar(1.0, p0 * x / hbar); });
  const EvolutionRecord rec = evolve(psi0, config(hbar, 0.0, 1e-2, T));
  const cplx phase = std::polar(1.0, -(p0 * p0 / 2.0) * T / hbar);
  double err = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) err = std::max(err, std::abs(rec.final_state[j] - phase * psi0[j]));
  CHECK(err < 1e-10);
  CHECK(rec.final_state.time == T);
}

TEST_CASE("linear harmonic oscillator: centroid follows the cosine") {
  const Grid g = make_uniform_grid(1, -10.0, 10.0, 512);
  const double hbar = 0.1;
  const ComplexField psi0 = gaussian(g, hbar, 1.0, 0.0, std::sqrt(hbar / 2));
  SolverConfig c = config(hbar, 0.0, 1e-3, 3.0, PotentialSpec::harmonic({1.0, 1.0}));
  c.snapshot_every = 100;
  double worst = 0.0;
  evolve(psi0, c, [&](const ComplexField& psi) {
    worst = std::max(worst, std::abs(mean_position(psi)[0] - std::cos(psi.time)));
  });
  CHECK(worst < 1e-6);
}

TEST_CASE("free Gaussian spreads at the closed-form rate") {
  const Grid g = make_uniform_grid(1, -40.0, 40.0, 2048);
  const double hbar = 1.0, s0 = 1.0;
  const ComplexField psi0 = gaussian(g, hbar, 0.0, 0.0, s0);
  SolverConfig c = config(hbar, 0.0, 1e-2, 4.0);
  c.snapshot_every = 50;
  double worst = 0.0;
  evolve(psi0, c, [&](const ComplexField& psi) {
    const double expected = s0 * s0 + std::pow(hbar * psi.time / (2 * s0), 2);
    worst = std::max(worst, std::abs(centered_moment(psi, {0, 0}, {2, 0}) - expected));
  });
  CHECK(worst < 1e-6);
}

TEST_CASE("property: norm is preserved for any nonlinearity") {
  const Grid g = make_uniform_grid(1, -20.0, 20.0, 512);
  for (double r : {0.0, 0.5, 2.0, -1.0}) {
    CAPTURE(r);
    const ComplexField psi0 = gaussian(g, 0.5, 0.3, 0.4, 0.8);
    const EvolutionRecord rec = evolve(psi0, config(0.5, r, 1e-3, 1.0, PotentialSpec::harmonic({0.7, 0.7})));
    CHECK(rec.steps == 1000u);
    CHECK(rec.mass_drift < 1e-10);
    CHECK(rec.max_step_change < 1e-12);
  }
}

TEST_CASE("single split step preserves the norm") {
  const Grid g = make_uniform_grid(1, -20.0, 20.0, 512);
  const ComplexField psi0 = gaussian(g, 1.0, 0.0, 1.0, 1.0);
  const ComplexField psi1 = split_step(psi0, 0.05, config(1.0, 1.0, 0.05, 1.0));
  CHECK(std::abs(norm_squared(psi1) / norm_squared(psi0) - 1.0) < 1e-12);
  CHECK(psi1.time == doctest::Approx(0.05));
}

TEST_CASE("property: uniform vector potential is a momentum shift") {
  // exact for the scheme once the spectrum is resolved: the shift only
  // disagrees on the modes that wrap around at the Nyquist index
  const Grid g = make_uniform_grid(1, -10.0, 10.0, 1024);
  const double hbar = 0.5, a0 = hbar * 2 * std::numbers::pi * 2 / 20.0;
  PotentialSpec pot;
  pot.vector = UniformVectorPotential{[a0](double) { return Coord{a0, 0.0}; }};
  for (double r : {0.0, 1.0}) {
    CAPTURE(r);
    const ComplexField psi0 = gaussian(g, hbar, 0.0, 0.2, 0.7);
    const ComplexField with_a = evolve(psi0, config(hbar, r, 1e-2, 1.0, pot)).final_state;
    ComplexField shifted = psi0;
    for (std::size_t j = 0; j < g.size(); ++j) shifted[j] *= std::polar(1.0, -a0 * g.point(j)[0] / hbar);
    const ComplexField plain = evolve(shifted, config(hbar, r, 1e-2, 1.0)).final_state;
    double err = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j)
      err = std::max(err, std::abs(with_a[j] - std::polar(1.0, a0 * g.point(j)[0] / hbar) * plain[j]));
    CHECK(err < 1e-10);
  }
}

TEST_CASE("property: second-order convergence in dt") {
  const Grid g = make_uniform_grid(1, -20.0, 20.0, 256);
  const PhysParams pp = PhysParams::with_kappa_squared(1.0, 1.0, 0.5);
  const SolitonParams sp{0.25, 0.5, 0.0, 0.0, AnalyticFunction::zero()};
  const ComplexField psi0 = one_soliton(sp, g, 0.0, pp);
  auto run = [&](double dt) { return evolve(psi0, config(1.0, pp.r, dt, 2.0)).final_state; };
  const ComplexField ref = run(0.05 / 8);
  const double e1 = relative_l2_error(run(0.05), ref), e2 = relative_l2_error(run(0.025), ref);
  const double ratio = e1 / e2;
  CHECK(ratio == doctest::Approx(4.0).epsilon(0.2));
  // Richardson against dt/8 gives (1 - 1/64) / (1/4 - 1/64) for an exact order-2 error
  const double slope = std::log2(ratio * (0.25 - 1.0 / 64) / (1 - 1.0 / 64) * 4.0);
  CHECK(slope == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("evolve divides the interval and snapshots at both ends") {
  const Grid g = make_uniform_grid(1, -10.0, 10.0, 64);
  const ComplexField psi0 = gaussian(g, 1.0, 0.0, 0.0, 1.0);
  SolverConfig c = config(1.0, 0.0, 0.3, 1.0);
  c.snapshot_every = 2;
  c.store_snapshots = true;
  const EvolutionRecord rec = evolve(psi0, c);
  CHECK(rec.steps == 4u);
  REQUIRE(rec.times.size() == 3u);
  CHECK(rec.times[0] == 0.0);
  CHECK(rec.times[1] == doctest::Approx(0.5));
  CHECK(rec.times[2] == 1.0);
  CHECK(rec.snapshots.size() == 3u);
}

TEST_CASE("solver errors") {
  const Grid g = make_uniform_grid(1, -10.0, 10.0, 64);
  ComplexField psi0 = gaussian(g, 1.0, 0.0, 0.0, 1.0);

  PotentialSpec bad;
  bad.vector = ExpressionVectorPotential{[](const Coord& x, double) { return Coord{x[0], 0.0}; }, {}};
  CHECK_THROWS_AS(evolve(psi0, config(1.0, 0.0, 0.1, 1.0, bad)), Error);
  CHECK_THROWS_AS(evolve(psi0, config(1.0, 0.0, -0.1, 1.0)), Error);
  CHECK_THROWS_AS(evolve(psi0, config(2.0, 0.0, 0.1, 1.0)), Error);  // hbar mismatch

  PotentialSpec blows;
  blows.scalar = ExpressionPotential{[](const Coord&, double t) { return t > 0.5 ? std::nan("") : 0.0; }, {}};
  try {
    evolve(psi0, config(1.0, 0.0, 0.1, 1.0, blows));
    FAIL("expected a non-finite abort");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("step 6") != std::string::npos);
  }

  psi0[3] = cplx(std::nan(""), 0.0);
  CHECK_THROWS_AS(evolve(psi0, config(1.0, 0.0, 0.1, 1.0)), Error);
}

TEST_CASE("exact soliton has a discretization-limited residual") {
  const Grid g = make_uniform_grid(1, -40.0, 40.0, 2048);
  const PhysParams pp = PhysParams::with_kappa_squared(1.0, 1.0, 0.5);
  // centred at t = 0.8 so the tails meet the periodic boundary at sech(20)
  const SolitonParams sp{0.25, 0.5, -0.4, 0.2, AnalyticFunction::zero()};
  const ComplexField psi = one_soliton(sp, g, 0.8, pp);
  const ComplexField res = apply_nlse_operator(psi, one_soliton_time_derivative(sp, g, 0.8, pp), PotentialSpec::zero(), pp);
  CHECK(relative_residual(res, psi) < 1e-8);

  // three-snapshot time derivative
  const double h = 1e-4;
  const ComplexField res3 = apply_nlse_operator(one_soliton(sp, g, 0.8 - h, pp), psi, one_soliton(sp, g, 0.8 + h, pp),
                                                PotentialSpec::zero(), pp);
  CHECK(relative_residual(res3, psi) < 1e-7);
}

TEST_CASE("plane wave with the wrong frequency leaves the mismatch as residual") {
  const Grid g = make_uniform_grid(1, -10.0, 10.0, 128);
  PhysParams pp = PhysParams::with_kappa_squared(0.5, 1.0, 0.5);
  pp.r = 0.0;
  const double p0 = 0.5 * 2 * std::numbers::pi * 4 / 20.0, omega = 0.3;
  const ComplexField psi = sample(g, 0.0, 0.5, [&](double x) { return std::polar(1.0, p0 * x / 0.5); });
  ComplexField dpsi = psi;
  for (auto& v : dpsi.values) v *= cplx(0.0, -omega / 0.5);
  const ComplexField res = apply_nlse_operator(psi, dpsi, PotentialSpec::zero(), pp);
  CHECK(relative_residual(res, psi) == doctest::Approx(std::abs(p0 * p0 / 2 - omega)).epsilon(1e-12));
}

TEST_CASE("operator stencil must be equally spaced") {
  const Grid g = make_uniform_grid(1, -10.0, 10.0, 64);
  const ComplexField a = gaussian(g, 1.0, 0.0, 0.0, 1.0);
  ComplexField b = a, c = a;
  b.time = 0.1;
  c.time = 0.3;
  CHECK_THROWS_AS(apply_nlse_operator(a, b, c, PotentialSpec::zero(), PhysParams{}), Error);
}
