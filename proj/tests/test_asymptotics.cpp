#include <doctest.h>

#include <cmath>
#include <numbers>

#include "scnlse/asymptotics.hpp"
#include "scnlse/error.hpp"
#include "scnlse/experiments.hpp"
#include "scnlse/families.hpp"
#include "scnlse/solver.hpp"

using namespace scnlse;

namespace {

double max_abs(const RealField& f) {
  double m = 0.0;
  for (double v : f.values) m = std::max(m, std::abs(v));
  return m;
}

double max_abs(const ComplexField& f) {
  double m = 0.0;
  for (const auto& v : f.values) m = std::max(m, std::abs(v));
  return m;
}

PhysParams unit_params(double hbar = 1.0) { return PhysParams::with_kappa_squared(hbar, 1.0, 0.5); }

SeparatedTerms quadratic_v1(double k) {
  PotentialConfig pc;
  pc.type = "separated";
  pc.v1.coeffs = {0.0, 0.0, k};
  return separated_terms(pc);
}

// root of g on [a, b] with g(a) g(b) < 0
double bisect(auto g, double a, double b) {
  double ga = g(a);
  for (int k = 0; k < 200; ++k) {
    const double c = 0.5 * (a + b), gc = g(c);
    if ((gc < 0) == (ga < 0)) {
      a = c;
      ga = gc;
    } else {
      b = c;
    }
  }
  return 0.5 * (a + b);
}

// Hand-written smooth 1D fields with every derivative analytic.
WkbFields generic_fields() {
  WkbFields w;
  w.dim = 1;
  w.family = "generic";
  auto make = [](auto f, auto fx, auto fxx, auto ft, auto fxt) {
    ScalarField s;
    s.dim = 1;
    s.value = [=](const Coord& x, double t) { return f(x[0], t); };
    s.grad = [=](const Coord& x, double t) { return Coord{fx(x[0], t), 0.0}; };
    s.hess = [=](const Coord& x, double t) { return Hessian{{{fxx(x[0], t), 0.0}, {0.0, 0.0}}}; };
    s.dt = [=](const Coord& x, double t) { return ft(x[0], t); };
    s.grad_dt = [=](const Coord& x, double t) { return Coord{fxt(x[0], t), 0.0}; };
    return s;
  };
  w.S = make([](double x, double t) { return 0.3 * x * x + 0.1 * t * x; }, [](double x, double t) { return 0.6 * x + 0.1 * t; },
             [](double, double) { return 0.6; }, [](double x, double) { return 0.1 * x; }, [](double, double) { return 0.1; });
  w.sigma = make([](double x, double t) { return x + 0.05 * x * x * x + 0.2 * t; },
                 [](double x, double) { return 1.0 + 0.15 * x * x; }, [](double x, double) { return 0.3 * x; },
                 [](double, double) { return 0.2; }, [](double, double) { return 0.0; });
  w.S1 = make([](double x, double) { return std::sin(x); }, [](double x, double) { return std::cos(x); },
              [](double x, double) { return -std::sin(x); }, [](double, double) { return 0.0; },
              [](double, double) { return 0.0; });
  w.sigma1 = make([](double x, double t) { return 0.1 * x * x * (1 + t); }, [](double x, double t) { return 0.2 * x * (1 + t); },
                  [](double, double t) { return 0.2 * (1 + t); }, [](double x, double) { return 0.1 * x * x; },
                  [](double x, double) { return 0.2 * x; });
  return w;
}

}  // namespace

// ---------------------------------------------------------------------------
// envelope and leading term

TEST_CASE("envelope peak and decay") {
  const PhysParams pp = unit_params();
  const SolitonParams sp{0.0, 0.5, 0.0, 0.0, AnalyticFunction::zero()};  // sigma = x at t = 0
  const WkbFields w = soliton_correction_fields(sp, pp);
  CHECK(envelope_rho(w, {0.0, 0.0}, 0.0, pp) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(envelope_rho(w, {40.0, 0.0}, 0.0, pp) < 1e-16);
  CHECK(envelope_rho(w, {-40.0, 0.0}, 0.0, pp) < 1e-16);
  CHECK(envelope_amplitude(w, {3.0, 0.0}, 0.0, pp) == doctest::Approx(2.0 * sp.eta));

  const SolitonParams sp2{0.0, 0.8, 1.0, 0.0, AnalyticFunction::zero()};
  const WkbFields w2 = soliton_correction_fields(sp2, pp);
  CHECK(envelope_rho(w2, {1.0, 0.0}, 0.0, pp) == doctest::Approx(2.0 * 0.8).epsilon(1e-15));
}

TEST_CASE("degenerate envelope is rejected") {
  WkbFields w;
  w.S = ScalarField::constant(1, 0.0);
  w.sigma = ScalarField::constant(1, 0.0);
  w.S1 = ScalarField::constant(1, 0.0);
  w.sigma1 = ScalarField::constant(1, 0.0);
  CHECK_THROWS_AS(envelope_amplitude(w, {0.0, 0.0}, 0.0, unit_params()), Error);
}

TEST_CASE("leading term of the soliton family equals the closed-form soliton") {
  const Grid g = make_uniform_grid(1, -20.0, 20.0, 1024);
  for (double t : {0.0, 0.7}) {
    const PhysParams pp = unit_params(0.5);
    const SolitonParams sp{0.25, 0.5, -1.0, 0.3, AnalyticFunction::zero()};
    const WkbFields w = soliton_correction_fields(sp, pp);
    const ComplexField a = assemble_leading_term(w, g, t, pp);
    ComplexField b = one_soliton(sp, g, t, pp);
    for (auto& v : b.values) v = -v;  // the closed form carries an overall minus sign
    CHECK(max_abs_diff(a, b) < 1e-12);
    double mod = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j)
      mod = std::max(mod, std::abs(std::abs(a[j]) - envelope_rho(w, g.point(j), t, pp)));
    CHECK(mod < 1e-15);
  }
}

TEST_CASE("leading-term norm is 4 eta hbar") {
  const Grid g = make_uniform_grid(1, -20.0, 20.0, 1024);
  const PhysParams pp = unit_params(0.5);
  const WkbFields w = soliton_correction_fields({0.0, 0.5, 0.0, 0.0, AnalyticFunction::zero()}, pp);
  CHECK(norm_squared(assemble_leading_term(w, g, 0.0, pp)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("property: half-maximum width in sigma is proportional to hbar") {
  const SolitonParams sp{0.0, 0.5, 0.0, 0.0, AnalyticFunction::zero()};
  double prev = 0.0;
  for (double h : {0.4, 0.2, 0.1, 0.05}) {
    const PhysParams pp = unit_params(h);
    const WkbFields w = soliton_correction_fields(sp, pp);
    const double b = envelope_amplitude(w, {0.0, 0.0}, 0.0, pp);
    const double x = bisect([&](double s) { return envelope_rho(w, {s, 0.0}, 0.0, pp) - 0.5 * b; }, 0.0, 10.0);
    const double width = 2.0 * w.sigma.value({x, 0.0}, 0.0);
    CHECK(width == doctest::Approx(2.0 * h * std::acosh(2.0)).epsilon(1e-12));
    if (prev > 0.0) CHECK(prev / width == doctest::Approx(2.0).epsilon(1e-12));
    prev = width;
  }
}

TEST_CASE("representation form agrees with the sech form for every family") {
  const PhysParams pp = unit_params(0.1);
  const IdentitySetup s = default_identity_setup();
  SeparatedClass1Params c1 = s.class1;
  c1.terms = quadratic_v1(0.1);
  SeparatedClass2Params c2 = s.class2;
  c2.terms = quadratic_v1(0.1);
  const Grid g1 = make_uniform_grid(1, -8.0, 8.0, 512);
  const std::vector<std::pair<WkbFields, Grid>> cases = {
      {soliton_correction_fields(s.soliton, pp), g1},
      {separated_class1(c1, {-8.0, 8.0}, pp), g1},
      {separated_class2(c2, {-8.0, 8.0}, pp), g1},
      {cylindrical_fields(s.cylindrical, pp), make_axis_offset_grid(4.0, 64)},
  };
  for (const auto& [w, g] : cases) {
    CAPTURE(w.family);
    CHECK(max_abs_diff(assemble_leading_term(w, g, 0.3, pp), psi_via_representation(w, g, 0.3, pp)) < 1e-12);
  }
}

TEST_CASE("representation at the wave centre and deep in the tail") {
  const PhysParams pp = unit_params(0.01);
  const WkbFields w = soliton_correction_fields({0.0, 0.5, 0.0, 0.0, AnalyticFunction::zero()}, pp);
  const Grid g = make_uniform_grid(1, -5.0, 5.0, 1024);  // theta reaches 500
  const ComplexField psi = psi_via_representation(w, g, 0.0, pp);
  for (const auto& v : psi.values) CHECK(std::isfinite(std::abs(v)));
  CHECK(std::abs(psi[512]) == doctest::Approx(envelope_amplitude(w, {0.0, 0.0}, 0.0, pp)).epsilon(1e-15));
  CHECK(std::abs(psi[0]) < 1e-200);
  CHECK(max_abs_diff(psi, assemble_leading_term(w, g, 0.0, pp)) < 1e-12);
}

// ---------------------------------------------------------------------------
// soliton family

TEST_CASE("one-soliton profile, velocity and phase") {
  const Grid g = make_uniform_grid(1, -20.0, 20.0, 1024);
  const PhysParams pp = unit_params();
  const ComplexField still = one_soliton({0.0, 0.5, 0.0, 0.0, AnalyticFunction::zero()}, g, 0.0, pp);
  double err = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) err = std::max(err, std::abs(std::abs(still[j]) - 1.0 / std::cosh(g.point(j)[0])));
  CHECK(err < 1e-15);
  CHECK(std::abs(still[512]) == doctest::Approx(1.0).epsilon(1e-15));

  const SolitonParams moving{0.25, 0.5, -2.0, 0.0, AnalyticFunction::zero()};
  const double t = 3.0, centre = -2.0 + 0.5 * t;
  const ComplexField psi = one_soliton(moving, g, t, pp);
  for (double d : {0.0, 0.4, 1.3}) {
    const Grid probe = make_uniform_grid(1, centre + d, centre + d + 16.0, 16);
    CHECK(std::abs(one_soliton(moving, probe, t, pp)[0]) == doctest::Approx(1.0 / std::cosh(d)).epsilon(1e-14));
  }
  CHECK(std::abs(psi[0]) < 1e-7);

  // f(z) = 0.1 z at hbar = 1, t = 0: the phase gains Re f = 0.1 x, the modulus is unchanged
  const SolitonParams lin{0.0, 0.5, 0.0, 0.0, AnalyticFunction::polynomial({{0.0, 0.0}, {0.1, 0.0}})};
  const ComplexField with_f = one_soliton(lin, g, 0.0, pp);
  double phase_err = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    if (std::abs(still[j]) < 1e-8) continue;
    phase_err = std::max(phase_err, std::abs(with_f[j] / still[j] - std::polar(1.0, 0.1 * g.point(j)[0])));
  }
  CHECK(phase_err < 1e-12);
}

TEST_CASE("one-soliton time derivative matches a central difference") {
  const Grid g = make_uniform_grid(1, -20.0, 20.0, 1024);
  const PhysParams pp = unit_params(0.5);
  const SolitonParams sp{0.25, 0.5, 0.0, 0.1, AnalyticFunction::polynomial({{0.0, 0.0}, {0.1, 0.05}, {0.01, 0.0}})};
  const double t = 0.4, h = 1e-5;
  const ComplexField d = one_soliton_time_derivative(sp, g, t, pp);
  const ComplexField p = one_soliton(sp, g, t + h, pp), m = one_soliton(sp, g, t - h, pp);
  double err = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) err = std::max(err, std::abs(d[j] - (p[j] - m[j]) / (2 * h)));
  CHECK(err < 1e-8);
}

TEST_CASE("soliton coefficients") {
  const SolitonParams sp{0.0, 0.5, 0.0, 0.0, AnalyticFunction::zero()};
  CHECK(sp.alpha2() == 0.0);
  CHECK(sp.beta2() == 1.0);
  CHECK(sp.alpha1(1.0) == 0.5);
  CHECK(sp.beta1(1.0) == 0.0);
  CHECK_THROWS_AS((SolitonParams{0.0, -0.5, 0.0, 0.0, AnalyticFunction::zero()}.validate()), Error);
}

TEST_CASE("soliton fields solve the eikonal and transport equations") {
  const Grid g = make_uniform_grid(1, -4.0, 4.0, 512);
  const PhysParams pp = unit_params(0.1);
  for (const auto& f : {AnalyticFunction::zero(), AnalyticFunction::polynomial({{0.2, 0.0}, {0.1, 0.05}, {0.01, -0.02}})}) {
    const WkbFields w = soliton_correction_fields({0.25, 0.5, 0.0, 0.0, f}, pp);
    CHECK(max_abs(hj_residual(w, g, 0.3, PotentialSpec::zero(), pp)) < 1e-12);
    const TransportResiduals tr = transport_residuals(w, g, 0.3, PotentialSpec::zero(), pp);
    const double tol = f.is_zero() ? 1e-12 : 1e-10;
    CHECK(max_abs(tr.phase) < tol);
    CHECK(max_abs(tr.envelope) < tol);
  }
}

TEST_CASE("property: linear-equation residual of the soliton family is second order in hbar") {
  const Grid g = make_uniform_grid(1, -4.0, 4.0, 256);
  const SolitonParams sp{0.25, 0.5, 0.0, 0.0, AnalyticFunction::polynomial({{0.0, 0.0}, {0.1, 0.05}, {0.01, 0.0}})};
  double prev = 0.0;
  for (double h : {0.2, 0.1, 0.05, 0.025}) {
    const PhysParams pp = unit_params(h);
    const double r = max_abs(linear_equation_residual(soliton_correction_fields(sp, pp), g, 0.2, PotentialSpec::zero(), pp));
    CHECK(r > 0.0);
    if (prev > 0.0) CHECK(prev / r == doctest::Approx(4.0).epsilon(1e-6));
    prev = r;
  }
}

// ---------------------------------------------------------------------------
// separated classes

TEST_CASE("first separated class without potential is a standing soliton") {
  const PhysParams pp = unit_params(0.2);
  SeparatedClass1Params p;
  p.c1 = 0.5;
  const WkbFields w = separated_class1(p, {-5.0, 5.0}, pp);
  for (double x : {-4.0, -0.3, 0.0, 2.5}) {
    CHECK(w.sigma.value({x, 0.0}, 0.0) == doctest::Approx(x).epsilon(1e-12));
    CHECK(w.S.value({x, 0.0}, 0.7) == doctest::Approx(0.35));
  }
}

TEST_CASE("first separated class with an inverted parabola gives the arcsine integral") {
  const PhysParams pp = unit_params(0.2);
  SeparatedClass1Params p;
  p.c1 = 0.5;
  p.terms = quadratic_v1(-0.5);
  const WkbFields w = separated_class1(p, {-0.99, 0.99}, pp);
  for (double x : {-0.9, -0.4, 0.0, 0.5, 0.95}) {
    const double exact = 0.5 * (x * std::sqrt(1 - x * x) + std::asin(x));
    CHECK(std::abs(w.sigma.value({x, 0.0}, 0.0) - exact) < 1e-10);
  }
  // envelope amplitude b = sqrt(1 - x^2) shrinks towards the turning points
  CHECK(envelope_amplitude(w, {0.9, 0.0}, 0.0, pp) < envelope_amplitude(w, {0.0, 0.0}, 0.0, pp));
  SeparatedClass1Params bad = p;
  bad.c1 = 0.4;
  CHECK_THROWS_AS(separated_class1(bad, {-0.99, 0.99}, pp), Error);
}

TEST_CASE("first separated class solves its own eikonal equation") {
  const PhysParams pp = unit_params(0.1);
  SeparatedClass1Params p;
  p.c1 = 0.5;
  p.c2 = 0.05;
  PotentialConfig pc;
  pc.type = "separated";
  pc.v0.coeffs = {0.1, 0.3};
  pc.v1.coeffs = {0.0, 0.0, 0.1};
  p.terms = separated_terms(pc);
  const WkbFields w = separated_class1(p, {-6.0, 6.0}, pp);
  const Grid g = make_uniform_grid(1, -6.0, 6.0, 256);
  CHECK(max_abs(hj_residual(w, g, 0.4, p.terms.potential(), pp)) < 1e-8);
  const TransportResiduals tr = transport_residuals(w, g, 0.4, p.terms.potential(), pp);
  CHECK(max_abs(tr.phase) < 1e-8);
  CHECK(max_abs(tr.envelope) < 1e-8);
}

TEST_CASE("second separated class reduces to a travelling phase without potential") {
  SeparatedClass2Params p;
  p.c1 = 1.0;
  p.c2 = 0.3;
  const Class2Derivatives d = class2_derivatives(p, 0.7, 1.0);
  CHECK(d.p1 == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(d.p2 == 0.0);
  const PhysParams pp = unit_params(0.1);
  const WkbFields w = separated_class2(p, {-4.0, 4.0}, pp);
  for (double x : {-3.0, 0.0, 1.7})
    for (double t : {0.0, 0.5}) CHECK(w.sigma.value({x, 0.0}, t) == doctest::Approx(t - x + 0.3).epsilon(1e-12));
  // a1 = a2 = 0: f', g' constant and the transport equations hold
  CHECK(d.f1 == doctest::Approx(class2_derivatives(p, -2.0, 1.0).f1));
  CHECK(d.g1 == doctest::Approx(class2_derivatives(p, -2.0, 1.0).g1));
  const Grid g = make_uniform_grid(1, -4.0, 4.0, 256);
  const TransportResiduals tr = transport_residuals(w, g, 0.2, PotentialSpec::zero(), pp);
  CHECK(max_abs(tr.phase) < 1e-10);
  CHECK(max_abs(tr.envelope) < 1e-10);
}

TEST_CASE("second separated class with a smooth potential") {
  const PhysParams pp = unit_params(0.1);
  SeparatedClass2Params p;
  p.c1 = 1.0;
  p.c3 = 0.2;
  p.a1 = 0.05;
  p.a2 = 0.02;
  p.terms = quadratic_v1(0.1);
  const WkbFields w = separated_class2(p, {-8.0, 8.0}, pp);
  const Grid g = make_uniform_grid(1, -8.0, 8.0, 512);
  CHECK(max_abs(hj_residual(w, g, 0.3, p.terms.potential(), pp)) < 1e-8);
  const TransportResiduals tr = transport_residuals(w, g, 0.3, p.terms.potential(), pp);
  CHECK(max_abs(tr.phase) < 1e-8);
  CHECK(max_abs(tr.envelope) < 1e-8);
}

// ---------------------------------------------------------------------------
// cylindrical family

TEST_CASE("cylindrical solution: symmetry, amplitude and closed form") {
  const PhysParams pp = unit_params(0.1);
  const CylindricalParams cp{1.0, 0.0, 0.0, 0.0, 0.2, 0.0, 0.1};
  const Grid g = make_axis_offset_grid(4.0, 128);
  const ComplexField psi = cylindrical_special(cp, g, 0.0, pp);
  const std::size_t n = 128;
  double mirror = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      mirror = std::max(mirror, std::abs(std::abs(psi[i * n + j]) - std::abs(psi[(n - 1 - i) * n + j])));
  CHECK(mirror < 1e-15);

  const WkbFields w = cylindrical_fields(cp, pp);
  CHECK(max_abs_diff(psi, assemble_leading_term(w, g, 0.0, pp)) < 1e-12);
  const double r0 = bisect([&](double r) { return fast_variable(w, {r, 0.0}, 0.0, pp.hbar); }, 1e-12, 1.0);
  CHECK(envelope_rho(w, {r0, 0.0}, 0.0, pp) == doctest::Approx(1.0 / (pp.kappa * std::sqrt(2.0))).epsilon(1e-12));

  CHECK_THROWS_AS(cylindrical_special(cp, make_uniform_grid(2, -1.0, 1.0, 16), 0.0, pp), Error);
}

TEST_CASE("cylindrical solution without radial phase carries no momentum") {
  const PhysParams pp = unit_params(0.1);
  const CylindricalParams cp{1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
  const ComplexField psi = cylindrical_special(cp, make_axis_offset_grid(3.0, 128), 0.0, pp);
  for (int axis : {0, 1}) {
    const cplx p = inner_product(psi, apply_momentum(psi, axis)) / norm_squared(psi);
    CHECK(std::abs(p) < 1e-12);
  }
}

// ---------------------------------------------------------------------------
// residual evaluators

TEST_CASE("eikonal residual of trivial phases is the time-dependent potential") {
  WkbFields w;
  w.S = ScalarField::constant(1, 0.0);
  w.sigma = ScalarField::constant(1, 0.0);
  w.S1 = ScalarField::constant(1, 0.0);
  w.sigma1 = ScalarField::constant(1, 0.0);
  const PotentialSpec pot = PotentialSpec::separated([](double t) { return std::sin(t) + 2.0; }, {});
  const Grid g = make_uniform_grid(1, -1.0, 1.0, 16);
  const ComplexField R = hj_residual(w, g, 0.6, pot, unit_params());
  for (const auto& v : R.values) CHECK(std::abs(v - cplx(std::sin(0.6) + 2.0, 0.0)) < 1e-15);
}

TEST_CASE("property: general transport residuals reduce to the one-dimensional form") {
  const WkbFields w = generic_fields();
  const Grid g = make_uniform_grid(1, -3.0, 3.0, 128);
  for (double h : {1.0, 0.1})
    for (double t : {0.0, 0.8}) {
      const PhysParams pp = unit_params(h);
      const TransportResiduals a = transport_residuals(w, g, t, PotentialSpec::zero(), pp);
      const TransportResiduals b = transport_residuals_1d(w, g, t, pp);
      CHECK(max_abs(a.phase) > 1e-3);  // a non-trivial comparison
      double dp = 0.0, de = 0.0;
      for (std::size_t j = 0; j < g.size(); ++j) {
        dp = std::max(dp, std::abs(a.phase.values[j] - b.phase.values[j]));
        de = std::max(de, std::abs(a.envelope.values[j] - b.envelope.values[j]));
      }
      CHECK(dp < 1e-10);
      CHECK(de < 1e-10);
    }
}

TEST_CASE("first integral holds and detects a corrupted envelope") {
  const PhysParams pp = unit_params(0.1);
  const WkbFields w = soliton_correction_fields({0.25, 0.5, 0.0, 0.0, AnalyticFunction::zero()}, pp);
  const Grid g = make_uniform_grid(1, -4.0, 4.0, 512);
  const RealField r = first_integral_residual(w, g, 0.0, pp);
  CHECK(max_abs(r) < 1e-10);
  // theta = 0 sits on the grid: both sides vanish there
  CHECK(std::abs(r.values[256]) < 1e-15);
  CHECK(max_abs(first_integral_residual(w, g, 0.0, pp, 0.99)) > 1e-2);
  CHECK_THROWS_AS(first_integral_residual(w, g, 0.0, pp, 1.01), Error);
}

// ---------------------------------------------------------------------------
// first correction

TEST_CASE("first correction vanishes on the exact soliton") {
  const PhysParams pp = unit_params(0.1);
  const WkbFields w = soliton_correction_fields({0.25, 0.5, 0.0, 0.0, AnalyticFunction::zero()}, pp);
  const Grid g = make_uniform_grid(1, -4.0, 4.0, 512);
  const FirstCorrection c = first_correction_uv(w, CorrectionParams{}, g, 0.0, PotentialSpec::zero(), pp);
  CHECK(max_abs(c.u) < 1e-12);
  CHECK(max_abs(c.v) < 1e-12);
}

TEST_CASE("constant C1 gives an odd real part and an even imaginary part in theta") {
  const PhysParams pp = unit_params(0.1);
  const WkbFields w = soliton_correction_fields({0.0, 0.5, 0.0, 0.0, AnalyticFunction::zero()}, pp);
  const Grid g = make_uniform_grid(1, -4.0, 4.0, 512);  // theta = 10 x, mirror pairs j and n - j
  CorrectionParams cp;
  cp.C1 = [](const Coord&, double) { return 0.7; };
  const FirstCorrection c = first_correction_uv(w, cp, g, 0.0, PotentialSpec::zero(), pp);
  CHECK(max_abs(c.rho_u) > 1e-2);
  CHECK(max_abs(c.rho_v) > 1e-2);
  for (std::size_t j = 1; j < g.size(); ++j) {
    CHECK(std::abs(c.rho_u.values[j] + c.rho_u.values[g.size() - j]) < 1e-12);
    CHECK(std::abs(c.rho_v.values[j] - c.rho_v.values[g.size() - j]) < 1e-12);
  }
}

TEST_CASE("corrected field time derivative matches a central difference") {
  const PhysParams pp = unit_params(0.1);
  SeparatedClass1Params p;
  p.c1 = 0.5;
  p.c2 = 0.1;
  p.terms = quadratic_v1(0.1);
  const WkbFields w = separated_class1(p, {-6.0, 6.0}, pp);
  const Grid g = make_uniform_grid(1, -6.0, 6.0, 256);
  const PotentialSpec pot = p.terms.potential();
  const double t = 0.2, h = 1e-4;
  const ComplexField d = corrected_field_time_derivative(w, {}, g, t, pot, pp);
  const ComplexField a = corrected_field(w, {}, g, t + h, pot, pp), b = corrected_field(w, {}, g, t - h, pot, pp);
  double err = 0.0, scale = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    err = std::max(err, std::abs(d[j] - (a[j] - b[j]) / (2 * h)));
    scale = std::max(scale, std::abs(d[j]));
  }
  CHECK(err / scale < 1e-6);
}

TEST_CASE("leading-term residual of the first separated class shrinks with hbar") {
  const ResidualScalingResult r = run_residual_scaling(default_residual_scaling());
  for (std::size_t k = 1; k < r.hbars.size(); ++k) CHECK(r.leading[k] < r.leading[k - 1]);
  CHECK(r.leading_fit.slope >= 0.9);
}

TEST_CASE("identity suite passes on the default setup") {
  for (const auto& c : run_identity_suite(default_identity_setup())) {
    CAPTURE(c.family);
    CAPTURE(c.metric);
    CHECK(c.value < c.tolerance);
  }
}
