#include "scnlse/experiments.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <numbers>
#include <random>

#include "scnlse/asymptotics.hpp"
#include "scnlse/error.hpp"
#include "scnlse/solver.hpp"

namespace scnlse {

double Polynomial::operator()(double s) const {
  double v = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * s + *it;
  return v;
}

double Polynomial::derivative(double s) const {
  double v = 0.0;
  for (std::size_t k = coeffs.size(); k-- > 1;) v = v * s + double(k) * coeffs[k];
  return v;
}

double Polynomial::integral(double s) const {
  double v = 0.0;
  for (std::size_t k = coeffs.size(); k-- > 0;) v = v * s + coeffs[k] / double(k + 1);
  return v * s;
}

Grid make_grid(const GridSpec& spec) { return make_uniform_grid(spec.dim, spec.lo, spec.hi, spec.n); }

PotentialSpec build_potential(const PotentialConfig& pc, double mass) {
  if (pc.type == "zero") return PotentialSpec::zero();
  if (pc.type == "harmonic") return PotentialSpec::harmonic({pc.omega, pc.omega}, {pc.center, pc.center}, mass);
  if (pc.type == "separated") return separated_terms(pc).potential();
  throw Error("unknown potential type '" + pc.type + "'");
}

SeparatedTerms separated_terms(const PotentialConfig& pc) {
  if (pc.type != "separated" && pc.type != "zero")
    throw Error("separated families need a 'separated' or 'zero' potential, got '" + pc.type + "'");
  SeparatedTerms t;
  if (!pc.v0.empty()) {
    const Polynomial v0 = pc.v0;
    t.v0 = [v0](double s) { return v0(s); };
    t.v0_integral = [v0](double s) { return v0.integral(s); };
  }
  if (!pc.v1.empty()) {
    const Polynomial v1 = pc.v1;
    t.v1 = [v1](double x) { return v1(x); };
    t.v1_prime = [v1](double x) { return v1.derivative(x); };
  }
  return t;
}

namespace {

double linear_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = double(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

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

double max_abs_diff(const RealField& a, const RealField& b) {
  double m = 0.0;
  for (std::size_t j = 0; j < a.values.size(); ++j) m = std::max(m, std::abs(a.values[j] - b.values[j]));
  return m;
}

}  // namespace

// ---------------------------------------------------------------------------

PropagationResult run_propagation(const PropagationSetup& setup) {
  const Grid grid = make_grid(setup.grid);
  const PhysParams pp = setup.phys.params();
  SolverConfig cfg;
  cfg.dt = setup.dt;
  cfg.t_end = setup.t_end;
  cfg.snapshot_every = setup.snapshot_every;
  cfg.params = pp;
  cfg.store_snapshots = setup.keep_snapshots;

  const double v = 2.0 * setup.soliton.xi / pp.mass;
  PhasePoint z0{1, {setup.soliton.x0, 0.0}, {2.0 * setup.soliton.xi, 0.0}, 0.0};
  PropagationResult res;
  const Trajectory orbit = integrate_bicharacteristic(z0, setup.t_end, setup.dt, cfg.pot, pp);
  auto observe = [&](const ComplexField& psi) {
    const PhasePoint zc = sample_trajectory(orbit, psi.time);
    res.centroid.push_back({psi.time, mean_position(psi)[0], mean_momentum(psi)[0], zc.x[0], zc.p[0]});
  };
  const ComplexField psi0 = one_soliton(setup.soliton, grid, 0.0, pp);
  EvolutionRecord rec = evolve(psi0, cfg, observe);

  res.final_field = rec.final_state;
  if (setup.keep_snapshots) res.snapshots = std::move(rec.snapshots);
  res.exact_field = one_soliton(setup.soliton, grid, res.final_field.time, pp);
  res.l2_error = relative_l2_error(res.final_field, res.exact_field);
  res.mass_drift = rec.mass_drift;
  res.max_step_change = rec.max_step_change;
  std::vector<double> ts, xs;
  for (const auto& c : res.centroid) {
    ts.push_back(c.t);
    xs.push_back(c.mean_x);
  }
  res.velocity = ts.size() >= 2 ? linear_slope(ts, xs) : v;
  return res;
}

DtConvergenceResult run_dt_halving(const PropagationSetup& setup) {
  DtConvergenceResult out;
  const Grid grid = make_grid(setup.grid);
  const PhysParams pp = setup.phys.params();
  const ComplexField psi0 = one_soliton(setup.soliton, grid, 0.0, pp);
  auto terminal = [&](double dt) {
    SolverConfig cfg;
    cfg.dt = dt;
    cfg.t_end = setup.t_end;
    cfg.params = pp;
    cfg.store_snapshots = false;
    cfg.snapshot_every = std::numeric_limits<std::size_t>::max();
    return evolve(psi0, cfg).final_state;
  };
  const ComplexField reference = terminal(setup.dt / 8.0);
  const ComplexField exact = one_soliton(setup.soliton, grid, reference.time, pp);
  for (double dt : {setup.dt, 0.5 * setup.dt}) {
    const ComplexField last = terminal(dt);
    out.dts.push_back(dt);
    out.exact_errors.push_back(relative_l2_error(last, exact));
    out.reference_errors.push_back(relative_l2_error(last, reference));
  }
  out.exact_ratio = out.exact_errors[0] / out.exact_errors[1];
  out.reference_ratio = out.reference_errors[0] / out.reference_errors[1];
  return out;
}

// ---------------------------------------------------------------------------

EhrenfestResult run_ehrenfest(const EhrenfestSetup& setup) {
  const Grid grid = make_grid(setup.grid);
  const PhysParams base = setup.phys.params();
  const PotentialSpec pot = PotentialSpec::harmonic({setup.omega, setup.omega}, {0.0, 0.0}, base.mass);
  const ComplexField psi0 = one_soliton(setup.soliton, grid, 0.0, base);

  EhrenfestResult out;
  const PhasePoint z0{1, {setup.soliton.x0, 0.0}, {2.0 * setup.soliton.xi, 0.0}, 0.0};
  out.classical = integrate_bicharacteristic(z0, setup.t_end, setup.classical_dt, pot, base);

  for (double r : setup.r_values) {
    PhysParams pp = base;
    pp.r = r;
    SolverConfig cfg;
    cfg.dt = setup.dt;
    cfg.t_end = setup.t_end;
    cfg.snapshot_every = setup.sample_every;
    cfg.params = pp;
    cfg.pot = pot;
    cfg.store_snapshots = false;
    EhrenfestRun run;
    run.r = r;
    auto observe = [&](const ComplexField& psi) {
      const PhasePoint zc = sample_trajectory(out.classical, psi.time);
      run.centroid.push_back({psi.time, mean_position(psi)[0], mean_momentum(psi)[0], zc.x[0], zc.p[0]});
    };
    const EvolutionRecord rec = evolve(psi0, cfg, observe);
    run.mass_drift = rec.mass_drift;
    const double m = pp.mass, w2 = setup.omega * setup.omega;
    for (std::size_t k = 0; k < run.centroid.size(); ++k) {
      const auto& c = run.centroid[k];
      run.max_dx = std::max(run.max_dx, std::abs(c.mean_x - c.classical_x));
      run.max_dp = std::max(run.max_dp, std::abs(c.mean_p - c.classical_p));
      if (k == 0 || k + 1 == run.centroid.size()) continue;
      const auto& a = run.centroid[k - 1];
      const auto& b = run.centroid[k + 1];
      if (std::abs((b.t - c.t) - (c.t - a.t)) > 1e-9) continue;  // unequal spacing at the final step
      const double span = b.t - a.t;
      run.max_position_law = std::max(run.max_position_law, std::abs((b.mean_x - a.mean_x) / span - c.mean_p / m));
      run.max_momentum_law =
          std::max(run.max_momentum_law, std::abs((b.mean_p - a.mean_p) / span + m * w2 * c.mean_x));
    }
    out.runs.push_back(std::move(run));
  }
  return out;
}

// ---------------------------------------------------------------------------

ResidualScalingSetup default_residual_scaling() {
  ResidualScalingSetup s;
  s.family.c1 = 0.5;
  s.potential.type = "separated";
  s.potential.v1.coeffs = {0.0, 0.0, 0.1};
  return s;
}

ResidualScalingResult run_residual_scaling(const ResidualScalingSetup& setup) {
  if (setup.grid.dim != 1) throw Error("residual scaling: the separated class is one-dimensional");
  const Grid grid = make_grid(setup.grid);
  SeparatedClass1Params fam = setup.family;
  fam.terms = separated_terms(setup.potential);
  const PotentialSpec pot = fam.terms.potential();
  ResidualScalingResult out;
  for (double h : setup.hbars) {
    const PhysParams pp = PhysParams::with_kappa_squared(h, setup.mass, setup.kappa_squared);
    const WkbFields w = separated_class1(fam, {setup.grid.lo, setup.grid.hi}, pp);
    const ComplexField psi = assemble_leading_term(w, grid, setup.t, pp);
    const ComplexField dpsi = leading_term_time_derivative(w, grid, setup.t, pp);
    const CorrectionParams cp;
    const ComplexField pc = corrected_field(w, cp, grid, setup.t, pot, pp);
    const ComplexField dpc = corrected_field_time_derivative(w, cp, grid, setup.t, pot, pp);
    out.hbars.push_back(h);
    out.leading.push_back(relative_residual(apply_nlse_operator(psi, dpsi, pot, pp), psi));
    out.corrected.push_back(relative_residual(apply_nlse_operator(pc, dpc, pot, pp), pc));
  }
  out.leading_fit = fit_power_law(out.hbars, out.leading);
  out.corrected_fit = fit_power_law(out.hbars, out.corrected);
  return out;
}

// ---------------------------------------------------------------------------

ConcentrationResult run_concentration(const ConcentrationSetup& setup) {
  const Grid grid = make_grid(setup.grid);
  ConcentrationResult out;
  std::vector<ComplexField> fields;
  for (double h : setup.hbars) {
    const PhysParams pp = PhysParams::with_kappa_squared(h, setup.mass, setup.kappa_squared);
    fields.push_back(one_soliton(setup.soliton, grid, 0.0, pp));
    out.records.push_back(moment_record(fields.back()));
    out.uncertainty_ok = out.uncertainty_ok && satisfies_uncertainty(out.records.back());
  }
  out.scaling = concentration_scaling(fields);

  const double h0 = setup.reference_hbar;
  const PhysParams pref = PhysParams::with_kappa_squared(h0, setup.mass, setup.kappa_squared);
  const ComplexField ref = one_soliton(setup.soliton, grid, 0.0, pref);
  out.reference_variance = centered_moment(ref, {0, 0}, {2, 0});
  const double w = h0 / (2.0 * setup.soliton.eta);
  out.reference_oracle = std::numbers::pi * std::numbers::pi / 12.0 * w * w;

  const ComplexField& smallest = fields.back();
  out.ball_fraction = mass_in_ball(smallest, mean_position(smallest), std::sqrt(smallest.hbar));
  return out;
}

// ---------------------------------------------------------------------------

IdentitySetup default_identity_setup() {
  IdentitySetup s;
  s.potential.type = "separated";
  s.potential.v1.coeffs = {0.0, 0.0, 0.1};
  s.class1.c1 = 0.5;
  s.class1.c2 = 0.05;
  s.class2.c1 = 1.0;
  s.class2.a1 = 0.05;
  s.class2.a2 = 0.02;
  return s;
}

namespace {

// max over random points of |analytic - central difference| / max(1, |analytic|)
double gradient_spot_check(const WkbFields& w, std::mt19937_64& rng, std::size_t samples, double lo, double hi,
                           double t) {
  std::uniform_real_distribution<double> u(lo, hi);
  double worst = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    Coord x{u(rng), w.dim == 2 ? u(rng) : 0.0};
    for (const ScalarField* f : {&w.S, &w.sigma, &w.S1, &w.sigma1}) {
      if (!f->grad) continue;
      const Coord g = f->grad(x, t);
      for (int i = 0; i < w.dim; ++i) {
        const double h = 1e-6 * std::max(f->scale, std::abs(x[i]));
        Coord xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        const double fd = (f->value(xp, t) - f->value(xm, t)) / (2.0 * h);
        worst = std::max(worst, std::abs(g[i] - fd) / std::max(1.0, std::abs(g[i])));
      }
    }
  }
  return worst;
}

}  // namespace

std::vector<IdentityCheck> run_identity_suite(const IdentitySetup& setup) {
  const PhysParams pp = PhysParams::with_kappa_squared(setup.hbar, setup.mass, setup.kappa_squared);
  const double t = setup.t;
  std::mt19937_64 rng(setup.seed);
  std::vector<IdentityCheck> out;

  struct Case {
    std::string name;
    WkbFields fields;
    Grid grid;
    PotentialSpec pot;
    double lo, hi;
    double hj_tol, transport_tol;
  };
  std::vector<Case> cases;
  const Interval sep_domain{-8.0, 8.0};
  const Grid sep_grid = make_uniform_grid(1, -8.0, 8.0, 1024);
  const SeparatedTerms terms = separated_terms(setup.potential);
  {
    cases.push_back({"soliton", soliton_correction_fields(setup.soliton, pp), make_uniform_grid(1, -4.0, 4.0, 1024),
                     PotentialSpec::zero(), -4.0, 4.0, 1e-12, 1e-10});
    SeparatedClass1Params c1 = setup.class1;
    c1.terms = terms;
    cases.push_back({"separated1", separated_class1(c1, sep_domain, pp), sep_grid, terms.potential(), -7.9, 7.9, 1e-8,
                     1e-8});
    SeparatedClass2Params c2 = setup.class2;
    c2.terms = terms;
    cases.push_back({"separated2", separated_class2(c2, sep_domain, pp), sep_grid, terms.potential(), -7.9, 7.9, 1e-8,
                     1e-8});
    cases.push_back({"cylindrical", cylindrical_fields(setup.cylindrical, pp), make_axis_offset_grid(4.0, 128),
                     PotentialSpec::zero(), -3.9, 3.9, 1e-10, 1e-10});
  }

  for (const auto& c : cases) {
    const ComplexField a = assemble_leading_term(c.fields, c.grid, t, pp);
    const ComplexField b = psi_via_representation(c.fields, c.grid, t, pp);
    out.push_back({c.name, "representation_identity", max_abs_diff(a, b), 1e-12});
    out.push_back({c.name, "first_integral_residual", max_abs(first_integral_residual(c.fields, c.grid, t, pp)),
                   1e-10});
    out.push_back({c.name, "hj_residual", max_abs(hj_residual(c.fields, c.grid, t, c.pot, pp)), c.hj_tol});
    const TransportResiduals tr = transport_residuals(c.fields, c.grid, t, c.pot, pp);
    out.push_back({c.name, "transport_phase", max_abs(tr.phase), c.transport_tol});
    out.push_back({c.name, "transport_envelope", max_abs(tr.envelope), c.transport_tol});
    if (c.fields.dim == 1) {
      const TransportResiduals r1 = transport_residuals_1d(c.fields, c.grid, t, pp);
      out.push_back({c.name, "reduction_phase", max_abs_diff(tr.phase, r1.phase), 1e-10});
      out.push_back({c.name, "reduction_envelope", max_abs_diff(tr.envelope, r1.envelope), 1e-10});
    }
    out.push_back({c.name, "gradient_spot_check", gradient_spot_check(c.fields, rng, setup.samples, c.lo, c.hi, t),
                   1e-6});
  }
  return out;
}

// ---------------------------------------------------------------------------

CylindricalResult run_cylindrical(const CylindricalSetup& setup) {
  CylindricalResult out;
  for (double h : setup.hbars) {
    const PhysParams pp = PhysParams::with_kappa_squared(h, setup.mass, setup.kappa_squared);
    const Grid grid = make_axis_offset_grid(setup.half_width_per_hbar * h, setup.n);
    const WkbFields w = cylindrical_fields(setup.params, pp);
    const ComplexField psi = cylindrical_special(setup.params, grid, 0.0, pp);
    const ComplexField dpsi = leading_term_time_derivative(w, grid, 0.0, pp);
    out.hbars.push_back(h);
    out.residuals.push_back(relative_residual(apply_nlse_operator(psi, dpsi, PotentialSpec::zero(), pp), psi));
    const std::size_t n = setup.n;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const double m = std::abs(psi[i * n + j]);
        out.symmetry_error = std::max(out.symmetry_error, std::abs(m - std::abs(psi[(n - 1 - i) * n + j])));
        out.symmetry_error = std::max(out.symmetry_error, std::abs(m - std::abs(psi[j * n + i])));
      }
    out.smallest = psi;
  }
  out.monotone = true;
  for (std::size_t k = 1; k < out.residuals.size(); ++k)
    if (!(out.hbars[k] < out.hbars[k - 1] && out.residuals[k] < out.residuals[k - 1])) out.monotone = false;
  out.fit = fit_power_law(out.hbars, out.residuals);
  return out;
}

}  // namespace scnlse
