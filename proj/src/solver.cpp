#include "scnlse/solver.hpp"

#include <cmath>
#include <string>

#include "scnlse/error.hpp"

namespace scnlse {

namespace {

void check_supported(const PotentialSpec& pot) {
  if (!pot.vector_is_spatially_uniform())
    throw Error("split-step solver: spatially varying vector potential is unsupported; use zero or uniform A(t)");
}

std::size_t step_count(double span, double dt) {
  if (!(dt > 0.0)) throw Error("solver: dt must be positive");
  if (!(span > 0.0)) throw Error("solver: t_end must exceed the initial time");
  const double n = std::ceil(span / dt - 1e-9);
  if (!(n <= 1e9)) throw Error("solver: more than 1e9 steps requested (t_end / dt too large)");
  return static_cast<std::size_t>(n);
}

}  // namespace

SplitStepPropagator::SplitStepPropagator(const Grid& grid, const SolverConfig& config)
    : config_(config), spectral_(grid) {
  config_.params.validate();
  check_supported(config_.pot);
}

const std::vector<double>& SplitStepPropagator::potential_at(double t) {
  const bool fixed = std::holds_alternative<ZeroPotential>(config_.pot.scalar) ||
                     std::holds_alternative<HarmonicPotential>(config_.pot.scalar) ||
                     (std::holds_alternative<SeparatedPotential>(config_.pot.scalar) &&
                      !std::get<SeparatedPotential>(config_.pot.scalar).v0);
  if (fixed && V_cached_) return V_;
  V_ = eval_potential(config_.pot, spectral_.grid(), t).V;
  V_cached_ = fixed;
  return V_;
}

void SplitStepPropagator::local_half_step(ComplexField& psi, double dt, const std::vector<double>& V) const {
  const double r2 = 2.0 * config_.params.r;
  const double c = -0.5 * dt / config_.params.hbar;
  for (std::size_t j = 0; j < psi.size(); ++j) psi[j] *= std::polar(1.0, c * (V[j] - r2 * std::norm(psi[j])));
}

void SplitStepPropagator::step(ComplexField& psi, double dt) {
  if (!(psi.grid == spectral_.grid())) throw Error("split_step: field grid does not match the propagator");
  const double tm = psi.time + 0.5 * dt;
  const std::vector<double>& V = potential_at(tm);
  local_half_step(psi, dt, V);

  const double h = config_.params.hbar, m = config_.params.mass;
  const Coord A = config_.pot.A(Coord{0.0, 0.0}, tm);
  const auto& k0 = spectral_.wavenumbers(0);
  const auto& k1 = spectral_.wavenumbers(1);
  const bool two_d = spectral_.grid().dim() == 2;
  const double c = -dt / (2.0 * m * h);
  spectral_.apply_multiplier(psi.values, [&](std::size_t i0, std::size_t i1) {
    const double p0 = h * k0[i0] - A[0];
    double e = p0 * p0;
    if (two_d) {
      const double p1 = h * k1[i1] - A[1];
      e += p1 * p1;
    }
    return std::polar(1.0, c * e);
  });

  local_half_step(psi, dt, V);
  psi.time += dt;
}

ComplexField split_step(const ComplexField& psi, double dt, const SolverConfig& config) {
  SplitStepPropagator prop(psi.grid, config);
  ComplexField out = psi;
  prop.step(out, dt);
  return out;
}

EvolutionRecord evolve(const ComplexField& psi0, const SolverConfig& config,
                       const std::function<void(const ComplexField&)>& observer) {
  psi0.check_finite();
  if (config.snapshot_every == 0) throw Error("evolve: snapshot_every must be positive");
  if (psi0.hbar != config.params.hbar) throw Error("evolve: field hbar differs from the solver parameters");
  const double t0 = psi0.time;
  const std::size_t n = step_count(config.t_end - t0, config.dt);
  const double h = (config.t_end - t0) / double(n);

  SplitStepPropagator prop(psi0.grid, config);
  EvolutionRecord rec;
  ComplexField psi = psi0;
  const double N0 = norm_squared(psi);
  double prev = N0;

  auto snapshot = [&] {
    rec.times.push_back(psi.time);
    rec.norms.push_back(norm_squared(psi));
    if (config.store_snapshots) rec.snapshots.push_back(psi);
    if (observer) observer(psi);
  };
  snapshot();
  for (std::size_t s = 1; s <= n; ++s) {
    try {
      prop.step(psi, h);
    } catch (const Error& e) {
      throw Error("evolve: step " + std::to_string(s) + ": " + e.what());
    }
    psi.time = t0 + double(s) * h;
    double N = 0.0;
    for (const auto& v : psi.values) {
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw Error("evolve: non-finite value at step " + std::to_string(s));
      N += std::norm(v);
    }
    N *= psi.grid.cell_volume();
    rec.mass_drift = std::max(rec.mass_drift, std::abs(N - N0) / N0);
    rec.max_step_change = std::max(rec.max_step_change, std::abs(N - prev) / prev);
    prev = N;
    if (s % config.snapshot_every == 0 || s == n) snapshot();
  }
  rec.steps = n;
  rec.final_state = std::move(psi);
  return rec;
}

namespace {

ComplexField spatial_operator(const ComplexField& psi, const PotentialSpec& pot, const PhysParams& params) {
  params.validate();
  psi.check_finite();
  const Grid& g = psi.grid;
  const int dim = g.dim();
  const double h = params.hbar, m = params.mass, t = psi.time;
  Spectral sp(g);
  const std::vector<cplx> lap = sp.laplacian(psi.values);
  std::vector<cplx> grad[2];
  const bool has_A = !std::holds_alternative<ZeroVectorPotential>(pot.vector);
  if (has_A)
    for (int a = 0; a < dim; ++a) grad[a] = sp.derivative(psi.values, a);
  const cplx I(0.0, 1.0);
  ComplexField out(g, t, h);
  for (std::size_t j = 0; j < g.size(); ++j) {
    const Coord x = g.point(j);
    cplx kin = -h * h * lap[j];
    if (has_A) {
      const Coord A = pot.A(x, t);
      double A2 = 0.0;
      for (int a = 0; a < dim; ++a) {
        kin += 2.0 * I * h * A[a] * grad[a][j];
        A2 += A[a] * A[a];
      }
      kin += (I * h * pot.div_A(x, t, dim) + A2) * psi[j];
    }
    out[j] = kin / (2.0 * m) + (pot.V(x, t) - 2.0 * params.r * std::norm(psi[j])) * psi[j];
  }
  return out;
}

}  // namespace

ComplexField apply_nlse_operator(const ComplexField& psi, const ComplexField& dpsi_dt, const PotentialSpec& pot,
                                 const PhysParams& params) {
  if (!(psi.grid == dpsi_dt.grid) || psi.time != dpsi_dt.time)
    throw Error("apply_nlse_operator: field and time derivative differ in grid or time");
  ComplexField out = spatial_operator(psi, pot, params);
  const cplx c(0.0, -params.hbar);
  for (std::size_t j = 0; j < out.size(); ++j) out[j] += c * dpsi_dt[j];
  return out;
}

ComplexField apply_nlse_operator(const ComplexField& previous, const ComplexField& current, const ComplexField& next,
                                 const PotentialSpec& pot, const PhysParams& params) {
  if (!(previous.grid == current.grid) || !(next.grid == current.grid))
    throw Error("apply_nlse_operator: stencil fields live on different grids");
  const double dt_prev = current.time - previous.time, dt_next = next.time - current.time;
  if (!(dt_prev > 0.0) || std::abs(dt_prev - dt_next) > 1e-12 * std::max(1.0, std::abs(current.time)))
    throw Error("apply_nlse_operator: stencil times must be increasing and equally spaced");
  ComplexField dpsi(current.grid, current.time, current.hbar);
  for (std::size_t j = 0; j < dpsi.size(); ++j) dpsi[j] = (next[j] - previous[j]) / (dt_prev + dt_next);
  return apply_nlse_operator(current, dpsi, pot, params);
}

double relative_residual(const ComplexField& residual, const ComplexField& psi) {
  double num = 0.0, den = 0.0;
  for (const auto& v : residual.values) num += std::norm(v);
  for (const auto& v : psi.values) den += std::norm(v);
  if (!(den > 0.0)) throw Error("relative_residual: zero reference field");
  return std::sqrt(num / den);
}

}  // namespace scnlse
