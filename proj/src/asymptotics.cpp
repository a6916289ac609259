#include "scnlse/asymptotics.hpp"

#include <cmath>
#include <string>

#include "scnlse/error.hpp"

namespace scnlse {

namespace {

double grad_sq(const WkbFields& w, const Coord& x, double t) {
  const Coord g = w.sigma.gradient(x, t);
  return dot(g, g, w.dim);
}

void require_dim(const WkbFields& w, const Grid& grid, const char* who) {
  if (w.dim != grid.dim())
    throw Error(std::string(who) + ": fields are " + std::to_string(w.dim) + "D but the grid is " +
                std::to_string(grid.dim()) + "D");
}

double phase(const WkbFields& w, const Coord& x, double t, double hbar) {
  return w.S(x, t) / hbar + w.S1(x, t);
}

double phase_dt(const WkbFields& w, const Coord& x, double t, double hbar) {
  return w.S.time_derivative(x, t) / hbar + w.S1.time_derivative(x, t);
}

double theta_dt(const WkbFields& w, const Coord& x, double t, double hbar) {
  return w.sigma.time_derivative(x, t) / hbar + w.sigma1.time_derivative(x, t);
}

// d/dt log b = <grad sigma, grad sigma_t> / (grad sigma)^2
double log_amplitude_dt(const WkbFields& w, const Coord& x, double t) {
  const Coord g = w.sigma.gradient(x, t);
  return dot(g, w.sigma.gradient_time_derivative(x, t), w.dim) / dot(g, g, w.dim);
}

// grad log (grad sigma)^2
Coord grad_log_grad_sq(const WkbFields& w, const Coord& x, double t) {
  const Coord g = w.sigma.gradient(x, t);
  const Hessian H = w.sigma.hessian(x, t);
  const double g2 = dot(g, g, w.dim);
  Coord out{0.0, 0.0};
  for (int i = 0; i < w.dim; ++i) {
    double s = 0.0;
    for (int j = 0; j < w.dim; ++j) s += H[i][j] * g[j];
    out[i] = 2.0 * s / g2;
  }
  return out;
}

Coord minus(const Coord& a, const Coord& b) { return {a[0] - b[0], a[1] - b[1]}; }

// Slowly varying data of the first correction at one point.
struct CorrectionCoefficients {
  double K;   // sqrt(2m / (kappa^2 (grad sigma)^2))
  double C1;
  double d;   // <grad sigma, grad sigma1> / 2m
  double c;   // [lap sigma + <grad sigma, grad log (grad sigma)^2>] / 12m
  double e;   // (1/4)[(lap S - div A)/m + (d_t + <grad S - A, grad>/m) log (grad sigma)^2]
};

CorrectionCoefficients correction_coefficients(const WkbFields& w, const CorrectionParams& cp, const Coord& x,
                                               double t, const PotentialSpec& pot, const PhysParams& params) {
  const double m = params.mass;
  const Coord gs = w.sigma.gradient(x, t);
  const double g2 = dot(gs, gs, w.dim);
  if (!(g2 > 0.0)) throw Error("degenerate envelope: (grad sigma)^2 = 0");
  const Coord gl = grad_log_grad_sq(w, x, t);
  const Coord u = minus(w.S.gradient(x, t), pot.A(x, t));
  CorrectionCoefficients k;
  k.K = std::sqrt(2.0 * m / (params.kappa_squared() * g2));
  k.C1 = cp.C1 ? cp.C1(x, t) : 0.0;
  k.d = dot(gs, w.sigma1.gradient(x, t), w.dim) / (2.0 * m);
  k.c = (w.sigma.laplacian(x, t) + dot(gs, gl, w.dim)) / (12.0 * m);
  const double log_dt = 2.0 * dot(gs, w.sigma.gradient_time_derivative(x, t), w.dim) / g2;
  k.e = 0.25 * ((w.S.laplacian(x, t) - pot.div_A(x, t, w.dim)) / m + log_dt + dot(u, gl, w.dim) / m);
  return k;
}

struct CorrectionValues {
  double rho, P, Q;  // P = rho u, Q = rho v
};

// With s = sech, T = tanh, E = exp(-eps theta):
//   P = K [C1 s T + d s - c eps E],  Q = K [C1 s - e E],
// using sinh - eps cosh = -eps E and eps sinh - cosh = -E.
CorrectionValues correction_values(const CorrectionCoefficients& k, double b, double theta, double eps) {
  const double s = stable_sech(theta), T = std::tanh(theta), E = std::exp(-eps * theta);
  return {b * s, k.K * (k.C1 * s * T + k.d * s - k.c * eps * E), k.K * (k.C1 * s - k.e * E)};
}

}  // namespace

double envelope_amplitude(const WkbFields& w, const Coord& x, double t, const PhysParams& params) {
  const double g2 = grad_sq(w, x, t);
  if (!(g2 > 0.0)) throw Error("degenerate envelope: (grad sigma)^2 = 0");
  return std::sqrt(g2 / (2.0 * params.mass * params.kappa_squared()));
}

double fast_variable(const WkbFields& w, const Coord& x, double t, double hbar) {
  return w.sigma(x, t) / hbar + w.sigma1(x, t);
}

double envelope_rho(const WkbFields& w, const Coord& x, double t, const PhysParams& params) {
  return envelope_amplitude(w, x, t, params) * stable_sech(fast_variable(w, x, t, params.hbar));
}

ComplexField assemble_leading_term(const WkbFields& w, const Grid& grid, double t, const PhysParams& params) {
  params.validate();
  require_dim(w, grid, "assemble_leading_term");
  ComplexField out(grid, t, params.hbar);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const Coord x = grid.point(j);
    out[j] = std::polar(envelope_rho(w, x, t, params), phase(w, x, t, params.hbar));
  }
  return out;
}

ComplexField leading_term_time_derivative(const WkbFields& w, const Grid& grid, double t, const PhysParams& params) {
  ComplexField out = assemble_leading_term(w, grid, t, params);
  const double h = params.hbar;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const Coord x = grid.point(j);
    const double th = fast_variable(w, x, t, h);
    out[j] *= cplx(log_amplitude_dt(w, x, t) - std::tanh(th) * theta_dt(w, x, t, h), phase_dt(w, x, t, h));
  }
  return out;
}

ComplexField psi_via_representation(const WkbFields& w, const Grid& grid, double t, const PhysParams& params) {
  params.validate();
  require_dim(w, grid, "psi_via_representation");
  ComplexField out(grid, t, params.hbar);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const Coord x = grid.point(j);
    const double b = envelope_amplitude(w, x, t, params);
    const double th = fast_variable(w, x, t, params.hbar);
    const double ph = phase(w, x, t, params.hbar);
    if (std::abs(th) > 300.0) {
      out[j] = std::polar(b * stable_sech(th), ph);
      continue;
    }
    const cplx z = std::polar(std::exp(-th), ph);
    out[j] = 2.0 * b * z / (1.0 + std::norm(z));
  }
  return out;
}

ComplexField hj_residual(const WkbFields& w, const Grid& grid, double t, const PotentialSpec& pot,
                         const PhysParams& params) {
  params.validate();
  require_dim(w, grid, "hj_residual");
  const double m = params.mass;
  ComplexField out(grid, t, params.hbar);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const Coord x = grid.point(j);
    const Coord gS = w.S.gradient(x, t), gs = w.sigma.gradient(x, t), A = pot.A(x, t);
    cplx kin{};
    for (int i = 0; i < w.dim; ++i) {
      const cplx gi(gS[i] - A[i], gs[i]);
      kin += gi * gi;
    }
    out[j] = cplx(w.S.time_derivative(x, t), w.sigma.time_derivative(x, t)) + pot.V(x, t) + kin / (2.0 * m);
  }
  return out;
}

TransportResiduals transport_residuals(const WkbFields& w, const Grid& grid, double t, const PotentialSpec& pot,
                                       const PhysParams& params) {
  params.validate();
  require_dim(w, grid, "transport_residuals");
  const double m = params.mass;
  const int n = w.dim;
  TransportResiduals r{{grid, std::vector<double>(grid.size())}, {grid, std::vector<double>(grid.size())}};
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const Coord x = grid.point(j);
    const Coord gs = w.sigma.gradient(x, t);
    const double g2 = dot(gs, gs, n);
    if (!(g2 > 0.0)) throw Error("transport_residuals: (grad sigma)^2 = 0, log term undefined");
    const Coord gl = grad_log_grad_sq(w, x, t);
    const Coord u = minus(w.S.gradient(x, t), pot.A(x, t));
    const Coord gS1 = w.S1.gradient(x, t), gs1 = w.sigma1.gradient(x, t);
    const double log_dt = 2.0 * dot(gs, w.sigma.gradient_time_derivative(x, t), n) / g2;

    r.phase.values[j] = w.S1.time_derivative(x, t) + dot(u, gS1, n) / m - dot(gs, gs1, n) / m +
                        w.sigma.laplacian(x, t) / (2.0 * m) + dot(gs, gl, n) / (2.0 * m);
    r.envelope.values[j] =
        w.sigma1.time_derivative(x, t) + dot(u, gs1, n) / m + dot(gs, gS1, n) / m -
        0.5 * ((w.S.laplacian(x, t) - pot.div_A(x, t, n)) / m + log_dt + dot(u, gl, n) / m);
  }
  return r;
}

TransportResiduals transport_residuals_1d(const WkbFields& w, const Grid& grid, double t, const PhysParams& params) {
  params.validate();
  if (w.dim != 1 || grid.dim() != 1) throw Error("transport_residuals_1d: requires 1D fields and grid");
  const double m = params.mass;
  TransportResiduals r{{grid, std::vector<double>(grid.size())}, {grid, std::vector<double>(grid.size())}};
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const Coord x = grid.point(j);
    const double Sx = w.S.gradient(x, t)[0];
    const double Sxx = w.S.hessian(x, t)[0][0];
    const double sx = w.sigma.gradient(x, t)[0];
    const double sxx = w.sigma.hessian(x, t)[0][0];
    const double sxt = w.sigma.gradient_time_derivative(x, t)[0];
    const double S1x = w.S1.gradient(x, t)[0];
    const double s1x = w.sigma1.gradient(x, t)[0];
    if (sx == 0.0) throw Error("transport_residuals_1d: sigma_x = 0");
    r.phase.values[j] = w.S1.time_derivative(x, t) + Sx * S1x / m - sx * s1x / m + 1.5 * sxx / m;
    r.envelope.values[j] = w.sigma1.time_derivative(x, t) + Sx * s1x / m + sx * S1x / m -
                           0.5 * (Sxx / m + 2.0 * sxt / sx + (2.0 / m) * (Sx / sx) * sxx);
  }
  return r;
}

RealField first_integral_residual(const WkbFields& w, const Grid& grid, double t, const PhysParams& params,
                                  double envelope_scale) {
  params.validate();
  require_dim(w, grid, "first_integral_residual");
  const double m = params.mass, k2 = params.kappa_squared();
  RealField out{grid, std::vector<double>(grid.size())};
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const Coord x = grid.point(j);
    const double g2 = grad_sq(w, x, t);
    if (!(g2 > 0.0)) throw Error("degenerate envelope: (grad sigma)^2 = 0");
    const double b = std::sqrt(g2 / (2.0 * m * k2));
    const double th = fast_variable(w, x, t, params.hbar);
    const double rho = envelope_scale * b * stable_sech(th);
    const double rho_theta = -rho * std::tanh(th);
    const double gap = b * b - rho * rho;
    if (gap < -1e-12 * b * b)
      throw Error("first_integral_residual: |rho| exceeds b at x=" + std::to_string(x[0]) +
                  ", fields are inconsistent");
    const double sgn = th < 0.0 ? -1.0 : 1.0;
    out.values[j] = rho_theta + sgn * std::sqrt(2.0 * m * k2 / g2) * std::sqrt(std::max(gap, 0.0)) * rho;
  }
  return out;
}

FirstCorrection first_correction_uv(const WkbFields& w, const CorrectionParams& cp, const Grid& grid, double t,
                                    const PotentialSpec& pot, const PhysParams& params) {
  params.validate();
  require_dim(w, grid, "first_correction_uv");
  const std::size_t n = grid.size();
  FirstCorrection out{{grid, std::vector<double>(n)},
                      {grid, std::vector<double>(n)},
                      {grid, std::vector<double>(n)},
                      {grid, std::vector<double>(n)}};
  for (std::size_t j = 0; j < n; ++j) {
    const Coord x = grid.point(j);
    const auto k = correction_coefficients(w, cp, x, t, pot, params);
    const double b = envelope_amplitude(w, x, t, params);
    const auto c = correction_values(k, b, fast_variable(w, x, t, params.hbar), correction_sign(w.sigma(x, t)));
    out.rho_u.values[j] = c.P;
    out.rho_v.values[j] = c.Q;
    if (c.rho >= 1e-300) {
      out.u.values[j] = c.P / c.rho;
      out.v.values[j] = c.Q / c.rho;
    }
  }
  return out;
}

ComplexField corrected_field(const WkbFields& w, const CorrectionParams& cp, const Grid& grid, double t,
                             const PotentialSpec& pot, const PhysParams& params) {
  params.validate();
  require_dim(w, grid, "corrected_field");
  const double h = params.hbar;
  ComplexField out(grid, t, h);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const Coord x = grid.point(j);
    const auto k = correction_coefficients(w, cp, x, t, pot, params);
    const double b = envelope_amplitude(w, x, t, params);
    const auto c = correction_values(k, b, fast_variable(w, x, t, h), correction_sign(w.sigma(x, t)));
    out[j] = cplx(c.rho + h * c.P, h * c.Q) * std::polar(1.0, phase(w, x, t, h));
  }
  return out;
}

ComplexField corrected_field_time_derivative(const WkbFields& w, const CorrectionParams& cp, const Grid& grid,
                                             double t, const PotentialSpec& pot, const PhysParams& params) {
  params.validate();
  require_dim(w, grid, "corrected_field_time_derivative");
  const double h = params.hbar;
  const double dt = 1e-5 * std::max(1.0, std::abs(t));
  ComplexField out(grid, t, h);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const Coord x = grid.point(j);
    const double eps = correction_sign(w.sigma(x, t));
    const double b = envelope_amplitude(w, x, t, params);
    const double th = fast_variable(w, x, t, h);
    const auto k = correction_coefficients(w, cp, x, t, pot, params);
    const auto kp = correction_coefficients(w, cp, x, t + dt, pot, params);
    const auto km = correction_coefficients(w, cp, x, t - dt, pot, params);
    const auto c = correction_values(k, b, th, eps);

    const double s = stable_sech(th), T = std::tanh(th), E = std::exp(-eps * th);
    const double th_t = theta_dt(w, x, t, h);
    const double logb_t = log_amplitude_dt(w, x, t);
    auto diff = [dt](double p, double m) { return (p - m) / (2.0 * dt); };

    // K b = 1/kappa^2, so d/dt log K = -d/dt log b.
    const double P_slow = -logb_t * c.P + k.K * (diff(kp.C1, km.C1) * s * T + diff(kp.d, km.d) * s -
                                                 diff(kp.c, km.c) * eps * E);
    const double Q_slow = -logb_t * c.Q + k.K * (diff(kp.C1, km.C1) * s - diff(kp.e, km.e) * E);
    const double P_th = k.K * (k.C1 * s * (1.0 - 2.0 * T * T) - k.d * s * T + k.c * E);
    const double Q_th = k.K * (-k.C1 * s * T + k.e * eps * E);
    const double rho_t = c.rho * (logb_t - T * th_t);

    const cplx amp(c.rho + h * c.P, h * c.Q);
    const cplx amp_t(rho_t + h * (P_th * th_t + P_slow), h * (Q_th * th_t + Q_slow));
    out[j] = (amp_t + cplx(0.0, phase_dt(w, x, t, h)) * amp) * std::polar(1.0, phase(w, x, t, h));
  }
  return out;
}

ComplexField linear_equation_residual(const WkbFields& w, const Grid& grid, double t, const PotentialSpec& pot,
                                      const PhysParams& params) {
  params.validate();
  require_dim(w, grid, "linear_equation_residual");
  const double m = params.mass, h = params.hbar;
  const int n = w.dim;
  const cplx I(0.0, 1.0);
  ComplexField out(grid, t, h);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const Coord x = grid.point(j);
    // E = i (W/hbar + W1), W = S + i sigma, W1 = S1 + i sigma1; L Z / Z in terms of E.
    const Coord gS = w.S.gradient(x, t), gs = w.sigma.gradient(x, t);
    const Coord gS1 = w.S1.gradient(x, t), gs1 = w.sigma1.gradient(x, t);
    const Coord A = pot.A(x, t);
    const cplx E_t = I * (cplx(w.S.time_derivative(x, t), w.sigma.time_derivative(x, t)) / h +
                          cplx(w.S1.time_derivative(x, t), w.sigma1.time_derivative(x, t)));
    const cplx lapE = I * (cplx(w.S.laplacian(x, t), w.sigma.laplacian(x, t)) / h +
                           cplx(w.S1.laplacian(x, t), w.sigma1.laplacian(x, t)));
    cplx gradE2{}, AgradE{};
    double A2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const cplx gEi = I * (cplx(gS[i], gs[i]) / h + cplx(gS1[i], gs1[i]));
      gradE2 += gEi * gEi;
      AgradE += A[i] * gEi;
      A2 += A[i] * A[i];
    }
    const cplx kinetic = -h * h * (lapE + gradE2) + 2.0 * I * h * AgradE + I * h * pot.div_A(x, t, n) + A2;
    out[j] = -I * h * E_t + kinetic / (2.0 * m) + pot.V(x, t);
  }
  return out;
}

}  // namespace scnlse
