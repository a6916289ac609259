#include "scnlse/families.hpp"

#include <cmath>
#include <memory>
#include <string>

#include "scnlse/error.hpp"
#include "scnlse/quadrature.hpp"

namespace scnlse {

// ---------------------------------------------------------------------------
// AnalyticFunction

AnalyticFunction AnalyticFunction::zero() {
  AnalyticFunction z;
  z.f = [](cplx) { return cplx{}; };
  z.df = z.f;
  z.d2f = z.f;
  z.zero_ = true;
  return z;
}

AnalyticFunction AnalyticFunction::polynomial(std::vector<cplx> coeffs) {
  auto c = std::make_shared<const std::vector<cplx>>(std::move(coeffs));
  auto horner = [](const std::vector<cplx>& a, cplx z) {
    cplx v{};
    for (auto it = a.rbegin(); it != a.rend(); ++it) v = v * z + *it;
    return v;
  };
  auto derive = [](const std::vector<cplx>& a) {
    std::vector<cplx> d;
    for (std::size_t k = 1; k < a.size(); ++k) d.push_back(double(k) * a[k]);
    return d;
  };
  auto d1 = std::make_shared<const std::vector<cplx>>(derive(*c));
  auto d2 = std::make_shared<const std::vector<cplx>>(derive(*d1));
  AnalyticFunction p;
  p.f = [c, horner](cplx z) { return horner(*c, z); };
  p.df = [d1, horner](cplx z) { return horner(*d1, z); };
  p.d2f = [d2, horner](cplx z) { return horner(*d2, z); };
  p.zero_ = true;
  for (const auto& v : *c)
    if (v != cplx{}) p.zero_ = false;
  return p;
}

void SolitonParams::validate() const {
  if (!(eta > 0)) throw Error("soliton: eta must be positive");
  if (!f.f || !f.df || !f.d2f) throw Error("soliton: correction function f needs f, f' and f''");
}

// ---------------------------------------------------------------------------
// SeparatedTerms

double SeparatedTerms::V1_prime(double x) const {
  if (!v1) return 0.0;
  if (v1_prime) return v1_prime(x);
  const double h = 1e-6 * std::max(1.0, std::abs(x));
  return (v1(x + h) - v1(x - h)) / (2.0 * h);
}

double SeparatedTerms::V0_integral(double t) const {
  if (v0_integral) return v0_integral(t);
  if (!v0) return 0.0;
  return adaptive_simpson(v0, 0.0, t, 1e-12);
}

PotentialSpec SeparatedTerms::potential() const {
  auto self = std::make_shared<const SeparatedTerms>(*this);
  std::function<double(double)> v0f;
  if (v0) v0f = [self](double t) { return self->v0(t); };
  return PotentialSpec::separated(
      v0f, [self](const Coord& x) { return self->V1(x[0]); },
      [self](const Coord& x) { return Coord{self->V1_prime(x[0]), 0.0}; });
}

// ---------------------------------------------------------------------------
// One soliton

namespace {

struct SolitonPoint {
  double arg;     // sech argument
  double phase;   // total phase in radians
  double arg_t;
  double phase_t;
};

SolitonPoint soliton_point(const SolitonParams& sp, double x, double t, const PhysParams& pp) {
  const double m = pp.mass, h = pp.hbar;
  const cplx a = sp.a(m);
  const cplx zeta = cplx(x, 0.0) - a * t;
  const cplx fz = sp.f.f(zeta);
  const cplx dfz = sp.f.df(zeta);
  SolitonPoint s;
  s.arg = (2.0 * sp.eta / h) * (x - sp.x0 - (2.0 * sp.xi / m) * t) + fz.imag();
  s.phase = (2.0 * sp.xi * x - (2.0 / m) * (sp.xi * sp.xi - sp.eta * sp.eta) * t + sp.phi0) / h + fz.real();
  const cplx dft = -a * dfz;
  s.arg_t = -(4.0 * sp.eta * sp.xi) / (m * h) + dft.imag();
  s.phase_t = -(2.0 / (m * h)) * (sp.xi * sp.xi - sp.eta * sp.eta) + dft.real();
  return s;
}

void require_1d(const Grid& g, const char* what) {
  if (g.dim() != 1) throw Error(std::string(what) + ": requires a 1D grid");
}

}  // namespace

ComplexField one_soliton(const SolitonParams& sp, const Grid& grid, double t, const PhysParams& params) {
  sp.validate();
  params.validate();
  require_1d(grid, "one_soliton");
  const double amp = -2.0 * sp.eta / (params.kappa * std::sqrt(2.0 * params.mass));
  ComplexField out(grid, t, params.hbar);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const auto s = soliton_point(sp, grid.coordinate(0, j), t, params);
    out[j] = amp * stable_sech(s.arg) * std::polar(1.0, s.phase);
  }
  return out;
}

ComplexField one_soliton_time_derivative(const SolitonParams& sp, const Grid& grid, double t,
                                         const PhysParams& params) {
  ComplexField psi = one_soliton(sp, grid, t, params);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const auto s = soliton_point(sp, grid.coordinate(0, j), t, params);
    psi[j] *= cplx(-std::tanh(s.arg) * s.arg_t, s.phase_t);
  }
  return psi;
}

WkbFields soliton_correction_fields(const SolitonParams& sp, const PhysParams& params) {
  sp.validate();
  params.validate();
  const double m = params.mass;
  const double a1 = sp.alpha1(m), a2 = sp.alpha2(), b1 = sp.beta1(m), b2 = sp.beta2();
  const double phi0 = sp.phi0, x0 = sp.x0;
  const cplx a = sp.a(m);
  const AnalyticFunction f = sp.f;
  auto zeta = [a](const Coord& x, double t) { return cplx(x[0], 0.0) - a * t; };

  WkbFields w;
  w.dim = 1;
  w.family = "soliton";

  w.S.dim = 1;
  w.S.value = [=](const Coord& x, double t) { return a1 * t + a2 * x[0] + phi0; };
  w.S.grad = [=](const Coord&, double) { return Coord{a2, 0.0}; };
  w.S.hess = [](const Coord&, double) { return Hessian{}; };
  w.S.dt = [=](const Coord&, double) { return a1; };
  w.S.grad_dt = [](const Coord&, double) { return Coord{0.0, 0.0}; };

  w.sigma.dim = 1;
  w.sigma.value = [=](const Coord& x, double t) { return b1 * t + b2 * (x[0] - x0); };
  w.sigma.grad = [=](const Coord&, double) { return Coord{b2, 0.0}; };
  w.sigma.hess = [](const Coord&, double) { return Hessian{}; };
  w.sigma.dt = [=](const Coord&, double) { return b1; };
  w.sigma.grad_dt = [](const Coord&, double) { return Coord{0.0, 0.0}; };

  // S1 + i sigma1 = f(x - a t): real and imaginary parts share evaluators.
  auto part = [&](bool imag) {
    ScalarField s;
    s.dim = 1;
    auto pick = [imag](cplx z) { return imag ? z.imag() : z.real(); };
    s.value = [=](const Coord& x, double t) { return pick(f.f(zeta(x, t))); };
    s.grad = [=](const Coord& x, double t) { return Coord{pick(f.df(zeta(x, t))), 0.0}; };
    s.hess = [=](const Coord& x, double t) {
      Hessian H{};
      H[0][0] = pick(f.d2f(zeta(x, t)));
      return H;
    };
    s.dt = [=](const Coord& x, double t) { return pick(-a * f.df(zeta(x, t))); };
    s.grad_dt = [=](const Coord& x, double t) { return Coord{pick(-a * f.d2f(zeta(x, t))), 0.0}; };
    return s;
  };
  w.S1 = part(false);
  w.sigma1 = part(true);
  return w;
}

// ---------------------------------------------------------------------------
// Separated class 1

namespace {

void check_domain(const Interval& d, const char* who) {
  if (!(d.hi > d.lo)) throw Error(std::string(who) + ": empty domain");
}

// Samples that the tabulation will touch: nodes of the table.
template <class F>
void scan_nodes(const Interval& d, std::size_t cells, F&& check) {
  const double h = (d.hi - d.lo) / double(cells);
  for (std::size_t k = 0; k <= cells; ++k) check(d.lo + double(k) * h);
}

}  // namespace

WkbFields separated_class1(const SeparatedClass1Params& p1, const Interval& domain, const PhysParams& params) {
  params.validate();
  check_domain(domain, "separated_class1");
  if (p1.anchor < domain.lo || p1.anchor > domain.hi) throw Error("separated_class1: anchor outside domain");
  const double m = params.mass;
  auto terms = std::make_shared<const SeparatedTerms>(p1.terms);
  const double c1 = p1.c1, c2 = p1.c2, c3 = p1.c3, c4 = p1.c4;

  scan_nodes(domain, p1.cells, [&](double x) {
    const double rad = c1 + terms->V1(x);
    if (!std::isfinite(rad)) throw Error("separated_class1: v1 is not finite on the domain");
    if (rad < 0) throw Error("separated_class1: negative radicand c1 + v1(x) at x=" + std::to_string(x));
    if (rad == 0) throw Error("separated_class1: sigma_x vanishes at x=" + std::to_string(x));
  });

  auto sigma_x = [terms, m, c1](double x) { return std::sqrt(2.0 * m * (c1 + terms->V1(x))); };
  auto sigma_xx = [terms, m, sigma_x](double x) { return m * terms->V1_prime(x) / sigma_x(x); };
  auto sigma_tab = std::make_shared<const CumulativeTable>(sigma_x, domain.lo, domain.hi, p1.anchor, p1.cells);
  auto inv_tab = std::make_shared<const CumulativeTable>([sigma_x](double x) { return 1.0 / sigma_x(x); },
                                                         domain.lo, domain.hi, p1.anchor, p1.cells);

  WkbFields w;
  w.dim = 1;
  w.family = "separated1";

  w.S.dim = 1;
  w.S.value = [=](const Coord&, double t) { return c1 * t - terms->V0_integral(t); };
  w.S.grad = [](const Coord&, double) { return Coord{0.0, 0.0}; };
  w.S.hess = [](const Coord&, double) { return Hessian{}; };
  w.S.dt = [=](const Coord&, double t) { return c1 - terms->V0(t); };
  w.S.grad_dt = [](const Coord&, double) { return Coord{0.0, 0.0}; };

  w.sigma.dim = 1;
  w.sigma.value = [=](const Coord& x, double) { return (*sigma_tab)(x[0]); };
  w.sigma.grad = [=](const Coord& x, double) { return Coord{sigma_x(x[0]), 0.0}; };
  w.sigma.hess = [=](const Coord& x, double) {
    Hessian H{};
    H[0][0] = sigma_xx(x[0]);
    return H;
  };
  w.sigma.dt = [](const Coord&, double) { return 0.0; };
  w.sigma.grad_dt = [](const Coord&, double) { return Coord{0.0, 0.0}; };

  w.S1 = ScalarField::constant(1, 0.0);
  w.S1.value = [=](const Coord&, double t) { return c2 * t + c3; };
  w.S1.dt = [=](const Coord&, double) { return c2; };

  w.sigma1.dim = 1;
  w.sigma1.value = [=](const Coord& x, double) {
    return 1.5 * std::log(std::abs(sigma_x(x[0]))) + m * c2 * (*inv_tab)(x[0]) + c4;
  };
  w.sigma1.grad = [=](const Coord& x, double) {
    const double sx = sigma_x(x[0]);
    return Coord{1.5 * sigma_xx(x[0]) / sx + m * c2 / sx, 0.0};
  };
  w.sigma1.dt = [](const Coord&, double) { return 0.0; };
  w.sigma1.grad_dt = [](const Coord&, double) { return Coord{0.0, 0.0}; };
  return w;
}

// ---------------------------------------------------------------------------
// Separated class 2

Class2Derivatives class2_derivatives(const SeparatedClass2Params& p2, double x, double m) {
  const double u = p2.terms.V1(x) + p2.c3;
  const double R = std::hypot(u, p2.c1);
  // q = (p')^2 / m, the positive root of q^2 + 2 u q - c1^2 = 0, in a cancellation-free form.
  const double q = u > 0 ? (p2.c1 * p2.c1) / (u + R) : R - u;
  if (!(q > 0) || !std::isfinite(q)) throw Error("separated_class2: p' vanishes at x=" + std::to_string(x));
  Class2Derivatives d;
  d.p1 = double(p2.p_sign) * std::sqrt(m * q);
  d.p2 = -p2.terms.V1_prime(x) * d.p1 / (2.0 * R);
  const double p1_2 = d.p1 * d.p1;
  const double c1 = p2.c1;
  d.f1 = (c1 * m * m * p2.a2 * d.p1 - m * p2.a1 * p1_2 * d.p1 - c1 * m * d.p1 * d.p2) /
         (p1_2 * p1_2 + c1 * c1 * m * m);
  d.g1 = (m / d.p1) * (c1 * d.f1 / d.p1 - d.p2 / (2.0 * m) - p2.a2);
  return d;
}

WkbFields separated_class2(const SeparatedClass2Params& p2, const Interval& domain, const PhysParams& params) {
  params.validate();
  check_domain(domain, "separated_class2");
  if (p2.p_sign != 1 && p2.p_sign != -1) throw Error("separated_class2: p_sign must be +1 or -1");
  if (p2.anchor < domain.lo || p2.anchor > domain.hi) throw Error("separated_class2: anchor outside domain");
  const double m = params.mass;
  auto cfg = std::make_shared<const SeparatedClass2Params>(p2);
  scan_nodes(domain, p2.cells, [&](double x) {
    const auto d = class2_derivatives(*cfg, x, m);
    if (!std::isfinite(d.p2) || !std::isfinite(d.f1) || !std::isfinite(d.g1))
      throw Error("separated_class2: non-finite derivative at x=" + std::to_string(x));
    if (std::abs(d.p1) < 1e-12) throw Error("separated_class2: p' vanishes at x=" + std::to_string(x));
  });
  auto der = [cfg, m](double x) { return class2_derivatives(*cfg, x, m); };
  auto tab = [&](std::function<double(double)> g) {
    return std::make_shared<const CumulativeTable>(std::move(g), domain.lo, domain.hi, p2.anchor, p2.cells);
  };
  auto p_tab = tab([der](double x) { return der(x).p1; });
  auto j_tab = tab([der](double x) { return 1.0 / der(x).p1; });
  auto f_tab = tab([der](double x) { return der(x).f1; });
  auto g_tab = tab([der](double x) { return der(x).g1; });

  const double c1 = p2.c1, c2 = p2.c2, c3 = p2.c3, c4 = p2.c4;
  const double a1 = p2.a1, a2 = p2.a2, a3 = p2.a3, a4 = p2.a4;

  WkbFields w;
  w.dim = 1;
  w.family = "separated2";

  w.S.dim = 1;
  w.S.value = [=](const Coord& x, double t) { return c3 * t - cfg->terms.V0_integral(t) + (*p_tab)(x[0]) + c4; };
  w.S.grad = [=](const Coord& x, double) { return Coord{der(x[0]).p1, 0.0}; };
  w.S.hess = [=](const Coord& x, double) {
    Hessian H{};
    H[0][0] = der(x[0]).p2;
    return H;
  };
  w.S.dt = [=](const Coord&, double t) { return c3 - cfg->terms.V0(t); };
  w.S.grad_dt = [](const Coord&, double) { return Coord{0.0, 0.0}; };

  w.sigma.dim = 1;
  w.sigma.value = [=](const Coord& x, double t) { return c1 * (t - m * (*j_tab)(x[0])) + c2; };
  w.sigma.grad = [=](const Coord& x, double) { return Coord{-c1 * m / der(x[0]).p1, 0.0}; };
  w.sigma.hess = [=](const Coord& x, double) {
    const auto d = der(x[0]);
    Hessian H{};
    H[0][0] = c1 * m * d.p2 / (d.p1 * d.p1);
    return H;
  };
  w.sigma.dt = [=](const Coord&, double) { return c1; };
  w.sigma.grad_dt = [](const Coord&, double) { return Coord{0.0, 0.0}; };

  w.S1.dim = 1;
  w.S1.value = [=](const Coord& x, double t) { return a1 * t + a3 + (*f_tab)(x[0]); };
  w.S1.grad = [=](const Coord& x, double) { return Coord{der(x[0]).f1, 0.0}; };
  w.S1.dt = [=](const Coord&, double) { return a1; };
  w.S1.grad_dt = [](const Coord&, double) { return Coord{0.0, 0.0}; };

  w.sigma1.dim = 1;
  w.sigma1.value = [=](const Coord& x, double t) { return a2 * t + a4 + (*g_tab)(x[0]); };
  w.sigma1.grad = [=](const Coord& x, double) { return Coord{der(x[0]).g1, 0.0}; };
  w.sigma1.dt = [=](const Coord&, double) { return a2; };
  w.sigma1.grad_dt = [](const Coord&, double) { return Coord{0.0, 0.0}; };
  return w;
}

// ---------------------------------------------------------------------------
// Cylindrical

namespace {

double radius(const Coord& x) {
  const double r = std::hypot(x[0], x[1]);
  if (r == 0.0) throw Error("cylindrical: r = 0 is a log singularity; use an axis-offset grid");
  return r;
}

// (delta_ij - xhat_i xhat_j) / r
Hessian transverse_projector(const Coord& x, double r) {
  Hessian P{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) P[i][j] = ((i == j ? 1.0 : 0.0) - x[i] * x[j] / (r * r)) / r;
  return P;
}

}  // namespace

WkbFields cylindrical_fields(const CylindricalParams& cp, const PhysParams& params) {
  params.validate();
  if (cp.c1 == 0.0) throw Error("cylindrical: c1 must be nonzero");
  const double m = params.mass;
  const CylindricalParams c = cp;

  WkbFields w;
  w.dim = 2;
  w.family = "cylindrical";

  w.S = ScalarField::constant(2, 0.0);
  w.S.value = [=](const Coord&, double t) { return c.c1 * c.c1 * t / (2.0 * m) + c.c2; };
  w.S.dt = [=](const Coord&, double) { return c.c1 * c.c1 / (2.0 * m); };

  w.sigma.dim = 2;
  w.sigma.value = [=](const Coord& x, double) { return c.c1 * radius(x) + c.a1; };
  w.sigma.grad = [=](const Coord& x, double) {
    const double r = radius(x);
    return Coord{c.c1 * x[0] / r, c.c1 * x[1] / r};
  };
  w.sigma.hess = [=](const Coord& x, double) {
    Hessian H = transverse_projector(x, radius(x));
    for (auto& row : H)
      for (auto& v : row) v *= c.c1;
    return H;
  };
  w.sigma.dt = [](const Coord&, double) { return 0.0; };
  w.sigma.grad_dt = [](const Coord&, double) { return Coord{0.0, 0.0}; };

  w.S1.dim = 2;
  w.S1.value = [=](const Coord& x, double t) { return c.a2 * c.c1 * t / m - m * c.b1 * radius(x) + c.c3; };
  w.S1.grad = [=](const Coord& x, double) {
    const double r = radius(x);
    return Coord{-m * c.b1 * x[0] / r, -m * c.b1 * x[1] / r};
  };
  w.S1.hess = [=](const Coord& x, double) {
    Hessian H = transverse_projector(x, radius(x));
    for (auto& row : H)
      for (auto& v : row) v *= -m * c.b1;
    return H;
  };
  w.S1.dt = [=](const Coord&, double) { return c.a2 * c.c1 / m; };
  w.S1.grad_dt = [](const Coord&, double) { return Coord{0.0, 0.0}; };

  w.sigma1.dim = 2;
  w.sigma1.value = [=](const Coord& x, double t) {
    const double r = radius(x);
    return c.a2 * r + c.c1 * c.b1 * t + 0.5 * std::log(r) + c.a3;
  };
  w.sigma1.grad = [=](const Coord& x, double) {
    const double r = radius(x);
    const double g = c.a2 / r + 0.5 / (r * r);
    return Coord{g * x[0], g * x[1]};
  };
  w.sigma1.hess = [=](const Coord& x, double) {
    const double r = radius(x);
    const Hessian P = transverse_projector(x, r);
    Hessian H{};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        H[i][j] = c.a2 * P[i][j] + ((i == j ? 1.0 : 0.0) - 2.0 * x[i] * x[j] / (r * r)) / (2.0 * r * r);
    return H;
  };
  w.sigma1.dt = [=](const Coord&, double) { return c.c1 * c.b1; };
  w.sigma1.grad_dt = [](const Coord&, double) { return Coord{0.0, 0.0}; };
  return w;
}

ComplexField cylindrical_special(const CylindricalParams& cp, const Grid& grid2d, double t,
                                 const PhysParams& params) {
  params.validate();
  if (grid2d.dim() != 2) throw Error("cylindrical_special: requires a 2D grid");
  if (cp.c1 == 0.0) throw Error("cylindrical: c1 must be nonzero");
  const double m = params.mass, h = params.hbar;
  const double amp = std::abs(cp.c1) / (params.kappa * std::sqrt(2.0 * m));
  ComplexField out(grid2d, t, h);
  for (std::size_t j = 0; j < grid2d.size(); ++j) {
    const double r = radius(grid2d.point(j));
    const double arg = (cp.c1 / h + cp.a2) * r + cp.c1 * cp.b1 * t + 0.5 * std::log(r) + cp.a1 / h + cp.a3;
    const double phase =
        (cp.c1 * cp.c1 / (2.0 * m * h) + cp.a2 * cp.c1 / m) * t - m * cp.b1 * r + cp.c2 / h + cp.c3;
    out[j] = amp * stable_sech(arg) * std::polar(1.0, phase);
  }
  return out;
}

}  // namespace scnlse
