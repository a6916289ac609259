#include "scnlse/moments.hpp"

#include <cmath>
#include <string>

#include "scnlse/error.hpp"
#include "scnlse/spectral.hpp"

namespace scnlse {

namespace {

int order(const MultiIndex& a) { return a[0] + a[1]; }

void check_index(const MultiIndex& a, int dim, const char* what) {
  for (int i = 0; i < 2; ++i) {
    if (a[i] < 0) throw Error(std::string("centered_moment: negative exponent in ") + what);
    if (i >= dim && a[i] != 0) throw Error(std::string("centered_moment: ") + what + " exceeds the field dimension");
  }
}

// (p_axis - p0) psi
ComplexField shifted_momentum(const ComplexField& psi, int axis, double p0) {
  ComplexField out = apply_momentum(psi, axis);
  for (std::size_t j = 0; j < out.size(); ++j) out[j] -= p0 * psi[j];
  return out;
}

// (x_axis - x0) psi
ComplexField shifted_position(const ComplexField& psi, int axis, double x0) {
  ComplexField out = psi;
  for (std::size_t j = 0; j < out.size(); ++j) out[j] *= psi.grid.point(j)[axis] - x0;
  return out;
}

// Applies the momentum factors of alpha, or the position factors of beta.
ComplexField apply_factors(const ComplexField& psi, const MultiIndex& alpha, const MultiIndex& beta,
                           const Coord& xc, const Coord& pc, bool momentum) {
  ComplexField out = psi;
  const MultiIndex& idx = momentum ? alpha : beta;
  for (int axis = 0; axis < 2; ++axis)
    for (int k = 0; k < idx[axis]; ++k)
      out = momentum ? shifted_momentum(out, axis, pc[axis]) : shifted_position(out, axis, xc[axis]);
  return out;
}

}  // namespace

Coord mean_position(const ComplexField& psi) {
  const double N = norm_squared(psi);
  Coord m{0.0, 0.0};
  for (std::size_t j = 0; j < psi.size(); ++j) {
    const Coord x = psi.grid.point(j);
    const double d = std::norm(psi[j]);
    for (int a = 0; a < psi.grid.dim(); ++a) m[a] += x[a] * d;
  }
  const double w = psi.grid.cell_volume() / N;
  return {m[0] * w, m[1] * w};
}

Coord mean_momentum(const ComplexField& psi) {
  const double N = norm_squared(psi);
  Coord m{0.0, 0.0};
  for (int a = 0; a < psi.grid.dim(); ++a) {
    const cplx v = inner_product(psi, apply_momentum(psi, a)) / N;
    if (std::abs(v.imag()) > 1e-8 * std::max(1.0, std::abs(v.real())))
      throw Error("mean_momentum: imaginary part " + std::to_string(v.imag()) +
                  " indicates an under-resolved field");
    m[a] = v.real();
  }
  return m;
}

double centered_moment(const ComplexField& psi, const MultiIndex& alpha, const MultiIndex& beta,
                       const std::optional<PhasePoint>& z) {
  const int dim = psi.grid.dim();
  check_index(alpha, dim, "alpha");
  check_index(beta, dim, "beta");
  const int na = order(alpha), nb = order(beta);
  if (na + nb > 2) throw Error("centered_moment: orders above 2 are not supported");
  if (na + nb == 0) return 1.0;
  const double N = norm_squared(psi);
  const Coord xc = z ? z->x : mean_position(psi);
  const Coord pc = z ? z->p : (na > 0 ? mean_momentum(psi) : Coord{0.0, 0.0});

  if (na == 0) {
    double s = 0.0;
    for (std::size_t j = 0; j < psi.size(); ++j) {
      const Coord x = psi.grid.point(j);
      double f = 1.0;
      for (int a = 0; a < dim; ++a) f *= std::pow(x[a] - xc[a], beta[a]);
      s += f * std::norm(psi[j]);
    }
    return s * psi.grid.cell_volume() / N;
  }
  // Every factor is Hermitian. Splitting the product as <A psi, B psi> with
  // commuting A, B gives the expectation directly; for the mixed second
  // moment Re<dp psi, dx psi> is the symmetrized (Weyl) product.
  MultiIndex left_alpha{0, 0}, right_alpha = alpha;
  if (nb == 0 && na == 2) {
    const int first = alpha[0] > 0 ? 0 : 1;
    left_alpha[first] = 1;
    right_alpha[first] -= 1;
    const ComplexField A = apply_factors(psi, left_alpha, {0, 0}, xc, pc, true);
    const ComplexField B = apply_factors(psi, right_alpha, {0, 0}, xc, pc, true);
    return inner_product(A, B).real() / N;
  }
  if (nb == 0) {
    const ComplexField B = apply_factors(psi, alpha, {0, 0}, xc, pc, true);
    return inner_product(psi, B).real() / N;
  }
  const ComplexField A = apply_factors(psi, alpha, {0, 0}, xc, pc, true);
  const ComplexField B = apply_factors(psi, {0, 0}, beta, xc, pc, false);
  return inner_product(A, B).real() / N;
}

MomentRecord moment_record(const ComplexField& psi, const std::optional<PhasePoint>& z) {
  MomentRecord rec;
  rec.t = psi.time;
  rec.hbar = psi.hbar;
  rec.dim = psi.grid.dim();
  rec.mean_x = mean_position(psi);
  rec.mean_p = mean_momentum(psi);
  const PhasePoint c = z ? *z : PhasePoint{rec.dim, rec.mean_x, rec.mean_p, psi.time};
  const int d = rec.dim;
  for (int i = 0; i < 2 * d; ++i)
    for (int j = i; j < 2 * d; ++j) {
      MultiIndex alpha{0, 0}, beta{0, 0};
      for (int k : {i, j}) {
        if (k < d)
          beta[k] += 1;
        else
          alpha[k - d] += 1;
      }
      rec.delta2[i][j] = rec.delta2[j][i] = centered_moment(psi, alpha, beta, c);
    }
  return rec;
}

bool satisfies_uncertainty(const MomentRecord& rec, double tol) {
  const double bound = 0.25 * rec.hbar * rec.hbar;
  for (int a = 0; a < rec.dim; ++a) {
    if (rec.var_x(a) < 0.0 || rec.var_p(a) < 0.0) return false;
    if (rec.var_x(a) * rec.var_p(a) < bound * (1.0 - tol)) return false;
  }
  return true;
}

ScalingReport fit_power_law(const std::vector<double>& hbars, const std::vector<double>& values) {
  if (hbars.size() != values.size()) throw Error("fit_power_law: size mismatch");
  if (hbars.size() < 3) throw Error("fit_power_law: need at least 3 points");
  const double n = double(hbars.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < hbars.size(); ++i) {
    if (!(hbars[i] > 0.0) || !(values[i] > 0.0)) throw Error("fit_power_law: data must be strictly positive");
    const double lx = std::log(hbars[i]), ly = std::log(values[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double den = n * sxx - sx * sx;
  if (!(std::abs(den) > 1e-12 * n * sxx + 1e-300)) throw Error("fit_power_law: no spread in hbar");
  ScalingReport r;
  r.hbars = hbars;
  r.values = values;
  r.slope = (n * sxy - sx * sy) / den;
  r.intercept = (sy - r.slope * sx) / n;
  return r;
}

ScalingReport concentration_scaling(const std::vector<ComplexField>& fields, const std::optional<PhasePoint>& z) {
  if (fields.size() < 3) throw Error("concentration_scaling: need at least 3 fields");
  std::vector<double> h, wx, wp;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0 && !(fields[i].hbar < fields[i - 1].hbar))
      throw Error("concentration_scaling: hbar must be strictly decreasing");
    const MomentRecord rec = moment_record(fields[i], z);
    if (!(rec.var_x(0) > 0.0) || !(rec.var_p(0) > 0.0))
      throw Error("concentration_scaling: non-positive variance");
    h.push_back(fields[i].hbar);
    wx.push_back(std::sqrt(rec.var_x(0)));
    wp.push_back(std::sqrt(rec.var_p(0)));
  }
  ScalingReport r = fit_power_law(h, wx);
  r.momentum_values = wp;
  r.momentum_slope = fit_power_law(h, wp).slope;
  return r;
}

double mass_in_ball(const ComplexField& psi, const Coord& center, double radius) {
  const double N = norm_squared(psi);
  double inside = 0.0;
  for (std::size_t j = 0; j < psi.size(); ++j) {
    const Coord x = psi.grid.point(j);
    double r2 = 0.0;
    for (int a = 0; a < psi.grid.dim(); ++a) r2 += (x[a] - center[a]) * (x[a] - center[a]);
    if (r2 <= radius * radius) inside += std::norm(psi[j]);
  }
  return inside * psi.grid.cell_volume() / N;
}

}  // namespace scnlse
