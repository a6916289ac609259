#include "scnlse/field.hpp"

#include <cmath>
#include <string>

#include "scnlse/error.hpp"
#include "scnlse/params.hpp"

namespace scnlse {

PhysParams PhysParams::with_kappa_squared(double hbar, double mass, double kappa_squared) {
  PhysParams p;
  p.hbar = hbar;
  p.mass = mass;
  p.kappa = std::sqrt(kappa_squared);
  p.r = kappa_squared;
  p.validate();
  return p;
}

void PhysParams::validate() const {
  if (!(std::isfinite(hbar) && hbar > 0)) throw Error("hbar must be positive and finite");
  if (!(std::isfinite(mass) && mass > 0)) throw Error("mass must be positive and finite");
  if (!(std::isfinite(kappa) && kappa > 0)) throw Error("kappa must be positive and finite");
  if (!std::isfinite(r)) throw Error("nonlinearity r must be finite");
}

ComplexField::ComplexField(Grid g, std::vector<cplx> v, double t, double h)
    : grid(g), values(std::move(v)), time(t), hbar(h) {
  if (values.size() != grid.size()) throw Error("field size does not match grid");
}

void ComplexField::check_finite() const {
  if (values.size() != grid.size()) throw Error("field size does not match grid");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i].real()) || !std::isfinite(values[i].imag()))
      throw Error("non-finite field sample at index " + std::to_string(i));
  }
}

cplx inner_product(const ComplexField& a, const ComplexField& b) {
  if (!(a.grid == b.grid)) throw Error("inner_product: grid mismatch");
  if (a.time != b.time) throw Error("inner_product: time mismatch");
  cplx sum{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) sum += std::conj(a[i]) * b[i];
  return sum * a.grid.cell_volume();
}

double norm_squared(const ComplexField& psi) {
  double sum = 0.0;
  for (const auto& v : psi.values) sum += std::norm(v);
  sum *= psi.grid.cell_volume();
  if (!(sum > 0)) throw Error("norm_squared: field is identically zero, not a state");
  return sum;
}

double max_abs_diff(const ComplexField& a, const ComplexField& b) {
  if (!(a.grid == b.grid)) throw Error("max_abs_diff: grid mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double relative_l2_error(const ComplexField& a, const ComplexField& reference) {
  if (!(a.grid == reference.grid)) throw Error("relative_l2_error: grid mismatch");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += std::norm(a[i] - reference[i]);
    den += std::norm(reference[i]);
  }
  if (!(den > 0)) throw Error("relative_l2_error: zero reference");
  return std::sqrt(num / den);
}

}  // namespace scnlse
