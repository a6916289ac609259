#include "scnlse/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <mutex>
#include <numbers>

#include "scnlse/error.hpp"

namespace scnlse {

namespace {
// FFTW planning is not thread-safe; execution on distinct buffers is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct Spectral::Plans {
  fftw_complex* buffer = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
  std::size_t size = 0;

  explicit Plans(const Grid& g) : size(g.size()) {
    std::lock_guard lock(planner_mutex());
    buffer = fftw_alloc_complex(size);
    if (g.dim() == 1) {
      const int n = int(g.n(0));
      fwd = fftw_plan_dft_1d(n, buffer, buffer, FFTW_FORWARD, FFTW_ESTIMATE);
      bwd = fftw_plan_dft_1d(n, buffer, buffer, FFTW_BACKWARD, FFTW_ESTIMATE);
    } else {
      const int n0 = int(g.n(0)), n1 = int(g.n(1));
      fwd = fftw_plan_dft_2d(n0, n1, buffer, buffer, FFTW_FORWARD, FFTW_ESTIMATE);
      bwd = fftw_plan_dft_2d(n0, n1, buffer, buffer, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    if (!fwd || !bwd) throw Error("FFTW planning failed");
  }

  ~Plans() {
    std::lock_guard lock(planner_mutex());
    if (fwd) fftw_destroy_plan(fwd);
    if (bwd) fftw_destroy_plan(bwd);
    if (buffer) fftw_free(buffer);
  }

  void run(fftw_plan plan, std::span<cplx> data) {
    if (data.size() != size) throw Error("spectral transform: size mismatch");
    std::memcpy(buffer, data.data(), size * sizeof(fftw_complex));
    fftw_execute(plan);
    std::memcpy(static_cast<void*>(data.data()), buffer, size * sizeof(fftw_complex));
  }
};

Spectral::Spectral(const Grid& grid) : grid_(grid), plans_(std::make_unique<Plans>(grid)) {
  for (int a = 0; a < grid.dim(); ++a) {
    const std::size_t n = grid.n(a);
    const double dk = 2.0 * std::numbers::pi / grid.length(a);
    k_[a].resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      const double idx = j < n / 2 ? double(j) : double(j) - double(n);
      k_[a][j] = dk * idx;
    }
    k_odd_[a] = k_[a];
    k_odd_[a][n / 2] = 0.0;
  }
}

Spectral::~Spectral() = default;
Spectral::Spectral(Spectral&&) noexcept = default;
Spectral& Spectral::operator=(Spectral&&) noexcept = default;

void Spectral::forward(std::span<cplx> data) { plans_->run(plans_->fwd, data); }

void Spectral::backward(std::span<cplx> data) {
  plans_->run(plans_->bwd, data);
  const double scale = 1.0 / double(data.size());
  for (auto& v : data) v *= scale;
}

std::vector<cplx> Spectral::derivative(std::span<const cplx> values, int axis) {
  std::vector<cplx> out(values.begin(), values.end());
  const auto& k = k_odd_[axis];
  apply_multiplier(out, [&](std::size_t i0, std::size_t i1) {
    return cplx(0.0, axis == 0 ? k[i0] : k[i1]);
  });
  return out;
}

std::vector<cplx> Spectral::laplacian(std::span<const cplx> values) {
  std::vector<cplx> out(values.begin(), values.end());
  const auto& k0 = k_[0];
  const auto& k1 = k_[1];
  const bool two_d = grid_.dim() == 2;
  apply_multiplier(out, [&](std::size_t i0, std::size_t i1) {
    double k2 = k0[i0] * k0[i0];
    if (two_d) k2 += k1[i1] * k1[i1];
    return cplx(-k2, 0.0);
  });
  return out;
}

ComplexField apply_momentum(const ComplexField& psi, int axis) {
  if (axis < 0 || axis >= psi.grid.dim()) throw Error("apply_momentum: axis out of range");
  psi.check_finite();
  Spectral sp(psi.grid);
  ComplexField out = psi;
  out.values = sp.derivative(psi.values, axis);
  const cplx factor(0.0, -psi.hbar);
  for (auto& v : out.values) v *= factor;
  return out;
}

}  // namespace scnlse
