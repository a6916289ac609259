#pragma once

#include <memory>
#include <span>
#include <vector>

#include "scnlse/field.hpp"

namespace scnlse {

/// Discrete Fourier transform on a periodic grid plus the spectral
/// multipliers built from it. Owns its transform workspace; one instance per
/// thread. Construction is thread-safe.
class Spectral {
 public:
  explicit Spectral(const Grid& grid);
  ~Spectral();
  Spectral(Spectral&&) noexcept;
  Spectral& operator=(Spectral&&) noexcept;
  Spectral(const Spectral&) = delete;
  Spectral& operator=(const Spectral&) = delete;

  const Grid& grid() const noexcept { return grid_; }

  /// Unnormalized forward transform in place.
  void forward(std::span<cplx> data);
  /// Inverse transform in place, normalized so backward(forward(u)) == u.
  void backward(std::span<cplx> data);

  /// Angular wavenumbers 2*pi*j/L in FFT order for one axis.
  const std::vector<double>& wavenumbers(int axis) const noexcept { return k_[axis]; }
  /// Same, with the Nyquist entry zeroed; used for odd derivatives so that
  /// real even inputs map to real odd outputs.
  const std::vector<double>& odd_wavenumbers(int axis) const noexcept { return k_odd_[axis]; }

  /// Spectral d/dx_axis.
  std::vector<cplx> derivative(std::span<const cplx> values, int axis);
  /// Spectral Laplacian.
  std::vector<cplx> laplacian(std::span<const cplx> values);

  /// Multiplies the spectrum of `data` by m(k) in place, where the
  /// multiplier is evaluated at the flat spectral index.
  template <class Multiplier>
  void apply_multiplier(std::span<cplx> data, Multiplier&& m) {
    forward(data);
    const std::size_t n1 = grid_.dim() == 2 ? grid_.n(1) : 1;
    for (std::size_t i = 0; i < data.size(); ++i) data[i] *= m(i / n1, i % n1);
    backward(data);
  }

 private:
  struct Plans;
  Grid grid_;
  std::unique_ptr<Plans> plans_;
  std::vector<double> k_[2];
  std::vector<double> k_odd_[2];
};

/// -i hbar d/dx_axis applied spectrally.
ComplexField apply_momentum(const ComplexField& psi, int axis);

}  // namespace scnlse
