#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace sheardiss {

using cplx = std::complex<double>;

/// Uniform periodic grid y_j = 2 pi j / n on [0, 2pi).
class Grid {
 public:
  /// Errc::InvalidArgument unless n >= 16 and n is a power of two.
  explicit Grid(std::size_t n);

  std::size_t size() const noexcept { return n_; }
  double spacing() const noexcept;
  double y(std::size_t j) const noexcept;
  std::vector<double> points() const;

  bool operator==(const Grid&) const = default;

 private:
  std::size_t n_;
};

/// Complex samples of f(t, .) on a grid.
struct ScalarField {
  Grid grid;
  double t = 0.0;
  std::vector<cplx> values;

  explicit ScalarField(Grid g, double time = 0.0)
      : grid(g), t(time), values(g.size(), cplx{0.0, 0.0}) {}
};

/// Trapezoid rule on the periodic grid: dy * sum_j w_j |f_j|^2.
double l2_norm_sq(std::span<const cplx> f, double dy) noexcept;

/// Signed wavenumber of DFT index j; the Nyquist index maps to -n/2.
inline long wavenumber(std::size_t j, std::size_t n) noexcept {
  return j < n / 2 ? static_cast<long>(j) : static_cast<long>(j) - static_cast<long>(n);
}

/// Energy fraction carried by |m| >= 3n/8, the top quartile of resolved
/// wavenumbers. Input is DFT coefficients.
double spectral_tail_fraction(std::span<const cplx> modes) noexcept;

/// FFTW-backed complex DFT of fixed size. Plans are created under a global
/// lock; one instance must not be used from two threads at once.
class Fft {
 public:
  explicit Fft(std::size_t n);
  ~Fft();
  Fft(Fft&&) noexcept;
  Fft& operator=(Fft&&) noexcept;
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;

  std::size_t size() const noexcept;
  /// Unnormalized forward transform, sum_j f_j e^{-2 pi i jk/n}.
  void forward(std::span<const cplx> in, std::span<cplx> out);
  /// Inverse transform including the 1/n factor.
  void inverse(std::span<const cplx> in, std::span<cplx> out);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Spectral y-derivatives of periodic samples (Nyquist mode dropped).
class SpectralDerivative {
 public:
  explicit SpectralDerivative(std::size_t n);

  /// Writes d^order f / dy^order into `out`.
  void apply(std::span<const cplx> f, int order, std::span<cplx> out);
  std::vector<cplx> apply(std::span<const cplx> f, int order);
  /// First `count` derivatives (1..count) from one forward transform.
  void apply_many(std::span<const cplx> f, int count, std::span<std::vector<cplx>> out);

 private:
  Fft fft_;
  std::vector<cplx> modes_;
  std::vector<cplx> work_;
};

}  // namespace sheardiss
