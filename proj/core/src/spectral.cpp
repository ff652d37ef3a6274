#include "sheardiss/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <mutex>

#include "sheardiss/error.hpp"
#include "sheardiss/shear.hpp"

namespace sheardiss {
namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

Grid::Grid(std::size_t n) : n_(n) {
  if (n < 16 || (n & (n - 1)) != 0) {
    raise(Errc::InvalidArgument, "grid size must be a power of two >= 16");
  }
}

double Grid::spacing() const noexcept { return kTwoPi / static_cast<double>(n_); }

double Grid::y(std::size_t j) const noexcept {
  return kTwoPi * static_cast<double>(j) / static_cast<double>(n_);
}

std::vector<double> Grid::points() const {
  std::vector<double> ys(n_);
  for (std::size_t j = 0; j < n_; ++j) ys[j] = y(j);
  return ys;
}

double l2_norm_sq(std::span<const cplx> f, double dy) noexcept {
  double acc = 0.0;
  for (const auto& v : f) acc += std::norm(v);
  return acc * dy;
}

double spectral_tail_fraction(std::span<const cplx> modes) noexcept {
  const std::size_t n = modes.size();
  const long threshold = static_cast<long>(3 * n / 8);
  double total = 0.0;
  double tail = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double e = std::norm(modes[j]);
    total += e;
    if (std::abs(wavenumber(j, n)) >= threshold) tail += e;
  }
  return total > 0.0 ? tail / total : 0.0;
}

struct Fft::Impl {
  std::size_t n = 0;
  fftw_complex* in = nullptr;
  fftw_complex* out = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;

  explicit Impl(std::size_t size) : n(size) {
    std::lock_guard lock(planner_mutex());
    in = fftw_alloc_complex(n);
    out = fftw_alloc_complex(n);
    // FFTW_ESTIMATE keeps the chosen algorithm, and so every output bit,
    // independent of machine load.
    fwd = fftw_plan_dft_1d(static_cast<int>(n), in, out, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd = fftw_plan_dft_1d(static_cast<int>(n), in, out, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~Impl() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
    fftw_free(in);
    fftw_free(out);
  }
};

Fft::Fft(std::size_t n) : impl_(std::make_unique<Impl>(n)) {}
Fft::~Fft() = default;
Fft::Fft(Fft&&) noexcept = default;
Fft& Fft::operator=(Fft&&) noexcept = default;

std::size_t Fft::size() const noexcept { return impl_->n; }

void Fft::forward(std::span<const cplx> in, std::span<cplx> out) {
  std::memcpy(impl_->in, in.data(), impl_->n * sizeof(cplx));
  fftw_execute(impl_->fwd);
  const auto* src = reinterpret_cast<const cplx*>(impl_->out);
  std::copy(src, src + impl_->n, out.begin());
}

void Fft::inverse(std::span<const cplx> in, std::span<cplx> out) {
  std::memcpy(impl_->in, in.data(), impl_->n * sizeof(cplx));
  fftw_execute(impl_->bwd);
  const double scale = 1.0 / static_cast<double>(impl_->n);
  const auto* src = reinterpret_cast<const cplx*>(impl_->out);
  for (std::size_t j = 0; j < impl_->n; ++j) out[j] = src[j] * scale;
}

SpectralDerivative::SpectralDerivative(std::size_t n) : fft_(n), modes_(n), work_(n) {}

void SpectralDerivative::apply(std::span<const cplx> f, int order, std::span<cplx> out) {
  const std::size_t n = f.size();
  fft_.forward(f, modes_);
  for (std::size_t j = 0; j < n; ++j) {
    const long m = wavenumber(j, n);
    if (m == -static_cast<long>(n / 2)) {
      work_[j] = 0.0;
      continue;
    }
    cplx factor{1.0, 0.0};
    for (int k = 0; k < order; ++k) factor *= cplx{0.0, static_cast<double>(m)};
    work_[j] = modes_[j] * factor;
  }
  fft_.inverse(work_, out);
}

std::vector<cplx> SpectralDerivative::apply(std::span<const cplx> f, int order) {
  std::vector<cplx> out(f.size());
  apply(f, order, out);
  return out;
}

void SpectralDerivative::apply_many(std::span<const cplx> f, int count,
                                    std::span<std::vector<cplx>> out) {
  const std::size_t n = f.size();
  fft_.forward(f, modes_);
  for (int order = 1; order <= count; ++order) {
    for (std::size_t j = 0; j < n; ++j) {
      const long m = wavenumber(j, n);
      if (m == -static_cast<long>(n / 2)) {
        work_[j] = 0.0;
        continue;
      }
      cplx factor{1.0, 0.0};
      for (int k = 0; k < order; ++k) factor *= cplx{0.0, static_cast<double>(m)};
      work_[j] = modes_[j] * factor;
    }
    auto& dst = out[static_cast<std::size_t>(order - 1)];
    dst.resize(n);
    fft_.inverse(work_, dst);
  }
}

}  // namespace sheardiss
