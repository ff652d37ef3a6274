#include "sheardiss/spectral_constant.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "sheardiss/error.hpp"
#include "sheardiss/solver.hpp"
#include "sheardiss/weights.hpp"

namespace sheardiss {
namespace {

constexpr double kUpper = 1048576.0;  // 2^20
constexpr double kRelTol = 1e-3;
constexpr double kPsdSlack = 1e-11;

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

double form_scale(const SpectralForms& f, double c) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.n; ++i) {
    s = std::max({s, f.a_diag[i], c * f.m_diag[i], f.d[i * f.n + i]});
  }
  return s;
}

bool semidefinite(const SpectralForms& f, double c) {
  return min_pencil_eigenvalue(f, c) >= -kPsdSlack * form_scale(f, c);
}

}  // namespace

std::vector<double> differentiation_matrix(std::size_t n) {
  if (n % 2 != 0) raise(Errc::InvalidArgument, "differentiation matrix needs even n");
  const double h = kTwoPi / static_cast<double>(n);
  std::vector<double> d(n * n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      if (j == k) continue;
      const long diff = static_cast<long>(j) - static_cast<long>(k);
      const double sign = (diff % 2 == 0) ? 1.0 : -1.0;
      d[j * n + k] = 0.5 * sign / std::tan(0.5 * static_cast<double>(diff) * h);
    }
  }
  return d;
}

SpectralForms build_spectral_forms(const ShearProfile& profile, const Grid& grid, double nu,
                                   double sigma, double t) {
  const std::size_t n = grid.size();
  const double dy = grid.spacing();
  const auto ys = grid.points();
  const auto w = make_weights(profile, ys, nu, sigma, t);
  const double nu13 = std::cbrt(nu);

  SpectralForms forms;
  forms.n = n;
  forms.a_diag.resize(n);
  forms.m_diag.resize(n);
  Eigen::VectorXd w2(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double ww = w.w[j] * w.w[j];
    const double phi2 = w.phi[j] * w.phi[j];
    const double b23 = std::cbrt(w.b[j] * w.b[j]);
    const double du = profile.du(ys[j]);
    forms.a_diag[j] = nu13 * dy * b23 * phi2 * ww;
    forms.m_diag[j] = nu13 * dy * du * du / (b23 * b23) * phi2 * ww;
    w2[static_cast<Eigen::Index>(j)] = ww;
  }
  const auto dm_raw = differentiation_matrix(n);
  const auto ni = static_cast<Eigen::Index>(n);
  const Eigen::Map<const Matrix> dm(dm_raw.data(), ni, ni);
  Matrix d = nu * dy * (dm.transpose() * w2.asDiagonal() * dm);
  d = 0.5 * (d + d.transpose()).eval();
  forms.d.assign(d.data(), d.data() + n * n);
  return forms;
}

double min_pencil_eigenvalue(const SpectralForms& forms, double c) {
  const auto ni = static_cast<Eigen::Index>(forms.n);
  Matrix p = Eigen::Map<const Matrix>(forms.d.data(), ni, ni);
  for (Eigen::Index j = 0; j < ni; ++j) {
    p(j, j) += c * forms.m_diag[static_cast<std::size_t>(j)] - forms.a_diag[static_cast<std::size_t>(j)];
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(p, Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

SpectralEstimate estimate_spectral_constant(const ShearProfile& profile, double nu, double t,
                                            double sigma, std::size_t n) {
  if (!profile.has_critical_points()) {
    raise(Errc::NoCriticalPoints, "spectral inequality requires nondegenerate critical points");
  }
  if (!(nu > 0.0 && nu <= 1.0)) raise(Errc::InvalidArgument, "nu must lie in (0,1]");
  if (!(t >= 0.0)) raise(Errc::InvalidArgument, "t must be nonnegative");
  const Grid grid(n == 0 ? resolution_rule(profile, nu) : n);
  const auto forms = build_spectral_forms(profile, grid, nu, sigma, t);

  SpectralEstimate est;
  est.nu = nu;
  est.t = t;
  est.sigma = sigma;
  est.n = grid.size();
  est.method = "bisection on smallest eigenvalue of cM + D - A (dense symmetric)";
  if (semidefinite(forms, 0.0)) return est;

  double lo = 0.0;
  double hi = 1.0;
  while (!semidefinite(forms, hi)) {
    ++est.iterations;
    lo = hi;
    hi *= 2.0;
    if (hi > kUpper) raise(Errc::Unbounded, "c = 2^20 does not make the pencil semidefinite");
  }
  while (hi - lo > kRelTol * hi) {
    ++est.iterations;
    const double mid = 0.5 * (lo + hi);
    (semidefinite(forms, mid) ? hi : lo) = mid;
  }
  est.c_min = hi;
  return est;
}

}  // namespace sheardiss
