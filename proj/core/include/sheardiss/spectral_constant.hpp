#pragma once

#include <string>
#include <vector>

#include "sheardiss/shear.hpp"
#include "sheardiss/spectral.hpp"

namespace sheardiss {

/// Real symmetric n x n forms (row-major) on the grid, with weights frozen
/// at one time. For a real vector v:
///   v^T A v = nu^{1/3} ||v B^{1/3} phi W||^2
///   v^T M v = nu^{1/3} ||U' B^{-2/3} v phi W||^2
///   v^T D v = nu ||v' W||^2   (spectral derivative, Nyquist dropped)
/// A complex field splits into real and imaginary parts, each seeing the
/// same forms.
struct SpectralForms {
  std::size_t n = 0;
  std::vector<double> a_diag;
  std::vector<double> m_diag;
  std::vector<double> d;
};

SpectralForms build_spectral_forms(const ShearProfile& profile, const Grid& grid, double nu,
                                   double sigma, double t);

/// Real antisymmetric first-derivative matrix for even n (row-major).
std::vector<double> differentiation_matrix(std::size_t n);

/// Smallest eigenvalue of c M + D - A.
double min_pencil_eigenvalue(const SpectralForms& forms, double c);

struct SpectralEstimate {
  double nu = 0.0;
  double t = 0.0;
  double sigma = 0.0;
  std::size_t n = 0;
  double c_min = 0.0;
  int iterations = 0;
  std::string method;
};

/// Smallest c in [0, 2^20] with c M + D - A positive semidefinite, to 1e-3
/// relative. Errc::NoCriticalPoints for profiles without critical points;
/// Errc::Unbounded if c = 2^20 still fails. n = 0 uses the resolution rule.
SpectralEstimate estimate_spectral_constant(const ShearProfile& profile, double nu, double t,
                                            double sigma = 1.0, std::size_t n = 0);

}  // namespace sheardiss
