#pragma once

#include <span>
#include <string>
#include <vector>

#include "sheardiss/shear.hpp"

namespace sheardiss {

/// Pointwise weight values at one (t, y). Derivatives are the a.e. ones;
/// every kink set is assigned the one-sided value that is zero.
struct WeightPoint {
  double b = 0.0;         ///< max(|U'|, nu^{1/4})
  double db = 0.0;        ///< sign(U') U'' 1{|U'| >= nu^{1/4}}
  double phi = 0.0;       ///< min(1, nu^{1/3} B^{2/3} t)
  double log_w = 0.0;
  double dt_phi = 0.0;
  double dy_phi = 0.0;
  double dt_log_w = 0.0;
  double dy_log_w = 0.0;
  double dt_w_bound = 0.0;  ///< bound on |d_t W| from the weight lemma
  double dy_w_bound = 0.0;  ///< bound on |d_y W| from the weight lemma
};

/// Evaluates the weights from U'(y), U''(y). `norm_d2u` enters only the
/// spatial bound.
WeightPoint eval_weight_point(double du, double d2u, double nu, double sigma, double t,
                              double norm_d2u) noexcept;

struct ShearStrength {
  std::vector<double> b;
  std::vector<double> db;
};

ShearStrength eval_B(const ShearProfile& profile, double nu, std::span<const double> ys);
std::vector<double> eval_phi(const ShearProfile& profile, double nu, double t,
                             std::span<const double> ys);
/// log W; Errc::InvalidArgument unless sigma in (0,1], t >= 0, nu in (0,1].
std::vector<double> eval_log_W(const ShearProfile& profile, double nu, double sigma, double t,
                               std::span<const double> ys);
/// exp(log W); Errc::Overflow if log W >= 700 anywhere.
std::vector<double> eval_W(const ShearProfile& profile, double nu, double sigma, double t,
                           std::span<const double> ys);

/// All weight arrays at one time on a fixed set of points.
struct WeightSet {
  double nu = 0.0;
  double sigma = 0.0;
  double t = 0.0;
  std::vector<double> b, db, phi, log_w, w;
  std::vector<double> dt_phi, dy_phi, dt_log_w, dy_log_w;
  std::vector<double> dt_w_bound, dy_w_bound;
};

/// Weights from pre-sampled U', U'' (the solver grid reuses one sampling).
WeightSet make_weights(const ShearSamples& samples, double nu, double sigma, double t,
                       double norm_d2u);
WeightSet make_weights(const ShearProfile& profile, std::span<const double> ys, double nu,
                       double sigma, double t);

struct WeightLemmaReport {
  double max_violation_t = 0.0;  ///< max of (|d_t W|_FD - bound_t) / W
  double max_violation_y = 0.0;  ///< max of (|d_y W|_FD - bound_y) / W
  double tol = 0.0;
  bool pass = false;
  std::size_t sampled = 0;
  std::size_t skipped = 0;
};

/// Central-difference check of the |d_t W| and |d_y W| bounds on a uniform
/// (t, y) sample lattice. Points within two lattice cells of a kink set are
/// skipped. Errc::GridTooCoarse if fd_step > 1e-3 nu^{1/2}.
WeightLemmaReport check_W_lemma(const ShearProfile& profile, double nu, double sigma,
                                std::span<const double> t_grid, std::span<const double> y_grid,
                                double fd_step = 1e-6, double tol = 1e-6);

/// {"max_violation_t", "max_violation_y", "tol", "pass"}
std::string to_json(const WeightLemmaReport& report);

}  // namespace sheardiss
