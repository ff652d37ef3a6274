#pragma once

#include <vector>

#include "sheardiss/shear.hpp"
#include "sheardiss/spectral.hpp"
#include "sheardiss/weights.hpp"

namespace sheardiss {

/// beta and its derived couplings. sigma defaults to beta^{3/2} and may be
/// overridden inside (0,1].
struct HypoParams {
  double beta = 1.0;
  double alpha = 0.25;
  double gamma = 4.0;
  double sigma = 1.0;
  double spectral_constant = 1.0;

  /// Errc::InvalidArgument unless beta in (0,1].
  static HypoParams from_beta(double beta, double spectral_constant = 1.0);
  HypoParams with_sigma(double sigma) const;
};

/// Phi = c0 + c_alpha + c_beta + c_gamma at one instant.
struct FunctionalComponents {
  double t = 0.0;
  double c0 = 0.0;
  double c_alpha = 0.0;
  double c_beta = 0.0;
  double c_gamma = 0.0;
  double total = 0.0;

  /// c0 + c_alpha + c_gamma.
  double symmetric() const noexcept { return c0 + c_alpha + c_gamma; }
};

/// Weighted quadratures shared by the functional and the lemma bounds.
struct TermNorms {
  double grad = 0.0;        ///< ||f' W||^2
  double layer = 0.0;       ///< ||f phi B^{1/3} W||^2
  double hess = 0.0;        ///< ||f'' sqrt(phi) B^{-1/3} W||^2
  double shear = 0.0;       ///< ||U' f phi B^{-2/3} W||^2
  double shear_grad = 0.0;  ///< ||U' f' phi^{3/2} B^{-1} W||^2
};

/// Time derivatives of the four components obtained by substituting the
/// equation for d_t f and the a.e. weight derivatives into each integrand.
struct AssembledRates {
  double l2 = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;

  double total() const noexcept { return l2 + alpha + beta + gamma; }
};

/// Everything the audit needs from a single field at a single time.
struct FunctionalSample {
  FunctionalComponents comps;
  TermNorms norms;
  AssembledRates rates;
};

/// Evaluates the functional on a fixed grid. Caches U', U'' samples and the
/// derivative operator; not safe for concurrent use.
class FunctionalEvaluator {
 public:
  FunctionalEvaluator(const ShearProfile& profile, const Grid& grid, double nu);

  FunctionalComponents components(const ScalarField& f, const HypoParams& params);

  /// One derivative pass, then every parameter set. Output has one entry
  /// per element of `params`.
  void sample(const ScalarField& f, std::span<const HypoParams> params,
              std::vector<FunctionalSample>& out);

  const Grid& grid() const noexcept { return grid_; }
  double nu() const noexcept { return nu_; }
  double norm_d2u() const noexcept { return norm_d2u_; }

 private:
  void prepare(const ScalarField& f, int derivatives);
  FunctionalSample evaluate(const HypoParams& params, bool full) const;

  Grid grid_;
  double nu_;
  double norm_d2u_;
  ShearSamples shear_;
  SpectralDerivative deriv_;
  std::vector<std::vector<cplx>> d_;
  std::vector<cplx> f_;
  WeightSet base_;  // sigma = 1; other sigmas rescale log W
  std::vector<double> b23_;
};

/// Errc::NonFinite if any component is NaN or infinite.
FunctionalComponents eval_functional(const ScalarField& f, const ShearProfile& profile, double nu,
                                     const HypoParams& params);

/// Phi / (c0 + c_alpha + c_gamma). Errc::EquivalenceViolation outside
/// [1/2 - 1e-10, 3/2 + 1e-10]. A zero field gives 1.
double check_equivalence(const FunctionalComponents& comps);
double check_equivalence(const ScalarField& f, const ShearProfile& profile, double nu,
                         const HypoParams& params);

}  // namespace sheardiss
