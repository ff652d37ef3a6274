#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "sheardiss/functional.hpp"
#include "sheardiss/initial.hpp"
#include "sheardiss/solver.hpp"

namespace sheardiss {

/// Right-hand sides of the four per-term bounds, in ledger order.
struct LemmaBounds {
  double l2 = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
};

LemmaBounds lemma_rhs(const TermNorms& norms, const HypoParams& params, double nu, double t,
                      double norm_d2u);

/// Functional samples of one trajectory for one parameter set.
struct LedgerSeries {
  HypoParams params;
  double nu = 0.0;
  double norm_d2u = 0.0;
  double solver_dt = 0.0;
  double f0_norm_sq = 0.0;
  std::vector<double> kink_times;  ///< sorted times where some grid weight has a kink
  std::vector<FunctionalSample> samples;
};

/// Observer adapter: samples the functional for several parameter sets at
/// every output of a solve.
class LedgerRecorder {
 public:
  LedgerRecorder(const ShearProfile& profile, const Grid& grid, double nu, double solver_dt,
                 std::vector<HypoParams> params);

  void observe(const ScalarField& field);
  Observer observer();

  std::size_t size() const noexcept { return series_.size(); }
  const LedgerSeries& series(std::size_t i) const { return series_.at(i); }
  std::vector<LedgerSeries> take() { return std::move(series_); }

 private:
  FunctionalEvaluator eval_;
  std::vector<HypoParams> params_;
  std::vector<LedgerSeries> series_;
  std::vector<FunctionalSample> scratch_;
};

struct AuditOptions {
  double tol_rel = 5e-2;
  double tol_abs_factor = 1e-12;  ///< tol_abs = factor * ||f0||^2
  double max_stride_factor = 10.0;
};

struct LedgerRow {
  FunctionalSample sample;
  LemmaBounds rhs;
  LemmaBounds lhs;         ///< centered differences of the components
  double lhs_total = 0.0;  ///< centered difference of Phi
  bool interior = false;   ///< lhs defined (not an endpoint)
  bool audited = false;    ///< interior and not next to t = nu^{-1/2}
  bool smooth = false;     ///< interior and no grid kink time inside the difference window
  bool pass = true;
};

struct AuditResult {
  std::vector<LedgerRow> rows;
  bool terms_pass = true;   ///< every audited lhs within its bound
  bool decay_pass = true;   ///< d Phi/dt <= -delta nu^{1/2} Phi after nu^{-1/2}
  bool early_pass = true;   ///< d Phi/dt <= 0 at audited t < nu^{-1/2}
  bool pass = true;
  double delta_ls = 0.0;    ///< least squares on log Phi over [nu^{-1/2}, 3 nu^{-1/2}]
  double delta_cert = 0.0;  ///< min of -Phi'/(nu^{1/2} Phi) over audited t >= nu^{-1/2}
  double delta_fit = 0.0;   ///< rate used for the decay check
  std::string failure;      ///< first failing check, empty on success
};

/// Errc::StrideTooCoarse if outputs are more than 10 solver steps apart;
/// Errc::NegativePhi if Phi < 0 anywhere.
AuditResult audit_gronwall(const LedgerSeries& series, const AuditOptions& options = {});

/// Writes `t,phi,c0,c_alpha,c_beta,c_gamma,lhs_L2,rhs_L2,...,pass`.
void write_ledger_csv(std::ostream& out, const AuditResult& result);

/// Largest beta in (0, 1] meeting both closed-form brackets for the given
/// ||U''|| and spectral constant. Errc::NoFeasibleBeta if none.
double closed_form_beta(double norm_d2u, double spectral_constant);

struct CalibrationResult {
  double beta_star = 0.0;
  double closed_form = 0.0;
  std::vector<double> trial_betas;
  std::vector<bool> trial_pass;
};

/// Audits beta = 2^0 .. 2^-20 on every (nu, data) pair and returns the
/// largest beta that passes all of them, including d Phi/dt <= 0 before
/// nu^{-1/2}. Errc::NoFeasibleBeta if none.
CalibrationResult calibrate_beta(const ShearProfile& profile, std::span<const double> nu_list,
                                 std::span<const InitialSpec> trial_data,
                                 double spectral_constant = 1.0, double sigma_override = 0.0);

struct RunPlan {
  SolveConfig config;
  Grid grid{16};
};

/// Default solver settings for one (nu, data) point: resolution rule sized
/// for the data's narrowest feature, default dt and t_end, output every two
/// steps.
RunPlan plan_run(const ShearProfile& profile, double nu, const InitialSpec& data);

}  // namespace sheardiss
