#include "sheardiss/audit.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <ostream>
#include <sstream>

#include "csv.hpp"
#include "sheardiss/error.hpp"
#include "sheardiss/rates.hpp"

namespace sheardiss {
namespace {

constexpr int kTrialBetas = 21;

bool within(double lhs, double rhs, double tol_rel, double tol_abs) {
  return lhs <= rhs + tol_rel * std::abs(rhs) + tol_abs;
}

LemmaBounds centered(const FunctionalComponents& prev, const FunctionalComponents& next) {
  const double h = next.t - prev.t;
  return {(next.c0 - prev.c0) / h, (next.c_alpha - prev.c_alpha) / h,
          (next.c_beta - prev.c_beta) / h, (next.c_gamma - prev.c_gamma) / h};
}

}  // namespace

LemmaBounds lemma_rhs(const TermNorms& tn, const HypoParams& p, double nu, double t,
                      double norm_d2u) {
  const double u2 = norm_d2u * norm_d2u;
  const double m = std::min(nu * t * t, 1.0);
  const double sb = std::sqrt(p.beta);
  const double b32 = p.beta * sb;
  const double s2 = p.sigma * p.sigma;
  const double nu13 = std::cbrt(nu);
  const double nu53 = nu * nu13 * nu13;

  LemmaBounds r;
  r.l2 = -1.5 * nu * tn.grad + (2.0 * p.sigma + 5.0 * s2 * u2 * m) * nu13 * tn.layer;
  r.alpha = (0.5 + 0.75 * sb + 2.0 * sb * u2 + 4.0 * s2 * sb * u2 * m) * nu * tn.grad -
            (5.0 / 12.0) * sb * nu53 * tn.hess + 0.125 * p.beta * nu13 * tn.shear;
  r.beta = -p.beta * (0.5 - 32.0 * sb - 64.0 * sb * u2) * nu13 * tn.shear +
           8.0 * p.beta * nu * tn.grad + (5.0 / 12.0) * sb * nu53 * tn.hess +
           5.0 * b32 * nu * tn.shear_grad + 12.0 * b32 * nu13 * u2 * tn.layer;
  r.gamma = -8.0 * b32 * nu * tn.shear_grad + (48.0 + 8.0 * u2) * p.beta * nu * tn.grad +
            (28.0 + (8.0 + (16.0 / 9.0) * s2 * m) * u2) * b32 * nu13 * tn.shear;
  return r;
}

LedgerRecorder::LedgerRecorder(const ShearProfile& profile, const Grid& grid, double nu,
                               double solver_dt, std::vector<HypoParams> params)
    : eval_(profile, grid, nu), params_(std::move(params)) {
  const auto ys = grid.points();
  const auto strength = eval_B(profile, nu, ys);
  const double cap = 1.0 / std::sqrt(nu);
  std::vector<double> kinks{cap};
  for (double b : strength.b) {
    const double onset = 1.0 / (std::cbrt(nu) * std::cbrt(b * b));
    if (onset < cap) kinks.push_back(onset);
  }
  std::sort(kinks.begin(), kinks.end());
  kinks.erase(std::unique(kinks.begin(), kinks.end()), kinks.end());
  series_.resize(params_.size());
  for (std::size_t i = 0; i < params_.size(); ++i) {
    series_[i].params = params_[i];
    series_[i].nu = nu;
    series_[i].norm_d2u = profile.norm_d2u();
    series_[i].solver_dt = solver_dt;
    series_[i].kink_times = kinks;
  }
}

void LedgerRecorder::observe(const ScalarField& field) {
  if (series_.empty()) return;
  if (series_.front().samples.empty()) {
    const double mass = l2_norm_sq(field.values, field.grid.spacing());
    for (auto& s : series_) s.f0_norm_sq = mass;
  }
  eval_.sample(field, params_, scratch_);
  for (std::size_t i = 0; i < series_.size(); ++i) series_[i].samples.push_back(scratch_[i]);
}

Observer LedgerRecorder::observer() {
  return [this](const ScalarField& f, double) { observe(f); };
}

AuditResult audit_gronwall(const LedgerSeries& series, const AuditOptions& options) {
  const auto& s = series.samples;
  const std::size_t count = s.size();
  if (count < 3) raise(Errc::InsufficientPoints, "audit needs at least three outputs");
  for (std::size_t i = 1; i < count; ++i) {
    const double gap = s[i].comps.t - s[i - 1].comps.t;
    if (gap > options.max_stride_factor * series.solver_dt * (1.0 + 1e-9)) {
      std::ostringstream msg;
      msg << "output spacing " << gap << " exceeds " << options.max_stride_factor
          << " solver steps";
      raise(Errc::StrideTooCoarse, msg.str());
    }
  }
  for (const auto& x : s) {
    if (x.comps.total < 0.0) {
      std::ostringstream msg;
      msg << "Phi = " << x.comps.total << " at t=" << x.comps.t;
      raise(Errc::NegativePhi, msg.str());
    }
  }

  const double nu = series.nu;
  const double sqrt_nu = std::sqrt(nu);
  const double cap = 1.0 / sqrt_nu;
  const double tol_abs = options.tol_abs_factor * series.f0_norm_sq;

  AuditResult res;
  res.rows.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    auto& row = res.rows[i];
    row.sample = s[i];
    row.rhs = lemma_rhs(s[i].norms, series.params, nu, s[i].comps.t, series.norm_d2u);
    if (i == 0 || i + 1 == count) continue;
    row.interior = true;
    const auto& prev = s[i - 1].comps;
    const auto& next = s[i + 1].comps;
    row.lhs = centered(prev, next);
    row.lhs_total = (next.total - prev.total) / (next.t - prev.t);
    row.audited = std::abs(s[i].comps.t - cap) > next.t - prev.t;
    const auto& k = series.kink_times;
    const auto it = std::lower_bound(k.begin(), k.end(), prev.t);
    row.smooth = it == k.end() || *it > next.t;
    if (!row.audited) continue;
    row.pass = within(row.lhs.l2, row.rhs.l2, options.tol_rel, tol_abs) &&
               within(row.lhs.alpha, row.rhs.alpha, options.tol_rel, tol_abs) &&
               within(row.lhs.beta, row.rhs.beta, options.tol_rel, tol_abs) &&
               within(row.lhs.gamma, row.rhs.gamma, options.tol_rel, tol_abs);
    if (row.sample.comps.t < cap && row.lhs_total > tol_abs) res.early_pass = false;
    if (!row.pass && res.terms_pass) {
      res.terms_pass = false;
      std::ostringstream msg;
      msg << "gronwall: per-term bound fails at t=" << row.sample.comps.t;
      res.failure = msg.str();
    }
  }

  std::vector<double> ts, phis;
  for (const auto& x : s) {
    ts.push_back(x.comps.t);
    phis.push_back(x.comps.total);
  }
  res.delta_cert = std::numeric_limits<double>::infinity();
  bool any_late = false;
  for (const auto& row : res.rows) {
    if (!row.audited || row.sample.comps.t < cap) continue;
    any_late = true;
    res.delta_cert =
        std::min(res.delta_cert, -row.lhs_total / (sqrt_nu * row.sample.comps.total));
  }
  if (!any_late) {
    res.delta_cert = std::numeric_limits<double>::quiet_NaN();
    res.delta_ls = std::numeric_limits<double>::quiet_NaN();
    res.delta_fit = std::numeric_limits<double>::quiet_NaN();
    res.decay_pass = false;
    if (res.failure.empty()) res.failure = "gronwall: trajectory ends before nu^{-1/2}";
  } else {
    const auto fit = fit_decay_rate(ts, phis, cap, 3.0 * cap, "phi", nu);
    res.delta_ls = fit.rate / sqrt_nu;
    res.delta_fit = std::min(res.delta_ls, res.delta_cert);
    res.decay_pass = res.delta_fit > 0.0;
    if (!res.decay_pass && res.failure.empty()) {
      res.failure = "gronwall: Phi does not decay after nu^{-1/2}";
    }
  }
  res.pass = res.terms_pass && res.decay_pass;
  return res;
}

void write_ledger_csv(std::ostream& out, const AuditResult& result) {
  out << "t,phi,c0,c_alpha,c_beta,c_gamma,lhs_L2,rhs_L2,lhs_a,rhs_a,lhs_b,rhs_b,lhs_g,rhs_g,pass\n";
  for (const auto& row : result.rows) {
    const auto& c = row.sample.comps;
    auto lhs = [&](double v) { return row.interior ? csv::num(v) : std::string(); };
    out << csv::num(c.t) << ',' << csv::num(c.total) << ',' << csv::num(c.c0) << ','
        << csv::num(c.c_alpha) << ',' << csv::num(c.c_beta) << ',' << csv::num(c.c_gamma) << ','
        << lhs(row.lhs.l2) << ',' << csv::num(row.rhs.l2) << ',' << lhs(row.lhs.alpha) << ','
        << csv::num(row.rhs.alpha) << ',' << lhs(row.lhs.beta) << ',' << csv::num(row.rhs.beta)
        << ',' << lhs(row.lhs.gamma) << ',' << csv::num(row.rhs.gamma) << ','
        << (row.audited ? (row.pass ? "1" : "0") : "skip") << '\n';
  }
}

double closed_form_beta(double norm_d2u, double spectral_constant) {
  if (!(norm_d2u >= 0.0) || !(spectral_constant >= 0.0) || !std::isfinite(spectral_constant)) {
    raise(Errc::InvalidArgument, "closed-form beta needs finite nonnegative constants");
  }
  const double u2 = norm_d2u * norm_d2u;
  const double c = spectral_constant;
  auto feasible = [&](double beta) {
    const double sb = std::sqrt(beta);
    const double b32 = beta * sb;
    const double first = 1.0 - 0.75 * sb - 14.0 * sb * u2 - 56.0 * beta - 20.0 * b32 - 17.0 * b32 * u2;
    const double second = 0.375 - 64.0 * sb - 74.0 * sb * u2 - 20.0 * c * sb - 17.0 * sb * c * u2;
    return first >= 0.5 && second >= 0.0;
  };
  if (feasible(1.0)) return 1.0;
  double lo = 0.0;
  double hi = 1.0;
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (feasible(mid) ? lo : hi) = mid;
  }
  if (!(lo > 0.0)) raise(Errc::NoFeasibleBeta, "no beta satisfies the closed-form brackets");
  return lo;
}

RunPlan plan_run(const ShearProfile& profile, double nu, const InitialSpec& data) {
  RunPlan plan;
  plan.config.nu = nu;
  plan.config.dt = default_dt(profile);
  plan.config.t_end = default_t_end(nu);
  plan.config.output_stride = 2;
  plan.config.profile = profile.name();
  plan.config.seed = data.seed;
  plan.grid = Grid(resolution_rule(profile, nu, feature_width(data, nu)));
  return plan;
}

CalibrationResult calibrate_beta(const ShearProfile& profile, std::span<const double> nu_list,
                                 std::span<const InitialSpec> trial_data, double spectral_constant,
                                 double sigma_override) {
  if (nu_list.empty() || trial_data.empty()) {
    raise(Errc::InvalidArgument, "calibration needs at least one nu and one trial field");
  }
  CalibrationResult out;
  std::vector<HypoParams> params;
  for (int j = 0; j < kTrialBetas; ++j) {
    const double beta = std::ldexp(1.0, -j);
    auto p = HypoParams::from_beta(beta, spectral_constant);
    if (sigma_override > 0.0) p = p.with_sigma(sigma_override);
    params.push_back(p);
    out.trial_betas.push_back(beta);
  }
  out.trial_pass.assign(kTrialBetas, true);

  std::vector<std::future<std::vector<bool>>> jobs;
  for (double nu : nu_list) {
    for (const auto& data : trial_data) {
      jobs.push_back(std::async(std::launch::async, [&profile, &params, nu, data] {
        const auto plan = plan_run(profile, nu, data);
        const auto f0 = make_initial(data, plan.grid, profile, nu);
        LedgerRecorder rec(profile, plan.grid, nu, effective_dt(plan.config), params);
        solve(plan.config, profile, f0, rec.observer());
        std::vector<bool> pass;
        for (std::size_t k = 0; k < rec.size(); ++k) {
          const auto a = audit_gronwall(rec.series(k));
          pass.push_back(a.pass && a.early_pass);
        }
        return pass;
      }));
    }
  }
  for (auto& job : jobs) {
    const auto pass = job.get();
    for (int j = 0; j < kTrialBetas; ++j) out.trial_pass[j] = out.trial_pass[j] && pass[j];
  }
  for (int j = 0; j < kTrialBetas; ++j) {
    if (out.trial_pass[j]) {
      out.beta_star = out.trial_betas[j];
      break;
    }
  }
  if (out.beta_star == 0.0) raise(Errc::NoFeasibleBeta, "even beta = 2^-20 fails the audit");
  out.closed_form = closed_form_beta(profile.norm_d2u(), spectral_constant);
  return out;
}

}  // namespace sheardiss
