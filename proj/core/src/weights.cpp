#include "sheardiss/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "json.hpp"
#include "sheardiss/error.hpp"

namespace sheardiss {
namespace {

constexpr double kMaxLogW = 700.0;

void validate(double nu, double sigma, double t) {
  if (!(nu > 0.0 && nu <= 1.0)) raise(Errc::InvalidArgument, "nu must lie in (0,1]");
  if (!(sigma > 0.0 && sigma <= 1.0)) raise(Errc::InvalidArgument, "sigma must lie in (0,1]");
  if (!(t >= 0.0)) raise(Errc::InvalidArgument, "t must be nonnegative");
}

}  // namespace

WeightPoint eval_weight_point(double du, double d2u, double nu, double sigma, double t,
                              double norm_d2u) noexcept {
  WeightPoint w;
  const double nu14 = std::pow(nu, 0.25);
  const double nu13 = std::cbrt(nu);
  const double cap = 1.0 / std::sqrt(nu);
  const double slope = std::abs(du);
  const bool sheared = slope >= nu14;
  w.b = sheared ? slope : nu14;
  w.db = sheared ? std::copysign(1.0, du) * d2u : 0.0;

  // rate = nu^{1/3} B^{2/3}. Written as ratio * nu^{1/2} with
  // ratio = (B / nu^{1/4})^{2/3} >= 1, so the critical layer (ratio == 1)
  // hits every kink exactly.
  const double ratio = sheared ? std::cbrt((slope / nu14) * (slope / nu14)) : 1.0;
  const double rate = sheared ? nu13 * std::cbrt(slope * slope) : std::sqrt(nu);
  const double scaled_t = std::min(1.0, t * std::sqrt(nu));  // min(t, cap) nu^{1/2}
  const double ramp = ratio * scaled_t;                        // rate * min(t, cap)
  const double ramp_t = ratio * t * std::sqrt(nu);             // rate * t

  w.phi = std::min(1.0, ramp_t);
  w.log_w = sigma * std::max(1.0, ramp);

  const double b13 = std::cbrt(w.b);
  const double tc = std::min(t, cap);
  if (ramp_t < 1.0) {
    w.dt_phi = rate;
    w.dy_phi = (2.0 / 3.0) * nu13 * w.db / b13 * t;
  }
  const bool active = ramp > 1.0;
  if (active && t < cap) w.dt_log_w = sigma * rate;
  if (active) w.dy_log_w = sigma * (2.0 / 3.0) * nu13 * w.db / b13 * tc;

  const double w_val = std::exp(std::min(w.log_w, kMaxLogW));
  const bool in_window = ramp_t >= 1.0 && t <= cap;
  w.dt_w_bound = in_window ? sigma * rate * w_val : 0.0;
  w.dy_w_bound = ramp_t >= 1.0 ? (2.0 * sigma / 3.0) * nu13 / b13 * tc * norm_d2u * w_val : 0.0;
  return w;
}

ShearStrength eval_B(const ShearProfile& profile, double nu, std::span<const double> ys) {
  if (!(nu > 0.0 && nu <= 1.0)) raise(Errc::InvalidArgument, "nu must lie in (0,1]");
  ShearStrength s;
  s.b.reserve(ys.size());
  s.db.reserve(ys.size());
  for (double y : ys) {
    const auto p = eval_weight_point(profile.du(y), profile.d2u(y), nu, 1.0, 0.0, 0.0);
    s.b.push_back(p.b);
    s.db.push_back(p.db);
  }
  return s;
}

std::vector<double> eval_phi(const ShearProfile& profile, double nu, double t,
                             std::span<const double> ys) {
  validate(nu, 1.0, t);
  std::vector<double> out;
  out.reserve(ys.size());
  for (double y : ys) out.push_back(eval_weight_point(profile.du(y), 0.0, nu, 1.0, t, 0.0).phi);
  return out;
}

std::vector<double> eval_log_W(const ShearProfile& profile, double nu, double sigma, double t,
                               std::span<const double> ys) {
  validate(nu, sigma, t);
  std::vector<double> out;
  out.reserve(ys.size());
  for (double y : ys) {
    out.push_back(eval_weight_point(profile.du(y), 0.0, nu, sigma, t, 0.0).log_w);
  }
  return out;
}

std::vector<double> eval_W(const ShearProfile& profile, double nu, double sigma, double t,
                           std::span<const double> ys) {
  auto out = eval_log_W(profile, nu, sigma, t, ys);
  for (double& v : out) {
    if (v >= kMaxLogW) raise(Errc::Overflow, "log W exceeds 700");
    v = std::exp(v);
  }
  return out;
}

WeightSet make_weights(const ShearSamples& samples, double nu, double sigma, double t,
                       double norm_d2u) {
  validate(nu, sigma, t);
  const std::size_t n = samples.du.size();
  WeightSet ws;
  ws.nu = nu;
  ws.sigma = sigma;
  ws.t = t;
  for (auto* v : {&ws.b, &ws.db, &ws.phi, &ws.log_w, &ws.w, &ws.dt_phi, &ws.dy_phi, &ws.dt_log_w,
                  &ws.dy_log_w, &ws.dt_w_bound, &ws.dy_w_bound}) {
    v->resize(n);
  }
  for (std::size_t j = 0; j < n; ++j) {
    const auto p = eval_weight_point(samples.du[j], samples.d2u[j], nu, sigma, t, norm_d2u);
    if (p.log_w >= kMaxLogW) raise(Errc::Overflow, "log W exceeds 700");
    ws.b[j] = p.b;
    ws.db[j] = p.db;
    ws.phi[j] = p.phi;
    ws.log_w[j] = p.log_w;
    ws.w[j] = std::exp(p.log_w);
    ws.dt_phi[j] = p.dt_phi;
    ws.dy_phi[j] = p.dy_phi;
    ws.dt_log_w[j] = p.dt_log_w;
    ws.dy_log_w[j] = p.dy_log_w;
    ws.dt_w_bound[j] = p.dt_w_bound;
    ws.dy_w_bound[j] = p.dy_w_bound;
  }
  return ws;
}

WeightSet make_weights(const ShearProfile& profile, std::span<const double> ys, double nu,
                       double sigma, double t) {
  return make_weights(eval_derivatives(profile, ys), nu, sigma, t, profile.norm_d2u());
}

WeightLemmaReport check_W_lemma(const ShearProfile& profile, double nu, double sigma,
                                std::span<const double> t_grid, std::span<const double> y_grid,
                                double fd_step, double tol) {
  validate(nu, sigma, 0.0);
  if (fd_step > 1e-3 * std::sqrt(nu)) {
    raise(Errc::GridTooCoarse, "finite-difference step exceeds 1e-3 nu^{1/2}");
  }
  if (t_grid.size() < 2 || y_grid.size() < 2) {
    raise(Errc::InvalidArgument, "weight lemma check needs at least two samples per axis");
  }
  const double dt = t_grid[1] - t_grid[0];
  const double dy = y_grid[1] - y_grid[0];
  const double nu14 = std::pow(nu, 0.25);
  const double cap = 1.0 / std::sqrt(nu);
  const double norm_d2u = profile.norm_d2u();

  auto log_w_at = [&](double t, double y) {
    return eval_weight_point(profile.du(y), 0.0, nu, sigma, t, 0.0).log_w;
  };
  auto onset_gap = [&](double t, double y) {  // nu^{1/3} B^{2/3} t - 1
    const auto p = eval_weight_point(profile.du(y), 0.0, nu, sigma, t, 0.0);
    return std::cbrt(nu) * std::cbrt(p.b * p.b) * t - 1.0;
  };
  auto changes_sign = [](auto&& g, double lo, double hi) {
    double first = g(lo);
    for (int k = 1; k <= 4; ++k) {
      const double v = g(lo + (hi - lo) * k / 4.0);
      if ((v > 0.0) != (first > 0.0)) return true;
    }
    return false;
  };

  WeightLemmaReport report;
  report.tol = tol;
  report.max_violation_t = -std::numeric_limits<double>::infinity();
  report.max_violation_y = -std::numeric_limits<double>::infinity();
  for (double t : t_grid) {
    for (double y : y_grid) {
      bool near_kink = std::abs(t - cap) < 2.0 * dt;
      near_kink = near_kink || changes_sign([&](double yy) { return std::abs(profile.du(yy)) - nu14; },
                                            y - 2.0 * dy, y + 2.0 * dy);
      for (int k = -2; k <= 2 && !near_kink; ++k) {
        const double tt = std::max(0.0, t + k * dt);
        near_kink = changes_sign([&](double yy) { return onset_gap(tt, yy); }, y - 2.0 * dy,
                                 y + 2.0 * dy);
      }
      near_kink = near_kink || changes_sign([&](double tt) { return onset_gap(tt, y); },
                                            std::max(0.0, t - 2.0 * dt), t + 2.0 * dt);
      if (near_kink || t - fd_step < 0.0) {
        ++report.skipped;
        continue;
      }
      const auto p = eval_weight_point(profile.du(y), profile.d2u(y), nu, sigma, t, norm_d2u);
      const double w = std::exp(p.log_w);
      const double dw_t =
          (std::exp(log_w_at(t + fd_step, y)) - std::exp(log_w_at(t - fd_step, y))) / (2.0 * fd_step);
      const double dw_y =
          (std::exp(log_w_at(t, y + fd_step)) - std::exp(log_w_at(t, y - fd_step))) / (2.0 * fd_step);
      report.max_violation_t = std::max(report.max_violation_t, (std::abs(dw_t) - p.dt_w_bound) / w);
      report.max_violation_y = std::max(report.max_violation_y, (std::abs(dw_y) - p.dy_w_bound) / w);
      ++report.sampled;
    }
  }
  if (report.sampled == 0) raise(Errc::InvalidArgument, "every sample point was near a kink");
  report.pass = report.max_violation_t < tol && report.max_violation_y < tol;
  return report;
}

std::string to_json(const WeightLemmaReport& report) {
  nlohmann::ordered_json j;
  j["max_violation_t"] = report.max_violation_t;
  j["max_violation_y"] = report.max_violation_y;
  j["tol"] = report.tol;
  j["pass"] = report.pass;
  return j.dump();
}

}  // namespace sheardiss
