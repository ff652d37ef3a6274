#include "sheardiss/rates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "sheardiss/error.hpp"
#include "sheardiss/weights.hpp"

namespace sheardiss {
namespace {

constexpr double kUnderflow = 1e-280;
constexpr int kSmoothCells = 5;

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

LineFit least_squares(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  LineFit fit;
  fit.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = syy > 0.0 ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 1.0;
  return fit;
}

std::size_t wrap(std::size_t j, int offset, std::size_t n) {
  const auto sn = static_cast<long>(n);
  return static_cast<std::size_t>(((static_cast<long>(j) + offset) % sn + sn) % sn);
}

}  // namespace

DecayFit fit_decay_rate(std::span<const double> t, std::span<const double> q, double t_lo,
                        double t_hi, std::string quantity, double nu) {
  if (t.size() != q.size()) raise(Errc::InvalidArgument, "time and value series differ in length");
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t_lo || t[i] > t_hi) continue;
    if (!(q[i] >= kUnderflow)) {
      std::ostringstream msg;
      msg << quantity << " = " << q[i] << " at t=" << t[i] << " is below 1e-280; shrink the window";
      raise(Errc::Underflow, msg.str());
    }
    xs.push_back(t[i]);
    ys.push_back(std::log(q[i]));
  }
  if (xs.size() < 2) raise(Errc::InsufficientPoints, "fewer than two samples inside the fit window");
  const auto line = least_squares(xs, ys);
  DecayFit fit;
  fit.quantity = std::move(quantity);
  fit.t_lo = xs.front();
  fit.t_hi = xs.back();
  fit.rate = -line.slope;
  fit.intercept = line.intercept;
  fit.r_squared = line.r2;
  fit.nu = nu;
  fit.points = xs.size();
  return fit;
}

ScalingFit scaling_exponent(std::span<const double> nu, std::span<const double> rate) {
  if (nu.size() != rate.size()) raise(Errc::InvalidArgument, "nu and rate lists differ in length");
  std::set<double> distinct(nu.begin(), nu.end());
  if (distinct.size() < 4) raise(Errc::InsufficientPoints, "scaling fit needs at least four nu values");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < nu.size(); ++i) {
    if (!(nu[i] > 0.0) || !(rate[i] > 0.0)) {
      raise(Errc::InvalidArgument, "scaling fit needs positive nu and rates");
    }
    lx.push_back(std::log(nu[i]));
    ly.push_back(std::log(rate[i]));
  }
  const auto line = least_squares(lx, ly);
  return {line.slope, line.intercept, line.r2};
}

StreamlineRecorder::StreamlineRecorder(const Grid& grid, double t_max, double min_spacing)
    : grid_(grid), t_max_(t_max), min_spacing_(min_spacing) {}

void StreamlineRecorder::observe(const ScalarField& field) {
  if (t_max_ > 0.0 && field.t > t_max_) return;
  if (!t_.empty() && field.t - t_.back() < min_spacing_) return;
  t_.push_back(field.t);
  for (const auto& v : field.values) abs_.push_back(std::abs(v));
}

Observer StreamlineRecorder::observer() {
  return [this](const ScalarField& f, double) { observe(f); };
}

double streamline_horizon(double nu) { return 2.0 / std::sqrt(nu); }

StreamlineRateMap streamline_rates(const StreamlineRecorder& rec, const ShearProfile& profile,
                                   double nu) {
  const auto& times = rec.times();
  const std::size_t n = rec.grid().size();
  const std::size_t nt = times.size();
  if (nt < 3) raise(Errc::InsufficientPoints, "streamline fits need at least three outputs");
  const auto& a = rec.moduli();

  StreamlineRateMap map;
  map.nu = nu;
  map.y = rec.grid().points();
  const auto strength = eval_B(profile, nu, map.y);
  const double nu13 = std::cbrt(nu);

  std::vector<double> raw(n), raw_local(n);
  std::vector<bool> bad(n, false);
  map.predicted.resize(n);
  map.t_lo.resize(n);
  map.t_hi.resize(n);
  std::vector<double> env(nt), xs, ys;
  for (std::size_t j = 0; j < n; ++j) {
    const double b23 = std::cbrt(strength.b[j] * strength.b[j]);
    map.predicted[j] = nu13 * b23;
    const double t_lo = 1.0 / map.predicted[j];
    const double t_hi = 2.0 * t_lo;
    map.t_lo[j] = t_lo;
    map.t_hi[j] = t_hi;
    if (times.back() < t_hi * (1.0 - 1e-9)) {
      raise(Errc::InsufficientPoints, "trajectory ends before the streamline window closes");
    }

    double running = 0.0;
    for (std::size_t k = nt; k-- > 0;) {
      running = std::max(running, a[k * n + j]);
      env[k] = running;
    }
    xs.clear();
    ys.clear();
    for (std::size_t k = 0; k < nt; ++k) {
      if (times[k] < t_lo || times[k] > t_hi) continue;
      if (env[k] < kUnderflow) {
        bad[j] = true;
        break;
      }
      xs.push_back(times[k]);
      ys.push_back(std::log(env[k]));
    }
    if (bad[j] || xs.size() < 2) {
      bad[j] = true;
      raw[j] = raw_local[j] = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    raw[j] = -least_squares(xs, ys).slope;

    xs.clear();
    ys.clear();
    for (std::size_t k = 0; k < nt; ++k) {
      if (times[k] < t_lo || times[k] > t_hi) continue;
      double mass = 0.0;
      for (int c = -kSmoothCells / 2; c <= kSmoothCells / 2; ++c) {
        const std::size_t jj = wrap(j, c, n);
        mass += a[k * n + jj] * a[k * n + jj];
      }
      if (mass < kUnderflow) {
        bad[j] = true;
        break;
      }
      xs.push_back(times[k]);
      ys.push_back(0.5 * std::log(mass));
    }
    raw_local[j] = bad[j] ? std::numeric_limits<double>::quiet_NaN() : -least_squares(xs, ys).slope;
  }

  map.rate.resize(n);
  map.rate_local = raw_local;
  map.ratio.resize(n);
  map.skipped.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    double acc = 0.0;
    int count = 0;
    for (int c = -kSmoothCells / 2; c <= kSmoothCells / 2; ++c) {
      const std::size_t jj = wrap(j, c, n);
      if (bad[jj]) continue;
      acc += raw[jj];
      ++count;
    }
    map.skipped[j] = bad[j];
    map.rate[j] = (bad[j] || count == 0) ? std::numeric_limits<double>::quiet_NaN()
                                         : std::max(0.0, acc / count);
    map.ratio[j] = map.rate[j] / map.predicted[j];
  }
  return map;
}

}  // namespace sheardiss
