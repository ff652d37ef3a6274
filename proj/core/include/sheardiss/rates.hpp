#pragma once

#include <span>
#include <string>
#include <vector>

#include "sheardiss/shear.hpp"
#include "sheardiss/solver.hpp"

namespace sheardiss {

/// q(t) ~ exp(intercept - rate t) fitted by least squares on log q.
struct DecayFit {
  std::string quantity;
  double t_lo = 0.0;
  double t_hi = 0.0;
  double rate = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double nu = 0.0;
  std::size_t points = 0;
};

/// Fits samples with t in [t_lo, t_hi]. Errc::Underflow if any value in the
/// window is below 1e-280; Errc::InsufficientPoints if fewer than two fall
/// inside.
DecayFit fit_decay_rate(std::span<const double> t, std::span<const double> q, double t_lo,
                        double t_hi, std::string quantity = {}, double nu = 0.0);

struct ScalingFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Slope of log rate against log nu. Errc::InsufficientPoints for fewer
/// than four distinct nu values; Errc::InvalidArgument for nonpositive input.
ScalingFit scaling_exponent(std::span<const double> nu, std::span<const double> rate);

/// Stores |f(t, y)| at every observed output for later per-y fits.
class StreamlineRecorder {
 public:
  /// Keeps outputs with t <= t_max (0: no limit) spaced at least
  /// `min_spacing` apart.
  explicit StreamlineRecorder(const Grid& grid, double t_max = 0.0, double min_spacing = 0.0);

  void observe(const ScalarField& field);
  Observer observer();

  const Grid& grid() const noexcept { return grid_; }
  const std::vector<double>& times() const noexcept { return t_; }
  /// Row-major [output][y].
  const std::vector<double>& moduli() const noexcept { return abs_; }

 private:
  Grid grid_;
  double t_max_;
  double min_spacing_;
  std::vector<double> t_;
  std::vector<double> abs_;
};

struct StreamlineRateMap {
  double nu = 0.0;
  std::vector<double> y;
  std::vector<double> rate;        ///< envelope rate of |f(., y)|, 5-cell smoothed
  std::vector<double> rate_local;  ///< rate of the 5-cell local L2 mass
  std::vector<double> predicted;   ///< nu^{1/3} B^{2/3}
  std::vector<double> ratio;       ///< rate / predicted, NaN where skipped
  std::vector<double> t_lo;
  std::vector<double> t_hi;
  std::vector<bool> skipped;       ///< |f| underflowed inside the window
};

/// Per-y fits of log|f| on [T(y), 2 T(y)] with T = nu^{-1/3} B^{-2/3}.
/// The envelope is the running maximum of |f| taken from the right, so
/// transient zeros do not bias the slope.
StreamlineRateMap streamline_rates(const StreamlineRecorder& rec, const ShearProfile& profile,
                                   double nu);

/// Latest window end, 2 nu^{-1/2} (reached in the critical layer).
double streamline_horizon(double nu);

}  // namespace sheardiss
