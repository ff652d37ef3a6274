#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sheardiss {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;
inline constexpr double kPi = 3.141592653589793238462643383279;

enum class ProfileKind { Sine, Cosine, PolynomialTrig, Tabulated };

/// U(y) = mean + sum_m cos[m-1]*cos(m y) + sin[m-1]*sin(m y).
struct TrigCoefficients {
  double mean = 0.0;
  std::vector<double> cos;
  std::vector<double> sin;
};

struct CriticalPoint {
  double y = 0.0;
  double curvature = 0.0;  ///< |U''(y)|
};

/// U, U', U'' sampled at a set of points.
struct ShearSamples {
  std::vector<double> u;
  std::vector<double> du;
  std::vector<double> d2u;
};

/// A 2pi-periodic shear profile with exact derivatives and its
/// nondegenerate critical points. Immutable once built.
class ShearProfile {
 public:
  ProfileKind kind() const noexcept { return kind_; }
  const std::string& name() const noexcept { return name_; }
  const TrigCoefficients& coefficients() const noexcept { return coeffs_; }

  double u(double y) const noexcept;
  double du(double y) const noexcept;
  double d2u(double y) const noexcept;

  std::span<const CriticalPoint> critical_points() const noexcept { return critical_; }
  bool has_critical_points() const noexcept { return !critical_.empty(); }
  /// True when U' vanishes identically (U constant).
  bool is_shear_free() const noexcept { return shear_free_; }

  double norm_u() const noexcept { return norm_u_; }
  double norm_du() const noexcept { return norm_du_; }
  double norm_d2u() const noexcept { return norm_d2u_; }

 private:
  friend ShearProfile make_profile(ProfileKind, const TrigCoefficients&, std::string);

  ProfileKind kind_ = ProfileKind::Sine;
  std::string name_;
  TrigCoefficients coeffs_;
  std::vector<CriticalPoint> critical_;
  bool shear_free_ = false;
  double norm_u_ = 0.0;
  double norm_du_ = 0.0;
  double norm_d2u_ = 0.0;
};

/// Builds a profile and locates its critical points (sign-change scan of U'
/// on 4096 cells, then 60 bisection steps per bracket).
///
/// Sine and Cosine ignore `params`. Throws Errc::DegenerateCritical when a
/// located critical point has |U''| < 1e-8.
ShearProfile make_profile(ProfileKind kind, const TrigCoefficients& params = {},
                          std::string name = {});

/// Trigonometric interpolant of a closed table sampled uniformly on [0, 2pi].
/// The last row must repeat the first (y = 2pi); Errc::NonPeriodic when the
/// endpoint values differ by more than 1e-10.
ShearProfile make_tabulated_profile(std::span<const double> y, std::span<const double> u,
                                    std::string name = "table");

/// Reads `y,U` CSV rows (an optional non-numeric header line is skipped).
ShearProfile load_profile_table(const std::filesystem::path& path);

/// `sine`, `cosine`, `sin2`, `zero`, or `table:<path>`.
ShearProfile profile_from_name(std::string_view name);

ShearSamples eval_derivatives(const ShearProfile& profile, std::span<const double> ys);

/// Distance on the circle of circumference 2pi.
double periodic_distance(double a, double b) noexcept;

/// min_j periodic_distance(y_j, y). Errc::NoCriticalPoints if none exist.
double distance_to_critical(const ShearProfile& profile, double y);

}  // namespace sheardiss
