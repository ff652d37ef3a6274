#include "sheardiss/shear.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "sheardiss/error.hpp"

namespace sheardiss {
namespace {

constexpr std::size_t kScanCells = 4096;
constexpr int kBisectionSteps = 60;
constexpr std::size_t kNormSamples = 10000;
constexpr double kDegenerateCurvature = 1e-8;
constexpr double kShearFreeThreshold = 1e-13;

double wrap(double y) noexcept {
  double r = std::fmod(y, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

// Sum over harmonics of (a cos(m y) + b sin(m y)) differentiated `order` times.
double trig_sum(const TrigCoefficients& c, double y, int order) noexcept {
  double acc = order == 0 ? c.mean : 0.0;
  const std::size_t modes = std::max(c.cos.size(), c.sin.size());
  for (std::size_t i = 0; i < modes; ++i) {
    const double m = static_cast<double>(i + 1);
    const double a = i < c.cos.size() ? c.cos[i] : 0.0;
    const double b = i < c.sin.size() ? c.sin[i] : 0.0;
    if (a == 0.0 && b == 0.0) continue;
    const double cs = std::cos(m * y);
    const double sn = std::sin(m * y);
    switch (order) {
      case 0: acc += a * cs + b * sn; break;
      case 1: acc += m * (b * cs - a * sn); break;
      default: acc += -m * m * (a * cs + b * sn); break;
    }
  }
  return acc;
}

void check_finite(const TrigCoefficients& c) {
  auto finite = [](double v) { return std::isfinite(v); };
  if (!std::isfinite(c.mean) || !std::all_of(c.cos.begin(), c.cos.end(), finite) ||
      !std::all_of(c.sin.begin(), c.sin.end(), finite)) {
    raise(Errc::InvalidArgument, "profile coefficients must be finite");
  }
}

}  // namespace

double ShearProfile::u(double y) const noexcept {
  switch (kind_) {
    case ProfileKind::Sine: return std::sin(y);
    case ProfileKind::Cosine: return std::cos(y);
    default: return trig_sum(coeffs_, y, 0);
  }
}

double ShearProfile::du(double y) const noexcept {
  switch (kind_) {
    case ProfileKind::Sine: return std::cos(y);
    case ProfileKind::Cosine: return -std::sin(y);
    default: return trig_sum(coeffs_, y, 1);
  }
}

double ShearProfile::d2u(double y) const noexcept {
  switch (kind_) {
    case ProfileKind::Sine: return -std::sin(y);
    case ProfileKind::Cosine: return -std::cos(y);
    default: return trig_sum(coeffs_, y, 2);
  }
}

ShearProfile make_profile(ProfileKind kind, const TrigCoefficients& params, std::string name) {
  ShearProfile p;
  p.kind_ = kind;
  switch (kind) {
    case ProfileKind::Sine:
      p.coeffs_ = TrigCoefficients{0.0, {}, {1.0}};
      p.name_ = name.empty() ? "sine" : std::move(name);
      break;
    case ProfileKind::Cosine:
      p.coeffs_ = TrigCoefficients{0.0, {1.0}, {}};
      p.name_ = name.empty() ? "cosine" : std::move(name);
      break;
    case ProfileKind::PolynomialTrig:
    case ProfileKind::Tabulated:
      check_finite(params);
      p.coeffs_ = params;
      p.name_ = name.empty() ? "trig" : std::move(name);
      break;
  }

  // Norms from a dense scan. Extrema of U sit at critical points and are
  // refined below.
  double max_u = 0.0;
  double max_du = 0.0;
  double max_d2u = 0.0;
  for (std::size_t i = 0; i < kNormSamples; ++i) {
    const double y = kTwoPi * static_cast<double>(i) / kNormSamples;
    max_u = std::max(max_u, std::abs(p.u(y)));
    max_du = std::max(max_du, std::abs(p.du(y)));
    max_d2u = std::max(max_d2u, std::abs(p.d2u(y)));
  }
  p.shear_free_ = max_du < kShearFreeThreshold;

  if (!p.shear_free_) {
    std::vector<double> slope(kScanCells + 1);
    for (std::size_t i = 0; i <= kScanCells; ++i) {
      slope[i] = p.du(kTwoPi * static_cast<double>(i) / kScanCells);
    }
    for (std::size_t i = 0; i < kScanCells; ++i) {
      double lo = kTwoPi * static_cast<double>(i) / kScanCells;
      double hi = kTwoPi * static_cast<double>(i + 1) / kScanCells;
      double f_lo = slope[i];
      const double f_hi = slope[i + 1];
      double root;
      if (f_lo == 0.0) {
        root = lo;
      } else if (f_lo * f_hi < 0.0) {
        for (int step = 0; step < kBisectionSteps; ++step) {
          const double mid = 0.5 * (lo + hi);
          const double f_mid = p.du(mid);
          if (f_mid == 0.0) {
            lo = hi = mid;
            break;
          }
          if ((f_mid < 0.0) == (f_lo < 0.0)) {
            lo = mid;
            f_lo = f_mid;
          } else {
            hi = mid;
          }
        }
        root = 0.5 * (lo + hi);
      } else {
        continue;
      }
      root = wrap(root);
      const double curvature = std::abs(p.d2u(root));
      if (curvature < kDegenerateCurvature) {
        std::ostringstream msg;
        msg << "critical point at y=" << root << " has |U''|=" << curvature;
        raise(Errc::DegenerateCritical, msg.str());
      }
      p.critical_.push_back({root, curvature});
      max_u = std::max(max_u, std::abs(p.u(root)));
    }
    std::sort(p.critical_.begin(), p.critical_.end(),
              [](const CriticalPoint& a, const CriticalPoint& b) { return a.y < b.y; });
  }

  if (kind == ProfileKind::Sine || kind == ProfileKind::Cosine) {
    max_u = max_du = max_d2u = 1.0;
  }
  p.norm_u_ = max_u;
  p.norm_du_ = max_du;
  p.norm_d2u_ = max_d2u;
  return p;
}

ShearProfile make_tabulated_profile(std::span<const double> y, std::span<const double> u,
                                    std::string name) {
  if (y.size() != u.size()) raise(Errc::InvalidArgument, "table columns differ in length");
  if (y.size() < 9) raise(Errc::InvalidArgument, "table needs at least 9 rows");
  const std::size_t samples = y.size() - 1;
  const double spacing = kTwoPi / static_cast<double>(samples);
  for (std::size_t j = 0; j < y.size(); ++j) {
    if (!std::isfinite(u[j])) raise(Errc::InvalidArgument, "table values must be finite");
    if (std::abs(y[j] - spacing * static_cast<double>(j)) > 1e-9) {
      raise(Errc::InvalidArgument, "table must be uniform on [0, 2pi] including both endpoints");
    }
  }
  if (std::abs(u.back() - u.front()) > 1e-10) {
    std::ostringstream msg;
    msg << "U(0)=" << u.front() << " but U(2pi)=" << u.back();
    raise(Errc::NonPeriodic, msg.str());
  }

  // Discrete Fourier coefficients of the periodic samples; the Nyquist
  // cosine is halved so the interpolant stays real and symmetric.
  TrigCoefficients c;
  const std::size_t half = samples / 2;
  double mean = 0.0;
  for (std::size_t j = 0; j < samples; ++j) mean += u[j];
  c.mean = mean / static_cast<double>(samples);
  c.cos.assign(half, 0.0);
  c.sin.assign(half, 0.0);
  for (std::size_t m = 1; m <= half; ++m) {
    double a = 0.0;
    double b = 0.0;
    for (std::size_t j = 0; j < samples; ++j) {
      const double phase = static_cast<double>((m * j) % samples) * spacing;
      a += u[j] * std::cos(phase);
      b += u[j] * std::sin(phase);
    }
    const bool nyquist = samples % 2 == 0 && m == half;
    const double scale = (nyquist ? 1.0 : 2.0) / static_cast<double>(samples);
    c.cos[m - 1] = a * scale;
    c.sin[m - 1] = nyquist ? 0.0 : b * scale;
  }
  // Drop roundoff-level harmonics so analytic tables reproduce exactly.
  double largest = std::abs(c.mean);
  for (std::size_t m = 0; m < half; ++m) {
    largest = std::max({largest, std::abs(c.cos[m]), std::abs(c.sin[m])});
  }
  for (std::size_t m = 0; m < half; ++m) {
    if (std::abs(c.cos[m]) < 1e-14 * largest) c.cos[m] = 0.0;
    if (std::abs(c.sin[m]) < 1e-14 * largest) c.sin[m] = 0.0;
  }
  return make_profile(ProfileKind::Tabulated, c, std::move(name));
}

ShearProfile load_profile_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) raise(Errc::Io, "cannot open profile table " + path.string());
  std::vector<double> ys;
  std::vector<double> us;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double y = 0.0;
    double u = 0.0;
    if (!(row >> y >> u)) {
      if (first) {
        first = false;
        continue;
      }
      raise(Errc::InvalidArgument, "malformed row in " + path.string() + ": " + line);
    }
    first = false;
    ys.push_back(y);
    us.push_back(u);
  }
  return make_tabulated_profile(ys, us, "table:" + path.string());
}

ShearProfile profile_from_name(std::string_view name) {
  if (name == "sine") return make_profile(ProfileKind::Sine);
  if (name == "cosine") return make_profile(ProfileKind::Cosine);
  if (name == "sin2") return make_profile(ProfileKind::PolynomialTrig, {0.0, {}, {0.0, 1.0}}, "sin2");
  if (name == "zero") return make_profile(ProfileKind::PolynomialTrig, {}, "zero");
  if (name.starts_with("table:")) return load_profile_table(std::string(name.substr(6)));
  raise(Errc::InvalidArgument, "unknown profile '" + std::string(name) + "'");
}

ShearSamples eval_derivatives(const ShearProfile& profile, std::span<const double> ys) {
  ShearSamples s;
  s.u.reserve(ys.size());
  s.du.reserve(ys.size());
  s.d2u.reserve(ys.size());
  for (double y : ys) {
    s.u.push_back(profile.u(y));
    s.du.push_back(profile.du(y));
    s.d2u.push_back(profile.d2u(y));
  }
  return s;
}

double periodic_distance(double a, double b) noexcept {
  const double d = std::abs(wrap(a) - wrap(b));
  return std::min(d, kTwoPi - d);
}

double distance_to_critical(const ShearProfile& profile, double y) {
  if (!profile.has_critical_points()) {
    raise(Errc::NoCriticalPoints, "profile '" + profile.name() + "' has no critical points");
  }
  double best = kTwoPi;
  for (const auto& cp : profile.critical_points()) best = std::min(best, periodic_distance(cp.y, y));
  return best;
}

}  // namespace sheardiss
