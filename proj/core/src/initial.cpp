#include "sheardiss/initial.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "sheardiss/error.hpp"

namespace sheardiss {
namespace {

// Wide enough that the bump's own wavenumbers stay below the shear-induced ones.
constexpr double kMonotoneWidth = 0.5;

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    parts.emplace_back(text.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

double to_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || !std::isfinite(v)) raise(Errc::InvalidArgument, "bad number '" + s + "'");
  return v;
}

long to_long(const std::string& s) {
  const double v = to_double(s);
  if (v != std::floor(v)) raise(Errc::InvalidArgument, "expected an integer, got '" + s + "'");
  return static_cast<long>(v);
}

// Periodized Gaussian: sum over the nearest images keeps it smooth on the circle.
void fill_gaussian(ScalarField& f, double center, double width) {
  const double dy = f.grid.spacing();
  if (width < 4.0 * dy) {
    std::ostringstream msg;
    msg << "bump width " << width << " is below four grid cells (" << 4.0 * dy << ")";
    raise(Errc::UnresolvedBump, msg.str());
  }
  for (std::size_t j = 0; j < f.values.size(); ++j) {
    double acc = 0.0;
    for (int image = -3; image <= 3; ++image) {
      const double d = f.grid.y(j) - center + kTwoPi * image;
      acc += std::exp(-0.5 * d * d / (width * width));
    }
    f.values[j] = acc;
  }
}

void normalize(ScalarField& f) {
  const double norm = std::sqrt(l2_norm_sq(f.values, f.grid.spacing()));
  if (!(norm > 0.0)) raise(Errc::InvalidArgument, "initial data has zero norm");
  for (auto& v : f.values) v /= norm;
}

}  // namespace

InitialSpec InitialSpec::parse(std::string_view text, std::uint64_t seed) {
  const auto parts = split(text, ':');
  const std::string& kind = parts[0];
  InitialSpec spec;
  spec.seed = seed;
  auto expect_args = [&](std::size_t lo, std::size_t hi) {
    if (parts.size() - 1 < lo || parts.size() - 1 > hi) {
      raise(Errc::InvalidArgument, "wrong number of arguments in data spec '" + std::string(text) + "'");
    }
  };
  if (kind == "fourier_mode") {
    expect_args(1, 1);
    spec.kind = InitialKind::FourierMode;
    spec.mode = to_long(parts[1]);
  } else if (kind == "gaussian_bump") {
    expect_args(2, 2);
    spec.kind = InitialKind::GaussianBump;
    spec.center = to_double(parts[1]);
    spec.width = to_double(parts[2]);
  } else if (kind == "random_band" || kind == "random") {
    expect_args(0, 1);
    spec.kind = InitialKind::RandomBand;
    if (parts.size() == 2) spec.m_max = to_long(parts[1]);
  } else if (kind == "critical_bump") {
    expect_args(0, 0);
    spec.kind = InitialKind::CriticalBump;
  } else if (kind == "monotone_bump") {
    expect_args(0, 1);
    spec.kind = InitialKind::MonotoneBump;
    spec.width = kMonotoneWidth;
    if (parts.size() == 2) spec.width = to_double(parts[1]);
  } else {
    raise(Errc::InvalidArgument, "unknown data kind '" + kind + "'");
  }
  if (spec.width <= 0.0) raise(Errc::InvalidArgument, "bump width must be positive");
  if (spec.m_max < 1) raise(Errc::InvalidArgument, "random_band needs m_max >= 1");
  return spec;
}

std::string InitialSpec::label() const {
  std::ostringstream out;
  switch (kind) {
    case InitialKind::FourierMode: out << "fourier_mode:" << mode; break;
    case InitialKind::GaussianBump: out << "gaussian_bump:" << center << ':' << width; break;
    case InitialKind::RandomBand: out << "random_band:" << m_max; break;
    case InitialKind::CriticalBump: out << "critical_bump"; break;
    case InitialKind::MonotoneBump: out << "monotone_bump:" << width; break;
  }
  return out.str();
}

double feature_width(const InitialSpec& spec, double nu) {
  switch (spec.kind) {
    case InitialKind::CriticalBump: return std::pow(nu, 0.25);
    case InitialKind::GaussianBump:
    case InitialKind::MonotoneBump: return spec.width;
    case InitialKind::FourierMode: return kTwoPi / (4.0 * (1.0 + std::abs(static_cast<double>(spec.mode))));
    case InitialKind::RandomBand: return kTwoPi / (4.0 * static_cast<double>(spec.m_max));
  }
  return 0.0;
}

ScalarField make_initial(const InitialSpec& spec, const Grid& grid, const ShearProfile& profile,
                         double nu) {
  ScalarField f(grid, 0.0);
  const std::size_t n = grid.size();
  switch (spec.kind) {
    case InitialKind::FourierMode:
      if (std::abs(spec.mode) >= static_cast<long>(n / 2)) {
        raise(Errc::InvalidArgument, "Fourier mode is not resolved on this grid");
      }
      for (std::size_t j = 0; j < n; ++j) {
        f.values[j] = std::polar(1.0, static_cast<double>(spec.mode) * grid.y(j));
      }
      break;
    case InitialKind::GaussianBump:
      fill_gaussian(f, spec.center, spec.width);
      break;
    case InitialKind::CriticalBump: {
      if (!profile.has_critical_points()) {
        raise(Errc::NoCriticalPoints, "critical_bump needs a profile with critical points");
      }
      if (!(nu > 0.0 && nu <= 1.0)) raise(Errc::InvalidArgument, "nu must lie in (0,1]");
      fill_gaussian(f, profile.critical_points().front().y, std::pow(nu, 0.25));
      break;
    }
    case InitialKind::MonotoneBump: {
      double best_y = 0.0;
      double best = -1.0;
      for (std::size_t i = 0; i < 4096; ++i) {
        const double y = kTwoPi * static_cast<double>(i) / 4096.0;
        const double s = std::abs(profile.du(y));
        if (s > best) {
          best = s;
          best_y = y;
        }
      }
      fill_gaussian(f, best_y, spec.width);
      break;
    }
    case InitialKind::RandomBand: {
      if (spec.m_max >= static_cast<long>(n / 2)) {
        raise(Errc::InvalidArgument, "random_band m_max is not resolved on this grid");
      }
      std::mt19937_64 rng(spec.seed);
      std::normal_distribution<double> normal(0.0, 1.0);
      std::vector<std::pair<long, cplx>> coeffs;
      for (long m = -spec.m_max; m <= spec.m_max; ++m) {
        const double re = normal(rng);
        const double im = normal(rng);
        coeffs.emplace_back(m, cplx{re, im});
      }
      for (std::size_t j = 0; j < n; ++j) {
        cplx acc{0.0, 0.0};
        for (const auto& [m, c] : coeffs) acc += c * std::polar(1.0, static_cast<double>(m) * grid.y(j));
        f.values[j] = acc;
      }
      break;
    }
  }
  normalize(f);
  return f;
}

}  // namespace sheardiss
