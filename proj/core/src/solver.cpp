#include "sheardiss/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sheardiss/error.hpp"

namespace sheardiss {

void validate(const SolveConfig& config) {
  if (!(config.nu > 0.0 && config.nu <= 1.0)) raise(Errc::InvalidArgument, "nu must lie in (0,1]");
  if (!(config.dt > 0.0)) raise(Errc::InvalidArgument, "dt must be positive");
  if (!(config.dt <= config.t_end)) raise(Errc::InvalidArgument, "dt must not exceed t_end");
  if (config.output_stride == 0) raise(Errc::InvalidArgument, "output stride must be positive");
}

std::size_t resolution_rule(const ShearProfile& profile, double nu, double min_feature_width) {
  const double target = 8.0 * (profile.norm_du() * std::pow(nu, -1.0 / 3.0) + std::pow(nu, -0.25));
  std::size_t n = 16;
  while (static_cast<double>(n) < target) n *= 2;
  if (min_feature_width > 0.0) {
    while (4.0 * kTwoPi / static_cast<double>(n) > min_feature_width) n *= 2;
  }
  return n;
}

double default_dt(const ShearProfile& profile) { return 0.05 / std::max(1.0, profile.norm_u()); }

double default_t_end(double nu) { return 4.0 / std::sqrt(nu); }

ModeReduction reduce_mode(long k, double nu) {
  if (k == 0) raise(Errc::ZeroMode, "k = 0 is the plain heat equation");
  const double ak = static_cast<double>(k < 0 ? -k : k);
  return {nu / ak, ak};
}

std::vector<cplx> reconstruct_mode(long k, double nu, double t, std::span<const cplx> reduced) {
  if (k == 0) raise(Errc::ZeroMode, "k = 0 is the plain heat equation");
  const double kk = static_cast<double>(k) * static_cast<double>(k);
  const double damping = std::exp(-nu * kk * t);
  std::vector<cplx> out(reduced.size());
  for (std::size_t j = 0; j < reduced.size(); ++j) {
    out[j] = (k < 0 ? std::conj(reduced[j]) : reduced[j]) * damping;
  }
  return out;
}

Stepper::Stepper(const ShearProfile& profile, const Grid& grid, double nu, double dt,
                 double tail_limit)
    : grid_(grid), nu_(nu), dt_(dt), tail_limit_(tail_limit), fft_(grid.size()),
      half_phase_(grid.size()), decay_(grid.size()), modes_(grid.size()) {
  if (!(nu >= 0.0)) raise(Errc::InvalidArgument, "nu must be nonnegative");
  if (!(dt > 0.0)) raise(Errc::InvalidArgument, "dt must be positive");
  const std::size_t n = grid.size();
  for (std::size_t j = 0; j < n; ++j) {
    half_phase_[j] = std::polar(1.0, -0.5 * dt * profile.u(grid.y(j)));
    const double m = static_cast<double>(wavenumber(j, n));
    decay_[j] = std::exp(-nu * m * m * dt);
  }
}

double Stepper::advance(ScalarField& field) {
  auto& f = field.values;
  const std::size_t n = f.size();
  for (std::size_t j = 0; j < n; ++j) f[j] *= half_phase_[j];
  fft_.forward(f, modes_);
  for (std::size_t j = 0; j < n; ++j) modes_[j] *= decay_[j];
  const double tail = spectral_tail_fraction(modes_);
  fft_.inverse(modes_, f);
  for (std::size_t j = 0; j < n; ++j) f[j] *= half_phase_[j];
  field.t += dt_;
  if (tail > tail_limit_) {
    std::ostringstream msg;
    msg << "spectral tail fraction " << tail << " exceeds " << tail_limit_ << " at t=" << field.t
        << " (n=" << n << ")";
    raise(Errc::AliasingError, msg.str());
  }
  return tail;
}

ScalarField step(const ScalarField& field, const ShearProfile& profile, double nu, double dt) {
  Stepper stepper(profile, field.grid, nu, dt, 1.0);
  ScalarField out = field;
  stepper.advance(out);
  return out;
}

ScalarField Trajectory::field(std::size_t index) const {
  ScalarField f(grid, frames.at(index).t);
  f.values = frames[index].values;
  return f;
}

double effective_dt(const SolveConfig& config) {
  const double steps = std::ceil(config.t_end / config.dt - 1e-9);
  return config.t_end / steps;
}

void solve(const SolveConfig& config, const ShearProfile& profile, const ScalarField& f0,
           const Observer& observer) {
  validate(config);
  for (const auto& v : f0.values) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      raise(Errc::NonFinite, "initial data has non-finite entries");
    }
  }
  const auto steps = static_cast<std::size_t>(std::ceil(config.t_end / config.dt - 1e-9));
  const double dt = config.t_end / static_cast<double>(steps);
  Stepper stepper(profile, f0.grid, config.nu, dt, config.tail_limit);

  ScalarField field = f0;
  field.t = 0.0;
  observer(field, 0.0);
  for (std::size_t k = 1; k <= steps; ++k) {
    const double tail = stepper.advance(field);
    // Recompute t from the step count so outputs do not accumulate drift.
    field.t = dt * static_cast<double>(k);
    if (k % config.output_stride == 0 || k == steps) observer(field, tail);
  }
}

Trajectory solve(const SolveConfig& config, const ShearProfile& profile, const ScalarField& f0) {
  Trajectory traj;
  traj.grid = f0.grid;
  traj.nu = config.nu;
  traj.dt = effective_dt(config);
  solve(config, profile, f0, [&](const ScalarField& f, double tail) {
    traj.frames.push_back({f.t, f.values, tail});
  });
  return traj;
}

}  // namespace sheardiss
