#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "sheardiss/shear.hpp"
#include "sheardiss/spectral.hpp"

namespace sheardiss {

struct SolveConfig {
  double nu = 1e-3;
  double dt = 0.05;
  double t_end = 10.0;
  std::size_t output_stride = 10;  ///< steps between observer calls
  std::string profile = "sine";    ///< recorded in checkpoints only
  std::uint64_t seed = 0;          ///< recorded in checkpoints only
  double tail_limit = 1e-8;        ///< AliasingError threshold
};

/// Validates nu in (0,1], dt > 0, dt <= t_end.
void validate(const SolveConfig& config);

/// n = smallest power of two >= 8 (||U'|| nu^{-1/3} + nu^{-1/4}), at least
/// 16, and large enough that `min_feature_width` spans four cells.
std::size_t resolution_rule(const ShearProfile& profile, double nu, double min_feature_width = 0.0);
double default_dt(const ShearProfile& profile);
double default_t_end(double nu);

/// Solving the k = 1 problem with nu_eff and evaluating at tau = time_scale * t
/// gives the x-mode k at time t, up to the e^{-nu k^2 t} factor and a
/// complex conjugation for k < 0 (see reconstruct_mode).
struct ModeReduction {
  double nu_eff = 0.0;
  double time_scale = 0.0;
};

/// Errc::ZeroMode for k = 0.
ModeReduction reduce_mode(long k, double nu);

/// F_k(t, y) from the reduced solution g(tau = |k| t, y).
std::vector<cplx> reconstruct_mode(long k, double nu, double t, std::span<const cplx> reduced);

/// One Strang step of d_t f + i U f = nu d_y^2 f: half phase rotation, exact
/// diffusion in Fourier space, half phase rotation. Owns its FFT plans.
class Stepper {
 public:
  /// nu >= 0 is accepted so that the pure-transport limit can be exercised.
  Stepper(const ShearProfile& profile, const Grid& grid, double nu, double dt,
          double tail_limit = 1e-8);

  /// Advances in place and returns the spectral tail fraction measured in
  /// Fourier space after the diffusion substep. Errc::AliasingError when it
  /// exceeds the limit.
  double advance(ScalarField& field);

  double dt() const noexcept { return dt_; }
  double nu() const noexcept { return nu_; }
  const Grid& grid() const noexcept { return grid_; }

 private:
  Grid grid_;
  double nu_;
  double dt_;
  double tail_limit_;
  Fft fft_;
  std::vector<cplx> half_phase_;
  std::vector<double> decay_;
  std::vector<cplx> modes_;
};

ScalarField step(const ScalarField& field, const ShearProfile& profile, double nu, double dt);

/// Called at t = 0, after every `output_stride` steps, and at t_end.
using Observer = std::function<void(const ScalarField& field, double tail_fraction)>;

struct TrajectoryFrame {
  double t = 0.0;
  std::vector<cplx> values;
  double tail_fraction = 0.0;
};

struct Trajectory {
  Grid grid{16};
  double nu = 0.0;
  double dt = 0.0;
  std::vector<TrajectoryFrame> frames;

  ScalarField field(std::size_t index) const;
};

/// Integrates to t_end with steps of t_end / ceil(t_end / dt). Deterministic.
void solve(const SolveConfig& config, const ShearProfile& profile, const ScalarField& f0,
           const Observer& observer);
Trajectory solve(const SolveConfig& config, const ShearProfile& profile, const ScalarField& f0);

/// Effective step actually used by solve().
double effective_dt(const SolveConfig& config);

}  // namespace sheardiss
