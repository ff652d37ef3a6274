#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sheardiss/config.hpp"
#include "sheardiss/initial.hpp"
#include "sheardiss/shear.hpp"

namespace sheardiss {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitAudit = 3;

/// Outcome of one nu point.
struct PointReport {
  double nu = 0.0;
  std::filesystem::path dir;
  bool completed = false;
  std::string error;                  ///< set when the point aborted
  std::vector<std::string> failures;  ///< failing checks, by name
  std::optional<double> delta_fit;
  std::optional<double> lambda;       ///< scaling-window decay rate of ||f||^2
  std::optional<double> lambda_r2;
  std::optional<double> c_min;
  std::optional<double> delta_ls;
  std::optional<double> delta_cert;
  std::optional<bool> gronwall_pass;
  std::optional<bool> early_nonincreasing;  ///< d Phi/dt <= 0 before nu^{-1/2}; not a failure
  std::optional<bool> equivalence_pass;
  std::optional<bool> lemma_a2_pass;
  std::optional<bool> spectral_pass;
  std::size_t n = 0;
  double dt = 0.0;
  double t_end = 0.0;
};

struct RunReport {
  int exit_code = kExitOk;
  std::string message;
  double beta_used = 0.0;
  double sigma_used = 0.0;
  std::vector<PointReport> points;
  std::optional<double> scaling_slope;
};

/// Target slope and tolerance for the ||f||^2 decay rate against nu, or
/// nullopt when the data kind has no stated target.
struct ScalingTarget {
  double slope = 0.0;
  double tolerance = 0.0;
};
std::optional<ScalingTarget> scaling_target(const ShearProfile& profile, const InitialSpec& data);

/// Decay-rate window for the scaling fit: [nu^{-1/3}, 2 nu^{-1/3}] for
/// monotone_bump, [nu^{-1/2}, 3 nu^{-1/2}] otherwise.
std::pair<double, double> scaling_window(const InitialSpec& data, double nu);

/// Solves every nu, runs the enabled checks and writes `<out>/nu_<nu>/`.
/// Exit code 2 on configuration errors, 3 if any check fails.
RunReport run(const ExperimentConfig& config, std::ostream& log);

/// run() plus `<out>/scaling.json`. The scaling check is always enabled;
/// failed points are reported and the rest still complete.
RunReport sweep(const ExperimentConfig& config, std::ostream& log);

/// Renders `decay.svg` and `logW.svg` in every `nu_*` directory under
/// `root`. Errc::MissingData if there is nothing to render.
std::vector<std::filesystem::path> emit_plots(const std::filesystem::path& root);

/// Directory name for one nu value, e.g. `nu_0.001`, `nu_1e-05`.
std::string nu_dir_name(double nu);

}  // namespace sheardiss
