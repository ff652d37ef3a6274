#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sheardiss {

enum class Check { Gronwall, Equivalence, LemmaA2, Spectral, Scaling };

inline constexpr Check kAllChecks[] = {Check::Gronwall, Check::Equivalence, Check::LemmaA2,
                                       Check::Spectral, Check::Scaling};

std::string_view to_string(Check check) noexcept;

/// Parameters of a run or sweep. Unset optionals mean "auto".
struct ExperimentConfig {
  std::string profile = "sine";
  std::vector<double> nu_list{1e-3};
  std::optional<double> beta;   ///< calibrated when unset
  std::optional<double> sigma;  ///< beta^{3/2} when unset
  std::string data = "random_band";
  std::optional<double> dt;
  std::optional<std::size_t> n;
  std::optional<double> t_end;
  std::filesystem::path output_dir = "out";
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  std::vector<Check> checks{Check::Gronwall, Check::Equivalence, Check::LemmaA2, Check::Spectral};

  bool enabled(Check check) const noexcept;
  /// Canonical `key = value` text; identical configs give identical text.
  std::string canonical() const;
};

/// Applies one `key = value` setting. Keys: profile, nu (scalar or list,
/// appends), beta, sigma, data, dt, n, t_end, out, seed, workers, checks.
/// "auto" clears beta, sigma, dt, n and t_end. Errc::InvalidArgument on
/// unknown keys or bad values.
void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value);

/// Reads a TOML-style file of `key = value` lines; `#` starts a comment and
/// lists are written `[a, b, c]`.
ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig parse_config(std::string_view text);

/// nu values in (0,1], workers >= 1, at least one nu.
void validate(const ExperimentConfig& config);

std::vector<Check> parse_checks(std::string_view list);

/// 64-bit FNV-1a, printed as 16 hex digits.
std::string fnv1a_hex(std::string_view text);

}  // namespace sheardiss
