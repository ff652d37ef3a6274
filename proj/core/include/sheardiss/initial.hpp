#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "sheardiss/shear.hpp"
#include "sheardiss/spectral.hpp"

namespace sheardiss {

enum class InitialKind { FourierMode, GaussianBump, RandomBand, CriticalBump, MonotoneBump };

/// Initial-data recipe. Fields not used by a kind are ignored.
struct InitialSpec {
  InitialKind kind = InitialKind::RandomBand;
  long mode = 1;              ///< FourierMode
  double center = 0.0;        ///< GaussianBump
  double width = 0.2;         ///< GaussianBump, MonotoneBump
  std::uint64_t seed = 0;     ///< RandomBand
  long m_max = 8;             ///< RandomBand

  /// `fourier_mode:M`, `gaussian_bump:C:W`, `random_band[:MMAX]`,
  /// `critical_bump`, `monotone_bump[:W]` (W defaults to 0.5). The seed is
  /// supplied separately.
  static InitialSpec parse(std::string_view text, std::uint64_t seed = 0);
  std::string label() const;
};

/// Width of the narrowest feature the data carries, used to size the grid.
double feature_width(const InitialSpec& spec, double nu);

/// L2-normalized initial field. CriticalBump is a Gaussian of width
/// nu^{1/4} at the first critical point; MonotoneBump is centred where |U'|
/// is largest. Errc::UnresolvedBump if a bump is narrower than four cells.
ScalarField make_initial(const InitialSpec& spec, const Grid& grid, const ShearProfile& profile,
                         double nu);

}  // namespace sheardiss
