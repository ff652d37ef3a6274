#pragma once

#include <cmath>
#include <complex>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "sheardiss/spectral.hpp"

namespace testing {

/// Random smooth field: Fourier modes |m| <= m_max with 1/(1+m^2) amplitudes.
inline sheardiss::ScalarField random_field(const sheardiss::Grid& grid, std::mt19937_64& rng, double t = 0.0,
                                           long m_max = 12) {
  std::normal_distribution<double> normal;
  sheardiss::ScalarField f(grid, t);
  std::vector<std::complex<double>> c(2 * static_cast<std::size_t>(m_max) + 1);
  for (auto& a : c) a = {normal(rng), normal(rng)};
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double y = grid.y(j);
    std::complex<double> v;
    for (long m = -m_max; m <= m_max; ++m) {
      v += c[static_cast<std::size_t>(m + m_max)] / (1.0 + static_cast<double>(m * m)) *
           std::polar(1.0, static_cast<double>(m) * y);
    }
    f.values[j] = v;
  }
  return f;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("sheardiss_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace testing
