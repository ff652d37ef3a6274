#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "sheardiss/solver.hpp"

namespace sheardiss {

struct TrajectoryHeader {
  double nu = 0.0;
  std::string profile;
  double dt = 0.0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
};

/// Writes `<stem>.json` (the header) and appends binary rows to `<stem>.bin`.
/// Row layout, all little-endian: float64 t, int64 n, then n (re, im)
/// float64 pairs.
class CheckpointWriter {
 public:
  CheckpointWriter(const std::filesystem::path& stem, const TrajectoryHeader& header);

  void append(double t, std::span<const cplx> values);
  std::size_t rows() const noexcept { return rows_; }

 private:
  std::ofstream bin_;
  std::size_t n_;
  std::size_t rows_ = 0;
};

TrajectoryHeader read_checkpoint_header(const std::filesystem::path& json_path);
std::vector<TrajectoryFrame> read_checkpoint_rows(const std::filesystem::path& bin_path);

}  // namespace sheardiss
