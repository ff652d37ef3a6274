#include "sheardiss/checkpoint.hpp"

#include <bit>
#include <cstring>

#include "json.hpp"
#include "sheardiss/error.hpp"

namespace sheardiss {
namespace {

template <typename T>
void put_le(std::ostream& out, T value) {
  static_assert(sizeof(T) == 8);
  std::uint64_t bits;
  std::memcpy(&bits, &value, 8);
  unsigned char bytes[8];
  for (int k = 0; k < 8; ++k) bytes[k] = static_cast<unsigned char>(bits >> (8 * k));
  out.write(reinterpret_cast<const char*>(bytes), 8);
}

template <typename T>
bool get_le(std::istream& in, T& value) {
  unsigned char bytes[8];
  if (!in.read(reinterpret_cast<char*>(bytes), 8)) return false;
  std::uint64_t bits = 0;
  for (int k = 0; k < 8; ++k) bits |= static_cast<std::uint64_t>(bytes[k]) << (8 * k);
  std::memcpy(&value, &bits, 8);
  return true;
}

}  // namespace

CheckpointWriter::CheckpointWriter(const std::filesystem::path& stem, const TrajectoryHeader& header)
    : n_(header.n) {
  auto json_path = stem;
  json_path += ".json";
  auto bin_path = stem;
  bin_path += ".bin";
  std::ofstream json(json_path);
  if (!json) raise(Errc::Io, "cannot write " + json_path.string());
  nlohmann::ordered_json j;
  j["nu"] = header.nu;
  j["profile"] = header.profile;
  j["dt"] = header.dt;
  j["n"] = header.n;
  j["seed"] = header.seed;
  json << j.dump(2) << '\n';
  bin_.open(bin_path, std::ios::binary | std::ios::trunc);
  if (!bin_) raise(Errc::Io, "cannot write " + bin_path.string());
}

void CheckpointWriter::append(double t, std::span<const cplx> values) {
  if (values.size() != n_) raise(Errc::InvalidArgument, "checkpoint row has the wrong length");
  put_le(bin_, t);
  put_le(bin_, static_cast<std::int64_t>(n_));
  for (const auto& v : values) {
    put_le(bin_, v.real());
    put_le(bin_, v.imag());
  }
  bin_.flush();
  ++rows_;
}

TrajectoryHeader read_checkpoint_header(const std::filesystem::path& json_path) {
  std::ifstream in(json_path);
  if (!in) raise(Errc::Io, "cannot open " + json_path.string());
  const auto j = nlohmann::json::parse(in);
  TrajectoryHeader h;
  h.nu = j.at("nu").get<double>();
  h.profile = j.at("profile").get<std::string>();
  h.dt = j.at("dt").get<double>();
  h.n = j.at("n").get<std::size_t>();
  h.seed = j.at("seed").get<std::uint64_t>();
  return h;
}

std::vector<TrajectoryFrame> read_checkpoint_rows(const std::filesystem::path& bin_path) {
  std::ifstream in(bin_path, std::ios::binary);
  if (!in) raise(Errc::Io, "cannot open " + bin_path.string());
  std::vector<TrajectoryFrame> frames;
  double t = 0.0;
  while (get_le(in, t)) {
    std::int64_t n = 0;
    if (!get_le(in, n) || n <= 0) raise(Errc::Io, "truncated checkpoint row");
    TrajectoryFrame frame;
    frame.t = t;
    frame.values.resize(static_cast<std::size_t>(n));
    for (auto& v : frame.values) {
      double re = 0.0;
      double im = 0.0;
      if (!get_le(in, re) || !get_le(in, im)) raise(Errc::Io, "truncated checkpoint row");
      v = {re, im};
    }
    frames.push_back(std::move(frame));
  }
  return frames;
}

}  // namespace sheardiss
