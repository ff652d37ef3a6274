#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "sheardiss/config.hpp"
#include "sheardiss/error.hpp"
#include "sheardiss/experiment.hpp"

namespace sheardiss {
namespace {

namespace fs = std::filesystem;

constexpr double kWidth = 640.0;
constexpr double kHeight = 400.0;
constexpr double kMargin = 56.0;

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::size_t column(const std::string& name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) raise(Errc::MissingData, "column '" + name + "' missing");
    return static_cast<std::size_t>(it - header.begin());
  }
};

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

Table read_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) raise(Errc::MissingData, "missing " + path.string());
  Table t;
  std::string line;
  if (!std::getline(in, line)) raise(Errc::MissingData, "empty " + path.string());
  t.header = split(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    for (const auto& cell : split(line)) row.push_back(std::strtod(cell.c_str(), nullptr));
    t.rows.push_back(std::move(row));
  }
  if (t.rows.empty()) raise(Errc::MissingData, "no rows in " + path.string());
  return t;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string provenance(const fs::path& dir, const fs::path& source) {
  std::string hash;
  std::ifstream in(dir / "summary.json");
  if (in) {
    const auto j = nlohmann::json::parse(in, nullptr, false);
    if (!j.is_discarded() && j.contains("config_hash")) hash = j["config_hash"].get<std::string>();
  }
  if (hash.empty()) {
    std::ifstream src(source, std::ios::binary);
    std::ostringstream text;
    text << src.rdbuf();
    hash = fnv1a_hex(text.str());
  }
  return "<!-- sheardiss config-hash: " + hash + " source: " + source.filename().string() + " -->\n";
}

std::string svg_open() {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(kWidth) + "\" height=\"" +
         fmt(kHeight) + "\" viewBox=\"0 0 " + fmt(kWidth) + ' ' + fmt(kHeight) + "\">\n";
}

struct Frame {
  double x0, x1, y0, y1;
  double px(double x) const { return kMargin + (x - x0) / (x1 - x0) * (kWidth - 2 * kMargin); }
  double py(double y) const { return kHeight - kMargin - (y - y0) / (y1 - y0) * (kHeight - 2 * kMargin); }
};

std::string axes(const Frame& f, const std::string& xlabel, const std::string& ylabel) {
  std::ostringstream s;
  s << "<rect x=\"" << fmt(kMargin) << "\" y=\"" << fmt(kMargin) << "\" width=\"" << fmt(kWidth - 2 * kMargin)
    << "\" height=\"" << fmt(kHeight - 2 * kMargin) << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double x = f.x0 + (f.x1 - f.x0) * k / 4.0;
    const double y = f.y0 + (f.y1 - f.y0) * k / 4.0;
    s << "<text x=\"" << fmt(f.px(x)) << "\" y=\"" << fmt(kHeight - kMargin + 16)
      << "\" font-size=\"10\" text-anchor=\"middle\">" << fmt(x) << "</text>\n";
    s << "<text x=\"" << fmt(kMargin - 4) << "\" y=\"" << fmt(f.py(y) + 3)
      << "\" font-size=\"10\" text-anchor=\"end\">" << fmt(y) << "</text>\n";
  }
  s << "<text x=\"" << fmt(kWidth / 2) << "\" y=\"" << fmt(kHeight - 12)
    << "\" font-size=\"12\" text-anchor=\"middle\">" << xlabel << "</text>\n";
  s << "<text x=\"14\" y=\"" << fmt(kHeight / 2) << "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
    << fmt(kHeight / 2) << ")\">" << ylabel << "</text>\n";
  return s.str();
}

fs::path decay_svg(const fs::path& dir) {
  const auto src = dir / "decay.csv";
  const Table t = read_csv(src);
  const auto ct = t.column("t");
  const char* names[] = {"norm_f2", "norm_fW2", "phi"};
  const char* colors[] = {"#1f77b4", "#2ca02c", "#d62728"};
  Frame f{t.rows.front()[ct], t.rows.back()[ct], std::numeric_limits<double>::infinity(),
          -std::numeric_limits<double>::infinity()};
  for (const auto* name : names) {
    const auto c = t.column(name);
    for (const auto& r : t.rows) {
      if (r[c] > 0.0) {
        f.y0 = std::min(f.y0, std::log(r[c]));
        f.y1 = std::max(f.y1, std::log(r[c]));
      }
    }
  }
  if (!(f.y1 > f.y0)) f.y1 = f.y0 + 1.0;
  if (!(f.x1 > f.x0)) f.x1 = f.x0 + 1.0;

  std::ostringstream s;
  s << svg_open() << provenance(dir, src);
  s << axes(f, "t", "log of norm");
  const auto cphi = t.column("phi");
  s << "<desc>log Phi(0) = " << fmt(std::log(t.rows.front()[cphi])) << "</desc>\n";
  for (std::size_t k = 0; k < 3; ++k) {
    const auto c = t.column(names[k]);
    s << "<polyline fill=\"none\" stroke=\"" << colors[k] << "\" stroke-width=\"1.2\" points=\"";
    bool first = true;
    for (const auto& r : t.rows) {
      if (!(r[c] > 0.0)) continue;
      s << (first ? "" : " ") << fmt(f.px(r[ct])) << ',' << fmt(f.py(std::log(r[c])));
      first = false;
    }
    s << "\"/>\n";
    s << "<text x=\"" << fmt(kWidth - kMargin - 4) << "\" y=\"" << fmt(kMargin + 14 + 14 * k)
      << "\" font-size=\"11\" text-anchor=\"end\" fill=\"" << colors[k] << "\">" << names[k] << "</text>\n";
  }
  s << "</svg>\n";
  const auto out = dir / "decay.svg";
  std::ofstream(out, std::ios::binary) << s.str();
  return out;
}

std::string shade(double v) {
  const int g = static_cast<int>(std::lround(255.0 * (1.0 - std::clamp(v, 0.0, 1.0))));
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", 255, g, g);
  return buf;
}

fs::path log_w_svg(const fs::path& dir) {
  const auto src = dir / "logW.csv";
  const Table t = read_csv(src);
  const auto ct = t.column("t");
  const auto cy = t.column("y");
  const auto cw = t.column("logW");
  std::vector<double> ts, ys;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& r : t.rows) {
    ts.push_back(r[ct]);
    ys.push_back(r[cy]);
    lo = std::min(lo, r[cw]);
    hi = std::max(hi, r[cw]);
  }
  auto uniq = [](std::vector<double>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  };
  uniq(ts);
  uniq(ys);
  const double dt = ts.size() > 1 ? ts[1] - ts[0] : 1.0;
  const double dy = ys.size() > 1 ? ys[1] - ys[0] : 1.0;
  Frame f{ts.front(), ts.back() + dt, ys.front(), ys.back() + dy};
  const double span = hi > lo ? hi - lo : 1.0;

  std::ostringstream s;
  s << svg_open() << provenance(dir, src);
  s << "<desc>logW range [" << fmt(lo) << ", " << fmt(hi) << "]</desc>\n";
  const double cw_px = f.px(f.x0 + dt) - f.px(f.x0);
  const double ch_px = f.py(f.y0) - f.py(f.y0 + dy);
  for (const auto& r : t.rows) {
    s << "<rect x=\"" << fmt(f.px(r[ct])) << "\" y=\"" << fmt(f.py(r[cy] + dy)) << "\" width=\"" << fmt(cw_px)
      << "\" height=\"" << fmt(ch_px) << "\" fill=\"" << shade((r[cw] - lo) / span) << "\"/>\n";
  }
  s << axes(f, "t", "y");
  s << "</svg>\n";
  const auto out = dir / "logW.svg";
  std::ofstream(out, std::ios::binary) << s.str();
  return out;
}

}  // namespace

std::vector<fs::path> emit_plots(const fs::path& root) {
  if (!fs::is_directory(root)) raise(Errc::MissingData, "no artifact directory " + root.string());
  std::vector<fs::path> dirs;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory() && entry.path().filename().string().rfind("nu_", 0) == 0) dirs.push_back(entry.path());
  }
  if (dirs.empty()) raise(Errc::MissingData, "no nu_* directories under " + root.string());
  std::sort(dirs.begin(), dirs.end());
  std::vector<fs::path> out;
  for (const auto& dir : dirs) {
    out.push_back(decay_svg(dir));
    out.push_back(log_w_svg(dir));
  }
  return out;
}

}  // namespace sheardiss
