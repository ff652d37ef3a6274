#include "sheardiss/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "csv.hpp"
#include "sheardiss/error.hpp"

namespace sheardiss {
namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string unquote(std::string_view s) {
  s = trim(s);
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front()) {
    s = s.substr(1, s.size() - 2);
  }
  return std::string(s);
}

std::vector<std::string> list_items(std::string_view value) {
  value = trim(value);
  if (!value.empty() && value.front() == '[') {
    if (value.back() != ']') raise(Errc::InvalidArgument, "unterminated list '" + std::string(value) + "'");
    value = value.substr(1, value.size() - 2);
  }
  std::vector<std::string> items;
  std::size_t start = 0;
  while (start <= value.size()) {
    const auto pos = value.find(',', start);
    const auto item = unquote(value.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (!item.empty()) items.push_back(item);
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return items;
}

double parse_double(std::string_view key, const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || !std::isfinite(v)) {
    raise(Errc::InvalidArgument, std::string(key) + ": bad number '" + s + "'");
  }
  return v;
}

std::uint64_t parse_unsigned(std::string_view key, const std::string& s) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
    raise(Errc::InvalidArgument, std::string(key) + ": expected a nonnegative integer, got '" + s + "'");
  }
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    raise(Errc::InvalidArgument, std::string(key) + ": integer out of range '" + s + "'");
  }
}

bool is_auto(const std::string& s) { return s == "auto"; }

}  // namespace

std::string_view to_string(Check check) noexcept {
  switch (check) {
    case Check::Gronwall: return "gronwall";
    case Check::Equivalence: return "equivalence";
    case Check::LemmaA2: return "lemmaA2";
    case Check::Spectral: return "spectral";
    case Check::Scaling: return "scaling";
  }
  return "unknown";
}

std::vector<Check> parse_checks(std::string_view list) {
  std::vector<Check> out;
  for (const auto& item : list_items(list)) {
    const auto it = std::find_if(std::begin(kAllChecks), std::end(kAllChecks),
                                 [&](Check c) { return to_string(c) == item; });
    if (it == std::end(kAllChecks)) raise(Errc::InvalidArgument, "unknown check '" + item + "'");
    if (std::find(out.begin(), out.end(), *it) == out.end()) out.push_back(*it);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool ExperimentConfig::enabled(Check check) const noexcept {
  return std::find(checks.begin(), checks.end(), check) != checks.end();
}

std::string ExperimentConfig::canonical() const {
  std::ostringstream out;
  auto opt = [](const auto& v) { return v ? csv::num(static_cast<double>(*v)) : std::string("auto"); };
  out << "profile = " << profile << '\n';
  out << "nu = [";
  for (std::size_t i = 0; i < nu_list.size(); ++i) out << (i ? ", " : "") << csv::num(nu_list[i]);
  out << "]\n";
  out << "beta = " << opt(beta) << '\n';
  out << "sigma = " << opt(sigma) << '\n';
  out << "data = " << data << '\n';
  out << "dt = " << opt(dt) << '\n';
  out << "n = " << opt(n) << '\n';
  out << "t_end = " << opt(t_end) << '\n';
  out << "seed = " << seed << '\n';
  out << "checks = [";
  for (std::size_t i = 0; i < checks.size(); ++i) out << (i ? ", " : "") << to_string(checks[i]);
  out << "]\n";
  return out.str();
}

void apply_setting(ExperimentConfig& c, std::string_view key_in, std::string_view value_in) {
  const std::string key(trim(key_in));
  const std::string value = unquote(value_in);
  if (key == "profile") {
    c.profile = value;
  } else if (key == "nu") {
    for (const auto& item : list_items(value_in)) c.nu_list.push_back(parse_double(key, item));
  } else if (key == "beta") {
    c.beta = is_auto(value) ? std::nullopt : std::optional(parse_double(key, value));
  } else if (key == "sigma") {
    c.sigma = is_auto(value) ? std::nullopt : std::optional(parse_double(key, value));
  } else if (key == "data") {
    c.data = value;
  } else if (key == "dt") {
    c.dt = is_auto(value) ? std::nullopt : std::optional(parse_double(key, value));
  } else if (key == "n") {
    c.n = is_auto(value) ? std::nullopt : std::optional<std::size_t>(parse_unsigned(key, value));
  } else if (key == "t_end" || key == "t-end") {
    c.t_end = is_auto(value) ? std::nullopt : std::optional(parse_double(key, value));
  } else if (key == "out" || key == "output_dir") {
    c.output_dir = value;
  } else if (key == "seed") {
    c.seed = parse_unsigned(key, value);
  } else if (key == "workers") {
    c.workers = static_cast<std::size_t>(parse_unsigned(key, value));
  } else if (key == "checks") {
    c.checks = parse_checks(value_in);
  } else {
    raise(Errc::InvalidArgument, "unknown config key '" + key + "'");
  }
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig c;
  c.nu_list.clear();
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      raise(Errc::InvalidArgument, "line " + std::to_string(lineno) + ": expected key = value");
    }
    apply_setting(c, body.substr(0, eq), body.substr(eq + 1));
  }
  if (c.nu_list.empty()) c.nu_list = ExperimentConfig{}.nu_list;
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) raise(Errc::InvalidArgument, "cannot read config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

void validate(const ExperimentConfig& c) {
  if (c.nu_list.empty()) raise(Errc::InvalidArgument, "nu list is empty");
  for (double nu : c.nu_list) {
    if (!(nu > 0.0 && nu <= 1.0)) raise(Errc::InvalidArgument, "every nu must lie in (0,1]");
  }
  if (c.beta && !(*c.beta > 0.0 && *c.beta <= 1.0)) raise(Errc::InvalidArgument, "beta must lie in (0,1]");
  if (c.sigma && !(*c.sigma > 0.0 && *c.sigma <= 1.0)) raise(Errc::InvalidArgument, "sigma must lie in (0,1]");
  if (c.dt && !(*c.dt > 0.0)) raise(Errc::InvalidArgument, "dt must be positive");
  if (c.t_end && !(*c.t_end > 0.0)) raise(Errc::InvalidArgument, "t_end must be positive");
  if (c.workers == 0) raise(Errc::InvalidArgument, "workers must be at least 1");
  if (c.output_dir.empty()) raise(Errc::InvalidArgument, "output directory is empty");
}

std::string fnv1a_hex(std::string_view text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace sheardiss
