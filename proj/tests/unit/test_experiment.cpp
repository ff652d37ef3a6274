#include <cmath>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "sheardiss/error.hpp"
#include "sheardiss/experiment.hpp"
#include "support.hpp"

using namespace sheardiss;
using doctest::Approx;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::vector<double>> read_rows(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> r;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) r.push_back(std::strtod(cell.c_str(), nullptr));
    rows.push_back(r);
  }
  return rows;
}

ExperimentConfig base(const fs::path& out) {
  ExperimentConfig c;
  c.profile = "sine";
  c.nu_list = {1e-3};
  c.data = "critical_bump";
  c.output_dir = out;
  return c;
}

}  // namespace

TEST_CASE("single run writes the artifact tree and passes") {
  const auto out = testing::scratch_dir("exp_run");
  std::ostringstream log;
  const auto r = run(base(out), log);
  CHECK(r.exit_code == kExitOk);
  CHECK(r.beta_used == 0.25);
  const auto dir = out / "nu_0.001";
  for (const char* f : {"trajectory.json", "trajectory.bin", "ledger.csv", "rates.csv", "spectral.csv",
                        "streamline.csv", "logW.csv", "decay.csv", "lemmaA2.json", "summary.json"}) {
    CHECK_MESSAGE(fs::exists(dir / f), f);
  }
  const auto s = nlohmann::json::parse(slurp(dir / "summary.json"));
  for (const char* key : {"delta_fit", "beta_used", "scaling_slopes", "gronwall_pass", "lemmaA2_pass",
                          "equivalence_pass", "checks_enabled", "checks_disabled", "config_hash"}) {
    CHECK_MESSAGE(s.contains(key), key);
  }
  CHECK(s["gronwall_pass"] == true);
  CHECK(s["lemmaA2_pass"] == true);
  CHECK(s["equivalence_pass"] == true);
  CHECK(s["delta_fit"].get<double>() > 0.005);
  CHECK(s["checks_disabled"] == nlohmann::json::array({"scaling"}));
  CHECK(slurp(dir / "rates.csv").rfind("nu,data_kind,lambda,r2,window\n", 0) == 0);
  CHECK(slurp(dir / "spectral.csv").rfind("nu,t,c_min,n\n", 0) == 0);
  CHECK(slurp(dir / "streamline.csv").rfind("y,rate,predicted,ratio", 0) == 0);

  SUBCASE("decay intercept is e^{2 sigma} ||f0||^2") {
    const auto rows = read_rows(dir / "decay.csv");
    CHECK(rows.front()[0] == 0.0);
    CHECK(rows.front()[3] == Approx(std::exp(2.0 * r.sigma_used) * rows.front()[1]).epsilon(1e-12));
  }
  SUBCASE("log W plateaus at sigma in the critical layer") {
    const double nu = 1e-3;
    std::size_t n = 0;
    for (const auto& row : read_rows(dir / "logW.csv")) {
      if (std::abs(row[1] - kPi / 2) <= std::pow(nu, 0.25) && std::abs(std::cos(row[1])) <= std::pow(nu, 0.25)) {
        CHECK(row[2] == Approx(r.sigma_used).epsilon(1e-12));
        ++n;
      }
    }
    CHECK(n > 0);
  }
  SUBCASE("plots are deterministic and carry the config hash") {
    const auto paths = emit_plots(out);
    REQUIRE(paths.size() == 2);
    const auto first = slurp(dir / "decay.svg");
    const auto logw = slurp(dir / "logW.svg");
    emit_plots(out);
    CHECK(slurp(dir / "decay.svg") == first);
    CHECK(slurp(dir / "logW.svg") == logw);
    CHECK(first.find(s["config_hash"].get<std::string>()) != std::string::npos);
    std::ostringstream want;
    want << "log Phi(0) = ";
    CHECK(first.find(want.str()) != std::string::npos);
  }
}

TEST_CASE("identical configs give byte-identical outputs") {
  const auto a = testing::scratch_dir("exp_det_a");
  const auto b = testing::scratch_dir("exp_det_b");
  auto ca = base(a);
  ca.data = "random_band";
  ca.seed = 5;
  ca.nu_list = {1e-2, 1e-3};
  ca.workers = 2;
  auto cb = ca;
  cb.output_dir = b;
  cb.workers = 1;
  std::ostringstream log;
  REQUIRE(run(ca, log).exit_code == kExitOk);
  REQUIRE(run(cb, log).exit_code == kExitOk);
  std::size_t compared = 0;
  for (const auto& e : fs::recursive_directory_iterator(a)) {
    if (!e.is_regular_file()) continue;
    const auto rel = fs::relative(e.path(), a);
    CHECK_MESSAGE(slurp(e.path()) == slurp(b / rel), rel.string());
    ++compared;
  }
  CHECK(compared >= 20);
}

TEST_CASE("configuration errors exit 2") {
  const auto out = testing::scratch_dir("exp_cfg");
  std::ostringstream log;
  auto c = base(out);
  c.profile = "zero";
  c.data = "random_band";
  auto r = run(c, log);
  CHECK(r.exit_code == kExitConfig);
  CHECK(r.message.find("requires nondegenerate critical points") != std::string::npos);

  c = base(out);
  c.checks.push_back(Check::Scaling);
  CHECK(run(c, log).exit_code == kExitConfig);

  c = base(out);
  c.nu_list = {0.0};
  CHECK(run(c, log).exit_code == kExitConfig);

  c = base(out);
  c.n = 16;
  CHECK(run(c, log).exit_code == kExitConfig);

  c = base(out);
  c.data = "nonsense";
  CHECK(run(c, log).exit_code == kExitConfig);
}

TEST_CASE("failing checks exit 3 and are named") {
  const auto out = testing::scratch_dir("exp_fail");
  std::ostringstream log;
  auto c = base(out);
  c.nu_list = {1e-2, 1e-3, 1e-4, 1e-5};
  c.checks = {Check::Scaling};
  c.t_end = 50.0;
  const auto r = sweep(c, log);
  CHECK(r.exit_code == kExitAudit);
  CHECK(r.message.find("scaling") != std::string::npos);
  CHECK(fs::exists(out / "scaling.json"));
}

TEST_CASE("sweep of the heat equation recovers slope one") {
  const auto out = testing::scratch_dir("exp_sweep");
  std::ostringstream log;
  ExperimentConfig c;
  c.profile = "zero";
  c.data = "fourier_mode:1";
  c.nu_list = {1e-3, 1e-4, 1e-5, 1e-6};
  c.checks = {};
  c.workers = 2;
  c.output_dir = out;
  const auto r = sweep(c, log);
  CHECK(r.exit_code == kExitOk);
  REQUIRE(r.scaling_slope.has_value());
  CHECK(*r.scaling_slope == Approx(1.0).epsilon(1e-3));
  const auto s = nlohmann::json::parse(slurp(out / "scaling.json"));
  CHECK(s["pass"] == true);
  CHECK(s["points"].size() == 4);
  CHECK(s["slopes"]["fourier_mode:1"].get<double>() == Approx(1.0).epsilon(1e-3));
}

TEST_CASE("sweep completes remaining points after a failure") {
  const auto out = testing::scratch_dir("exp_partial");
  std::ostringstream log;
  ExperimentConfig c;
  c.profile = "sine";
  c.data = "random_band:4";
  c.nu_list = {1e-1, 1e-2, 1e-3, 1e-4};
  c.checks = {};
  c.n = 32;
  c.output_dir = out;
  const auto r = sweep(c, log);
  CHECK(r.exit_code == kExitAudit);
  std::size_t done = 0, failed = 0;
  for (const auto& p : r.points) (p.completed ? done : failed)++;
  CHECK(done >= 1);
  CHECK(failed >= 1);
  CHECK(r.message.find("aborted") != std::string::npos);
}

TEST_CASE("scaling targets and windows") {
  const auto sine = profile_from_name("sine");
  CHECK(scaling_target(sine, InitialSpec::parse("critical_bump"))->slope == 0.5);
  CHECK(scaling_target(sine, InitialSpec::parse("monotone_bump"))->slope == Approx(1.0 / 3.0));
  CHECK(scaling_target(profile_from_name("zero"), InitialSpec::parse("random_band"))->slope == 1.0);
  CHECK_FALSE(scaling_target(sine, InitialSpec::parse("random_band")).has_value());
  const auto w = scaling_window(InitialSpec::parse("monotone_bump"), 1e-3);
  CHECK(w.first == Approx(10.0));
  CHECK(w.second == Approx(20.0));
  CHECK(nu_dir_name(1e-3) == "nu_0.001");
  CHECK(nu_dir_name(1e-5) == "nu_1e-05");
}

TEST_CASE("plots need emitted data") {
  const auto empty = testing::scratch_dir("exp_empty");
  try {
    (void)emit_plots(empty);
    FAIL("expected MissingData");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::MissingData);
  }
  fs::create_directories(empty / "nu_0.001");
  CHECK_THROWS_AS(emit_plots(empty), Error);
}
