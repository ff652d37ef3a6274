#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "sheardiss/shear.hpp"
#include "support.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string output;
};

Result cli(const std::string& args, const fs::path& dir) {
  const auto log = dir / "cli.log";
  const std::string cmd = std::string(SHEARDISS_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  std::ifstream in(log);
  std::ostringstream s;
  s << in.rdbuf();
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, s.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("run exits 0 and plots render") {
  const auto dir = testing::scratch_dir("cli_run");
  const auto out = dir / "out";
  auto r = cli("run --profile sine --nu 1e-3 --data critical_bump --out " + out.string(), dir);
  CHECK_MESSAGE(r.code == 0, r.output);
  CHECK(slurp(out / "nu_0.001" / "summary.json").find("\"gronwall_pass\": true") != std::string::npos);
  r = cli("plots --out " + out.string(), dir);
  CHECK(r.code == 0);
  CHECK(fs::exists(out / "nu_0.001" / "logW.svg"));
}

TEST_CASE("reruns are byte-identical") {
  const auto dir = testing::scratch_dir("cli_det");
  for (const char* name : {"a", "b"}) {
    const auto r = cli("run --profile sine --nu 1e-2 --nu 1e-3 --data random_band --seed 4 --checks gronwall --out " +
                           (dir / name).string(),
                       dir);
    REQUIRE(r.code == 0);
  }
  for (const char* f : {"ledger.csv", "rates.csv", "decay.csv", "logW.csv", "streamline.csv", "trajectory.bin"}) {
    CHECK(slurp(dir / "a" / "nu_0.001" / f) == slurp(dir / "b" / "nu_0.001" / f));
  }
}

TEST_CASE("configuration errors exit 2") {
  const auto dir = testing::scratch_dir("cli_cfg");
  {
    std::ofstream out(dir / "couette.csv");
    out.precision(17);
    out << "y,U\n";
    for (int i = 0; i <= 64; ++i) out << sheardiss::kTwoPi * i / 64 << ',' << sheardiss::kTwoPi * i / 64 << '\n';
  }
  auto r = cli("run --profile table:" + (dir / "couette.csv").string() + " --out " + (dir / "o").string(), dir);
  CHECK(r.code == 2);
  CHECK(r.output.find("NonPeriodic") != std::string::npos);

  r = cli("run --profile zero --data random_band --out " + (dir / "o").string(), dir);
  CHECK(r.code == 2);
  CHECK(r.output.find("requires nondegenerate critical points") != std::string::npos);

  CHECK(cli("run --nu 3", dir).code == 2);
  CHECK(cli("run --checks bogus", dir).code == 2);
  CHECK(cli("run --frobnicate", dir).code == 2);
  CHECK(cli("sweep --nu 1e-3 --nu 1e-4", dir).code == 2);
  CHECK(cli("run --config /nonexistent.toml", dir).code == 2);
  CHECK(cli("plots --out " + (dir / "missing").string(), dir).code == 2);
}

TEST_CASE("config file with flag overrides") {
  const auto dir = testing::scratch_dir("cli_config");
  {
    std::ofstream out(dir / "exp.toml");
    out << "profile = sine\nnu = [1e-2]\ndata = random_band\nchecks = [equivalence]\nout = " << (dir / "from_file").string()
        << "\n";
  }
  const auto r = cli("run --config " + (dir / "exp.toml").string() + " --out " + (dir / "flag").string(), dir);
  CHECK(r.code == 0);
  CHECK(fs::exists(dir / "flag" / "nu_0.01" / "summary.json"));
  CHECK_FALSE(fs::exists(dir / "from_file"));
}

TEST_CASE("sweep exits 0 for the heat equation") {
  const auto dir = testing::scratch_dir("cli_sweep");
  const auto r = cli("sweep --profile zero --data fourier_mode:1 --nu 1e-3 --nu 1e-4 --nu 1e-5 --nu 1e-6 --workers 4 --out " +
                         (dir / "o").string(),
                     dir);
  CHECK_MESSAGE(r.code == 0, r.output);
  CHECK(slurp(dir / "o" / "scaling.json").find("\"pass\": true") != std::string::npos);
}
