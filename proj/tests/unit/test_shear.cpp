#include <cmath>
#include <fstream>
#include <random>

#include "doctest.h"
#include "sheardiss/error.hpp"
#include "sheardiss/shear.hpp"
#include "support.hpp"

using namespace sheardiss;
using doctest::Approx;

namespace {

std::vector<double> sign_scan_roots(double (*du)(double), int samples) {
  std::vector<double> roots;
  const double h = kTwoPi / samples;
  for (int i = 0; i < samples; ++i) {
    const double a = i * h, b = a + h;
    if (du(a) == 0.0) {
      roots.push_back(a);
    } else if (du(a) * du(b) < 0.0) {
      roots.push_back(0.5 * (a + b));
    }
  }
  return roots;
}

ShearProfile sin2_table(std::size_t rows) {
  std::vector<double> y(rows + 1), u(rows + 1);
  for (std::size_t i = 0; i <= rows; ++i) {
    y[i] = kTwoPi * static_cast<double>(i) / static_cast<double>(rows);
    u[i] = std::sin(2.0 * y[i]);
  }
  u[rows] = u[0];
  return make_tabulated_profile(y, u);
}

}  // namespace

TEST_CASE("sine and cosine critical points") {
  const auto sine = profile_from_name("sine");
  REQUIRE(sine.critical_points().size() == 2);
  CHECK(sine.critical_points()[0].y == Approx(kPi / 2).epsilon(1e-12));
  CHECK(sine.critical_points()[1].y == Approx(3 * kPi / 2).epsilon(1e-12));
  CHECK(sine.norm_d2u() == Approx(1.0).epsilon(1e-9));

  const auto cosine = profile_from_name("cosine");
  REQUIRE(cosine.critical_points().size() == 2);
  CHECK(std::abs(cosine.critical_points()[0].y) < 1e-12);
  CHECK(cosine.critical_points()[1].y == Approx(kPi).epsilon(1e-12));
}

TEST_CASE("tabulated sin(2y) has four critical points matching a sign scan") {
  const auto p = sin2_table(256);
  const auto oracle = sign_scan_roots([](double y) { return 2.0 * std::cos(2.0 * y); }, 10000);
  REQUIRE(oracle.size() == 4);
  REQUIRE(p.critical_points().size() == 4);
  for (std::size_t j = 0; j < 4; ++j) {
    CHECK(p.critical_points()[j].y == Approx(kPi / 4 + j * kPi / 2).epsilon(1e-9));
    CHECK(std::abs(p.critical_points()[j].y - oracle[j]) < kTwoPi / 10000);
  }
}

TEST_CASE("pointwise derivatives") {
  const auto sine = profile_from_name("sine");
  CHECK(sine.u(0.0) == Approx(0.0));
  CHECK(sine.du(0.0) == Approx(1.0));
  CHECK(sine.d2u(0.0) == Approx(0.0));
  CHECK(sine.u(kPi / 2) == Approx(1.0));
  CHECK(std::abs(sine.du(kPi / 2)) < 1e-15);
  CHECK(sine.d2u(kPi / 2) == Approx(-1.0));

  const auto p = sin2_table(128);
  const double y = kPi / 8;
  CHECK(p.u(y) == Approx(std::sqrt(2.0) / 2).epsilon(1e-12));
  CHECK(p.du(y) == Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(p.d2u(y) == Approx(-2 * std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("distance to critical points") {
  const auto sine = profile_from_name("sine");
  CHECK(distance_to_critical(sine, kPi / 2) == Approx(0.0));
  CHECK(distance_to_critical(sine, 0.0) == Approx(kPi / 2));

  const double y = kTwoPi - 0.1;
  double brute = 1e300;
  for (double c : {kPi / 2, 3 * kPi / 2}) {
    for (int wrap = -1; wrap <= 1; ++wrap) brute = std::min(brute, std::abs(y - c + wrap * kTwoPi));
  }
  CHECK(brute == Approx(1.4708).epsilon(1e-4));
  CHECK(distance_to_critical(sine, y) == Approx(brute).epsilon(1e-12));

  CHECK_THROWS_AS(distance_to_critical(profile_from_name("zero"), 1.0), Error);
}

TEST_CASE("|U'| equals |cos y| for the sine profile") {
  const auto sine = profile_from_name("sine");
  for (std::size_t n : {16u, 128u, 1024u}) {
    const Grid g(n);
    const auto s = eval_derivatives(sine, g.points());
    for (std::size_t j = 0; j < n; ++j) CHECK(std::abs(std::abs(s.du[j]) - std::abs(std::cos(g.y(j)))) < 1e-15);
  }
}

TEST_CASE("periodic distance is a metric on random triples") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int i = 0; i < 2000; ++i) {
    const double a = u(rng), b = u(rng), c = u(rng);
    CHECK(periodic_distance(a, b) == periodic_distance(b, a));
    CHECK(periodic_distance(a, c) <= periodic_distance(a, b) + periodic_distance(b, c) + 1e-12);
    CHECK(periodic_distance(a, b) <= kPi + 1e-12);
  }
}

TEST_CASE("critical-point refinement is deterministic") {
  const auto a = sin2_table(200);
  const auto b = sin2_table(200);
  REQUIRE(a.critical_points().size() == b.critical_points().size());
  for (std::size_t j = 0; j < a.critical_points().size(); ++j) {
    CHECK(a.critical_points()[j].y == b.critical_points()[j].y);
  }
}

TEST_CASE("degenerate and non-periodic profiles are rejected") {
  // U' = sin^3 y vanishes to third order at 0 and pi.
  TrigCoefficients c;
  c.cos = {-0.75, 0.0, 1.0 / 12.0};
  try {
    (void)make_profile(ProfileKind::PolynomialTrig, c);
    FAIL("expected DegenerateCritical");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::DegenerateCritical);
  }

  const auto dir = testing::scratch_dir("couette");
  {
    std::ofstream out(dir / "couette.csv");
    out.precision(17);
    out << "y,U\n";
    for (int i = 0; i <= 64; ++i) out << kTwoPi * i / 64 << ',' << kTwoPi * i / 64 << '\n';
  }
  try {
    (void)profile_from_name("table:" + (dir / "couette.csv").string());
    FAIL("expected NonPeriodic");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NonPeriodic);
  }
}

TEST_CASE("zero profile is shear free") {
  const auto z = profile_from_name("zero");
  CHECK(z.is_shear_free());
  CHECK_FALSE(z.has_critical_points());
  CHECK_FALSE(profile_from_name("sine").is_shear_free());
}
