#include <cmath>

#include "doctest.h"
#include "sheardiss/audit.hpp"
#include "sheardiss/error.hpp"
#include "sheardiss/rates.hpp"

using namespace sheardiss;
using doctest::Approx;

namespace {

struct Recorded {
  std::vector<double> t, norm;
};

Recorded heat_mode(long m, double nu) {
  const auto zero = profile_from_name("zero");
  const Grid g(64);
  ScalarField f0(g);
  for (std::size_t j = 0; j < g.size(); ++j) f0.values[j] = std::polar(1.0, static_cast<double>(m) * g.y(j));
  SolveConfig c;
  c.nu = nu;
  c.dt = 0.5;
  c.t_end = 200.0;
  c.output_stride = 4;
  Recorded r;
  solve(c, zero, f0, [&](const ScalarField& f, double) {
    r.t.push_back(f.t);
    r.norm.push_back(std::sqrt(l2_norm_sq(f.values, g.spacing())));
  });
  return r;
}

}  // namespace

TEST_CASE("exact exponentials are recovered") {
  std::vector<double> t, q;
  for (int i = 0; i <= 200; ++i) {
    t.push_back(0.5 * i);
    q.push_back(3.0 * std::exp(-0.0137 * t.back()));
  }
  const auto fit = fit_decay_rate(t, q, 10.0, 80.0, "q", 1e-3);
  CHECK(fit.rate == Approx(0.0137).epsilon(1e-10));
  CHECK(fit.intercept == Approx(std::log(3.0)).epsilon(1e-10));
  CHECK(fit.r_squared == Approx(1.0).epsilon(1e-12));
  CHECK(fit.points == 141);
  CHECK(fit.r_squared <= 1.0);
}

TEST_CASE("heat modes decay at nu m^2") {
  const double nu = 1e-3;
  const auto one = heat_mode(1, nu);
  const auto fit1 = fit_decay_rate(one.t, one.norm, 20.0, 180.0);
  CHECK(fit1.rate == Approx(nu).epsilon(1e-10));
  CHECK(fit1.r_squared == Approx(1.0).epsilon(1e-12));
  const auto three = heat_mode(3, nu);
  CHECK(fit_decay_rate(three.t, three.norm, 20.0, 180.0).rate == Approx(9 * nu).epsilon(1e-10));
}

TEST_CASE("fit errors") {
  const std::vector<double> t{0, 1, 2, 3}, q{1, 1e-300, 1e-300, 1e-300};
  try {
    (void)fit_decay_rate(t, q, 0.0, 3.0);
    FAIL("expected Underflow");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::Underflow);
  }
  const std::vector<double> q2{1, 0.5, 0.25, 0.125};
  try {
    (void)fit_decay_rate(t, q2, 2.5, 2.9);
    FAIL("expected InsufficientPoints");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::InsufficientPoints);
  }
}

TEST_CASE("scaling exponent of a power law") {
  const std::vector<double> nu{1e-3, 1e-4, 1e-5, 1e-6};
  for (double p : {0.5, 1.0 / 3.0, 1.0}) {
    std::vector<double> rate;
    for (double v : nu) rate.push_back(2.5 * std::pow(v, p));
    const auto fit = scaling_exponent(nu, rate);
    CHECK(fit.slope == Approx(p).epsilon(1e-6));
    CHECK(fit.r_squared == Approx(1.0).epsilon(1e-12));
  }
  const std::vector<double> three{1e-3, 1e-4, 1e-5}, r3{1, 2, 3};
  CHECK_THROWS_AS(scaling_exponent(three, r3), Error);
  const std::vector<double> bad{1, 1, 1, -1};
  CHECK_THROWS_AS(scaling_exponent(nu, bad), Error);
}

TEST_CASE("streamline rates without shear are spatially constant") {
  const auto zero = profile_from_name("zero");
  const double nu = 1e-3;
  const auto data = InitialSpec::parse("fourier_mode:1");
  const auto plan = plan_run(zero, nu, data);
  StreamlineRecorder rec(plan.grid, 1.05 * streamline_horizon(nu));
  solve(plan.config, zero, make_initial(data, plan.grid, zero, nu), rec.observer());
  const auto map = streamline_rates(rec, zero, nu);
  const auto& t = rec.times();
  std::vector<double> norm;
  for (std::size_t i = 0; i < t.size(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < plan.grid.size(); ++j) s += std::pow(rec.moduli()[i * plan.grid.size() + j], 2);
    norm.push_back(std::sqrt(s * plan.grid.spacing()));
  }
  const double heat = fit_decay_rate(t, norm, t.front(), t.back()).rate;
  CHECK(heat == Approx(nu).epsilon(1e-6));
  for (double r : map.rate) CHECK(std::abs(r - heat) <= 0.1 * heat);
}

TEST_CASE("streamline rates at a monotone point and at a critical point") {
  const auto sine = profile_from_name("sine");
  const double nu = 1e-3;
  const auto data = InitialSpec::parse("random_band", 7);
  const auto plan = plan_run(sine, nu, data);
  StreamlineRecorder rec(plan.grid, 1.05 * streamline_horizon(nu), streamline_horizon(nu) / 2000.0);
  solve(plan.config, sine, make_initial(data, plan.grid, sine, nu), rec.observer());
  const auto map = streamline_rates(rec, sine, nu);
  const std::size_t n = plan.grid.size();
  const std::size_t mono = 0, crit = n / 4;
  CHECK(map.y[crit] == Approx(kPi / 2));
  CHECK(map.predicted[mono] == Approx(std::cbrt(nu)));
  CHECK(map.predicted[crit] == Approx(std::sqrt(nu)));
  CHECK(map.rate[mono] / std::cbrt(nu) >= 0.25);
  CHECK(map.rate[mono] / std::cbrt(nu) <= 4.0);
  CHECK(map.rate[crit] / std::sqrt(nu) >= 0.25);
  CHECK(map.rate[crit] / std::sqrt(nu) <= 4.0);
  CHECK(map.t_lo[crit] == Approx(1.0 / std::sqrt(nu)));
  CHECK(map.t_hi[crit] == Approx(streamline_horizon(nu)));
}

TEST_CASE("streamline needs the full window") {
  const auto sine = profile_from_name("sine");
  const double nu = 1e-3;
  const Grid g(128);
  StreamlineRecorder rec(g);
  SolveConfig c;
  c.nu = nu;
  c.dt = 0.05;
  c.t_end = 20.0;
  solve(c, sine, make_initial(InitialSpec::parse("random_band"), g, sine, nu), rec.observer());
  CHECK_THROWS_AS(streamline_rates(rec, sine, nu), Error);
}
