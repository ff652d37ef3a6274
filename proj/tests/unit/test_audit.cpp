#include <cmath>
#include <sstream>

#include "doctest.h"
#include "sheardiss/audit.hpp"
#include "sheardiss/error.hpp"

using namespace sheardiss;
using doctest::Approx;

namespace {

LedgerSeries record(const ShearProfile& p, double nu, const InitialSpec& data, std::vector<HypoParams> params,
                    double t_end = 0.0, std::size_t stride = 2) {
  auto plan = plan_run(p, nu, data);
  plan.config.output_stride = stride;
  if (t_end > 0.0) plan.config.t_end = t_end;
  const auto f0 = make_initial(data, plan.grid, p, nu);
  LedgerRecorder rec(p, plan.grid, nu, effective_dt(plan.config), std::move(params));
  solve(plan.config, p, f0, rec.observer());
  return rec.take().front();
}

double bracket_one(double beta, double u2) {
  const double s = std::sqrt(beta);
  return 1.0 - 0.75 * s - 14.0 * s * u2 - 56.0 * beta - 20.0 * beta * s - 17.0 * beta * s * u2;
}

double bracket_two(double beta, double u2, double c) {
  const double s = std::sqrt(beta);
  return 0.375 - 64.0 * s - 74.0 * s * u2 - 20.0 * c * s - 17.0 * s * c * u2;
}

}  // namespace

TEST_CASE("heat flow: L2 term equals -2 nu ||f' W||^2 and sits below its bound") {
  const auto zero = profile_from_name("zero");
  const double nu = 1e-2;
  const auto s = record(zero, nu, InitialSpec::parse("random_band", 5), {HypoParams{}}, 0.0, 1);
  const auto r = audit_gronwall(s);
  std::size_t checked = 0;
  for (const auto& row : r.rows) {
    if (!row.interior) continue;
    const double exact = -2.0 * nu * row.sample.norms.grad;
    CHECK(row.lhs.l2 == Approx(exact).epsilon(1e-3));
    CHECK(row.lhs.l2 <= row.rhs.l2);
    CHECK(row.rhs.l2 >= -1.5 * nu * row.sample.norms.grad * (1 + 1e-12));
    ++checked;
  }
  CHECK(checked > 100);
  CHECK(r.terms_pass);
}

TEST_CASE("per-term bounds hold for beta = 0.01 on random data") {
  const auto sine = profile_from_name("sine");
  const auto s = record(sine, 1e-3, InitialSpec::parse("random_band", 3), {HypoParams::from_beta(0.01)});
  const auto r = audit_gronwall(s);
  CHECK(r.terms_pass);
  for (const auto& row : r.rows) {
    if (row.audited) CHECK(row.pass);
  }
}

TEST_CASE("finite differences agree with the PDE-assembled rates on smooth rows") {
  const auto sine = profile_from_name("sine");
  for (const char* data : {"random_band", "critical_bump"}) {
    const auto s = record(sine, 1e-3, InitialSpec::parse(data, 3), {HypoParams{}});
    const auto r = audit_gronwall(s);
    std::size_t smooth = 0;
    for (const auto& row : r.rows) {
      if (!row.smooth) continue;
      ++smooth;
      const auto& a = row.sample.rates;
      const double scale = std::abs(a.l2) + std::abs(a.alpha) + std::abs(a.beta) + std::abs(a.gamma);
      CHECK(std::abs(row.lhs.l2 - a.l2) <= 1e-3 * scale);
      CHECK(std::abs(row.lhs.alpha - a.alpha) <= 1e-3 * scale);
      CHECK(std::abs(row.lhs.beta - a.beta) <= 1e-3 * scale);
      CHECK(std::abs(row.lhs.gamma - a.gamma) <= 1e-3 * scale);
      CHECK(std::abs(row.lhs_total - a.total()) <= 1e-3 * scale);
    }
    CHECK(smooth > 100);
  }
}

TEST_CASE("beta = 1 keeps the functional equivalent to the symmetric part") {
  const auto sine = profile_from_name("sine");
  const auto s = record(sine, 1e-3, InitialSpec::parse("random_band", 1), {HypoParams{}});
  for (const auto& smp : s.samples) CHECK_NOTHROW(check_equivalence(smp.comps));
}

TEST_CASE("decay before t = nu^{-1/2} is not part of the verdict") {
  const auto sine = profile_from_name("sine");
  const double nu = 1e-3;
  const auto s = record(sine, nu, InitialSpec::parse("critical_bump"), {HypoParams{}});
  const auto r = audit_gronwall(s);
  CHECK(r.pass);
  CHECK(r.delta_fit > 0.005);
  CHECK(r.delta_fit == std::min(r.delta_ls, r.delta_cert));
  const double cap = 1.0 / std::sqrt(nu);
  for (const auto& row : r.rows) {
    if (!row.audited || row.sample.comps.t < cap) continue;
    CHECK(row.lhs_total <= -r.delta_fit * std::sqrt(nu) * row.sample.comps.total * (1 - 1e-12));
  }
}

TEST_CASE("closed-form beta meets both brackets and is maximal") {
  for (double d2u : {0.0, 1.0, 2.0}) {
    const double u2 = d2u * d2u;
    for (double c : {0.5, 1.0, 3.0}) {
      const double b = closed_form_beta(d2u, c);
      CHECK(b > 0.0);
      CHECK(b < 1.0);
      CHECK(bracket_one(b, u2) >= 0.5 - 1e-12);
      CHECK(bracket_two(b, u2, c) >= -1e-12);
      const double above = b * 1.001;
      CHECK((bracket_one(above, u2) < 0.5 || bracket_two(above, u2, c) < 0.0));
    }
  }
  CHECK(closed_form_beta(0.0, 1.0) > closed_form_beta(1.0, 1.0));
}

TEST_CASE("calibration returns a beta at least as large as the closed form") {
  const auto sine = profile_from_name("sine");
  const double nus[] = {1e-2};
  const InitialSpec data[] = {InitialSpec::parse("random_band", 3)};
  const auto cal = calibrate_beta(sine, nus, data);
  CHECK(cal.beta_star >= cal.closed_form);
  CHECK(cal.closed_form == Approx(closed_form_beta(1.0, 1.0)));
  CHECK(cal.trial_betas.size() == 21);
  CHECK(cal.trial_betas.front() == 1.0);
  CHECK(cal.trial_betas.back() == std::ldexp(1.0, -20));
}

TEST_CASE("early verdict separates beta = 1 from beta = 1/4 on critical-layer data") {
  const auto sine = profile_from_name("sine");
  const double nu = 1e-3;
  const auto data = InitialSpec::parse("critical_bump");
  const auto plan = plan_run(sine, nu, data);
  LedgerRecorder rec(sine, plan.grid, nu, effective_dt(plan.config),
                     {HypoParams::from_beta(1.0), HypoParams::from_beta(0.25)});
  solve(plan.config, sine, make_initial(data, plan.grid, sine, nu), rec.observer());
  const auto wide = audit_gronwall(rec.series(0));
  const auto narrow = audit_gronwall(rec.series(1));
  CHECK(wide.pass);
  CHECK_FALSE(wide.early_pass);
  CHECK(narrow.pass);
  CHECK(narrow.early_pass);
  const auto& s = rec.series(1);
  for (const auto& x : s.samples) {
    const double env = std::exp(3.0) * s.f0_norm_sq * std::exp(-narrow.delta_fit * std::sqrt(nu) * x.comps.t);
    CHECK(x.comps.total <= env);
  }
}

TEST_CASE("lemma bounds match the written-out formulas") {
  TermNorms n{2.0, 3.0, 5.0, 7.0, 11.0};
  const double nu = 1e-3, t = 40.0, u2 = 1.0;
  const auto p = HypoParams::from_beta(0.04, 1.0);
  const auto r = lemma_rhs(n, p, nu, t, u2);
  const double sb = 0.2, beta = 0.04, b32 = beta * sb, s = p.sigma;
  const double m = std::min(nu * t * t, 1.0);
  const double n13 = std::cbrt(nu), n53 = std::pow(nu, 5.0 / 3.0);
  CHECK(r.l2 == Approx(-1.5 * nu * 2.0 + (2 * s + 5 * s * s * u2 * m) * n13 * 3.0));
  CHECK(r.alpha == Approx((0.5 + 0.75 * sb + 2 * sb * u2 + 4 * s * s * sb * u2 * m) * nu * 2.0 -
                          5.0 / 12.0 * sb * n53 * 5.0 + beta / 8.0 * n13 * 7.0));
  CHECK(r.beta == Approx(-beta * (0.5 - 32 * sb - 64 * sb * u2) * n13 * 7.0 + 8 * beta * nu * 2.0 +
                         5.0 / 12.0 * sb * n53 * 5.0 + 5 * b32 * nu * 11.0 + 12 * b32 * n13 * u2 * 3.0));
  CHECK(r.gamma == Approx(-8 * b32 * nu * 11.0 + (48 + 8 * u2) * beta * nu * 2.0 +
                          (28 + (8 + 16.0 / 9.0 * s * s * m) * u2) * b32 * n13 * 7.0));
}

TEST_CASE("audit preconditions") {
  const auto sine = profile_from_name("sine");
  auto s = record(sine, 1e-2, InitialSpec::parse("random_band"), {HypoParams{}}, 5.0);
  auto few = s;
  few.samples.resize(2);
  CHECK_THROWS_AS(audit_gronwall(few), Error);
  auto coarse = s;
  coarse.solver_dt = s.solver_dt / 100.0;
  try {
    (void)audit_gronwall(coarse);
    FAIL("expected StrideTooCoarse");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::StrideTooCoarse);
  }
  auto negative = s;
  negative.samples[3].comps.total = -1.0;
  try {
    (void)audit_gronwall(negative);
    FAIL("expected NegativePhi");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NegativePhi);
  }
}

TEST_CASE("ledger csv layout") {
  const auto sine = profile_from_name("sine");
  const auto s = record(sine, 1e-2, InitialSpec::parse("random_band"), {HypoParams{}}, 5.0);
  const auto r = audit_gronwall(s);
  std::ostringstream out;
  write_ledger_csv(out, r);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,phi,c0,c_alpha,c_beta,c_gamma,lhs_L2,rhs_L2,lhs_a,rhs_a,lhs_b,rhs_b,lhs_g,rhs_g,pass");
  std::size_t rows = 0;
  std::string first;
  while (std::getline(in, line)) {
    if (rows == 0) first = line;
    ++rows;
  }
  CHECK(rows == s.samples.size());
  CHECK(first.substr(first.size() - 5) == ",skip");
}
