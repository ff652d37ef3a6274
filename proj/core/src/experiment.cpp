#include "sheardiss/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include "csv.hpp"
#include "json.hpp"
#include "sheardiss/audit.hpp"
#include "sheardiss/checkpoint.hpp"
#include "sheardiss/error.hpp"
#include "sheardiss/rates.hpp"
#include "sheardiss/spectral_constant.hpp"
#include "sheardiss/weights.hpp"

namespace sheardiss {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

constexpr std::size_t kMaxCheckpointRows = 256;
constexpr std::size_t kLemmaTimes = 64;
constexpr std::size_t kLemmaPoints = 256;
constexpr std::size_t kLogWTimes = 65;
constexpr std::size_t kLogWPoints = 128;
constexpr double kStreamlineSamples = 2000.0;
constexpr double kStreamlineOvershoot = 1.02;

struct Setup {
  ExperimentConfig config;
  ShearProfile profile;
  InitialSpec data;
  HypoParams params;
  std::string config_hash;
  std::string beta_source;
};

RunPlan point_plan(const Setup& s, double nu) {
  RunPlan plan = plan_run(s.profile, nu, s.data);
  if (s.config.n) plan.grid = Grid(*s.config.n);
  if (s.config.dt) plan.config.dt = *s.config.dt;
  if (s.config.t_end) plan.config.t_end = *s.config.t_end;
  plan.config.seed = s.config.seed;
  return plan;
}

void check_sweep_span(const std::vector<double>& nu_list) {
  auto sorted = nu_list;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  if (sorted.size() < 4) raise(Errc::InvalidArgument, "scaling needs at least four distinct nu values");
  if (std::log10(sorted.back() / sorted.front()) < 3.0 - 1e-9) {
    raise(Errc::InvalidArgument, "scaling needs nu values spanning at least three decades");
  }
}

// Everything here is a configuration error (exit 2).
Setup preflight(const ExperimentConfig& config) {
  validate(config);
  Setup s{config, profile_from_name(config.profile), InitialSpec::parse(config.data, config.seed), {}, {}, {}};
  if (config.enabled(Check::Spectral) && !s.profile.has_critical_points()) {
    raise(Errc::NoCriticalPoints, "spectral inequality requires nondegenerate critical points");
  }
  if (s.data.kind == InitialKind::CriticalBump && !s.profile.has_critical_points()) {
    raise(Errc::NoCriticalPoints, "critical_bump needs a profile with critical points");
  }
  if (config.enabled(Check::Scaling)) check_sweep_span(config.nu_list);
  for (double nu : config.nu_list) {
    const auto plan = point_plan(s, nu);
    validate(plan.config);
    (void)make_initial(s.data, plan.grid, s.profile, nu);
  }
  s.config_hash = fnv1a_hex(config.canonical());
  return s;
}

bool needs_functional(const ExperimentConfig& c) {
  return c.enabled(Check::Gronwall) || c.enabled(Check::Equivalence) || c.enabled(Check::LemmaA2);
}

void choose_params(Setup& s, std::ostream& log) {
  const auto& c = s.config;
  const double nu_min = *std::min_element(c.nu_list.begin(), c.nu_list.end());
  double spectral_constant = 1.0;
  if (c.enabled(Check::Spectral)) {
    const double sigma = c.sigma.value_or(1.0);
    spectral_constant = estimate_spectral_constant(s.profile, nu_min, 1.0 / std::sqrt(nu_min), sigma).c_min;
  }
  double beta = 1.0;
  if (c.beta) {
    beta = *c.beta;
    s.beta_source = "config";
  } else if (needs_functional(c)) {
    const InitialSpec trial[] = {s.data};
    const double nus[] = {nu_min};
    const auto cal = calibrate_beta(s.profile, nus, trial, spectral_constant, c.sigma.value_or(0.0));
    beta = cal.beta_star;
    s.beta_source = "calibrated";
    log << "calibrated beta = " << csv::num(beta) << " on nu = " << csv::num(nu_min)
        << " (closed-form bound " << csv::num(cal.closed_form) << ")\n";
  } else {
    s.beta_source = "default";
  }
  s.params = HypoParams::from_beta(beta, spectral_constant);
  if (c.sigma) s.params = s.params.with_sigma(*c.sigma);
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(Errc::Io, "cannot write " + path.string());
  return out;
}

void write_text(const fs::path& path, const std::string& text) {
  auto out = open_out(path);
  out << text;
}

json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }
json opt_json(const std::optional<bool>& v) { return v ? json(*v) : json(nullptr); }

void write_log_w(const fs::path& path, const Setup& s, double nu) {
  auto out = open_out(path);
  out << "t,y,logW\n";
  const double t_max = 2.0 / std::sqrt(nu);
  std::vector<double> ys(kLogWPoints);
  for (std::size_t j = 0; j < ys.size(); ++j) ys[j] = kTwoPi * static_cast<double>(j) / static_cast<double>(ys.size());
  for (std::size_t k = 0; k < kLogWTimes; ++k) {
    const double t = t_max * static_cast<double>(k) / static_cast<double>(kLogWTimes - 1);
    const auto lw = eval_log_W(s.profile, nu, s.params.sigma, t, ys);
    for (std::size_t j = 0; j < ys.size(); ++j) {
      out << csv::num(t) << ',' << csv::num(ys[j]) << ',' << csv::num(lw[j]) << '\n';
    }
  }
}

void run_point(const Setup& s, PointReport& rep) {
  const auto& c = s.config;
  const double nu = rep.nu;
  const double cap = 1.0 / std::sqrt(nu);
  fs::create_directories(rep.dir);

  const auto plan = point_plan(s, nu);
  const auto f0 = make_initial(s.data, plan.grid, s.profile, nu);
  const double dt = effective_dt(plan.config);
  rep.n = plan.grid.size();
  rep.dt = dt;
  rep.t_end = plan.config.t_end;

  const auto steps = static_cast<std::size_t>(std::llround(plan.config.t_end / dt));
  const std::size_t outputs = steps / plan.config.output_stride + 2;
  const std::size_t keep_every = std::max<std::size_t>(1, (outputs + kMaxCheckpointRows - 1) / kMaxCheckpointRows);
  CheckpointWriter checkpoint(rep.dir / "trajectory",
                              TrajectoryHeader{nu, s.profile.name(), dt, plan.grid.size(), c.seed});

  LedgerRecorder ledger(s.profile, plan.grid, nu, dt, {s.params});
  const double horizon = streamline_horizon(nu);
  const bool want_streamline = plan.config.t_end >= horizon;
  StreamlineRecorder streamline(plan.grid, horizon * kStreamlineOvershoot, horizon / kStreamlineSamples);
  std::vector<double> ts, energy;
  std::size_t index = 0;
  const double dy = plan.grid.spacing();

  solve(plan.config, s.profile, f0, [&](const ScalarField& field, double) {
    if (index % keep_every == 0 || field.t >= plan.config.t_end - 0.5 * dt) {
      checkpoint.append(field.t, field.values);
    }
    ++index;
    ts.push_back(field.t);
    energy.push_back(l2_norm_sq(field.values, dy));
    ledger.observe(field);
    if (want_streamline) streamline.observe(field);
  });

  const auto& series = ledger.series(0);
  {
    auto out = open_out(rep.dir / "decay.csv");
    out << "t,norm_f2,norm_fW2,phi\n";
    for (std::size_t i = 0; i < series.samples.size(); ++i) {
      const auto& comps = series.samples[i].comps;
      out << csv::num(comps.t) << ',' << csv::num(energy[i]) << ',' << csv::num(comps.c0) << ','
          << csv::num(comps.total) << '\n';
    }
  }

  if (c.enabled(Check::Gronwall)) {
    try {
      const auto result = audit_gronwall(series);
      auto out = open_out(rep.dir / "ledger.csv");
      write_ledger_csv(out, result);
      rep.delta_ls = result.delta_ls;
      rep.delta_cert = result.delta_cert;
      rep.delta_fit = result.delta_fit;
      rep.gronwall_pass = result.pass;
      rep.early_nonincreasing = result.early_pass;
      if (!result.pass) rep.failures.push_back("gronwall: " + result.failure);
    } catch (const Error& e) {
      rep.gronwall_pass = false;
      rep.failures.push_back(std::string("gronwall: ") + e.what());
    }
  }

  if (c.enabled(Check::Equivalence)) {
    rep.equivalence_pass = true;
    for (const auto& sample : series.samples) {
      try {
        (void)check_equivalence(sample.comps);
      } catch (const Error& e) {
        rep.equivalence_pass = false;
        rep.failures.push_back(std::string("equivalence: ") + e.what());
        break;
      }
    }
  }

  if (c.enabled(Check::LemmaA2)) {
    std::vector<double> t_grid(kLemmaTimes), y_grid(kLemmaPoints);
    for (std::size_t k = 0; k < kLemmaTimes; ++k) {
      t_grid[k] = 2.0 * cap * static_cast<double>(k + 1) / static_cast<double>(kLemmaTimes);
    }
    for (std::size_t j = 0; j < kLemmaPoints; ++j) {
      y_grid[j] = kTwoPi * static_cast<double>(j) / static_cast<double>(kLemmaPoints);
    }
    const auto report = check_W_lemma(s.profile, nu, s.params.sigma, t_grid, y_grid);
    write_text(rep.dir / "lemmaA2.json", to_json(report) + "\n");
    rep.lemma_a2_pass = report.pass;
    if (!report.pass) rep.failures.push_back("lemmaA2: weight derivative bound violated");
  }

  if (c.enabled(Check::Spectral)) {
    auto out = open_out(rep.dir / "spectral.csv");
    out << "nu,t,c_min,n\n";
    try {
      const auto est = estimate_spectral_constant(s.profile, nu, cap, s.params.sigma);
      rep.c_min = est.c_min;
      rep.spectral_pass = true;
      out << csv::num(nu) << ',' << csv::num(est.t) << ',' << csv::num(est.c_min) << ',' << est.n << '\n';
    } catch (const Error& e) {
      rep.spectral_pass = false;
      rep.failures.push_back(std::string("spectral: ") + e.what());
    }
  }

  {
    const auto [lo, hi_raw] = scaling_window(s.data, nu);
    const double hi = std::min(hi_raw, plan.config.t_end);
    auto out = open_out(rep.dir / "rates.csv");
    out << "nu,data_kind,lambda,r2,window\n";
    try {
      const auto fit = fit_decay_rate(ts, energy, lo, hi, "norm_f2", nu);
      rep.lambda = fit.rate;
      rep.lambda_r2 = fit.r_squared;
      out << csv::num(nu) << ',' << s.data.label() << ',' << csv::num(fit.rate) << ','
          << csv::num(fit.r_squared) << ',' << csv::num(lo) << ':' << csv::num(hi) << '\n';
    } catch (const Error& e) {
      if (c.enabled(Check::Scaling)) rep.failures.push_back(std::string("scaling: ") + e.what());
    }
  }

  if (want_streamline) {
    const auto map = streamline_rates(streamline, s.profile, nu);
    auto out = open_out(rep.dir / "streamline.csv");
    out << "y,rate,predicted,ratio,rate_local\n";
    for (std::size_t j = 0; j < map.y.size(); ++j) {
      out << csv::num(map.y[j]) << ',' << csv::num(map.rate[j]) << ',' << csv::num(map.predicted[j])
          << ',' << csv::num(map.ratio[j]) << ',' << csv::num(map.rate_local[j]) << '\n';
    }
  }

  write_log_w(rep.dir / "logW.csv", s, nu);
  rep.completed = true;
}

void write_summary(const Setup& s, const RunReport& report, const PointReport& p) {
  json j;
  j["delta_fit"] = opt_json(p.delta_fit);
  j["beta_used"] = report.beta_used;
  json slopes = json::object();
  if (report.scaling_slope) slopes[s.data.label()] = *report.scaling_slope;
  j["scaling_slopes"] = slopes;
  j["gronwall_pass"] = opt_json(p.gronwall_pass);
  j["lemmaA2_pass"] = opt_json(p.lemma_a2_pass);
  j["equivalence_pass"] = opt_json(p.equivalence_pass);
  j["spectral_pass"] = opt_json(p.spectral_pass);
  j["nu"] = p.nu;
  j["profile"] = s.profile.name();
  j["data"] = s.data.label();
  j["seed"] = s.config.seed;
  j["beta_source"] = s.beta_source;
  j["sigma_used"] = report.sigma_used;
  j["spectral_constant"] = s.params.spectral_constant;
  j["c_min"] = opt_json(p.c_min);
  j["delta_ls"] = opt_json(p.delta_ls);
  j["delta_cert"] = opt_json(p.delta_cert);
  j["phi_nonincreasing_early"] = opt_json(p.early_nonincreasing);
  j["lambda"] = opt_json(p.lambda);
  j["n"] = p.n;
  j["dt"] = p.dt;
  j["t_end"] = p.t_end;
  json enabled = json::array(), disabled = json::array();
  for (Check check : kAllChecks) {
    (s.config.enabled(check) ? enabled : disabled).push_back(std::string(to_string(check)));
  }
  j["checks_enabled"] = enabled;
  j["checks_disabled"] = disabled;
  j["completed"] = p.completed;
  j["error"] = p.error;
  j["failures"] = p.failures;
  j["config_hash"] = s.config_hash;
  write_text(p.dir / "summary.json", j.dump(2) + "\n");
}

template <class F>
void parallel_for(std::size_t count, std::size_t workers, F&& body) {
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  const std::size_t size = std::max<std::size_t>(1, std::min(workers, count));
  for (std::size_t w = 0; w < size; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < count;) body(i);
    });
  }
}

RunReport execute(ExperimentConfig config, std::ostream& log, bool sweep_mode) {
  RunReport report;
  if (sweep_mode && !config.enabled(Check::Scaling)) {
    config.checks.push_back(Check::Scaling);
    std::sort(config.checks.begin(), config.checks.end());
  }
  Setup setup;
  try {
    setup = preflight(config);
    choose_params(setup, log);
  } catch (const Error& e) {
    const bool config_error = e.code() != Errc::NoFeasibleBeta && e.code() != Errc::Unbounded;
    report.exit_code = config_error ? kExitConfig : kExitAudit;
    report.message = e.what();
    log << "error: " << report.message << '\n';
    return report;
  }
  report.beta_used = setup.params.beta;
  report.sigma_used = setup.params.sigma;

  std::vector<PointReport>& points = report.points;
  for (double nu : setup.config.nu_list) {
    PointReport p;
    p.nu = nu;
    p.dir = setup.config.output_dir / nu_dir_name(nu);
    points.push_back(std::move(p));
  }
  parallel_for(points.size(), setup.config.workers, [&](std::size_t i) {
    try {
      run_point(setup, points[i]);
    } catch (const std::exception& e) {
      points[i].error = e.what();
    }
  });

  std::optional<ScalingTarget> target;
  bool scaling_pass = true;
  if (setup.config.enabled(Check::Scaling)) {
    target = scaling_target(setup.profile, setup.data);
    std::vector<double> nus, lambdas;
    for (const auto& p : points) {
      if (p.lambda) {
        nus.push_back(p.nu);
        lambdas.push_back(*p.lambda);
      }
    }
    json sj;
    sj["data_kind"] = setup.data.label();
    json pts = json::array();
    for (const auto& p : points) {
      json pj;
      pj["nu"] = p.nu;
      pj["lambda"] = opt_json(p.lambda);
      pj["r2"] = opt_json(p.lambda_r2);
      pj["status"] = p.completed ? "ok" : "failed";
      if (!p.error.empty()) pj["error"] = p.error;
      pts.push_back(pj);
    }
    sj["points"] = pts;
    json slopes = json::object();
    try {
      const auto fit = scaling_exponent(nus, lambdas);
      report.scaling_slope = fit.slope;
      slopes[setup.data.label()] = fit.slope;
      sj["r_squared"] = fit.r_squared;
      if (target) scaling_pass = std::abs(fit.slope - target->slope) <= target->tolerance;
    } catch (const Error& e) {
      scaling_pass = false;
      sj["error"] = e.what();
    }
    sj["slopes"] = slopes;
    sj["expected"] = target ? json(target->slope) : json(nullptr);
    sj["tolerance"] = target ? json(target->tolerance) : json(nullptr);
    sj["pass"] = scaling_pass;
    sj["config_hash"] = setup.config_hash;
    fs::create_directories(setup.config.output_dir);
    write_text(setup.config.output_dir / "scaling.json", sj.dump(2) + "\n");
  }

  std::vector<std::string> failing;
  for (const auto& p : points) {
    if (p.completed || fs::exists(p.dir)) write_summary(setup, report, p);
    log << nu_dir_name(p.nu) << ": ";
    if (!p.error.empty()) {
      log << "error: " << p.error << '\n';
      failing.push_back("nu=" + csv::num(p.nu) + " aborted");
      continue;
    }
    log << (p.failures.empty() ? "pass" : "FAIL");
    if (p.delta_fit) log << " delta_fit=" << csv::num(*p.delta_fit);
    if (p.c_min) log << " c_min=" << csv::num(*p.c_min);
    if (p.lambda) log << " lambda=" << csv::num(*p.lambda);
    log << '\n';
    for (const auto& f : p.failures) failing.push_back(f + " (nu=" + csv::num(p.nu) + ")");
  }
  if (report.scaling_slope) log << "scaling slope = " << csv::num(*report.scaling_slope) << '\n';
  if (!scaling_pass) failing.push_back("scaling: slope outside target");

  if (!failing.empty()) {
    report.exit_code = kExitAudit;
    std::ostringstream msg;
    msg << "failing checks:";
    for (const auto& f : failing) msg << "\n  " << f;
    report.message = msg.str();
    log << report.message << '\n';
  }
  return report;
}

}  // namespace

std::optional<ScalingTarget> scaling_target(const ShearProfile& profile, const InitialSpec& data) {
  if (profile.is_shear_free()) return ScalingTarget{1.0, 0.01};
  switch (data.kind) {
    case InitialKind::CriticalBump: return ScalingTarget{0.5, 0.07};
    case InitialKind::MonotoneBump: return ScalingTarget{1.0 / 3.0, 0.07};
    default: return std::nullopt;
  }
}

std::pair<double, double> scaling_window(const InitialSpec& data, double nu) {
  if (data.kind == InitialKind::MonotoneBump) {
    const double t = std::pow(nu, -1.0 / 3.0);
    return {t, 2.0 * t};
  }
  const double t = 1.0 / std::sqrt(nu);
  return {t, 3.0 * t};
}

std::string nu_dir_name(double nu) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "nu_%.6g", nu);
  return buf;
}

RunReport run(const ExperimentConfig& config, std::ostream& log) { return execute(config, log, false); }

RunReport sweep(const ExperimentConfig& config, std::ostream& log) { return execute(config, log, true); }

}  // namespace sheardiss
