#include "sheardiss/functional.hpp"

#include <cmath>
#include <sstream>

#include "sheardiss/error.hpp"

namespace sheardiss {
namespace {

constexpr double kEquivalenceSlack = 1e-10;

bool finite(const FunctionalComponents& c) {
  return std::isfinite(c.c0) && std::isfinite(c.c_alpha) && std::isfinite(c.c_beta) &&
         std::isfinite(c.c_gamma) && std::isfinite(c.total);
}

}  // namespace

HypoParams HypoParams::from_beta(double beta, double spectral_constant) {
  if (!(beta > 0.0 && beta <= 1.0)) raise(Errc::InvalidArgument, "beta must lie in (0,1]");
  HypoParams p;
  p.beta = beta;
  p.alpha = std::sqrt(beta) / 4.0;
  p.gamma = 4.0 * beta * std::sqrt(beta);
  p.sigma = beta * std::sqrt(beta);
  p.spectral_constant = spectral_constant;
  return p;
}

HypoParams HypoParams::with_sigma(double sigma) const {
  if (!(sigma > 0.0 && sigma <= 1.0)) raise(Errc::InvalidArgument, "sigma must lie in (0,1]");
  HypoParams p = *this;
  p.sigma = sigma;
  return p;
}

FunctionalEvaluator::FunctionalEvaluator(const ShearProfile& profile, const Grid& grid, double nu)
    : grid_(grid), nu_(nu), norm_d2u_(profile.norm_d2u()),
      shear_(eval_derivatives(profile, grid.points())), deriv_(grid.size()),
      d_(3, std::vector<cplx>(grid.size())) {
  if (!(nu > 0.0 && nu <= 1.0)) raise(Errc::InvalidArgument, "nu must lie in (0,1]");
}

void FunctionalEvaluator::prepare(const ScalarField& f, int derivatives) {
  if (!(f.grid == grid_)) raise(Errc::InvalidArgument, "field grid does not match the evaluator");
  f_ = f.values;
  deriv_.apply_many(f_, derivatives, std::span(d_).first(static_cast<std::size_t>(derivatives)));
  base_ = make_weights(shear_, nu_, 1.0, f.t, norm_d2u_);
  b23_.resize(base_.b.size());
  for (std::size_t j = 0; j < b23_.size(); ++j) b23_[j] = std::cbrt(base_.b[j] * base_.b[j]);
}

FunctionalSample FunctionalEvaluator::evaluate(const HypoParams& p, bool full) const {
  const std::size_t n = grid_.size();
  const double dy = grid_.spacing();
  const double nu = nu_;
  const double nu13 = std::cbrt(nu);
  const double nu23 = nu13 * nu13;
  const double s = p.sigma;
  const auto& f1 = d_[0];
  const auto& f2 = d_[1];
  const auto& f3 = d_[2];
  const cplx I{0.0, 1.0};

  FunctionalSample out;
  out.comps.t = base_.t;
  double c0 = 0.0, ca = 0.0, cb = 0.0, cg = 0.0;
  TermNorms tn;
  double r0 = 0.0, ra = 0.0, rb = 0.0, rg = 0.0;

  for (std::size_t j = 0; j < n; ++j) {
    const double w2 = std::exp(2.0 * s * base_.log_w[j]);
    const double phi = base_.phi[j];
    const double b = base_.b[j];
    const double b23 = b23_[j];
    const double du = shear_.du[j];
    const cplx f = f_[j];
    const cplx fy = f1[j];
    const double af2 = std::norm(f);
    const double afy2 = std::norm(fy);
    const double shear_w = du * du / (b * b);  // U'^2 B^{-2}

    c0 += af2 * w2;
    ca += phi / b23 * afy2 * w2;
    cb += (phi * phi / (b23 * b23) * du * (I * f * std::conj(fy))).real() * w2;
    cg += phi * phi * phi * shear_w * af2 * w2;

    if (!full) continue;
    tn.grad += afy2 * w2;
    tn.layer += af2 * phi * phi * b23 * w2;
    tn.hess += std::norm(f2[j]) * phi / b23 * w2;
    tn.shear += du * du * af2 * phi * phi / (b23 * b23) * w2;
    tn.shear_grad += du * du * afy2 * phi * phi * phi / (b * b) * w2;

    const double u = shear_.u[j];
    const cplx g = nu * f2[j] - I * u * f;
    const cplx g1 = nu * f3[j] - I * du * f - I * u * fy;
    const double dlw2 = 2.0 * s * base_.dt_log_w[j];  // d_t W^2 / W^2
    const double dphi = base_.dt_phi[j];
    r0 += af2 * dlw2 * w2 + 2.0 * (g * std::conj(f)).real() * w2;
    ra += (afy2 * (dphi + phi * dlw2) + 2.0 * phi * (g1 * std::conj(fy)).real()) / b23 * w2;
    const double dphi2 = 2.0 * phi * dphi + phi * phi * dlw2;
    rb += (I * du / (b23 * b23) *
           (dphi2 * f * std::conj(fy) + phi * phi * (g * std::conj(fy) + f * std::conj(g1))))
              .real() *
          w2;
    const double dphi3 = 3.0 * phi * phi * dphi + phi * phi * phi * dlw2;
    rg += shear_w * (dphi3 * af2 + phi * phi * phi * 2.0 * (g * std::conj(f)).real()) * w2;
  }

  auto& c = out.comps;
  c.c0 = dy * c0;
  c.c_alpha = p.alpha * nu23 * dy * ca;
  c.c_beta = p.beta * nu13 * dy * cb;
  c.c_gamma = p.gamma * dy * cg;
  c.total = c.c0 + c.c_alpha + c.c_beta + c.c_gamma;
  if (!finite(c)) {
    std::ostringstream msg;
    msg << "functional is not finite at t=" << c.t;
    raise(Errc::NonFinite, msg.str());
  }
  if (full) {
    tn.grad *= dy;
    tn.layer *= dy;
    tn.hess *= dy;
    tn.shear *= dy;
    tn.shear_grad *= dy;
    out.norms = tn;
    out.rates.l2 = dy * r0;
    out.rates.alpha = p.alpha * nu23 * dy * ra;
    out.rates.beta = p.beta * nu13 * dy * rb;
    out.rates.gamma = p.gamma * dy * rg;
  }
  return out;
}

FunctionalComponents FunctionalEvaluator::components(const ScalarField& f, const HypoParams& params) {
  prepare(f, 1);
  return evaluate(params, false).comps;
}

void FunctionalEvaluator::sample(const ScalarField& f, std::span<const HypoParams> params,
                                 std::vector<FunctionalSample>& out) {
  prepare(f, 3);
  out.clear();
  out.reserve(params.size());
  for (const auto& p : params) out.push_back(evaluate(p, true));
}

FunctionalComponents eval_functional(const ScalarField& f, const ShearProfile& profile, double nu,
                                     const HypoParams& params) {
  FunctionalEvaluator eval(profile, f.grid, nu);
  return eval.components(f, params);
}

double check_equivalence(const FunctionalComponents& comps) {
  const double s = comps.symmetric();
  if (s == 0.0) return 1.0;
  const double ratio = comps.total / s;
  if (!(ratio >= 0.5 - kEquivalenceSlack && ratio <= 1.5 + kEquivalenceSlack)) {
    std::ostringstream msg;
    msg << "Phi/S = " << ratio << " at t=" << comps.t;
    raise(Errc::EquivalenceViolation, msg.str());
  }
  return ratio;
}

double check_equivalence(const ScalarField& f, const ShearProfile& profile, double nu,
                         const HypoParams& params) {
  return check_equivalence(eval_functional(f, profile, nu, params));
}

}  // namespace sheardiss
