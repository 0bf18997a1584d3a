#include "sharpbmo/sharp_constant.hpp"

#include <cmath>

#include "sharpbmo/bellman.hpp"
#include "sharpbmo/errors.hpp"
#include "sharpbmo/roots.hpp"
#include "sharpbmo/special_fn.hpp"

namespace sharpbmo {

namespace {

constexpr double kMargin = 1e-6;
constexpr double kMaxLogXi = 600.0;

void check_pair(double p, double r) {
  if (!(p >= 1) || !std::isfinite(p)) throw ParameterError("p must satisfy p >= 1");
  if (!(r > p) || !std::isfinite(r)) throw ParameterError("r must satisfy r > p");
}

double gamma_formula(double p, double r) {
  return std::exp((std::lgamma(r + 1) - std::lgamma(p + 1)) / r);
}

// Gamma(s+1) + e * left_fan_profile(xi; s, 1)
double central_weight(double xi, double s, const QuadCtx& ctx) {
  const double core = left_fan_core(xi, ExponentS(s), 1.0, ctx);
  return std::tgamma(s + 1) + std::exp(1 - xi) * core;
}

}  // namespace

std::string to_string(ConstantBranch b) {
  switch (b) {
    case ConstantBranch::GammaFormula: return "gamma_formula";
    case ConstantBranch::P1SmallR: return "p1_small_r";
    case ConstantBranch::XiEquation: return "xi_equation";
  }
  return "?";
}

double xi_equation_residual(double xi, double p, double r, const QuadCtx& ctx) {
  check_pair(p, r);
  if (!(p > 1 && r < 2)) throw ParameterError("the xi equation needs 1 < p < r < 2");
  if (!(xi > 1)) throw DomainError("the xi equation needs xi > 1");
  const double lhs = chord_defect(xi, 1.0, r) / chord_defect(xi, 1.0, p);
  const double rhs = central_weight(xi, r, ctx) / central_weight(xi, p, ctx);
  return lhs - rhs;
}

ConstantResult constant(double p, double r, const QuadCtx& ctx) {
  check_pair(p, r);
  ctx.validate();
  ConstantResult res;
  if (r >= 2) {
    res.c = gamma_formula(p, r);
    res.branch = ConstantBranch::GammaFormula;
    return res;
  }
  if (p == 1) {
    res.c = std::pow(2.0, 1 - 1 / r);
    res.branch = ConstantBranch::P1SmallR;
    return res;
  }
  res.branch = ConstantBranch::XiEquation;
  if (2 - r <= kMargin) {
    res.c = gamma_formula(p, r);
    res.near_two_fallback = true;
    return res;
  }
  // the root drifts to infinity as r -> 2, so search in t = ln(xi - 1)
  auto f = [&](double t) { return xi_equation_residual(1 + std::exp(t), p, r, ctx); };
  const double lo = std::log(kMargin);
  double hi = std::log(3.0);
  double f_hi = f(hi);
  const double f_lo = f(lo);
  while ((f_lo > 0) == (f_hi > 0) && hi < kMaxLogXi) {
    hi = std::min(hi + std::log(10.0), kMaxLogXi);
    f_hi = f(hi);
  }
  if ((f_lo > 0) == (f_hi > 0))
    throw NumericalFailure("xi equation not bracketed", std::min(std::abs(f_lo), std::abs(f_hi)));
  const double xi = 1 + std::exp(brent(f, lo, hi).x);
  res.xi_star = xi;
  const double wp = central_weight(xi, p, ctx);
  const double wr = central_weight(xi, r, ctx);
  res.x3_star = 0.5 * wp;
  res.c = std::pow(wr / wp, 1 / r);
  return res;
}

std::pair<double, double> ratio_interval(double p) {
  const double a = std::pow(2.0, p - 2), b = 0.5 * std::tgamma(p + 1);
  return {std::min(a, b), std::max(a, b)};
}

std::vector<RatioSample> ratio_profile(double p, double r, int n, const QuadCtx& ctx) {
  check_pair(p, r);
  if (!(p > 1 && r < 2)) throw ParameterError("ratio_profile needs 1 < p < r < 2");
  if (n < 3) throw DomainError("ratio_profile needs n >= 3");
  Params prm{p, r, 1.0, ctx};
  const auto [lo, hi] = ratio_interval(p);
  std::vector<RatioSample> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double x3 = lo + (hi - lo) * i / (n - 1);
    out.push_back({x3, eval_bellman({0.0, 1.0, x3}, prm, Extremum::Max) / x3});
  }
  return out;
}

double cube_factor(int n) {
  if (n < 1) throw ParameterError("dimension must be >= 1");
  return 4 * (1 + 2 * std::sqrt(n - 1.0));
}

double multidim_cube_constant(double p, double r, int n, const QuadCtx& ctx) {
  return constant(p, r, ctx).c * std::pow(cube_factor(n), 1 - p / r);
}

double multidim_ball_constant(double p, double r, int n, double c_tilde, const QuadCtx& ctx) {
  if (n < 1) throw ParameterError("dimension must be >= 1");
  if (!(c_tilde > 0)) throw ParameterError("c_tilde must be positive");
  return constant(p, r, ctx).c * c_tilde * std::pow(static_cast<double>(n), (r - p) / (2 * r));
}

}  // namespace sharpbmo
