#include "sharpbmo/special_fn.hpp"

#include <cmath>
#include <sstream>

#include "sharpbmo/roots.hpp"

namespace sharpbmo {

namespace {

constexpr double kDblEps = std::numeric_limits<double>::epsilon();
// Beyond this many scale lengths the exponential weight is below 1e-26.
constexpr double kExpCutoff = 60.0;

std::string fmt_num(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

void require_eps(double eps) {
  if (!(eps > 0) || !std::isfinite(eps)) throw DomainError("eps must be positive");
}

double series_part(double a, double x) {
  // sum_{n>=0} x^n / (a (a+1) ... (a+n))
  double ap = a, del = 1.0 / a, sum = del;
  for (int n = 0; n < 1000; ++n) {
    ap += 1;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * 1e-17) break;
  }
  return sum;
}

double continued_fraction_part(double a, double x) {
  // modified Lentz for Gamma(a,x) = e^{-x} x^a / (x+1-a- 1(1-a)/(x+3-a- ...))
  const double tiny = 1e-300;
  double b = x + 1 - a;
  double c = 1 / tiny;
  double d = 1 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -i * (i - a);
    b += 2;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1) < 1e-16) break;
  }
  return h;
}

// int_0^L e^{-y} (u - eps y)^power dy, L = min((u-eps)/eps, cutoff)
double lower_integral(double power, double u, double eps, const QuadCtx& ctx) {
  const double len = std::min((u - eps) / eps, kExpCutoff);
  if (len <= 0) return 0;
  auto f = [&](double y) { return std::exp(-y) * std::pow(u - eps * y, power); };
  QuadCtx tight = ctx;
  tight.rel_tol = std::min(ctx.rel_tol, 1e-13);
  tight.abs_tol = std::min(ctx.abs_tol, 1e-15);
  tight.max_subdiv = std::max(ctx.max_subdiv, 400);
  return integrate(f, 0.0, len, tight).value;
}

}  // namespace

ExponentS::ExponentS(double s) : s_(s) {
  if (!(s >= 1) || !std::isfinite(s)) throw ParameterError("exponent must be >= 1, got " + fmt_num(s));
}

double scaled_upper_gamma(double a, double x) {
  if (!(x >= 0) || std::isnan(a)) throw DomainError("scaled_upper_gamma: x must be >= 0");
  if (x == 0) {
    if (a <= 0) throw DomainError("scaled_upper_gamma: Gamma(a, 0) diverges for a <= 0");
    return std::tgamma(a);
  }
  if (a > 0 && x < a + 1) return std::exp(x) * std::tgamma(a) - std::pow(x, a) * series_part(a, x);
  if (x >= 1.5 || x >= a + 1) return std::pow(x, a) * continued_fraction_part(a, x);
  // a <= 0 and x small: step up with Gamma(a+1,x) = a Gamma(a,x) + x^a e^{-x}
  if (a == std::floor(a)) throw DomainError("scaled_upper_gamma: non-positive integer order");
  return (scaled_upper_gamma(a + 1, x) - std::pow(x, a)) / a;
}

double upper_exp_moment(ExponentS s, double u, double eps, const QuadCtx&) {
  require_eps(eps);
  if (!(u >= 0)) throw DomainError("upper_exp_moment needs u >= 0, got " + fmt_num(u));
  if (s.value() == 1) return 1.0;
  if (s.value() == 2) return 2 * (u + eps);
  return s * std::pow(eps, s - 1) * scaled_upper_gamma(s, u / eps);
}

double lower_exp_moment(ExponentS s, double u, double eps, const QuadCtx& ctx) {
  require_eps(eps);
  if (!(u >= eps * (1 - 1e-12)))
    throw DomainError("lower_exp_moment needs u >= eps, got " + fmt_num(u));
  u = std::max(u, eps);
  if (s.value() == 1) return -std::expm1(-(u - eps) / eps);
  if (s.value() == 2) return 2 * (u - eps);
  return s * lower_integral(s - 1, u, eps, ctx);
}

double upper_exp_moment_deriv(ExponentS s, double u, double eps, int order, const QuadCtx& ctx) {
  require_eps(eps);
  if (!(u >= 0)) throw DomainError("upper_exp_moment_deriv needs u >= 0");
  if (order == 0) return upper_exp_moment(s, u, eps, ctx);
  if (order == 1) {
    return (upper_exp_moment(s, u, eps, ctx) - s * std::pow(u, s - 1)) / eps;
  }
  if (order != 2) throw DomainError("derivative order must be 0, 1 or 2");
  if (s.value() == 1 || s.value() == 2) return 0.0;
  const double x = u / eps;
  if (x == 0 && s < 3 && s != 2)
    throw DomainError("second derivative is unbounded at u = 0 for this exponent");
  if (x >= 2) return s * (s - 1) * (s - 2) * std::pow(eps, s - 3) * scaled_upper_gamma(s - 2, x);
  const double tail = x == 0 ? 0.0 : std::pow(x, s - 2);
  return s * (s - 1) * std::pow(eps, s - 3) * (scaled_upper_gamma(s - 1, x) - tail);
}

double lower_exp_moment_deriv(ExponentS s, double u, double eps, int order, const QuadCtx& ctx) {
  require_eps(eps);
  if (!(u >= eps * (1 - 1e-12))) throw DomainError("lower_exp_moment_deriv needs u >= eps");
  u = std::max(u, eps);
  if (order == 0) return lower_exp_moment(s, u, eps, ctx);
  if (order == 1) {
    return (s * std::pow(u, s - 1) - lower_exp_moment(s, u, eps, ctx)) / eps;
  }
  if (order != 2) throw DomainError("derivative order must be 0, 1 or 2");
  if (s.value() == 1) return -std::exp(-(u - eps) / eps) / (eps * eps);
  if (s.value() == 2) return 0.0;
  const double boundary = s * (s - 2) * std::pow(eps, s - 3) * std::exp(-(u - eps) / eps);
  return boundary + s * (s - 1) * (s - 2) * lower_integral(s - 3, u, eps, ctx);
}

double chord_defect(double alpha, double beta, double s) {
  if (!(beta >= 0)) throw DomainError("chord_defect needs beta >= 0");
  if (beta == 0 || s == 1 || s == 2) return 0.0;
  if (!(alpha >= beta * (1 - 1e-12)))
    throw DomainError("chord_defect needs alpha >= beta, got alpha=" + fmt_num(alpha) +
                      " beta=" + fmt_num(beta));
  const double q = beta / alpha;
  if (q < 0.5) {
    // expand (l + alpha)^{s-3} in powers of l / alpha; odd terms integrate to 0
    double coef = 1;  // binom(s-3, k)
    double qpow = 1;
    double sum = 0;
    for (int k = 0; k < 200; k += 2) {
      const double term = coef * qpow / ((k + 1.0) * (k + 3.0));
      sum += term;
      if (std::abs(term) < 1e-18 * std::abs(sum)) break;
      coef *= (s - 3 - k) / (k + 1.0);
      coef *= (s - 3 - k - 1) / (k + 2.0);
      qpow *= q * q;
    }
    return s * (s - 1) * (s - 2) * std::pow(alpha, s - 3) * 4 * beta * beta * beta * sum;
  }
  const double lo = std::max(alpha - beta, 0.0);
  const double hi = alpha + beta;
  const double lo_pow = lo == 0 ? 0.0 : std::pow(lo, s - 1);
  return 2 * (lo * lo_pow - std::pow(hi, s) + s * beta * std::pow(hi, s - 1) + s * beta * lo_pow);
}

double left_fan_core(double xi, ExponentS s, double eps, const QuadCtx& ctx) {
  require_eps(eps);
  if (!(xi >= eps * (1 - 1e-12))) throw DomainError("left fan parameter must be >= eps");
  xi = std::max(xi, eps);
  if (s.value() == 1 || s.value() == 2) return 0.0;
  return 0.5 * (std::pow(xi + eps, s) - std::pow(xi - eps, s)) -
         eps * upper_exp_moment(s, xi - eps, eps, ctx);
}

double left_fan_profile(double xi, ExponentS s, double eps, const QuadCtx& ctx) {
  if (std::isinf(xi) && xi > 0) return 0.0;
  return std::exp(-xi / eps) * left_fan_core(xi, s, eps, ctx);
}

double left_fan_profile_deriv(double xi, ExponentS s, double eps) {
  require_eps(eps);
  if (std::isinf(xi) && xi > 0) return 0.0;
  if (!(xi >= eps * (1 - 1e-12))) throw DomainError("left fan parameter must be >= eps");
  xi = std::max(xi, eps);
  return std::exp(-xi / eps) * chord_defect(xi, eps, s) / (4 * eps);
}

double right_fan_core(double xi, ExponentS s, double eps, const QuadCtx& ctx) {
  require_eps(eps);
  if (!(xi >= 0)) throw DomainError("right fan parameter must be >= 0");
  if (s.value() == 2) return 0.0;
  if (xi <= eps) {
    return eps * (lower_exp_moment(s, xi + eps, eps, ctx) - 2 * xi * std::pow(xi + eps, s - 2));
  }
  if (s.value() == 1) return -eps * std::exp(-xi / eps);
  return 0.5 * (std::pow(xi - eps, s) - std::pow(xi + eps, s)) +
         eps * lower_exp_moment(s, xi + eps, eps, ctx);
}

double right_fan_profile(double xi, ExponentS s, double eps, const QuadCtx& ctx) {
  if (!(xi >= 0)) throw DomainError("right fan parameter must be >= 0");
  if (s.value() == 1 && xi >= eps) return -eps;
  return std::exp(xi / eps) * right_fan_core(xi, s, eps, ctx);
}

double right_fan_profile_deriv(double xi, ExponentS s, double eps) {
  require_eps(eps);
  if (!(xi >= 0)) throw DomainError("right fan parameter must be >= 0");
  if (xi <= eps) {
    return std::exp(xi / eps) * (s - 2) * (xi * xi + eps * eps) * std::pow(xi + eps, s - 3);
  }
  return std::exp(xi / eps) * chord_defect(xi, eps, s) / (4 * eps);
}

double left_fan_profile_inverse(double y, ExponentS s, double eps, const QuadCtx& ctx) {
  require_eps(eps);
  if (s.value() == 2 || s.value() == 1)
    throw DomainError("left fan profile is constant for this exponent");
  const double end = left_fan_profile(eps, s, eps, ctx);
  const double lo = std::min(end, 0.0), hi = std::max(end, 0.0);
  const double slack = 1e-12 * (std::abs(end) + 1e-300);
  if (y < lo - slack || y > hi + slack)
    throw RangeError("value " + fmt_num(y) + " outside the left fan profile range", lo, hi);
  if (y == 0) return kXiInfinity;
  // z = e^{1 - xi/eps} maps [eps, inf] onto [1, 0]
  auto f = [&](double z) {
    if (z <= 0) return -y;
    return z / std::exp(1.0) * left_fan_core(eps - eps * std::log(z), s, eps, ctx) - y;
  };
  const auto root = brent(f, 0.0, 1.0, 0.0, slack);
  if (root.x <= 0) return kXiInfinity;
  return eps - eps * std::log(root.x);
}

double right_fan_profile_inverse(double y, ExponentS s, double eps, const QuadCtx& ctx,
                                 double xi_max) {
  require_eps(eps);
  if (s.value() == 2) throw DomainError("right fan profile vanishes for s = 2");
  const double sign = s > 2 ? 1.0 : -1.0;
  double cap = std::min(xi_max, 700 * eps);
  if (s.value() == 1) cap = std::min(cap, eps);  // constant beyond eps
  double hi = std::min(eps, cap);
  double w_hi = right_fan_profile(hi, s, eps, ctx);
  while (sign * (w_hi - y) < 0 && hi < cap) {
    hi = std::min(2 * hi, cap);
    w_hi = right_fan_profile(hi, s, eps, ctx);
  }
  const double slack = 1e-12 * (std::abs(y) + eps);
  if (sign * y < -slack || sign * (w_hi - y) < -slack)
    throw RangeError("value " + fmt_num(y) + " outside the right fan profile range",
                     std::min(0.0, w_hi), std::max(0.0, w_hi));
  auto f = [&](double xi) { return right_fan_profile(xi, s, eps, ctx) - y; };
  return brent(f, 0.0, hi, 0.0, slack).x;
}

}  // namespace sharpbmo
