#include "sharpbmo/bellman.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sharpbmo/errors.hpp"
#include "sharpbmo/roots.hpp"
#include "sharpbmo/special_fn.hpp"

namespace sharpbmo {

namespace {

constexpr double kTiny = 1e-300;

// Residual slack for root brackets that miss by rounding.
double bracket_slack(double fa, double fb) {
  return 1e-7 * (std::abs(fa) + std::abs(fb)) + 1e-14;
}

template <class F>
double solve_monotone(F&& f, double lo, double hi) {
  if (!(hi > lo)) return lo;
  const double flo = f(lo), fhi = f(hi);
  if (flo == 0) return lo;
  if (fhi == 0) return hi;
  if ((flo > 0) == (fhi > 0)) {
    if (std::abs(flo) <= bracket_slack(flo, fhi) || std::abs(fhi) <= bracket_slack(flo, fhi))
      return std::abs(flo) <= std::abs(fhi) ? lo : hi;
    throw NumericalFailure("leaf parameter not bracketed", std::min(std::abs(flo), std::abs(fhi)));
  }
  return brent(f, lo, hi).x;
}

// Left fan in the variable z = e^{(u - xi)/eps} in [0, 1].
double left_h(double z, double u, ExponentS s, const Params& prm) {
  if (z <= 0) return 0.0;
  return z * left_fan_core(u - prm.eps * std::log(z), s, prm.eps, prm.ctx);
}

double xi_from_z(double z, double u, double eps) {
  return z <= 0 ? kXiInfinity : u - eps * std::log(z);
}

double z_from_xi(double xi, double u, double eps) {
  return std::isinf(xi) ? 0.0 : std::exp((u - xi) / eps);
}

double right_h(double xi, double u, ExponentS s, const Params& prm) {
  return std::exp((xi - u) / prm.eps) * right_fan_core(xi, s, prm.eps, prm.ctx);
}

double chord_mean(double alpha, double beta, double x1, double s) {
  const double a = std::max(0.0, x1 - alpha), b = x1 + beta;
  return (alpha * std::pow(b, s) + beta * std::pow(a, s)) / (alpha + beta);
}

struct Solved {
  Subdomain label;
  LeafCoords leaf;
  double value;
  double delta_minus;
};

Point3 reflect(const Point3& x) { return {std::abs(x.x1), x.x2, x.x3}; }

Solved solve_fan_left(const Point3& x, const Params& prm) {
  const ExponentS p(prm.p), r(prm.r);
  const Geometry g = geometry(x.xy(), prm.eps);
  const double dm = g.delta_minus;
  const double v = std::max(0.0, x.x1 - dm);
  const double u = v + prm.eps;
  if (on_skeleton(x.xy())) {
    return {Subdomain::XiLPlus, FanLeft{u, v, kXiInfinity, 0.0}, std::pow(v, prm.r), dm};
  }
  const double h = prm.eps * ((x.x3 - std::pow(v, prm.p)) / dm - upper_exp_moment(p, v, prm.eps, prm.ctx));
  const double z = solve_monotone([&](double zz) { return left_h(zz, u, p, prm) - h; }, 0.0, 1.0);
  const double xi = xi_from_z(z, u, prm.eps);
  const double hr = left_h(z, u, r, prm);
  const double value = std::pow(v, prm.r) + (upper_exp_moment(r, v, prm.eps, prm.ctx) + hr / prm.eps) * dm;
  return {Subdomain::XiLPlus, FanLeft{u, v, xi, left_h(z, u, p, prm)}, value, dm};
}

Solved solve_fan_right(const Point3& x, const Params& prm) {
  const ExponentS p(prm.p), r(prm.r);
  const Geometry g = geometry(x.xy(), prm.eps);
  const double dm = g.delta_minus;
  const double v = std::max(prm.eps, x.x1 + dm);
  const double u = v - prm.eps;
  if (on_skeleton(x.xy())) {
    return {Subdomain::XiRPlus, FanRight{u, v, u, 0.0}, std::pow(v, prm.r), dm};
  }
  const double kp = lower_exp_moment(p, v, prm.eps, prm.ctx);
  const double h = prm.eps * (kp - (std::pow(v, prm.p) - x.x3) / dm);
  // for p = 1 the profile is constant past eps, so the fan stops there
  const double xi_max = prm.p == 1 ? std::min(u, prm.eps) : u;
  const double xi = solve_monotone([&](double t) { return right_h(t, u, p, prm) - h; }, 0.0, xi_max);
  const double hr = right_h(xi, u, r, prm);
  const double value = std::pow(v, prm.r) - (lower_exp_moment(r, v, prm.eps, prm.ctx) - hr / prm.eps) * dm;
  return {Subdomain::XiRPlus, FanRight{u, v, xi, right_h(xi, u, p, prm)}, value, dm};
}

Solved solve_f0(const Point3& x, const Params& prm) {
  const ExponentS p(prm.p), r(prm.r);
  const double eps = prm.eps;
  const double dm = geometry(x.xy(), eps).delta_minus;
  if (x.x2 <= kTiny) return {Subdomain::F0, F0Leaf{kXiInfinity, 0.0}, 0.0, dm};
  const double h = 2 * eps * eps * x.x3 / x.x2 - eps * upper_exp_moment(p, 0, eps, prm.ctx);
  // z = e^{1 - xi/eps}; the fan base is u = eps
  const double z = solve_monotone([&](double zz) { return left_h(zz, eps, p, prm) - h; }, 0.0, 1.0);
  const double xi = xi_from_z(z, eps, eps);
  const double hr = left_h(z, eps, r, prm);
  const double value = (upper_exp_moment(r, 0, eps, prm.ctx) + hr / eps) * x.x2 / (2 * eps);
  return {Subdomain::F0, F0Leaf{xi, left_h(z, eps, p, prm)}, value, dm};
}

Solved solve_chord(const Point3& x, const Params& prm) {
  const Geometry g = geometry(x.xy(), prm.eps);
  const double dm = g.delta_minus, dp = g.delta_plus;
  if (on_skeleton(x.xy())) {
    return {Subdomain::XiChPlus, Chord{x.x1, x.x1}, std::pow(x.x1, prm.r), dm};
  }
  const double prod = dm * dp;  // (x1 - a)(b - x1)
  const double lo = dm;
  const double hi = std::max(lo, std::min(dp, x.x1));
  const double alpha = solve_monotone(
      [&](double al) { return chord_mean(al, prod / al, x.x1, prm.p) - x.x3; }, lo, hi);
  const double beta = prod / alpha;
  const double value = chord_mean(alpha, beta, x.x1, prm.r);
  return {Subdomain::XiChPlus, Chord{std::max(0.0, x.x1 - alpha), x.x1 + beta}, value, dm};
}

Solved solve_r(const Point3& x, const Params& prm) {
  const double dm = geometry(x.xy(), prm.eps).delta_minus;
  if (x.x2 <= kTiny || x.x3 <= kTiny) return {Subdomain::R, RLeaf{0.0}, 0.0, dm};
  const double v = std::pow(x.x3 / x.x2, 1 / (prm.p - 2));
  return {Subdomain::R, RLeaf{v}, std::pow(v, prm.r - 2) * x.x2, dm};
}

Solved solve_b2(const Point3& x_in, const Params& prm) {
  prm.validate(true);
  const Subdomain raw = classify_b2(x_in, prm);
  const Point3 x = reflect(x_in);
  const Subdomain label = x_in.x1 < 0 ? mirror(raw) : raw;
  Solved s;
  switch (label) {
    case Subdomain::XiLPlus: s = solve_fan_left(x, prm); break;
    case Subdomain::XiRPlus: s = solve_fan_right(x, prm); break;
    case Subdomain::XiChPlus: s = solve_chord(x, prm); break;
    case Subdomain::R: s = solve_r(x, prm); break;
    case Subdomain::F0: s = solve_f0(x, prm); break;
    default: throw InternalError("unexpected subdomain label for the second candidate");
  }
  s.label = raw;
  return s;
}

double w1(double v, double s, double a, double x2, const Params& prm) {
  const ExponentS es(s);
  const double eps = prm.eps;
  const double m = upper_exp_moment(es, v, eps, prm.ctx);
  if (v <= eps) return std::pow(v, s) + m * (x2 - v * v) / (2 * (v + eps));
  const double k = lower_exp_moment(es, v, eps, prm.ctx);
  return std::pow(v, s) + (m - k) / (4 * eps) * (x2 - 2 * v * a + v * v) + (m + k) / 2 * (a - v);
}

}  // namespace

LeafCoords leaf_coords_b2(const Point3& x, const Params& params) {
  return solve_b2(x, params).leaf;
}

Evaluation evaluate_b2(const Point3& x, const Params& params) {
  Solved s = solve_b2(x, params);
  return {s.value, s.label, s.leaf};
}

double eval_b2(const Point3& x, const Params& params) { return solve_b2(x, params).value; }

Evaluation evaluate_b1(const Point3& x_in, const Params& prm) {
  prm.validate(false);
  const Subdomain label = classify_b1(x_in, prm);
  const Point3 x = reflect(x_in);
  const Geometry g = geometry(x.xy(), prm.eps);
  const double v_lo = std::max(0.0, g.u_plus);
  double v_hi = x.x2 >= prm.eps * prm.eps ? g.u_minus : std::sqrt(x.x2);
  v_hi = std::max(v_hi, v_lo);
  const double v = solve_monotone(
      [&](double t) { return w1(t, prm.p, x.x1, x.x2, prm) - x.x3; }, v_lo, v_hi);
  const double value = w1(v, prm.r, x.x1, x.x2, prm);
  LeafCoords leaf = v <= prm.eps ? LeafCoords{B1Trapezoid{v}} : LeafCoords{B1Triangle{v}};
  return {value, label, leaf};
}

double eval_b1(const Point3& x, const Params& params) { return evaluate_b1(x, params).value; }

Candidate candidate_for(const Params& params, Extremum which) {
  const double sign = (params.r - 2) * (params.r - params.p);
  if (sign == 0) throw ParameterError("r = 2 and r = p are not supported by the dispatcher");
  const bool b1_is_max = sign > 0;
  if (which == Extremum::Max) return b1_is_max ? Candidate::B1 : Candidate::B2;
  return b1_is_max ? Candidate::B2 : Candidate::B1;
}

double eval_bellman(const Point3& x, const Params& params, Extremum which) {
  params.validate(false);
  return candidate_for(params, which) == Candidate::B1 ? eval_b1(x, params) : eval_b2(x, params);
}

Gradient grad_b2_fd(const Point3& x, const Params& params, double step) {
  auto f = [&](double x2, double x3) { return eval_b2({x.x1, x2, x3}, params); };
  auto inside = [&](double x2, double x3) { return in_domain({x.x1, x2, x3}, params); };
  auto partial = [&](bool along_x3) {
    const double h = step;
    auto at = [&](double t) {
      return along_x3 ? std::pair{x.x2, x.x3 + t} : std::pair{x.x2 + t, x.x3};
    };
    auto [a2, a3] = at(h);
    auto [b2, b3] = at(-h);
    const bool fwd = inside(a2, a3), bwd = inside(b2, b3);
    const double f0 = f(x.x2, x.x3);
    if (fwd && bwd) return (f(a2, a3) - f(b2, b3)) / (2 * h);
    const double dir = fwd ? 1.0 : -1.0;
    auto [c2, c3] = at(dir * h);
    auto [d2, d3] = at(dir * 2 * h);
    if (!inside(c2, c3) || !inside(d2, d3))
      throw DomainError("finite-difference stencil leaves the domain");
    return dir * (-3 * f0 + 4 * f(c2, c3) - f(d2, d3)) / (2 * h);
  };
  return {partial(false), partial(true), true};
}

Gradient grad_b2(const Point3& x_in, const Params& prm) {
  const Solved s = solve_b2(x_in, prm);
  const Point3 x = reflect(x_in);
  const double eps = prm.eps, p = prm.p, r = prm.r;
  const double fd_step = 1e-6 * (1 + std::abs(x.x3));
  auto fallback = [&] { return grad_b2_fd(x_in, prm, fd_step); };

  // near a separating surface the one-sided formulas are replaced by differences
  const Ladder ladder = b2_ladder(x.xy(), prm);
  for (std::size_t i = 1; i + 1 < ladder.surfaces.size(); ++i) {
    if (std::abs(x.x3 - ladder.surfaces[i]) < 10 * prm.ctx.abs_tol * (1 + std::abs(x.x3)))
      return fallback();
  }
  const Subdomain label = x_in.x1 < 0 ? mirror(s.label) : s.label;
  const ExponentS ep(p), er(r);
  switch (label) {
    case Subdomain::R: {
      if (x.x2 <= kTiny) return fallback();
      const double q = x.x3 / x.x2;
      return {(p - r) / (p - 2) * std::pow(q, (r - 2) / (p - 2)),
              (r - 2) / (p - 2) * std::pow(q, (r - p) / (p - 2)), false};
    }
    case Subdomain::F0: {
      const auto& leaf = std::get<F0Leaf>(s.leaf);
      if (std::isinf(leaf.xi) || x.x2 <= kTiny) return fallback();
      const double rho = chord_defect(leaf.xi, eps, r) / chord_defect(leaf.xi, eps, p);
      return {(s.value - x.x3 * rho) / x.x2, rho, false};
    }
    case Subdomain::XiLPlus: {
      const auto& leaf = std::get<FanLeft>(s.leaf);
      if (std::isinf(leaf.xi) || s.delta_minus <= 1e-8 * eps) return fallback();
      const double rho = chord_defect(leaf.xi, eps, r) / chord_defect(leaf.xi, eps, p);
      const double z = z_from_xi(leaf.xi, leaf.u, eps);
      const double hr = left_h(z, leaf.u, er, prm);
      const double dmr = upper_exp_moment_deriv(er, leaf.v, eps, 1, prm.ctx);
      const double dmp = upper_exp_moment_deriv(ep, leaf.v, eps, 1, prm.ctx);
      const double d2 = ((hr - leaf.h * rho) / eps + eps * (dmr - dmp * rho)) / (2 * eps);
      return {d2, rho, false};
    }
    case Subdomain::XiRPlus: {
      const auto& leaf = std::get<FanRight>(s.leaf);
      if (s.delta_minus <= 1e-8 * eps || leaf.v <= eps * (1 + 1e-8)) return fallback();
      double rho;
      if (leaf.xi >= eps) {
        rho = chord_defect(leaf.xi, eps, r) / chord_defect(leaf.xi, eps, p);
      } else {
        rho = (r - 2) / (p - 2) * std::pow(leaf.xi + eps, r - p);
      }
      const double hr = right_h(leaf.xi, leaf.u, er, prm);
      const double dkr = lower_exp_moment_deriv(er, leaf.v, eps, 1, prm.ctx);
      const double dkp = lower_exp_moment_deriv(ep, leaf.v, eps, 1, prm.ctx);
      const double d2 = ((eps * dkr + hr / eps) - (eps * dkp + leaf.h / eps) * rho) / (2 * eps);
      return {d2, rho, false};
    }
    case Subdomain::XiChPlus: {
      const auto& leaf = std::get<Chord>(s.leaf);
      const double len = leaf.b - leaf.a;
      if (len <= 1e-4 * (1 + leaf.b)) return fallback();
      const double mid = 0.5 * (leaf.a + leaf.b), half = 0.5 * len;
      const double rho = chord_defect(mid, half, r) / chord_defect(mid, half, p);
      auto gap = [&](double e) {
        const double apow = leaf.a > 0 ? std::pow(leaf.a, e - 1) : 0.0;
        return (std::pow(leaf.b, e) - leaf.a * apow - e * apow * len) / (len * len);
      };
      return {gap(r) - gap(p) * rho, rho, false};
    }
    default:
      throw InternalError("unexpected subdomain in gradient");
  }
}

}  // namespace sharpbmo
