#include "sharpbmo/domain.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sharpbmo/errors.hpp"
#include "sharpbmo/special_fn.hpp"

namespace sharpbmo {

namespace {

std::string describe(Point2 pt) {
  std::ostringstream os;
  os.precision(17);
  os << "(" << pt.x1 << ", " << pt.x2 << ")";
  return os.str();
}

double x3_tol(double x3) { return 1e-11 * (1 + std::abs(x3)); }

}  // namespace

void Params::validate(bool for_b2) const {
  ctx.validate();
  if (!(p >= 1) || !std::isfinite(p)) throw ParameterError("p must satisfy p >= 1");
  if (!(r > p) || !std::isfinite(r)) throw ParameterError("r must satisfy r > p");
  if (!(eps > 0) || !std::isfinite(eps)) throw ParameterError("eps must be positive");
  if (for_b2 && (p == 2 || r == 2))
    throw ParameterError("this candidate is undefined for p = 2 or r = 2");
}

std::string to_string(Subdomain s) {
  switch (s) {
    case Subdomain::XiLPlus: return "XiL+";
    case Subdomain::XiLMinus: return "XiL-";
    case Subdomain::XiRPlus: return "XiR+";
    case Subdomain::XiRMinus: return "XiR-";
    case Subdomain::XiChPlus: return "XiCh+";
    case Subdomain::XiChMinus: return "XiCh-";
    case Subdomain::F0: return "F0";
    case Subdomain::R: return "R";
    case Subdomain::Xi0: return "Xi0";
    case Subdomain::XiPlus: return "Xi+";
    case Subdomain::XiMinus: return "Xi-";
  }
  return "?";
}

Subdomain mirror(Subdomain s) {
  // the left fan on the right side reflects to the right fan on the left side
  switch (s) {
    case Subdomain::XiLPlus: return Subdomain::XiRMinus;
    case Subdomain::XiRMinus: return Subdomain::XiLPlus;
    case Subdomain::XiRPlus: return Subdomain::XiLMinus;
    case Subdomain::XiLMinus: return Subdomain::XiRPlus;
    case Subdomain::XiChPlus: return Subdomain::XiChMinus;
    case Subdomain::XiChMinus: return Subdomain::XiChPlus;
    case Subdomain::XiPlus: return Subdomain::XiMinus;
    case Subdomain::XiMinus: return Subdomain::XiPlus;
    default: return s;
  }
}

double geom_tol(double x2) { return 1e-12 * (1 + std::abs(x2)); }

bool on_skeleton(Point2 pt) { return pt.x2 - pt.x1 * pt.x1 <= geom_tol(pt.x2); }

double strip_violation(Point2 pt, double eps) {
  const double below = pt.x1 * pt.x1 - pt.x2;
  const double above = pt.x2 - pt.x1 * pt.x1 - eps * eps;
  return std::max(below, above);
}

bool in_strip(Point2 pt, double eps) {
  return std::isfinite(pt.x1) && std::isfinite(pt.x2) &&
         strip_violation(pt, eps) <= geom_tol(pt.x2);
}

void require_strip(Point2 pt, double eps) {
  if (!in_strip(pt, eps)) {
    std::ostringstream os;
    os.precision(6);
    os << "point " << describe(pt) << " lies outside the strip (violation "
       << strip_violation(pt, eps) << ")";
    throw DomainError(os.str());
  }
}

Geometry geometry(Point2 pt, double eps) {
  require_strip(pt, eps);
  const double d = std::clamp(std::sqrt(std::max(0.0, pt.x1 * pt.x1 + eps * eps - pt.x2)), 0.0, eps);
  const double dm = eps - d;
  return {d, dm, eps + d, pt.x1 - dm, pt.x1 + dm};
}

double envelope_m(Point2 pt, double p, double eps, const QuadCtx& ctx) {
  const ExponentS s(p);
  pt.x1 = std::abs(pt.x1);
  const Geometry g = geometry(pt, eps);
  if (pt.x1 <= eps && 2 * eps * pt.x1 <= pt.x2) {
    return upper_exp_moment(s, 0, eps, ctx) * pt.x2 / (2 * eps);
  }
  const double u = std::max(0.0, g.u_plus);
  return std::pow(u, p) + upper_exp_moment(s, u, eps, ctx) * (pt.x1 - u);
}

double envelope_k(Point2 pt, double p, double eps, const QuadCtx& ctx) {
  const ExponentS s(p);
  pt.x1 = std::abs(pt.x1);
  const Geometry g = geometry(pt, eps);
  if (pt.x2 <= eps * eps) return std::pow(std::max(pt.x2, 0.0), p / 2);
  const double u = std::max(eps, g.u_minus);
  return std::pow(u, p) - lower_exp_moment(s, u, eps, ctx) * (u - pt.x1);
}

Interval x3_bounds(Point2 pt, const Params& params) {
  const double a = envelope_m(pt, params.p, params.eps, params.ctx);
  const double b = envelope_k(pt, params.p, params.eps, params.ctx);
  return {std::min(a, b), std::max(a, b)};
}

bool in_domain(const Point3& x, const Params& params) {
  if (!in_strip(x.xy(), params.eps) || !std::isfinite(x.x3)) return false;
  const Interval b = x3_bounds(x.xy(), params);
  return x.x3 >= b.lo - x3_tol(x.x3) && x.x3 <= b.hi + x3_tol(x.x3);
}

void require_domain(const Point3& x, const Params& params) {
  require_strip(x.xy(), params.eps);
  const Interval b = x3_bounds(x.xy(), params);
  if (!(x.x3 >= b.lo - x3_tol(x.x3) && x.x3 <= b.hi + x3_tol(x.x3))) {
    std::ostringstream os;
    os.precision(17);
    os << "x3 = " << x.x3 << " outside [" << b.lo << ", " << b.hi << "] over "
       << describe(x.xy());
    throw DomainError(os.str());
  }
}

int omega_region(Point2 pt, double eps) {
  require_strip(pt, eps);
  const double x1 = std::abs(pt.x1), x2 = pt.x2;
  const double t = geom_tol(x2);
  const double e2 = eps * eps;
  const double line = 2 * eps * x1;
  int idx;
  if (line <= x2 + t && x2 <= e2 + t)
    idx = 0;
  else if (x2 >= e2 - t && x2 >= line - t && x1 <= eps + t)
    idx = 1;
  else if (x2 <= e2 + t && x2 <= line + t)
    idx = 2;
  else if (x2 >= e2 - t && x2 <= line + t)
    idx = 3;
  else
    idx = 4;
  return pt.x1 < 0 ? -idx : idx;
}

Ladder b2_ladder(Point2 pt, const Params& params) {
  const double p = params.p, eps = params.eps;
  pt.x1 = std::abs(pt.x1);
  const Geometry g = geometry(pt, eps);
  const double x1 = pt.x1, x2 = pt.x2;
  const double ak = envelope_k(pt, p, eps, params.ctx);
  const double am = envelope_m(pt, p, eps, params.ctx);
  auto radial = [&] { return std::pow(2 * eps, p - 2) * x2; };
  auto right_leaf = [&] { return std::pow(x1 + g.delta_minus, p - 2) * x2; };
  auto through_origin = [&] { return std::pow(x2, p - 1) * std::pow(x1, 2 - p); };
  auto chord_left = [&] {
    return (g.delta_minus * std::pow(x1 + g.delta_plus, p) +
            g.delta_plus * std::pow(std::max(0.0, x1 - g.delta_minus), p)) / (2 * eps);
  };
  auto chord_right = [&] {
    return (g.delta_minus * std::pow(std::max(0.0, x1 - g.delta_plus), p) +
            g.delta_plus * std::pow(x1 + g.delta_minus, p)) / (2 * eps);
  };
  using S = Subdomain;
  Ladder l;
  l.omega = omega_region(pt, eps);
  switch (l.omega) {
    case 0:
      l.surfaces = {ak, radial(), am};
      l.labels = {S::R, S::F0};
      break;
    case 1:
      l.surfaces = {ak, right_leaf(), radial(), am};
      l.labels = {S::XiRPlus, S::R, S::F0};
      break;
    case 2:
      l.surfaces = {ak, through_origin(), chord_left(), am};
      l.labels = {S::R, S::XiChPlus, S::XiLPlus};
      break;
    case 3:
      l.surfaces = {ak, right_leaf(), through_origin(), chord_left(), am};
      l.labels = {S::XiRPlus, S::R, S::XiChPlus, S::XiLPlus};
      break;
    default:
      l.surfaces = {ak, chord_right(), chord_left(), am};
      l.labels = {S::XiRPlus, S::XiChPlus, S::XiLPlus};
      break;
  }
  return l;
}

Subdomain classify_b2(const Point3& x, const Params& params) {
  params.validate(true);
  require_domain(x, params);
  // off the origin the skeleton is the degenerate chord
  if (x.x1 != 0 && on_skeleton(x.xy()))
    return x.x1 < 0 ? Subdomain::XiChMinus : Subdomain::XiChPlus;
  const Ladder l = b2_ladder(x.xy(), params);
  const double sigma = params.p < 2 ? 1.0 : -1.0;
  const double tie = 1e-13 * (1 + std::abs(x.x3));
  Subdomain label = l.labels.back();
  for (std::size_t i = 0; i < l.labels.size(); ++i) {
    if (sigma * x.x3 >= sigma * l.surfaces[i + 1] - tie) {
      label = l.labels[i];
      break;
    }
  }
  return x.x1 < 0 ? mirror(label) : label;
}

Subdomain classify_b1(const Point3& x, const Params& params) {
  params.validate(false);
  require_domain(x, params);
  const double eps = params.eps, p = params.p;
  const double a = std::abs(x.x1);
  const double t = geom_tol(x.x2);
  const double plane = std::pow(eps, p) + (x.x2 - eps * eps) *
                                              upper_exp_moment(ExponentS(p), eps, eps, params.ctx) /
                                              (4 * eps);
  if (a <= 2 * eps + t && x.x2 >= 4 * eps * a - 3 * eps * eps - t &&
      (p - 2) * (x.x3 - plane) >= -x3_tol(x.x3))
    return Subdomain::Xi0;
  return x.x1 < 0 ? Subdomain::XiMinus : Subdomain::XiPlus;
}

}  // namespace sharpbmo
