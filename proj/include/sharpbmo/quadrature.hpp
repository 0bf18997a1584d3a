#pragma once
/// @file quadrature.hpp
/// @brief Adaptive Gauss-Kronrod (10/21) integration.

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "sharpbmo/errors.hpp"

namespace sharpbmo {

struct QuadCtx {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_subdiv = 200;

  void validate() const {
    if (!(abs_tol > 0) || !(rel_tol > 0) || max_subdiv < 1)
      throw ParameterError("quadrature tolerances must be positive");
  }
};

struct QuadResult {
  double value = 0;
  double error = 0;
  int subdivisions = 0;
};

namespace detail {

inline constexpr double kXgk[11] = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
inline constexpr double kWgk[11] = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600525478416, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
inline constexpr double kWg[5] = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
Panel gk21(F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double resk = kWgk[10] * fc;
  double resg = 0;
  for (int j = 0; j < 10; ++j) {
    const double dx = h * kXgk[j];
    const double f1 = f(c - dx);
    const double f2 = f(c + dx);
    resk += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
  }
  const double value = resk * h;
  double err = std::abs((resk - resg) * h);
  // QUADPACK-style rescaling of the raw Kronrod-Gauss difference.
  const double scale = std::abs(value) > 0 ? std::abs(value) : 1.0;
  if (err > 0) err = std::min(err, scale * std::pow(200.0 * err / scale, 1.5));
  err = std::max(err, 50 * std::numeric_limits<double>::epsilon() * std::abs(value));
  return {a, b, value, err};
}

}  // namespace detail

// Integrate f over [a, b]. Throws NumericalFailure when the subdivision
// budget runs out before the tolerance is met.
template <class F>
QuadResult integrate(F&& f, double a, double b, const QuadCtx& ctx = {}) {
  if (a == b) return {};
  double sign = 1;
  if (b < a) {
    std::swap(a, b);
    sign = -1;
  }
  std::priority_queue<detail::Panel> heap;
  heap.push(detail::gk21(f, a, b));
  double total = heap.top().value;
  double err = heap.top().error;
  int n = 1;
  while (err > std::max(ctx.abs_tol, ctx.rel_tol * std::abs(total))) {
    if (n >= ctx.max_subdiv) {
      throw NumericalFailure("quadrature did not converge", err);
    }
    detail::Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) break;  // interval at machine resolution
    detail::Panel left = detail::gk21(f, worst.a, mid);
    detail::Panel right = detail::gk21(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++n;
    if (n % 32 == 0) {
      // re-sum to limit drift from the running updates
      std::vector<detail::Panel> all;
      double t = 0, e = 0;
      while (!heap.empty()) {
        all.push_back(heap.top());
        t += all.back().value;
        e += all.back().error;
        heap.pop();
      }
      for (auto& p : all) heap.push(p);
      total = t;
      err = e;
    }
  }
  return {sign * total, err, n};
}

// Integrate f over [a, +inf) through t = a + y / (1 - y).
template <class F>
QuadResult integrate_to_infinity(F&& f, double a, const QuadCtx& ctx = {}) {
  auto g = [&](double y) {
    if (y >= 1) return 0.0;
    const double om = 1 - y;
    const double v = f(a + y / om) / (om * om);
    return std::isfinite(v) ? v : 0.0;
  };
  return integrate(g, 0.0, 1.0, ctx);
}

}  // namespace sharpbmo
