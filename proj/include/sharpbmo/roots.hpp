#pragma once

#include <cmath>
#include <limits>
#include <utility>

#include "sharpbmo/errors.hpp"

namespace sharpbmo {

struct RootResult {
  double x;
  double fx;
  int iterations;
};

// Brent's method on a sign-changing bracket [a, b]. Terminates when the
// bracket is below xtol + 4 eps |x| or f vanishes exactly. When the bracket
// carries no sign change the endpoint with the smaller |f| is returned if
// |f| <= slack, otherwise NumericalFailure is thrown.
template <class F>
RootResult brent(F&& f, double a, double b, double xtol = 0, double slack = 0,
                 int max_iter = 300) {
  double fa = f(a);
  double fb = f(b);
  if (fa == 0) return {a, fa, 0};
  if (fb == 0) return {b, fb, 0};
  if ((fa > 0) == (fb > 0)) {
    if (std::abs(fa) <= std::abs(fb) && std::abs(fa) <= slack) return {a, fa, 0};
    if (std::abs(fb) <= slack) return {b, fb, 0};
    throw NumericalFailure("root not bracketed", std::min(std::abs(fa), std::abs(fb)));
  }
  const double eps = std::numeric_limits<double>::epsilon();
  double c = a, fc = fa, d = b - a, e = d;
  for (int it = 1; it <= max_iter; ++it) {
    if ((fb > 0) == (fc > 0)) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol = 2 * eps * std::abs(b) + 0.5 * xtol;
    const double m = 0.5 * (c - b);
    if (std::abs(m) <= tol || fb == 0) return {b, fb, it};
    if (std::abs(e) >= tol && std::abs(fa) > std::abs(fb)) {
      double p, q, r;
      const double s = fb / fa;
      if (a == c) {
        p = 2 * m * s;
        q = 1 - s;
      } else {
        q = fa / fc;
        r = fb / fc;
        p = s * (2 * m * q * (q - r) - (b - a) * (r - 1));
        q = (q - 1) * (r - 1) * (s - 1);
      }
      if (p > 0)
        q = -q;
      else
        p = -p;
      if (2 * p < std::min(3 * m * q - std::abs(tol * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = m;
        e = m;
      }
    } else {
      d = m;
      e = m;
    }
    a = b;
    fa = fb;
    b += std::abs(d) > tol ? d : (m > 0 ? tol : -tol);
    fb = f(b);
  }
  throw NumericalFailure("root search exhausted its iteration budget", std::abs(fb));
}

}  // namespace sharpbmo
