#include <doctest.h>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>

#include "sharpbmo/errors.hpp"
#include "sharpbmo/quadrature.hpp"
#include "sharpbmo/roots.hpp"
#include "sharpbmo/special_fn.hpp"

using namespace sharpbmo;
using boost::math::quadrature::gauss_kronrod;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

double m_oracle(double s, double u, double eps) {
  boost::math::quadrature::exp_sinh<double> q;
  auto f = [&](double t) { return std::exp(-t / eps) * std::pow(u + t, s - 1); };
  return s / eps * q.integrate(f);
}

double k_oracle(double s, double u, double eps) {
  auto f = [&](double t) { return std::exp((t - u) / eps) * std::pow(t, s - 1); };
  return s / eps * gauss_kronrod<double, 61>::integrate(f, eps, u, 20, 1e-14);
}

double cap_a_oracle(double a, double b, double s) {
  auto f = [&](double l) { return (b * b - l * l) * std::pow(l + a, s - 3); };
  return s * (s - 1) * (s - 2) * gauss_kronrod<double, 61>::integrate(f, -b, b, 20, 1e-14);
}

}  // namespace

TEST_CASE("quadrature and brent on known integrals and roots") {
  const auto r = integrate([](double x) { return std::exp(-x) * x * x; }, 0.0, 30.0);
  CHECK(r.value == doctest::Approx(2 - 962 * std::exp(-30.0)).epsilon(1e-12));
  const auto inf = integrate_to_infinity([](double x) { return std::exp(-x); }, 1.0);
  CHECK(inf.value == doctest::Approx(std::exp(-1.0)).epsilon(1e-10));
  const auto root = brent([](double x) { return std::cos(x) - x; }, 0.0, 1.0);
  CHECK(root.x == doctest::Approx(0.7390851332151607).epsilon(1e-14));
  CHECK_THROWS_AS(brent([](double x) { return x * x + 1; }, -1.0, 1.0), NumericalFailure);
}

TEST_CASE("scaled upper gamma matches boost") {
  boost::math::quadrature::exp_sinh<double> q;
  for (double a : {-1.7, -0.3, 0.4, 1.0, 1.3, 2.5, 4.2})
    for (double x : {0.01, 0.3, 1.0, 1.7, 3.0, 10.0, 40.0}) {
      // boost only covers a > 0; below that integrate directly
      const double want = a > 0 ? std::exp(x) * boost::math::tgamma(a, x)
                                : q.integrate([&](double t) { return std::exp(-t) * std::pow(x + t, a - 1); });
      CHECK(rel(scaled_upper_gamma(a, x), want) < 1e-12 * std::max(1.0, std::abs(want)));
    }
}

TEST_CASE("upper exponential moment") {
  const double eps = 0.7;
  for (double u : {0.0, 0.2, 1.5, 7.0}) {
    CHECK(upper_exp_moment(ExponentS(1), u, eps) == 1.0);
    CHECK(upper_exp_moment(ExponentS(2), u, eps) == doctest::Approx(2 * (u + eps)));
  }
  for (double s : {1.3, 2.7, 3.5}) {
    CHECK(upper_exp_moment(ExponentS(s), 0, eps) ==
          doctest::Approx(std::pow(eps, s - 1) * std::tgamma(s + 1)).epsilon(1e-13));
    for (double u : {0.05, 0.9, 2.0, 12.0})
      CHECK(rel(upper_exp_moment(ExponentS(s), u, eps), m_oracle(s, u, eps)) < 1e-10);
  }
}

TEST_CASE("lower exponential moment") {
  const double eps = 1.3;
  for (double v : {1.3, 2.0, 5.0}) {
    CHECK(lower_exp_moment(ExponentS(1), v, eps) ==
          doctest::Approx(1 - std::exp(1 - v / eps)).epsilon(1e-14));
    CHECK(lower_exp_moment(ExponentS(2), v, eps) == doctest::Approx(2 * (v - eps)));
  }
  for (double s : {1.2, 1.8, 3.0, 4.4}) CHECK(lower_exp_moment(ExponentS(s), eps, eps) == 0.0);
  for (double u : {1.5, 3.0, 9.0}) {
    // s = 3 in closed form
    const double want = 3 * (u * u - 2 * eps * u + 2 * eps * eps - eps * eps * std::exp(1 - u / eps));
    CHECK(rel(lower_exp_moment(ExponentS(3), u, eps), want) < 1e-12);
    for (double s : {1.4, 2.6, 3.9}) CHECK(rel(lower_exp_moment(ExponentS(s), u, eps), k_oracle(s, u, eps)) < 1e-10);
  }
  CHECK_THROWS_AS(lower_exp_moment(ExponentS(1.5), 0.5 * eps, eps), DomainError);
}

TEST_CASE("moment derivatives") {
  const double eps = 1.0;
  CHECK(upper_exp_moment_deriv(ExponentS(2), 0.4, eps, 1) == doctest::Approx(2.0));
  for (double s : {1.4, 2.5, 3.7})
    for (double u : {1.2, 2.5, 6.0}) {
      const double h = 1e-4;
      for (int order : {1, 2}) {
        const double fm = (upper_exp_moment_deriv(ExponentS(s), u + h, eps, order - 1) -
                           upper_exp_moment_deriv(ExponentS(s), u - h, eps, order - 1)) / (2 * h);
        const double fk = (lower_exp_moment_deriv(ExponentS(s), u + h, eps, order - 1) -
                           lower_exp_moment_deriv(ExponentS(s), u - h, eps, order - 1)) / (2 * h);
        CHECK(rel(upper_exp_moment_deriv(ExponentS(s), u, eps, order), fm) < 1e-6);
        CHECK(rel(lower_exp_moment_deriv(ExponentS(s), u, eps, order), fk) < 1e-6);
      }
      const double lhs = eps * (upper_exp_moment_deriv(ExponentS(s), u, eps, 2) +
                                lower_exp_moment_deriv(ExponentS(s), u, eps, 2));
      const double rhs = upper_exp_moment_deriv(ExponentS(s), u, eps, 1) -
                         lower_exp_moment_deriv(ExponentS(s), u, eps, 1);
      CHECK(std::abs(lhs - rhs) < 1e-10 * (1 + std::abs(rhs)));
      // -eps m' + m = s u^{s-1}
      const double m = upper_exp_moment(ExponentS(s), u, eps);
      const double mp = (upper_exp_moment(ExponentS(s), u + 1e-5, eps) -
                         upper_exp_moment(ExponentS(s), u - 1e-5, eps)) / 2e-5;
      CHECK(std::abs(-eps * mp + m - s * std::pow(u, s - 1)) < 1e-8 * (1 + m));
    }
}

TEST_CASE("chord defect") {
  for (double a : {0.5, 3.0}) CHECK(chord_defect(a, 0.5, 2) == 0.0);
  CHECK(chord_defect(2, 1, 3) == doctest::Approx(8.0).epsilon(1e-14));
  CHECK(cap_a_oracle(2, 1, 3) == doctest::Approx(8.0).epsilon(1e-12));
  for (double s : {1.3, 2.5, 3.7}) {
    const double b = 1.7;
    CHECK(chord_defect(b / 2, b / 2, s) == doctest::Approx((s - 2) * std::pow(b, s)).epsilon(1e-12));
  }
  for (double s = 1.1; s <= 5.0; s += 0.35)
    for (double a = 1.1; a <= 10.0; a += 0.7) {
      const double want = cap_a_oracle(a, 1.0, s);
      CHECK(std::abs(chord_defect(a, 1.0, s) - want) < 1e-8 * std::abs(want) + 1e-14);
    }
}

TEST_CASE("left fan profile") {
  const double eps = 0.8;
  for (double xi : {0.8, 1.5, 4.0}) {
    CHECK(left_fan_profile(xi, ExponentS(1), eps) == 0.0);
    CHECK(left_fan_profile(xi, ExponentS(2), eps) == 0.0);
  }
  CHECK(left_fan_profile(kXiInfinity, ExponentS(1.5), eps) == 0.0);
  for (double s : {1.3, 2.6, 3.5}) {
    const double want = (s - 2) * std::pow(2 * eps, s - 1) / (2 * std::exp(1.0));
    CHECK(left_fan_profile_deriv(eps, ExponentS(s), eps) == doctest::Approx(want).epsilon(1e-12));
    for (double xi : {1.0, 2.0, 5.0}) {
      const double h = 1e-5;
      const double fd = (left_fan_profile(xi + h, ExponentS(s), eps) -
                         left_fan_profile(xi - h, ExponentS(s), eps)) / (2 * h);
      CHECK(rel(left_fan_profile_deriv(xi, ExponentS(s), eps), fd) < 1e-7);
    }
  }
  CHECK_THROWS_AS(left_fan_profile(0.5 * eps, ExponentS(1.5), eps), DomainError);
}

TEST_CASE("right fan profile") {
  const double eps = 1.1;
  for (double xi : {0.0, 0.4, 1.1, 3.0}) CHECK(right_fan_profile(xi, ExponentS(2), eps) == 0.0);
  // s = 1 is the constant -eps on [eps, inf) only
  for (double xi : {1.1, 2.0, 7.0})
    CHECK(right_fan_profile(xi, ExponentS(1), eps) == doctest::Approx(-eps).epsilon(1e-13));
  CHECK(right_fan_profile(0.0, ExponentS(1.5), eps) == 0.0);
  for (double s : {1.3, 2.6, 3.5}) {
    const double want = std::exp(1.0) * (s - 2) * std::pow(2.0, s - 2) * std::pow(eps, s - 1);
    CHECK(right_fan_profile_deriv(eps, ExponentS(s), eps) == doctest::Approx(want).epsilon(1e-12));
    for (double xi : {1.2, 2.5, 6.0})
      CHECK(rel(right_fan_profile_deriv(xi, ExponentS(s), eps),
                std::exp(2 * xi / eps) * left_fan_profile_deriv(xi, ExponentS(s), eps)) < 1e-10);
    for (double xi : {0.3, 0.9, 2.0, 4.0}) {
      const double h = 1e-5;
      const double fd = (right_fan_profile(xi + h, ExponentS(s), eps) -
                         right_fan_profile(xi - h, ExponentS(s), eps)) / (2 * h);
      CHECK(rel(right_fan_profile_deriv(xi, ExponentS(s), eps), fd) < 1e-6);
    }
    // both branches meet at eps with matching slope
    const double d = 1e-7;
    CHECK(std::abs(right_fan_profile(eps - d, ExponentS(s), eps) -
                   right_fan_profile(eps + d, ExponentS(s), eps)) < 1e-5);
    // for s < 2 the slope from the right approaches like (xi - eps)^{s-1}
    const double left = right_fan_profile_deriv(eps, ExponentS(s), eps);
    double prev = 1e300;
    for (double dd : {1e-4, 1e-8, 1e-12}) {
      const double gap = std::abs(right_fan_profile_deriv(eps + dd, ExponentS(s), eps) - left);
      CHECK(gap < prev);
      CHECK(gap <= 4 * std::abs(left) * std::pow(dd / eps, std::min(1.0, s - 1)));
      prev = gap;
    }
  }
}

TEST_CASE("fan profile inverses") {
  const double eps = 1.0;
  for (double s : {1.4, 3.2}) {
    for (double xi0 = eps; xi0 <= 20 * eps; xi0 += 1.9) {
      const double y = left_fan_profile(xi0, ExponentS(s), eps);
      CHECK(left_fan_profile_inverse(y, ExponentS(s), eps) == doctest::Approx(xi0).epsilon(1e-8));
    }
    CHECK(std::isinf(left_fan_profile_inverse(0.0, ExponentS(s), eps)));
    CHECK(right_fan_profile_inverse(right_fan_profile(0.0, ExponentS(s), eps), ExponentS(s), eps) ==
          doctest::Approx(0.0));
    for (double xi0 : {0.2, 0.9, 2.5, 6.0}) {
      const double y = right_fan_profile(xi0, ExponentS(s), eps);
      CHECK(right_fan_profile_inverse(y, ExponentS(s), eps) == doctest::Approx(xi0).epsilon(1e-8));
    }
    // outside the attained range
    const double bad = s < 2 ? -1.0 : 1.0;
    CHECK_THROWS_AS(left_fan_profile_inverse(bad, ExponentS(s), eps), RangeError);
  }
}

TEST_CASE("exponent guard") {
  CHECK_THROWS_AS(ExponentS(0.5), ParameterError);
  CHECK(double(ExponentS(1.5)) == 1.5);
}
