#include <doctest.h>

#include <cmath>
#include <random>

#include "sharpbmo/domain.hpp"
#include "sharpbmo/errors.hpp"
#include "sharpbmo/special_fn.hpp"

using namespace sharpbmo;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

const Subdomain kAll[] = {Subdomain::XiLPlus,  Subdomain::XiLMinus,  Subdomain::XiRPlus,
                          Subdomain::XiRMinus, Subdomain::XiChPlus,  Subdomain::XiChMinus,
                          Subdomain::F0,       Subdomain::R,         Subdomain::Xi0,
                          Subdomain::XiPlus,   Subdomain::XiMinus};

}  // namespace

TEST_CASE("strip geometry") {
  for (double eps : {0.5, 1.0, 2.0})
    for (double x1 : {-1.3, 0.0, 0.7, 4.0}) {
      const Geometry lo = geometry({x1, x1 * x1}, eps);
      CHECK(lo.d == doctest::Approx(eps));
      CHECK(std::abs(lo.delta_minus) < 1e-12);
      CHECK(lo.u_plus == doctest::Approx(x1));
      CHECK(lo.u_minus == doctest::Approx(x1));
      const Geometry up = geometry({x1, x1 * x1 + eps * eps}, eps);
      CHECK(std::abs(up.d) < 1e-7);
      CHECK(up.delta_minus == doctest::Approx(eps).epsilon(1e-7));
      CHECK(up.u_plus == doctest::Approx(x1 - eps).epsilon(1e-7));
      CHECK(up.u_minus == doctest::Approx(x1 + eps).epsilon(1e-7));
    }
  const Geometry g = geometry({0, 0.5}, 1.0);
  CHECK(g.d == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(g.delta_minus == doctest::Approx(1 - 1 / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(g.delta_plus == doctest::Approx(1 + 1 / std::sqrt(2.0)).epsilon(1e-14));

  CHECK(in_strip({1, 1.5}, 1));
  CHECK_FALSE(in_strip({1, 2.5}, 1));
  CHECK_FALSE(in_strip({1, 0.5}, 1));
  CHECK_THROWS_AS(geometry({1, 0.5}, 1), DomainError);
  CHECK_THROWS_AS(require_strip({0, 1.01}, 1), DomainError);
}

TEST_CASE("upper envelope") {
  for (double p : {1.3, 1.5, 2.5, 3.0}) {
    const double eps = 0.9;
    for (double t : {-2.0, -0.4, 0.0, 0.6, 3.0})
      CHECK(std::abs(envelope_m({t, t * t}, p, eps) - std::pow(std::abs(t), p)) < 1e-12);
    CHECK(rel(envelope_m({0, eps * eps}, p, eps), std::pow(eps, p) * std::tgamma(p + 1) / 2) < 1e-12);
    for (double v : {0.0, 0.3, 1.7, 5.0}) {
      const double x1 = v + eps;
      const double want = std::pow(v, p) + eps * upper_exp_moment(ExponentS(p), v, eps);
      CHECK(rel(envelope_m({x1, x1 * x1 + eps * eps}, p, eps), want) < 1e-11);
    }
  }
  CHECK(envelope_m({0.4, 0.9}, 2, 1) == doctest::Approx(0.9).epsilon(1e-13));
}

TEST_CASE("lower envelope") {
  for (double p : {1.3, 1.5, 2.5, 3.0}) {
    const double eps = 1.2;
    for (double x2 : {0.0, 0.3, 1.0, eps * eps})
      CHECK(rel(envelope_k({0, x2}, p, eps), std::pow(x2, p / 2)) < 1e-12);
    for (double t : {-2.0, -0.4, 0.6, 3.0})
      CHECK(std::abs(envelope_k({t, t * t}, p, eps) - std::pow(std::abs(t), p)) < 1e-12);
    for (double v : {eps, 1.7, 3.0, 8.0}) {
      const double x1 = v - eps;
      const double want = std::pow(v, p) - eps * lower_exp_moment(ExponentS(p), v, eps);
      CHECK(rel(envelope_k({x1, x1 * x1 + eps * eps}, p, eps), want) < 1e-11);
    }
  }
}

TEST_CASE("x3 bounds") {
  Params params{1.5, 1.8, 1.0};
  const Interval sk = x3_bounds({0.8, 0.64}, params);
  CHECK(sk.lo == doctest::Approx(std::pow(0.8, 1.5)).epsilon(1e-12));
  CHECK(sk.hi == doctest::Approx(std::pow(0.8, 1.5)).epsilon(1e-12));

  const Interval c = x3_bounds({0, 1}, params);
  const double a = std::tgamma(2.5) / 2;
  CHECK(c.lo == doctest::Approx(std::min(a, 1.0)).epsilon(1e-12));
  CHECK(c.hi == doctest::Approx(std::max(a, 1.0)).epsilon(1e-12));

  Params two{2.0, 3.0, 1.0};
  for (Point2 pt : {Point2{0, 0.5}, Point2{1.5, 2.9}, Point2{-3, 9.2}}) {
    const Interval b = x3_bounds(pt, two);
    CHECK(b.lo == doctest::Approx(pt.x2).epsilon(1e-12));
    CHECK(b.hi == doctest::Approx(pt.x2).epsilon(1e-12));
  }

  CHECK(in_domain({0, 1, 1.0}, params));
  CHECK_FALSE(in_domain({0, 1, 2.0}, params));
  CHECK_THROWS_AS(require_domain({0, 1, 2.0}, params), DomainError);
}

TEST_CASE("omega regions") {
  CHECK(omega_region({0, 0.5}, 1) == 0);
  CHECK(omega_region({0.5, 1}, 1) == 0);
  CHECK(omega_region({1.2, 1.8}, 1) == 3);
  CHECK(omega_region({-1.2, 1.8}, 1) == -3);
  CHECK(omega_region({0.3, 1.05}, 1) == 1);
  CHECK(omega_region({0.8, 0.7}, 1) == 2);
  CHECK(omega_region({5, 25.5}, 1) == 4);
  CHECK(omega_region({-5, 25.5}, 1) == -4);
}

TEST_CASE("labels and mirror") {
  for (Subdomain s : kAll) {
    CHECK(mirror(mirror(s)) == s);
    CHECK_FALSE(to_string(s).empty());
  }
  CHECK(mirror(Subdomain::XiLPlus) == Subdomain::XiRMinus);
  CHECK(mirror(Subdomain::R) == Subdomain::R);
  CHECK(mirror(Subdomain::XiPlus) == Subdomain::XiMinus);
}

TEST_CASE("ladder structure") {
  for (Params params : {Params{1.3, 1.7, 1.0}, Params{1.5, 3.0, 1.0}, Params{2.5, 3.5, 1.0}}) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(0, 1);
    for (int i = 0; i < 200; ++i) {
      const double x1 = 4 * U(rng);
      const Point2 pt{x1, x1 * x1 + (0.02 + 0.96 * U(rng))};
      const Ladder l = b2_ladder(pt, params);
      REQUIRE(l.labels.size() + 1 == l.surfaces.size());
      CHECK(l.omega == omega_region(pt, params.eps));
      CHECK(rel(l.surfaces.front(), envelope_k(pt, params.p, params.eps)) < 1e-10);
      CHECK(rel(l.surfaces.back(), envelope_m(pt, params.p, params.eps)) < 1e-10);
      const double dir = l.surfaces.back() >= l.surfaces.front() ? 1 : -1;
      for (std::size_t k = 0; k + 1 < l.surfaces.size(); ++k)
        CHECK(dir * (l.surfaces[k + 1] - l.surfaces[k]) >= -1e-12);
      // every label in the ladder is the classification of its own slab
      for (std::size_t k = 0; k < l.labels.size(); ++k) {
        if (std::abs(l.surfaces[k + 1] - l.surfaces[k]) < 1e-9) continue;
        const Point3 x{pt.x1, pt.x2, 0.5 * (l.surfaces[k] + l.surfaces[k + 1])};
        CHECK(classify_b2(x, params) == l.labels[k]);
      }
    }
  }
}

TEST_CASE("classify b2") {
  const Params params{1.3, 1.7, 1.0};
  const double x2 = 0.5;
  const double plane = std::pow(2 * params.eps, params.p - 2) * x2;
  const Subdomain below = classify_b2({0, x2, plane - 1e-3}, params);
  const Subdomain above = classify_b2({0, x2, plane + 1e-3}, params);
  CHECK(below != above);
  CHECK(((below == Subdomain::F0 && above == Subdomain::R) ||
         (below == Subdomain::R && above == Subdomain::F0)));

  const double t = 3;
  CHECK(classify_b2({t, t * t, std::pow(t, params.p)}, params) == Subdomain::XiChPlus);
  CHECK(classify_b2({-t, t * t, std::pow(t, params.p)}, params) == Subdomain::XiChMinus);

  const Point2 w4{5, 25.6};
  REQUIRE(omega_region(w4, params.eps) == 4);
  const Ladder l = b2_ladder(w4, params);
  bool seen = false;
  for (std::size_t k = 0; k < l.labels.size(); ++k)
    if (l.labels[k] == Subdomain::XiChPlus) {
      seen = true;
      CHECK(classify_b2({w4.x1, w4.x2, 0.5 * (l.surfaces[k] + l.surfaces[k + 1])}, params) ==
            Subdomain::XiChPlus);
    }
  CHECK(seen);

  CHECK_THROWS_AS(classify_b2({0, 1, 5}, params), DomainError);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(0, 1);
  for (int i = 0; i < 300; ++i) {
    const double x1 = 3 * U(rng);
    const double y = x1 * x1 + U(rng);
    const Interval b = x3_bounds({x1, y}, params);
    const double x3 = b.lo + (b.hi - b.lo) * U(rng);
    CHECK(classify_b2({-x1, y, x3}, params) == mirror(classify_b2({x1, y, x3}, params)));
  }
}

TEST_CASE("classify b1") {
  for (Params params : {Params{1.3, 1.7, 1.0}, Params{1.5, 3.0, 0.7}}) {
    const double e = params.eps;
    CHECK(classify_b1({0, e * e, std::pow(e, params.p)}, params) == Subdomain::Xi0);
    const Point2 pt{3 * e, 9.5 * e * e};
    const Interval b = x3_bounds(pt, params);
    CHECK(classify_b1({pt.x1, pt.x2, 0.5 * (b.lo + b.hi)}, params) == Subdomain::XiPlus);
    CHECK(classify_b1({-pt.x1, pt.x2, 0.5 * (b.lo + b.hi)}, params) == Subdomain::XiMinus);
  }
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS((Params{1.8, 1.5, 1.0}.validate()), ParameterError);
  CHECK_THROWS_AS((Params{0.5, 1.5, 1.0}.validate()), ParameterError);
  CHECK_THROWS_AS((Params{1.5, 1.8, 0.0}.validate()), ParameterError);
  CHECK_THROWS_AS((Params{1.5, 2.0, 1.0}.validate(true)), ParameterError);
  CHECK_NOTHROW((Params{1.5, 2.0, 1.0}.validate()));
}
