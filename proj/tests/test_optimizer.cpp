#include <doctest.h>

#include <cmath>

#include "sampling.hpp"
#include "sharpbmo/errors.hpp"
#include "sharpbmo/optimizer.hpp"

using namespace sharpbmo;
using sharpbmo::testing::sample_label;

namespace {

const Params kPrm{1.3, 1.7, 1.0};

double rel(double a, double b) { return std::abs(a - b) / std::max(1e-12, std::abs(b)); }

void check_moments(const TestFunction& f, const Point3& x, const Params& prm) {
  INFO("x = (" << x.x1 << ", " << x.x2 << ", " << x.x3 << ")");
  CHECK(std::abs(moment(f, 1, true) - x.x1) < 1e-9 * (1 + std::abs(x.x1)));
  CHECK(rel(moment(f, 2), x.x2) < 1e-9);
  CHECK(rel(moment(f, prm.p), x.x3) < 1e-8);
  CHECK(rel(moment(f, prm.r), eval_b2(x, prm)) < 1e-8);
}

double riemann(const TestFunction& f, double s, int n) {
  double sum = 0;
  for (int i = 0; i < n; ++i) sum += std::pow(std::abs(f((i + 0.5) * f.length / n)), s);
  return sum / n;
}

}  // namespace

TEST_CASE("pieces and moments") {
  TestFunction c{1, {{0, 1, ConstPiece{-1.5}}}};
  CHECK(moment(c, 3) == doctest::Approx(3.375));
  CHECK(moment(c, 1, true) == doctest::Approx(-1.5));

  // -ln t on [e^-2, 1], zero before
  const double t0 = std::exp(-2.0);
  TestFunction g{1, {{0, t0, ConstPiece{0}}, {t0, 1, LogPiece{-1, 1.0, t0, 1.0}}}};
  CHECK(moment(g, 1, true) == doctest::Approx(1 - 3 * std::exp(-2.0)).epsilon(1e-13));
  CHECK(moment(g, 1) == doctest::Approx(1 - 3 * std::exp(-2.0)).epsilon(1e-13));
  CHECK(g(0.5) == doctest::Approx(-std::log(0.5)));
  for (double s : {1.3, 2.0, 3.7}) CHECK(rel(moment(g, s), riemann(g, s, 1000000)) < 1e-5);

  CHECK_THROWS_AS(moment(g, 2, true), DomainError);
  TestFunction gap{1, {{0, 0.4, ConstPiece{1}}, {0.5, 1, ConstPiece{2}}}};
  CHECK_THROWS(gap.validate());
}

TEST_CASE("bmo norm of step functions") {
  TestFunction c{2, {{0, 2, ConstPiece{4}}}};
  CHECK(bmo_norm(c, 50) == doctest::Approx(0).epsilon(1e-12));
  const double a = -1, b = 3;
  TestFunction j{1, {{0, 0.5, ConstPiece{a}}, {0.5, 1, ConstPiece{b}}}};
  CHECK(bmo_norm(j, 10) == doctest::Approx((b - a) / 2).epsilon(1e-12));
  TestFunction k{1, {{0, 0.3, ConstPiece{a}}, {0.3, 1, ConstPiece{b}}}};
  double prev = 0;
  for (int n : {10, 20, 40, 80}) {
    const double v = bmo_norm(k, n);
    CHECK(v >= prev - 1e-15);
    prev = v;
  }
  CHECK(prev == doctest::Approx((b - a) / 2).epsilon(1e-12));
}

TEST_CASE("delivery curves") {
  TestFunction c{1, {{0, 1, ConstPiece{0.7}}}};
  for (Point2 pt : delivery_curve(c, 20)) {
    CHECK(pt.x1 == doctest::Approx(0.7));
    CHECK(pt.x2 == doctest::Approx(0.49));
  }
  for (const Point3& x : sample_label(kPrm, Subdomain::XiLPlus, 5, 3)) {
    const auto curve = delivery_curve(optimizer_xi_l(x, kPrm), 400);
    CHECK(curve.back().x1 == doctest::Approx(x.x1).epsilon(1e-12));
    CHECK(curve.back().x2 == doctest::Approx(x.x2).epsilon(1e-12));
    for (Point2 pt : curve) CHECK(strip_violation(pt, kPrm.eps) < 1e-8);
  }
}

TEST_CASE("optimizers reproduce the point and the value") {
  for (Subdomain label :
       {Subdomain::XiLPlus, Subdomain::XiRPlus, Subdomain::XiChPlus, Subdomain::R, Subdomain::F0}) {
    const auto pts = sample_label(kPrm, label, 12, 17);
    REQUIRE(pts.size() == 12);
    for (const Point3& x : pts) {
      check_moments(optimizer_for(x, kPrm), x, kPrm);
      const Point3 y{-x.x1, x.x2, x.x3};
      check_moments(optimizer_for(y, kPrm), y, kPrm);
    }
  }
}

TEST_CASE("both branches of the right fan") {
  auto below = sample_label(kPrm, Subdomain::XiRPlus, 5, 2, [](const Evaluation& e) {
    return std::get<FanRight>(e.leaf).xi < 1.0;
  });
  auto above = sample_label(kPrm, Subdomain::XiRPlus, 5, 2, [](const Evaluation& e) {
    return std::get<FanRight>(e.leaf).xi > 1.0;
  });
  REQUIRE(below.size() == 5);
  REQUIRE(above.size() == 5);
  for (const auto& set : {below, above})
    for (const Point3& x : set) {
      const TestFunction f = optimizer_xi_r(x, kPrm);
      check_moments(f, x, kPrm);
      CHECK(bmo_norm(f, 1000) <= kPrm.eps * (1 + 1e-4));
    }
}

TEST_CASE("chord and degenerate cases") {
  const Point3 x{1.5, 2.5, (std::pow(2.0, kPrm.p) + 1) / 2};
  const TestFunction f = optimizer_chord(x, kPrm);
  for (double s : {1.0, 1.3, 2.0, 3.1}) CHECK(moment(f, s) == doctest::Approx((std::pow(2.0, s) + 1) / 2));
  CHECK(bmo_norm(f, 500) == doctest::Approx(0.5));

  const TestFunction z = optimizer_for({0, 0, 0}, kPrm);
  CHECK(moment(z, 2) == 0.0);
  const double t = 1.2;
  const TestFunction s = optimizer_for({t, t * t, std::pow(t, kPrm.p)}, kPrm);
  CHECK(moment(s, 1, true) == doctest::Approx(t));
  CHECK(bmo_norm(s, 100) < 1e-6);  // sqrt of rounding in the variance
}

TEST_CASE("bmo norm of optimizers") {
  for (Subdomain label :
       {Subdomain::XiLPlus, Subdomain::XiRPlus, Subdomain::XiChPlus, Subdomain::R, Subdomain::F0})
    for (const Point3& x : sample_label(kPrm, label, 3, 29))
      CHECK(bmo_norm(optimizer_for(x, kPrm), 2000) <= kPrm.eps * (1 + 1e-4));
}

TEST_CASE("wrong subdomain") {
  const auto r = sample_label(kPrm, Subdomain::R, 1, 5);
  REQUIRE(r.size() == 1);
  CHECK_THROWS_AS(optimizer_xi_l(r[0], kPrm), DomainError);
  CHECK_THROWS_AS(optimizer_chord(r[0], kPrm), DomainError);
  CHECK_NOTHROW(optimizer_r(r[0], kPrm));
}

TEST_CASE("bmo norm with breakpoints next to mesh nodes") {
  // breakpoints of these optimizers land within rounding of mesh nodes
  for (Point3 x : {Point3{2.252135733245654, 5.7401960259715743, 2.9386743510890141},
                   Point3{0.65304178541290381, 1.4021354103414103, 1.1962228601560705}})
    CHECK(bmo_norm(optimizer_for(x, kPrm), 1000) <= kPrm.eps * (1 + 1e-4));
}
