#pragma once
/// @file domain.hpp
/// @brief Geometry of the parabolic strip and its 3-D lift, boundary
/// envelopes, and the subdomain classification used by the Bellman candidates.

#include <string>
#include <utility>
#include <vector>

#include "sharpbmo/quadrature.hpp"

namespace sharpbmo {

struct Params {
  double p = 1.5;
  double r = 1.8;
  double eps = 1.0;
  QuadCtx ctx{};

  // 1 <= p < r, eps > 0. With for_b2 also p != 2 and r != 2.
  void validate(bool for_b2 = false) const;
};

struct Point2 {
  double x1 = 0;
  double x2 = 0;
};

struct Point3 {
  double x1 = 0;
  double x2 = 0;
  double x3 = 0;
  Point2 xy() const { return {x1, x2}; }
};

struct Geometry {
  double d;
  double delta_minus;
  double delta_plus;
  double u_plus;
  double u_minus;
};

enum class Subdomain {
  XiLPlus,
  XiLMinus,
  XiRPlus,
  XiRMinus,
  XiChPlus,
  XiChMinus,
  F0,
  R,
  Xi0,
  XiPlus,
  XiMinus,
};

std::string to_string(Subdomain s);
// Reflection x1 -> -x1 of a label.
Subdomain mirror(Subdomain s);

// Slack used for membership tests on the closed strip.
double geom_tol(double x2);

// On the lower parabola up to geom_tol.
bool on_skeleton(Point2 pt);

// Signed violation of the strip constraints (<= 0 inside).
double strip_violation(Point2 pt, double eps);
bool in_strip(Point2 pt, double eps);
// Throws DomainError when pt lies outside the strip beyond geom_tol.
void require_strip(Point2 pt, double eps);

Geometry geometry(Point2 pt, double eps);

// Envelope built from the upper exponential moment (tangents to the right).
double envelope_m(Point2 pt, double p, double eps, const QuadCtx& ctx = {});
// Envelope built from the lower exponential moment (tangents to the left).
double envelope_k(Point2 pt, double p, double eps, const QuadCtx& ctx = {});

struct Interval {
  double lo;
  double hi;
};
Interval x3_bounds(Point2 pt, const Params& params);
bool in_domain(const Point3& x, const Params& params);
void require_domain(const Point3& x, const Params& params);

// Index of the region omega_i, i in [-4, 4]; ties go to the smaller |i|.
int omega_region(Point2 pt, double eps);

// One vertical stack of subdomains over a fixed (x1, x2) with x1 >= 0.
// surfaces[0] is the k-envelope, surfaces.back() the m-envelope and
// labels[i] sits between surfaces[i] and surfaces[i+1].
struct Ladder {
  int omega = 0;
  std::vector<double> surfaces;
  std::vector<Subdomain> labels;
};
Ladder b2_ladder(Point2 pt, const Params& params);

Subdomain classify_b2(const Point3& x, const Params& params);
Subdomain classify_b1(const Point3& x, const Params& params);

}  // namespace sharpbmo
