#pragma once
/// @file optimizer.hpp
/// @brief Extremal test functions on [0, l] and their averages.

#include <variant>
#include <vector>

#include "sharpbmo/bellman.hpp"

namespace sharpbmo {

struct ConstPiece {
  double value;
};

// phi(t) = sign * scale * ln(arg(t)) with arg affine on the segment,
// arg(t_start) = arg_start and arg(t_end) = arg_end. The plain ramp
// sign * eps * ln t has arg_start = t_start and arg_end = t_end.
struct LogPiece {
  int sign;
  double scale;
  double arg_start;
  double arg_end;
};

struct Segment {
  double t_start;
  double t_end;
  std::variant<ConstPiece, LogPiece> kind;

  double operator()(double t) const;
  double length() const { return t_end - t_start; }
};

struct TestFunction {
  double length = 1;
  std::vector<Segment> segments;

  // Segments must tile [0, length] without gaps.
  void validate() const;
  double operator()(double t) const;
};

TestFunction negated(const TestFunction& f);

TestFunction optimizer_xi_l(const Point3& x, const Params& params);
TestFunction optimizer_xi_r(const Point3& x, const Params& params);
TestFunction optimizer_chord(const Point3& x, const Params& params);
TestFunction optimizer_r(const Point3& x, const Params& params);
TestFunction optimizer_f0(const Point3& x, const Params& params);
// Picks the construction matching the subdomain of x.
TestFunction optimizer_for(const Point3& x, const Params& params);

// (1/l) int |phi|^s, or (1/l) int phi when is_signed (s must be 1).
double moment(const TestFunction& f, double s, bool is_signed = false, const QuadCtx& ctx = {});

// Largest oscillation over subintervals whose ends lie on an equispaced
// n_grid mesh or on a segment breakpoint. A lower bound for the true norm.
double bmo_norm(const TestFunction& f, int n_grid);

// Averages of phi and phi^2 over [0, t] at n geometrically spaced t ending at l.
std::vector<Point2> delivery_curve(const TestFunction& f, int n);

}  // namespace sharpbmo
