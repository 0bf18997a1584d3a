#pragma once
/// @file bellman.hpp
/// @brief The two Bellman candidates, their leaf coordinates and gradients.
///
/// All leaf coordinates refer to the reflected point when x1 < 0; both
/// candidates are even in x1.

#include <variant>

#include "sharpbmo/domain.hpp"

namespace sharpbmo {

// Fan of tangents through the skeleton point v = u - eps, parameter xi >= u.
// h = e^{(u-xi)/eps} * (left fan core at xi).
struct FanLeft {
  double u, v, xi, h;
};
// Fan of tangents through v = u + eps, parameter xi in [0, u].
struct FanRight {
  double u, v, xi, h;
};
// Chord between skeleton points a <= b.
struct Chord {
  double a, b;
};
// Three-valued leaf through (+-v, v^2) and the origin.
struct RLeaf {
  double v;
};
// Central fan, xi in [eps, inf].
struct F0Leaf {
  double xi, h;
};
struct B1Triangle {
  double v;
};
struct B1Trapezoid {
  double v;
};

using LeafCoords =
    std::variant<FanLeft, FanRight, Chord, RLeaf, F0Leaf, B1Triangle, B1Trapezoid>;

struct Evaluation {
  double value;
  Subdomain label;
  LeafCoords leaf;
};

LeafCoords leaf_coords_b2(const Point3& x, const Params& params);
Evaluation evaluate_b2(const Point3& x, const Params& params);
double eval_b2(const Point3& x, const Params& params);

Evaluation evaluate_b1(const Point3& x, const Params& params);
double eval_b1(const Point3& x, const Params& params);

enum class Extremum { Max, Min };
enum class Candidate { B1, B2 };

// Which candidate realizes the requested extremum.
Candidate candidate_for(const Params& params, Extremum which);
double eval_bellman(const Point3& x, const Params& params, Extremum which);

struct Gradient {
  double d_dx2;
  double d_dx3;
  bool finite_difference;
};

Gradient grad_b2(const Point3& x, const Params& params);
// Finite-difference gradient in (x2, x3); centered where possible.
Gradient grad_b2_fd(const Point3& x, const Params& params, double step);

}  // namespace sharpbmo
