#pragma once
/// @file verify.hpp
/// @brief Numerical probes for the Bellman candidates: local concavity,
/// C1 gluing, a planar envelope oracle and a Monte Carlo stress test.

#include <cstdint>
#include <string>
#include <vector>

#include "sharpbmo/bellman.hpp"

namespace sharpbmo {

struct ProbeReport {
  std::string name;
  int n_samples = 0;
  double worst_violation = 0;  // >= 0
  double threshold = 0;
  bool passed = true;          // worst_violation < threshold
  Point3 worst_point{};
  Point3 worst_point_end{};    // second end for segment probes
  double statistic = 0;        // probe specific, e.g. the worst ratio
};

// Random short segments in the domain; the violation is the midpoint defect
// of eval_b2 measured against the concavity sign fixed by (r-2)(r-p).
ProbeReport concavity_probe(const Params& params, int n_segments, std::uint64_t seed,
                            double threshold = 1e-9);

// One report per internal ladder surface (keyed "omega<i>:<below>|<above>"):
// relative jump of one-sided finite-difference B_x3 across the surface.
std::vector<ProbeReport> smoothness_probe(const Params& params, int n_per_boundary,
                                          double step = 1e-5, double threshold = 1e-4,
                                          std::uint64_t seed = 1);

// Regular grid over (x1, y) with y = x2 - x1^2 in [0, eps^2].
struct Grid2 {
  int nx1 = 0;
  int ny = 0;
  double x1_lo = 0;
  double x1_hi = 0;
  double eps = 1;
  std::vector<double> values;  // values[i * ny + j]

  double x1_at(int i) const { return x1_lo + (x1_hi - x1_lo) * i / (nx1 - 1); }
  double y_at(int j) const { return eps * eps * j / (ny - 1); }
  double x2_at(int i, int j) const { return x1_at(i) * x1_at(i) + y_at(j); }
  double& at(int i, int j) { return values[static_cast<std::size_t>(i) * ny + j]; }
  double at(int i, int j) const { return values[static_cast<std::size_t>(i) * ny + j]; }
};

// Grid with n x n nodes spanning [lo, hi] plus halo_cells extra columns on
// each side at the same spacing.
Grid2 make_envelope_grid(double lo, double hi, int n, double eps, int halo_cells);

struct EnvelopeOptions {
  int max_step_cells = 40;  // longest half-segment, in x1 cells
  int n_slopes = 12;        // 2 n_slopes + 1 slopes relative to the parabola
};

struct EnvelopeResult {
  Grid2 grid;
  int iterations = 0;
  double final_change = 0;
  bool converged = false;
};

// Discrete concave (Max) or convex (Min) envelope of |x1|^p pinned on y = 0.
EnvelopeResult envelope_oracle_2d(double p, const Grid2& grid, Extremum which, int n_iter,
                                  double tol = 1e-8, const EnvelopeOptions& opt = {});

// Closed-form value the envelope should converge to.
double envelope_exact(Point2 pt, double p, double eps, Extremum which);

// Sup-norm error relative to sup|exact| over nodes with x1 in [lo, hi],
// dropping margin_cells columns at each end.
ProbeReport envelope_compare(const EnvelopeResult& env, double p, Extremum which, double lo,
                             double hi, int margin_cells, double threshold = 0.01);

// Random zero-mean step functions on [0, 1]; statistic is the worst value of
// ||f||_r / (C ||f||_p^{p/r} ||f||_BMO^{1-p/r}).
ProbeReport inequality_monte_carlo(double p, double r, int n_funcs, std::uint64_t seed,
                                   const QuadCtx& ctx = {}, int n_grid = 2000,
                                   double threshold = 1e-3);

// The same ratio for the optimizer at the point (0, 1, x3*) of the constant.
double near_extremal_ratio(double p, double r, const QuadCtx& ctx = {}, int n_grid = 4000);

// B2 >= B1 when (r-2)(r-p) < 0 and B1 >= B2 otherwise.
ProbeReport b1_b2_cross_check(const Params& params, int n, std::uint64_t seed = 1,
                              double threshold = 1e-9);

// Sign of the fan profile derivatives against sign(s - 2) on an n x n grid.
ProbeReport fan_sign_check(int n, double eps = 1.0);

// Sign of the x3 second difference of B2 against sign((r-2)(r-p)).
ProbeReport x3_curvature_sign_check(const Params& params, int n, std::uint64_t seed = 1);

}  // namespace sharpbmo
