#pragma once
/// @file sharp_constant.hpp
/// @brief The sharp constant C(p, r) and its multidimensional assemblies.

#include <optional>
#include <string>
#include <vector>

#include "sharpbmo/quadrature.hpp"

namespace sharpbmo {

enum class ConstantBranch { GammaFormula, P1SmallR, XiEquation };
std::string to_string(ConstantBranch b);

struct ConstantResult {
  double c = 0;
  ConstantBranch branch = ConstantBranch::GammaFormula;
  std::optional<double> xi_star;
  std::optional<double> x3_star;
  // Set when the xi branch was too close to p = 2 or r = 2 and the
  // gamma formula limit was returned instead.
  bool near_two_fallback = false;
};

// Difference of the two sides of the equation fixing the optimal fan
// parameter (eps = 1). Requires 1 < p < r < 2 and xi > 1.
double xi_equation_residual(double xi, double p, double r, const QuadCtx& ctx = {});

ConstantResult constant(double p, double r, const QuadCtx& ctx = {});

struct RatioSample {
  double x3;
  double ratio;
};
// B(0, 1, x3) / x3 on n points spanning the central interval (eps = 1).
std::vector<RatioSample> ratio_profile(double p, double r, int n, const QuadCtx& ctx = {});
// Ends of that interval, ordered.
std::pair<double, double> ratio_interval(double p);

double cube_factor(int n);
double multidim_cube_constant(double p, double r, int n, const QuadCtx& ctx = {});
double multidim_ball_constant(double p, double r, int n, double c_tilde, const QuadCtx& ctx = {});

}  // namespace sharpbmo
