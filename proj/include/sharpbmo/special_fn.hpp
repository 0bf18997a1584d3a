#pragma once
/// @file special_fn.hpp
/// @brief Exponential moments, the chord defect kernel and the fan profiles.
///
/// Notation: s >= 1 is an exponent, eps > 0 the BMO scale.
///   upper_exp_moment(s,u)  = (s/eps) int_u^inf   e^{(u-t)/eps} t^{s-1} dt
///   lower_exp_moment(s,u)  = (s/eps) int_eps^u   e^{(t-u)/eps} t^{s-1} dt
///   chord_defect(a,b,s)    = s(s-1)(s-2) int_{-b}^{b} (b^2 - l^2)(l + a)^{s-3} dl
/// The fan profiles are the functions whose level sets parametrize the
/// left and right fans of tangents.

#include <limits>

#include "sharpbmo/quadrature.hpp"

namespace sharpbmo {

// Exponent s >= 1.
class ExponentS {
 public:
  explicit ExponentS(double s);
  double value() const { return s_; }
  operator double() const { return s_; }

 private:
  double s_;
};

// Marks the point at infinity of a fan parameter.
inline constexpr double kXiInfinity = std::numeric_limits<double>::infinity();

// e^x * Gamma(a, x) for x >= 0 (a > 0), or x > 0 (any real a != 0, -1, ...).
double scaled_upper_gamma(double a, double x);

double upper_exp_moment(ExponentS s, double u, double eps, const QuadCtx& ctx = {});
double lower_exp_moment(ExponentS s, double u, double eps, const QuadCtx& ctx = {});
double upper_exp_moment_deriv(ExponentS s, double u, double eps, int order,
                              const QuadCtx& ctx = {});
double lower_exp_moment_deriv(ExponentS s, double u, double eps, int order,
                              const QuadCtx& ctx = {});

double chord_defect(double alpha, double beta, double s);

// Left profile on [eps, inf]; vanishes at inf.
double left_fan_profile(double xi, ExponentS s, double eps, const QuadCtx& ctx = {});
double left_fan_profile_deriv(double xi, ExponentS s, double eps);
// e^{xi/eps} * left_fan_profile, finite for every xi >= eps.
double left_fan_core(double xi, ExponentS s, double eps, const QuadCtx& ctx = {});

// Right profile on [0, inf); vanishes at 0.
double right_fan_profile(double xi, ExponentS s, double eps, const QuadCtx& ctx = {});
double right_fan_profile_deriv(double xi, ExponentS s, double eps);
// e^{-xi/eps} * right_fan_profile.
double right_fan_core(double xi, ExponentS s, double eps, const QuadCtx& ctx = {});

// Inverses on the monotone branches. s = 2 is excluded (profile is zero).
// left_fan_profile_inverse(0) returns kXiInfinity.
double left_fan_profile_inverse(double y, ExponentS s, double eps, const QuadCtx& ctx = {});
double right_fan_profile_inverse(double y, ExponentS s, double eps, const QuadCtx& ctx = {},
                                 double xi_max = kXiInfinity);

}  // namespace sharpbmo
