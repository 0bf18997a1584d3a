#include "sharpbmo/optimizer.hpp"

#include <algorithm>
#include <cmath>

#include "sharpbmo/errors.hpp"
#include "sharpbmo/special_fn.hpp"

namespace sharpbmo {

namespace {

class Builder {
 public:
  void constant(double len, double c) {
    if (len > 0) push(len, ConstPiece{c});
  }
  void log(double len, int sign, double scale, double a0, double a1) {
    if (len > 0) push(len, LogPiece{sign, scale, a0, a1});
  }
  TestFunction finish() {
    if (fn_.segments.empty()) throw InternalError("empty test function");
    fn_.length = t_;
    fn_.segments.back().t_end = t_;
    return fn_;
  }

 private:
  void push(double len, std::variant<ConstPiece, LogPiece> kind) {
    fn_.segments.push_back({t_, t_ + len, kind});
    t_ += len;
  }
  TestFunction fn_;
  double t_ = 0;
};

TestFunction constant_function(double c) {
  Builder b;
  b.constant(1, c);
  return b.finish();
}

// Label of the reflected point x1 >= 0, plus the evaluation.
Evaluation reflected(const Point3& x, const Params& prm) {
  Evaluation e = evaluate_b2(x, prm);
  if (x.x1 < 0) e.label = mirror(e.label);
  return e;
}

void expect(const Evaluation& e, Subdomain want, const char* who) {
  if (e.label != want)
    throw DomainError(std::string(who) + ": point lies in " + to_string(e.label) + ", not " +
                      to_string(want));
}

TestFunction orient(TestFunction f, const Point3& x) { return x.x1 < 0 ? negated(f) : f; }

// Fan of tangents through v with parameter xi, left side.
TestFunction left_fan_function(double v, double xi, double dm, double eps) {
  const double t2 = std::isinf(xi) ? 0.0 : std::exp(-(xi - eps) / eps);
  const double t1 = 0.5 * t2;
  const double t3 = std::exp(-v / eps);
  const double l = eps / dm * t3;
  Builder b;
  if (!std::isinf(xi)) {
    b.constant(t1, xi + eps);
    b.constant(t2 - t1, xi - eps);
  }
  b.log(t3 - t2, -1, eps, t2, t3);
  b.constant(l - t3, v);
  return b.finish();
}

// Antiderivatives of ln and ln^2.
double int_log(double s) { return s > 0 ? s * std::log(s) - s : 0.0; }
double int_log2(double s) {
  if (s <= 0) return 0.0;
  const double L = std::log(s);
  return s * (L * L - 2 * L + 2);
}

// int_{lo}^{hi} |c ln s|^e ds with 0 <= lo <= hi on one side of 1.
double log_power_part(double e, double c, double lo, double hi, const QuadCtx& ctx) {
  if (hi <= lo) return 0.0;
  const double ce = std::pow(std::abs(c), e);
  if (hi <= 1) {
    if (lo <= 0) return ce * hi * scaled_upper_gamma(e + 1, -std::log(hi));
    auto f = [&](double y) { return std::pow(y, e) * std::exp(-y); };
    return ce * integrate(f, -std::log(hi), -std::log(lo), ctx).value;
  }
  auto f = [&](double y) { return std::pow(y, e) * std::exp(y); };
  return ce * integrate(f, std::log(lo), std::log(hi), ctx).value;
}

double log_power(double e, double c, double lo, double hi, const QuadCtx& ctx) {
  if (e == 1 || e == 2) {
    auto anti = [&](double s) { return e == 1 ? int_log(s) : int_log2(s); };
    // |ln| changes sign at 1 for e = 1
    const double ce = std::pow(std::abs(c), e);
    if (e == 2 || hi <= 1 || lo >= 1) {
      const double v = anti(hi) - anti(lo);
      return ce * (e == 1 && hi <= 1 ? -v : v);
    }
    return ce * (-(anti(1) - anti(lo)) + (anti(hi) - anti(1)));
  }
  if (lo < 1 && hi > 1) return log_power_part(e, c, lo, 1, ctx) + log_power_part(e, c, 1, hi, ctx);
  return log_power_part(e, c, lo, hi, ctx);
}

// int over [t_start, t] of phi (order 1, signed) or phi^2 (order 2).
double partial_integral(const Segment& seg, double t, int order) {
  const double len = t - seg.t_start;
  if (len <= 0) return 0.0;
  if (const auto* c = std::get_if<ConstPiece>(&seg.kind)) {
    return (order == 1 ? c->value : c->value * c->value) * len;
  }
  const auto& g = std::get<LogPiece>(seg.kind);
  const double slope = (g.arg_end - g.arg_start) / seg.length();
  const double a0 = g.arg_start;
  const double a1 = g.arg_start + slope * len;
  if (slope == 0) {
    const double val = g.sign * g.scale * std::log(a0);
    return (order == 1 ? val : val * val) * len;
  }
  if (order == 1) return g.sign * g.scale * (int_log(a1) - int_log(a0)) / slope;
  return g.scale * g.scale * (int_log2(a1) - int_log2(a0)) / slope;
}

}  // namespace

double Segment::operator()(double t) const {
  if (const auto* c = std::get_if<ConstPiece>(&kind)) return c->value;
  const auto& g = std::get<LogPiece>(kind);
  const double w = length() > 0 ? (t - t_start) / length() : 0.0;
  return g.sign * g.scale * std::log(g.arg_start + w * (g.arg_end - g.arg_start));
}

void TestFunction::validate() const {
  if (!(length > 0)) throw DomainError("test function length must be positive");
  if (segments.empty() || segments.front().t_start != 0)
    throw DomainError("segments must start at 0");
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const Segment& s = segments[i];
    if (!(s.t_end > s.t_start)) throw DomainError("segment with non-positive length");
    if (i > 0 && s.t_start != segments[i - 1].t_end) throw DomainError("segments are not contiguous");
    if (const auto* g = std::get_if<LogPiece>(&s.kind)) {
      if ((g->sign != 1 && g->sign != -1) || !(g->scale > 0) || g->arg_start < 0 || g->arg_end < 0)
        throw DomainError("malformed logarithmic segment");
    }
  }
  if (std::abs(segments.back().t_end - length) > 1e-12 * length)
    throw DomainError("segments do not cover [0, l]");
}

double TestFunction::operator()(double t) const {
  for (const auto& s : segments)
    if (t < s.t_end) return s(t);
  return segments.back()(segments.back().t_end);
}

TestFunction negated(const TestFunction& f) {
  TestFunction g = f;
  for (auto& s : g.segments) {
    if (auto* c = std::get_if<ConstPiece>(&s.kind))
      c->value = -c->value;
    else
      std::get<LogPiece>(s.kind).sign *= -1;
  }
  return g;
}

TestFunction optimizer_xi_l(const Point3& x, const Params& prm) {
  const Evaluation e = reflected(x, prm);
  expect(e, Subdomain::XiLPlus, "optimizer_xi_l");
  const auto& leaf = std::get<FanLeft>(e.leaf);
  const double dm = geometry(x.xy(), prm.eps).delta_minus;
  if (on_skeleton(x.xy())) return orient(constant_function(leaf.v), x);
  return orient(left_fan_function(leaf.v, leaf.xi, dm, prm.eps), x);
}

TestFunction optimizer_xi_r(const Point3& x, const Params& prm) {
  const Evaluation e = reflected(x, prm);
  expect(e, Subdomain::XiRPlus, "optimizer_xi_r");
  const auto& leaf = std::get<FanRight>(e.leaf);
  const double eps = prm.eps, xi = leaf.xi, v = leaf.v;
  const double dm = geometry(x.xy(), eps).delta_minus;
  if (on_skeleton(x.xy())) return orient(constant_function(v), x);
  const double big = std::exp((xi + eps) / eps);
  const double t3 = std::exp(v / eps);
  const double l = eps / dm * t3;
  Builder b;
  if (xi >= eps) {
    b.constant(0.5 * big, xi - eps);
    b.constant(0.5 * big, xi + eps);
  } else {
    const double q = (xi + eps) * (xi + eps);
    const double am = (eps * eps - eps * xi) / (2 * q);
    const double ap = (eps * eps + eps * xi + 2 * xi * xi) / (2 * q);
    b.constant(am * big, -(xi + eps));
    b.constant((1 - ap - am) * big, 0.0);
    b.constant(ap * big, xi + eps);
  }
  b.log(t3 - big, 1, eps, big, t3);
  b.constant(l - t3, v);
  return orient(b.finish(), x);
}

TestFunction optimizer_chord(const Point3& x, const Params& prm) {
  const Evaluation e = reflected(x, prm);
  expect(e, Subdomain::XiChPlus, "optimizer_chord");
  const auto& leaf = std::get<Chord>(e.leaf);
  const double x1 = std::abs(x.x1);
  if (leaf.b - leaf.a <= 1e-15 * (1 + leaf.b)) return orient(constant_function(x1), x);
  Builder b;
  b.constant(x1 - leaf.a, leaf.b);
  b.constant(leaf.b - x1, leaf.a);
  return orient(b.finish(), x);
}

TestFunction optimizer_r(const Point3& x, const Params& prm) {
  const Evaluation e = reflected(x, prm);
  expect(e, Subdomain::R, "optimizer_r");
  const double v = std::get<RLeaf>(e.leaf).v;
  if (v <= 0) return constant_function(0);
  const double v2 = v * v;
  const double am = std::max(0.0, (x.x2 - v * x.x1) / (2 * v2));
  const double ap = std::max(0.0, (x.x2 + v * x.x1) / (2 * v2));
  Builder b;
  b.constant(am, -v);
  b.constant(std::max(0.0, 1 - am - ap), 0.0);
  b.constant(ap, v);
  return b.finish();
}

TestFunction optimizer_f0(const Point3& x, const Params& prm) {
  const Evaluation e = evaluate_b2(x, prm);
  expect(e, Subdomain::F0, "optimizer_f0");
  const double xi = std::get<F0Leaf>(e.leaf).xi;
  const double eps = prm.eps;
  if (x.x2 <= 0) return constant_function(0);
  const double sum = x.x2 / (2 * eps * eps), diff = x.x1 / eps;
  const double ap = std::max(0.0, 0.5 * (sum + diff));
  const double am = std::max(0.0, 0.5 * (sum - diff));
  const double a0 = std::max(0.0, 1 - ap - am);
  // building block: the left-fan optimizer at (eps, 2 eps^2, .) on [0, 1],
  // non-increasing from xi + eps down to 0
  const double t2 = std::isinf(xi) ? 0.0 : std::exp(-(xi - eps) / eps);
  const double t1 = 0.5 * t2;
  Builder b;
  // negative block, non-decreasing: -block(t / am)
  b.constant(am * t1, -(xi + eps));
  b.constant(am * (t2 - t1), -(xi - eps));
  b.log(am * (1 - t2), 1, eps, t2, 1.0);
  b.constant(a0, 0.0);
  // positive block, non-decreasing: block(1 - t')
  b.log(ap * (1 - t2), -1, eps, 1.0, t2);
  b.constant(ap * (t2 - t1), xi - eps);
  b.constant(ap * t1, xi + eps);
  return b.finish();
}

TestFunction optimizer_for(const Point3& x, const Params& prm) {
  Subdomain label = classify_b2(x, prm);
  if (x.x1 < 0) label = mirror(label);
  switch (label) {
    case Subdomain::XiLPlus: return optimizer_xi_l(x, prm);
    case Subdomain::XiRPlus: return optimizer_xi_r(x, prm);
    case Subdomain::XiChPlus: return optimizer_chord(x, prm);
    case Subdomain::R: return optimizer_r(x, prm);
    case Subdomain::F0: return optimizer_f0(x, prm);
    default: throw InternalError("no optimizer for this subdomain");
  }
}

double moment(const TestFunction& f, double s, bool is_signed, const QuadCtx& ctx) {
  f.validate();
  if (is_signed && s != 1) throw DomainError("signed moments are defined for s = 1 only");
  if (!(s >= 1)) throw DomainError("moment order must be >= 1");
  double total = 0;
  for (const auto& seg : f.segments) {
    if (const auto* c = std::get_if<ConstPiece>(&seg.kind)) {
      total += (is_signed ? c->value : std::pow(std::abs(c->value), s)) * seg.length();
      continue;
    }
    if (is_signed) {
      total += partial_integral(seg, seg.t_end, 1);
      continue;
    }
    const auto& g = std::get<LogPiece>(seg.kind);
    const double lo = std::min(g.arg_start, g.arg_end), hi = std::max(g.arg_start, g.arg_end);
    if (hi - lo <= 0) {
      total += std::pow(std::abs(g.scale * std::log(lo)), s) * seg.length();
      continue;
    }
    total += seg.length() / (hi - lo) * log_power(s, g.scale, lo, hi, ctx);
  }
  return total / f.length;
}

namespace {

struct Prefix {
  std::vector<double> t, f1, f2;
};

Prefix prefix_sums(const TestFunction& f, std::vector<double> pts) {
  for (const auto& s : f.segments) {
    pts.push_back(s.t_start);
    pts.push_back(s.t_end);
  }
  std::sort(pts.begin(), pts.end());
  // near-coincident nodes make subintervals whose variance is pure rounding
  const double merge = 1e-12 * f.length;
  pts.erase(std::unique(pts.begin(), pts.end(), [&](double a, double b) { return b - a <= merge; }),
            pts.end());
  Prefix pre;
  pre.t = pts;
  pre.f1.resize(pts.size());
  pre.f2.resize(pts.size());
  std::size_t k = 0;
  double c1 = 0, c2 = 0;  // integrals up to the start of segment k
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double t = pts[i];
    while (k + 1 < f.segments.size() && t >= f.segments[k].t_end) {
      c1 += partial_integral(f.segments[k], f.segments[k].t_end, 1);
      c2 += partial_integral(f.segments[k], f.segments[k].t_end, 2);
      ++k;
    }
    const Segment& seg = f.segments[k];
    const double tt = std::min(t, seg.t_end);
    pre.f1[i] = c1 + partial_integral(seg, tt, 1);
    pre.f2[i] = c2 + partial_integral(seg, tt, 2);
  }
  return pre;
}

}  // namespace

double bmo_norm(const TestFunction& f, int n_grid) {
  f.validate();
  if (n_grid < 2) throw DomainError("n_grid must be at least 2");
  std::vector<double> pts;
  pts.reserve(n_grid + 1);
  for (int i = 0; i <= n_grid; ++i) pts.push_back(f.length * i / n_grid);
  const Prefix pre = prefix_sums(f, pts);
  const std::size_t n = pre.t.size();
  double best = 0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double ti = pre.t[i], a1 = pre.f1[i], a2 = pre.f2[i];
    for (std::size_t j = i + 1; j < n; ++j) {
      const double len = pre.t[j] - ti;
      const double m1 = (pre.f1[j] - a1) / len;
      const double m2 = (pre.f2[j] - a2) / len;
      best = std::max(best, m2 - m1 * m1);
    }
  }
  return std::sqrt(best);
}

std::vector<Point2> delivery_curve(const TestFunction& f, int n) {
  f.validate();
  if (n < 2) throw DomainError("delivery curve needs n >= 2");
  double first = f.length / n;
  for (const auto& s : f.segments)
    if (s.t_end > 0) first = std::min(first, s.t_end);
  std::vector<double> ts(n);
  const double ratio = std::log(f.length / first);
  for (int i = 0; i < n; ++i) ts[i] = first * std::exp(ratio * i / (n - 1));
  ts.back() = f.length;
  const Prefix pre = prefix_sums(f, ts);
  std::vector<Point2> out;
  out.reserve(n);
  for (double t : ts) {
    const auto it = std::lower_bound(pre.t.begin(), pre.t.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - pre.t.begin());
    out.push_back({pre.f1[i] / t, pre.f2[i] / t});
  }
  return out;
}

}  // namespace sharpbmo
