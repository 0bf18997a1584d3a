#include "sharpbmo/verify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <thread>

#include "sharpbmo/errors.hpp"
#include "sharpbmo/optimizer.hpp"
#include "sharpbmo/sharp_constant.hpp"
#include "sharpbmo/special_fn.hpp"

namespace sharpbmo {

namespace {

// Uniform on [0, 1) from the top 53 bits; std distributions are not
// reproducible across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  int integer(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(uniform() * (hi - lo + 1));
  }

 private:
  std::mt19937_64 gen_;
};

// Runs fn(i) for i in [0, n) on a fixed pool; results land by index so the
// caller can reduce in order.
template <class T, class F>
std::vector<T> parallel_map(std::size_t n, F fn) {
  std::vector<T> out(n);
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(std::thread::hardware_concurrency(), n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += workers) out[i] = fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

double sign_of(double v) { return v > 0 ? 1.0 : (v < 0 ? -1.0 : 0.0); }

Point3 lerp(const Point3& a, const Point3& b, double t) {
  return {a.x1 + t * (b.x1 - a.x1), a.x2 + t * (b.x2 - a.x2), a.x3 + t * (b.x3 - a.x3)};
}

Point3 random_interior_point(Rng& rng, const Params& prm, double x1_max, double inset) {
  const double eps = prm.eps;
  const double x1 = rng.uniform(-x1_max, x1_max);
  const double y = eps * eps * rng.uniform(inset, 1 - inset);
  const double x2 = x1 * x1 + y;
  const Interval b = x3_bounds({x1, x2}, prm);
  const double x3 = b.lo + (b.hi - b.lo) * rng.uniform(inset, 1 - inset);
  return {x1, x2, x3};
}

void finish(ProbeReport& rep) { rep.passed = rep.worst_violation < rep.threshold; }

}  // namespace

ProbeReport concavity_probe(const Params& prm, int n_segments, std::uint64_t seed,
                            double threshold) {
  prm.validate(true);
  if (n_segments < 0) throw DomainError("n_segments must be non-negative");
  const double sigma = sign_of((prm.r - 2) * (prm.r - prm.p));  // -1: concave
  Rng rng(seed);
  struct Seg {
    Point3 a, b;
  };
  std::vector<Seg> segs;
  segs.reserve(n_segments);
  constexpr int kChecks = 16;
  while (static_cast<int>(segs.size()) < n_segments) {
    const Point3 c = random_interior_point(rng, prm, 3 * prm.eps, 0.0);
    const double len = prm.eps * rng.uniform(1e-3, 0.1);
    const double d1 = rng.uniform(-1, 1), d2 = rng.uniform(-1, 1), d3 = rng.uniform(-1, 1);
    const double scale3 = std::max(1.0, std::abs(c.x3));
    const Point3 a{c.x1 - len * d1, c.x2 - len * d2, c.x3 - len * d3 * scale3};
    const Point3 b{c.x1 + len * d1, c.x2 + len * d2, c.x3 + len * d3 * scale3};
    bool inside = true;
    for (int k = 0; k <= kChecks && inside; ++k) inside = in_domain(lerp(a, b, double(k) / kChecks), prm);
    if (inside) segs.push_back({a, b});
  }
  const auto defects = parallel_map<double>(segs.size(), [&](std::size_t i) {
    const Point3 m = lerp(segs[i].a, segs[i].b, 0.5);
    return eval_b2(m, prm) - 0.5 * (eval_b2(segs[i].a, prm) + eval_b2(segs[i].b, prm));
  });
  ProbeReport rep;
  rep.name = "concavity";
  rep.n_samples = n_segments;
  rep.threshold = threshold;
  rep.statistic = sigma;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    // concave (sigma < 0) wants defect >= 0, convex wants defect <= 0
    const double v = sigma < 0 ? -defects[i] : defects[i];
    if (v > rep.worst_violation) {
      rep.worst_violation = v;
      rep.worst_point = segs[i].a;
      rep.worst_point_end = segs[i].b;
    }
  }
  finish(rep);
  return rep;
}

std::vector<ProbeReport> smoothness_probe(const Params& prm, int n_per_boundary, double step,
                                          double threshold, std::uint64_t seed) {
  prm.validate(true);
  if (n_per_boundary < 1) throw DomainError("n_per_boundary must be positive");
  if (!(step > 0)) throw DomainError("step must be positive");
  const double eps = prm.eps;
  struct Sample {
    std::string key;
    Point3 x;
    double toward_ak;  // direction in x3 pointing to the lower label
  };
  Rng rng(seed);
  std::map<std::string, int> counts;
  std::vector<Sample> samples;
  const int max_attempts = 20000 * n_per_boundary;
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    const double x1 = eps * rng.uniform(0.02, 3.0);
    const double y = eps * eps * rng.uniform(0.05, 0.95);
    const Point2 pt{x1, x1 * x1 + y};
    const Ladder l = b2_ladder(pt, prm);
    const std::size_t n = l.surfaces.size();
    if (n < 3) continue;
    const std::size_t i = 1 + static_cast<std::size_t>(rng.uniform() * (n - 2));
    const double s = l.surfaces[i];
    const double h = step;
    const double gap = std::min(std::abs(s - l.surfaces[i - 1]), std::abs(l.surfaces[i + 1] - s));
    if (!(gap > 5 * h)) continue;
    const std::string key = "omega" + std::to_string(l.omega) + ":" + to_string(l.labels[i - 1]) +
                            "|" + to_string(l.labels[i]);
    int& c = counts[key];
    if (c >= n_per_boundary) {
      bool all_full = true;
      for (const auto& kv : counts) all_full = all_full && kv.second >= n_per_boundary;
      if (all_full && attempt > 2000 * n_per_boundary) break;
      continue;
    }
    ++c;
    samples.push_back({key, {pt.x1, pt.x2, s}, sign_of(l.surfaces[0] - s)});
  }
  struct Jump {
    double rel;
  };
  const auto jumps = parallel_map<Jump>(samples.size(), [&](std::size_t k) {
    const Sample& sm = samples[k];
    const double h = step;
    auto b = [&](double dx3) { return eval_b2({sm.x.x1, sm.x.x2, sm.x.x3 + dx3}, prm); };
    const double b0 = b(0);
    const double dir = sm.toward_ak;
    // second-order one-sided slopes along +dir on either side
    const double g_lo = (-3 * b0 + 4 * b(dir * h) - b(2 * dir * h)) / (2 * h);
    const double g_hi = (3 * b0 - 4 * b(-dir * h) + b(-2 * dir * h)) / (2 * h);
    return Jump{std::abs(g_lo - g_hi) / std::max(1.0, std::max(std::abs(g_lo), std::abs(g_hi)))};
  });
  std::map<std::string, ProbeReport> by_key;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    ProbeReport& rep = by_key[samples[k].key];
    rep.name = "smooth:" + samples[k].key;
    rep.threshold = threshold;
    ++rep.n_samples;
    if (jumps[k].rel >= rep.worst_violation) {
      rep.worst_violation = jumps[k].rel;
      rep.worst_point = samples[k].x;
    }
  }
  std::vector<ProbeReport> out;
  for (auto& kv : by_key) {
    finish(kv.second);
    out.push_back(kv.second);
  }
  return out;
}

Grid2 make_envelope_grid(double lo, double hi, int n, double eps, int halo_cells) {
  if (!(hi > lo) || n < 3 || !(eps > 0) || halo_cells < 0)
    throw DomainError("invalid envelope grid");
  const double h = (hi - lo) / (n - 1);
  Grid2 g;
  g.nx1 = n + 2 * halo_cells;
  g.ny = n;
  g.x1_lo = lo - halo_cells * h;
  g.x1_hi = hi + halo_cells * h;
  g.eps = eps;
  g.values.assign(static_cast<std::size_t>(g.nx1) * g.ny, 0.0);
  return g;
}

double envelope_exact(Point2 pt, double p, double eps, Extremum which) {
  if (p == 2) return pt.x2;
  const bool use_k = (which == Extremum::Max) == (p < 2);
  return use_k ? envelope_k(pt, p, eps) : envelope_m(pt, p, eps);
}

EnvelopeResult envelope_oracle_2d(double p, const Grid2& grid, Extremum which, int n_iter,
                                  double tol, const EnvelopeOptions& opt) {
  if (!(p >= 1)) throw ParameterError("p must be >= 1");
  if (grid.nx1 < 3 || grid.ny < 3) throw DomainError("grid too small");
  if (n_iter < 1) throw DomainError("n_iter must be positive");
  EnvelopeResult res;
  res.grid = grid;
  Grid2& g = res.grid;
  g.values.assign(static_cast<std::size_t>(g.nx1) * g.ny, 0.0);
  const int nx = g.nx1, ny = g.ny;
  const double h = (g.x1_hi - g.x1_lo) / (nx - 1);
  const double hy = g.eps * g.eps / (ny - 1);
  const double top = g.eps * g.eps;
  // Symmetric two-point function: admissible, so it bounds both envelopes
  // from the correct side, and exact on y = 0.
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) {
      const double x1 = g.x1_at(i), s = std::sqrt(g.y_at(j));
      g.at(i, j) = 0.5 * (std::pow(std::abs(x1 - s), p) + std::pow(std::abs(x1 + s), p));
    }
  const double sg = which == Extremum::Max ? 1.0 : -1.0;
  auto interp = [&](int i, double y) {
    double s = y / hy;
    int j = static_cast<int>(std::floor(s));
    j = std::clamp(j, 0, ny - 2);
    const double w = s - j;
    return (1 - w) * g.at(i, j) + w * g.at(i, j + 1);
  };
  const int ns = opt.n_slopes;
  for (int it = 0; it < n_iter; ++it) {
    double change = 0;
    for (int ii = 0; ii < nx; ++ii) {
      const int i = (it % 2) ? nx - 1 - ii : ii;
      for (int j = 1; j < ny; ++j) {
        const double y0 = g.y_at(j);
        double best = sg * g.at(i, j);
        for (int k = 1; j - k >= 0 && j + k < ny; ++k)
          best = std::max(best, sg * 0.5 * (g.at(i, j - k) + g.at(i, j + k)));
        for (int k = 1; k <= opt.max_step_cells && i - k >= 0 && i + k < nx; ++k) {
          const double t = k * h;
          for (int q = -ns; q <= ns; ++q) {
            // slope relative to the parabola tangent at x1
            const double sig = ns == 0 ? 0.0 : q * (2 * g.eps / ns);
            const double yp = y0 + sig * t - t * t, ym = y0 - sig * t - t * t;
            if (yp < 0 || ym < 0 || yp > top || ym > top) continue;
            if (std::abs(sig) < 2 * t && y0 + sig * sig / 4 > top) continue;
            best = std::max(best, sg * 0.5 * (interp(i + k, yp) + interp(i - k, ym)));
          }
        }
        change = std::max(change, std::abs(sg * best - g.at(i, j)));
        g.at(i, j) = sg * best;
      }
    }
    res.iterations = it + 1;
    res.final_change = change;
    if (change < tol) {
      res.converged = true;
      break;
    }
  }
  return res;
}

ProbeReport envelope_compare(const EnvelopeResult& env, double p, Extremum which, double lo,
                             double hi, int margin_cells, double threshold) {
  const Grid2& g = env.grid;
  const double h = (g.x1_hi - g.x1_lo) / (g.nx1 - 1);
  const double a = lo + margin_cells * h - 1e-9 * h, b = hi - margin_cells * h + 1e-9 * h;
  ProbeReport rep;
  rep.name = std::string("envelope:") + (which == Extremum::Max ? "max" : "min");
  rep.threshold = threshold;
  double sup_exact = 0, sup_err = 0;
  for (int i = 0; i < g.nx1; ++i) {
    const double x1 = g.x1_at(i);
    if (x1 < a || x1 > b) continue;
    for (int j = 0; j < g.ny; ++j) {
      const Point2 pt{x1, g.x2_at(i, j)};
      const double ex = envelope_exact(pt, p, g.eps, which);
      sup_exact = std::max(sup_exact, std::abs(ex));
      const double err = std::abs(g.at(i, j) - ex);
      if (err >= sup_err) {
        sup_err = err;
        rep.worst_point = {pt.x1, pt.x2, g.at(i, j)};
      }
      ++rep.n_samples;
    }
  }
  rep.worst_violation = sup_exact > 0 ? sup_err / sup_exact : sup_err;
  rep.statistic = env.final_change;
  finish(rep);
  return rep;
}

namespace {

struct Norms {
  double lp, lr, bmo;
};

Norms step_norms(const TestFunction& f, double p, double r, int n_grid) {
  double sp = 0, sr = 0;
  for (const auto& s : f.segments) {
    const double v = std::abs(std::get<ConstPiece>(s.kind).value);
    sp += std::pow(v, p) * s.length();
    sr += std::pow(v, r) * s.length();
  }
  return {std::pow(sp / f.length, 1 / p), std::pow(sr / f.length, 1 / r), bmo_norm(f, n_grid)};
}

double normalized_ratio(const Norms& n, double p, double r, double c) {
  return n.lr / (c * std::pow(n.lp, p / r) * std::pow(n.bmo, 1 - p / r));
}

}  // namespace

ProbeReport inequality_monte_carlo(double p, double r, int n_funcs, std::uint64_t seed,
                                   const QuadCtx& ctx, int n_grid, double threshold) {
  const double c = constant(p, r, ctx).c;
  if (n_funcs < 0) throw DomainError("n_funcs must be non-negative");
  Rng rng(seed);
  std::vector<TestFunction> funcs;
  funcs.reserve(n_funcs);
  for (int k = 0; k < n_funcs; ++k) {
    const int pieces = rng.integer(3, 12);
    std::vector<double> w(pieces), v(pieces);
    double wsum = 0;
    for (auto& x : w) wsum += (x = 0.05 + rng.uniform());
    double mean = 0;
    for (int i = 0; i < pieces; ++i) {
      // clipped Cauchy
      const double cauchy = std::tan(M_PI * (rng.uniform() - 0.5));
      v[i] = std::clamp(cauchy, -50.0, 50.0);
      mean += v[i] * w[i] / wsum;
    }
    TestFunction f;
    f.length = 1;
    double t = 0;
    for (int i = 0; i < pieces; ++i) {
      const double t_end = i + 1 == pieces ? 1.0 : t + w[i] / wsum;
      f.segments.push_back({t, t_end, ConstPiece{v[i] - mean}});
      t = t_end;
    }
    funcs.push_back(std::move(f));
  }
  const auto norms = parallel_map<Norms>(funcs.size(), [&](std::size_t i) {
    return step_norms(funcs[i], p, r, n_grid);
  });
  ProbeReport rep;
  rep.name = "monte_carlo";
  rep.threshold = threshold;
  double worst = 0;
  for (std::size_t i = 0; i < funcs.size(); ++i) {
    const Norms& n = norms[i];
    if (n.lp == 0 || n.bmo == 0) continue;
    ++rep.n_samples;
    const double ratio = normalized_ratio(n, p, r, c);
    if (ratio > worst) {
      worst = ratio;
      rep.worst_point = {0.0, n.bmo, n.lp};
    }
  }
  rep.statistic = worst;
  rep.worst_violation = std::max(0.0, worst - 1);
  finish(rep);
  return rep;
}

double near_extremal_ratio(double p, double r, const QuadCtx& ctx, int n_grid) {
  const ConstantResult cr = constant(p, r, ctx);
  if (!cr.x3_star) throw DomainError("near_extremal_ratio needs the xi-equation branch");
  const Params prm{p, r, 1.0, ctx};
  const TestFunction f = optimizer_for({0.0, 1.0, *cr.x3_star}, prm);
  const double lp = std::pow(moment(f, p, false, ctx), 1 / p);
  const double lr = std::pow(moment(f, r, false, ctx), 1 / r);
  return normalized_ratio({lp, lr, bmo_norm(f, n_grid)}, p, r, cr.c);
}

ProbeReport b1_b2_cross_check(const Params& prm, int n, std::uint64_t seed, double threshold) {
  prm.validate(true);
  const bool b2_is_max = (prm.r - 2) * (prm.r - prm.p) < 0;
  Rng rng(seed);
  std::vector<Point3> pts;
  pts.reserve(n);
  for (int k = 0; k < n; ++k) pts.push_back(random_interior_point(rng, prm, 3 * prm.eps, 0.0));
  const auto diffs = parallel_map<double>(pts.size(), [&](std::size_t i) {
    return eval_b2(pts[i], prm) - eval_b1(pts[i], prm);
  });
  ProbeReport rep;
  rep.name = "b1_b2_order";
  rep.n_samples = n;
  rep.threshold = threshold;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double v = b2_is_max ? -diffs[i] : diffs[i];
    if (v > rep.worst_violation) {
      rep.worst_violation = v;
      rep.worst_point = pts[i];
    }
  }
  finish(rep);
  return rep;
}

ProbeReport fan_sign_check(int n, double eps) {
  if (n < 2) throw DomainError("n must be >= 2");
  ProbeReport rep;
  rep.name = "fan_sign";
  rep.threshold = 0.5;  // any mismatch fails
  for (int i = 0; i < n; ++i) {
    // s in [1.05, 4] with the node nearest 2 nudged off it
    double s = 1.05 + 2.95 * i / (n - 1);
    if (std::abs(s - 2) < 1e-3) s = 2 + 1e-3;
    const double want = sign_of(s - 2);
    for (int j = 0; j < n; ++j) {
      const double frac = double(j) / (n - 1);
      const double xi_left = eps * (1 + 1e-3 + 19 * frac);
      const double xi_right = eps * (1e-3 + 20 * frac);
      const double dl = left_fan_profile_deriv(xi_left, ExponentS(s), eps);
      const double dr = right_fan_profile_deriv(xi_right, ExponentS(s), eps);
      rep.n_samples += 2;
      if (sign_of(dl) != want) {
        rep.worst_violation = 1;
        rep.worst_point = {xi_left, s, dl};
      }
      if (sign_of(dr) != want) {
        rep.worst_violation = 1;
        rep.worst_point = {xi_right, s, dr};
      }
    }
  }
  finish(rep);
  return rep;
}

ProbeReport x3_curvature_sign_check(const Params& prm, int n, std::uint64_t seed) {
  prm.validate(true);
  const double want = sign_of((prm.r - 2) * (prm.r - prm.p));
  Rng rng(seed);
  std::vector<Point3> pts;
  pts.reserve(n);
  for (int k = 0; k < n; ++k) pts.push_back(random_interior_point(rng, prm, 3 * prm.eps, 0.05));
  const auto d2 = parallel_map<double>(pts.size(), [&](std::size_t i) {
    const Interval b = x3_bounds(pts[i].xy(), prm);
    const double h = 0.02 * (b.hi - b.lo);
    Point3 lo = pts[i], hi = pts[i];
    lo.x3 -= h;
    hi.x3 += h;
    return eval_b2(lo, prm) - 2 * eval_b2(pts[i], prm) + eval_b2(hi, prm);
  });
  ProbeReport rep;
  rep.name = "x3_curvature_sign";
  rep.n_samples = n;
  rep.threshold = 0.5;
  double mismatches = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (sign_of(d2[i]) != want) {
      mismatches += 1;
      rep.worst_violation = 1;
      rep.worst_point = pts[i];
    }
  }
  rep.statistic = mismatches;
  finish(rep);
  return rep;
}

}  // namespace sharpbmo
