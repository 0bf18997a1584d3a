#pragma once
// Random interior points of a prescribed subdomain of the second candidate.

#include <functional>
#include <random>

#include "sharpbmo/bellman.hpp"

namespace sharpbmo::testing {

inline std::vector<Point3> sample_label(const Params& prm, Subdomain label, int n, std::uint64_t seed,
                                        const std::function<bool(const Evaluation&)>& accept = {}) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0, 1);
  const double e = prm.eps;
  std::vector<Point3> out;
  for (long tries = 0; static_cast<int>(out.size()) < n && tries < 200L * n + 10000; ++tries) {
    const double x1 = 4 * e * U(rng);
    const double x2 = x1 * x1 + e * e * (0.02 + 0.96 * U(rng));
    const Ladder l = b2_ladder({x1, x2}, prm);
    for (std::size_t k = 0; k < l.labels.size(); ++k) {
      if (l.labels[k] != label) continue;
      const double lo = l.surfaces[k], hi = l.surfaces[k + 1];
      if (std::abs(hi - lo) < 1e-6) break;
      const Point3 x{x1, x2, lo + (hi - lo) * (0.05 + 0.9 * U(rng))};
      if (accept && !accept(evaluate_b2(x, prm))) break;
      out.push_back(x);
      break;
    }
  }
  return out;
}

}  // namespace sharpbmo::testing
