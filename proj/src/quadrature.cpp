#include "ucfem/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace ucfem {

namespace {

/// Gauss-Legendre nodes/weights on [-1,1] by Newton iteration on P_m.
void gauss_legendre(int m, std::vector<double>& x, std::vector<double>& w) {
  x.assign(static_cast<size_t>(m), 0.0);
  w.assign(static_cast<size_t>(m), 0.0);
  for (int i = 0; i < m; ++i) {
    double t = std::cos(M_PI * (i + 0.75) / (m + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      // Evaluate P_m(t) and P_m'(t) via the three-term recurrence.
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= m; ++k) {
        const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = m * (t * p1 - p0) / (t * t - 1.0);
      const double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    x[static_cast<size_t>(i)] = t;
    w[static_cast<size_t>(i)] = 2.0 / ((1.0 - t * t) * dp * dp);
  }
}

SegmentRule make_segment_rule(int order) {
  const int m = std::max(1, (order + 2) / 2);  // exact for degree 2m-1 >= order
  std::vector<double> x, w;
  gauss_legendre(m, x, w);
  SegmentRule rule;
  for (int i = 0; i < m; ++i) {
    rule.points.push_back(0.5 * (x[static_cast<size_t>(i)] + 1.0));
    rule.weights.push_back(0.5 * w[static_cast<size_t>(i)]);
  }
  return rule;
}

TriangleRule make_triangle_rule(int order) {
  // Collapsed map (u,v) -> (u, v(1-u)) with Jacobian (1-u): a degree-d
  // integrand becomes degree d+1 in u and degree d in v, so m points per
  // direction with 2m-1 >= order+1 are exact.
  const int m = std::max(1, (order + 3) / 2);
  std::vector<double> x, w;
  gauss_legendre(m, x, w);
  TriangleRule rule;
  for (int i = 0; i < m; ++i) {
    const double u = 0.5 * (x[static_cast<size_t>(i)] + 1.0);
    const double wu = 0.5 * w[static_cast<size_t>(i)];
    for (int j = 0; j < m; ++j) {
      const double v = 0.5 * (x[static_cast<size_t>(j)] + 1.0);
      const double wv = 0.5 * w[static_cast<size_t>(j)];
      rule.points.emplace_back(u, v * (1.0 - u));
      rule.weights.push_back(wu * wv * (1.0 - u));
    }
  }
  return rule;
}

}  // namespace

const SegmentRule& segment_rule(int order) {
  require(order >= 0, "segment_rule: order must be >= 0");
  static std::map<int, SegmentRule> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, make_segment_rule(order)).first;
  return it->second;
}

const TriangleRule& triangle_rule(int order) {
  require(order >= 0, "triangle_rule: order must be >= 0");
  static std::map<int, TriangleRule> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, make_triangle_rule(order)).first;
  return it->second;
}

}  // namespace ucfem
