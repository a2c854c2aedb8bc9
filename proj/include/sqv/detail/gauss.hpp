#pragma once

#include <cmath>
#include <functional>
#include <vector>

namespace sqv::detail {

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1],
/// by Newton iteration on the Legendre recurrence.
inline void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.resize(n);
  weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = x;
    weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

inline const std::vector<double>& gl16_nodes() {
  static std::vector<double> nodes, weights;
  if (nodes.empty()) gauss_legendre(16, nodes, weights);
  return nodes;
}

inline const std::vector<double>& gl16_weights() {
  static std::vector<double> nodes, weights;
  if (weights.empty()) gauss_legendre(16, nodes, weights);
  return weights;
}

inline double gl16(const std::function<double(double)>& f, double a, double b) {
  const auto& xs = gl16_nodes();
  const auto& ws = gl16_weights();
  double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double acc = 0.0;
  for (int i = 0; i < 16; ++i) acc += ws[i] * f(mid + half * xs[i]);
  return half * acc;
}

/// Adaptive bisection with 16-point panels; integrands here are piecewise
/// analytic, so a panel either already agrees with its split to rounding
/// or halving converges very quickly.
inline double adaptive_gl(const std::function<double(double)>& f, double a, double b, double tol,
                          int depth = 12) {
  double whole = gl16(f, a, b);
  double mid = 0.5 * (a + b);
  double split = gl16(f, a, mid) + gl16(f, mid, b);
  if (depth <= 0 || std::abs(whole - split) <= tol) return split;
  return adaptive_gl(f, a, mid, 0.5 * tol, depth - 1) + adaptive_gl(f, mid, b, 0.5 * tol, depth - 1);
}

}  // namespace sqv::detail
