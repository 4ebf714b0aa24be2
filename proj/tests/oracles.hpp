#pragma once

// Test-only reference computations. None of these call into the code paths they
// are used to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <utility>
#include <vector>

#include "sigverify/matrix.hpp"

namespace oracle {

/// All monotone alignment paths from (0,0) to (n-1,m-1) with steps (1,0),(0,1),(1,1).
inline std::vector<std::vector<std::pair<int, int>>> enumerate_paths(int n, int m) {
  std::vector<std::vector<std::pair<int, int>>> out;
  std::vector<std::pair<int, int>> cur{{0, 0}};
  std::function<void(int, int)> walk = [&](int i, int j) {
    if (i == n - 1 && j == m - 1) {
      out.push_back(cur);
      return;
    }
    const int steps[3][2] = {{1, 0}, {0, 1}, {1, 1}};
    for (const auto& s : steps) {
      const int ni = i + s[0], nj = j + s[1];
      if (ni >= n || nj >= m) continue;
      cur.emplace_back(ni, nj);
      walk(ni, nj);
      cur.pop_back();
    }
  };
  walk(0, 0);
  return out;
}

/// Minimum over all monotone paths of the summed |a_i - b_j| (1-D sequences).
inline double brute_force_dtw(const std::vector<double>& a, const std::vector<double>& b,
                              const std::vector<std::vector<std::pair<int, int>>>& paths) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : paths) {
    double cost = 0.0;
    for (auto [i, j] : p) cost += std::abs(a[i] - b[j]);
    best = std::min(best, cost);
  }
  return best;
}

/// EER by counting at every candidate threshold (all scores, no dedup) plus the
/// reject-all point, then intersecting each consecutive ROC segment with the
/// FAR = FRR line. O(N^2), no sorting tricks.
inline double brute_force_eer_percent(const std::vector<double>& genuine, const std::vector<double>& impostor) {
  std::vector<double> thresholds = genuine;
  thresholds.insert(thresholds.end(), impostor.begin(), impostor.end());
  std::sort(thresholds.begin(), thresholds.end());
  struct Pt {
    double far, frr;
  };
  std::vector<Pt> pts;
  for (double th : thresholds) {
    int acc = 0, rej = 0;
    for (double s : impostor) acc += s >= th;
    for (double s : genuine) rej += s < th;
    pts.push_back({double(acc) / impostor.size(), double(rej) / genuine.size()});
  }
  pts.push_back({0.0, 1.0});
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const double d = pts[k].frr - pts[k].far;
    if (d < 0) continue;
    if (d == 0 || k == 0) return 100.0 * pts[k].far;
    const double d0 = pts[k - 1].frr - pts[k - 1].far;
    const double t = d0 / (d0 - d);
    return 100.0 * (pts[k - 1].far + t * (pts[k].far - pts[k - 1].far));
  }
  return 100.0 * pts.back().far;
}

/// Central finite differences of f with respect to every entry of x.
inline sigverify::Matrix finite_difference_gradient(const std::function<double(const sigverify::Matrix&)>& f,
                                                    sigverify::Matrix x, double eps) {
  sigverify::Matrix g(x.rows(), x.cols());
  for (std::size_t r = 0; r < x.rows(); ++r) {
    for (std::size_t c = 0; c < x.cols(); ++c) {
      const double orig = x(r, c);
      x(r, c) = orig + eps;
      const double fp = f(x);
      x(r, c) = orig - eps;
      const double fm = f(x);
      x(r, c) = orig;
      g(r, c) = (fp - fm) / (2.0 * eps);
    }
  }
  return g;
}

/// Level-2 iterated integrals S^{ij} = int int dX^i dX^j of a polyline, by
/// midpoint-rule quadrature with `steps` sub-steps per segment.
inline std::vector<double> numeric_level2(const std::vector<double>& x, const std::vector<double>& y, int steps) {
  double s[2][2] = {{0, 0}, {0, 0}};
  const double x0 = x[0], y0 = y[0];
  for (std::size_t k = 1; k < x.size(); ++k) {
    const double dx = (x[k] - x[k - 1]) / steps, dy = (y[k] - y[k - 1]) / steps;
    for (int q = 0; q < steps; ++q) {
      const double xm = x[k - 1] + (q + 0.5) * dx - x0;
      const double ym = y[k - 1] + (q + 0.5) * dy - y0;
      const double inc[2] = {dx, dy};
      const double pos[2] = {xm, ym};
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) s[i][j] += pos[i] * inc[j];
    }
  }
  return {s[0][0], s[0][1], s[1][0], s[1][1]};
}

/// Signed polygon area (counter-clockwise positive) of a closed polyline.
inline double shoelace_area(const std::vector<double>& x, const std::vector<double>& y) {
  double a = 0.0;
  for (std::size_t k = 0; k + 1 < x.size(); ++k) a += x[k] * y[k + 1] - x[k + 1] * y[k];
  return 0.5 * a;
}

inline sigverify::Matrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
  std::normal_distribution<double> n(0.0, 1.0);
  sigverify::Matrix m(rows, cols);
  for (auto& v : m.data()) v = n(rng);
  return m;
}

}  // namespace oracle
