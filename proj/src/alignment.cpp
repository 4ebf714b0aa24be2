#include "sigverify/alignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sigverify/error.hpp"

namespace sigverify {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_pair(const Matrix& a, const Matrix& b) {
  if (a.rows() == 0 || b.rows() == 0) throw InvalidArgument("alignment input is empty");
  if (a.cols() != b.cols()) {
    throw InvalidArgument("channel mismatch: " + std::to_string(a.cols()) + " vs " + std::to_string(b.cols()));
  }
  if (a.cols() == 0) throw InvalidArgument("alignment input has no channels");
}

double softmin3(double a, double b, double c, double gamma) {
  const double lo = std::min({a, b, c});
  if (lo == kInf) return kInf;
  const double sum = std::exp(-(a - lo) / gamma) + std::exp(-(b - lo) / gamma) + std::exp(-(c - lo) / gamma);
  return lo - gamma * std::log(sum);
}

// (n+2) x (m+2) table with the DP in rows/cols 1..n, 1..m.
struct SoftDtwTables {
  Matrix cost;  // squared distances, padded
  Matrix r;
};

SoftDtwTables soft_dtw_forward(const Matrix& a, const Matrix& b, double gamma) {
  check_pair(a, b);
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw InvalidArgument("gamma must be positive");
  const std::size_t n = a.rows(), m = b.rows();
  SoftDtwTables t{Matrix(n + 2, m + 2, 0.0), Matrix(n + 2, m + 2, kInf)};
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      t.cost(i, j) = local_distance(a.row(i - 1), b.row(j - 1), LocalDistance::SquaredEuclidean);
    }
  }
  t.r(0, 0) = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      t.r(i, j) = t.cost(i, j) + softmin3(t.r(i - 1, j - 1), t.r(i - 1, j), t.r(i, j - 1), gamma);
    }
  }
  return t;
}

}  // namespace

double local_distance(std::span<const double> a, std::span<const double> b, LocalDistance kind) {
  double acc = 0.0;
  switch (kind) {
    case LocalDistance::Cityblock:
      for (std::size_t k = 0; k < a.size(); ++k) acc += std::abs(a[k] - b[k]);
      return acc;
    case LocalDistance::Euclidean:
    case LocalDistance::SquaredEuclidean:
      for (std::size_t k = 0; k < a.size(); ++k) acc += (a[k] - b[k]) * (a[k] - b[k]);
      return kind == LocalDistance::Euclidean ? std::sqrt(acc) : acc;
  }
  return acc;
}

AlignmentResult dtw(const Matrix& a, const Matrix& b, LocalDistance local) {
  check_pair(a, b);
  const std::size_t n = a.rows(), m = b.rows();
  Matrix acc(n, m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double c = local_distance(a.row(i), b.row(j), local);
      double best;
      if (i == 0 && j == 0) {
        best = 0.0;
      } else if (i == 0) {
        best = acc(0, j - 1);
      } else if (j == 0) {
        best = acc(i - 1, 0);
      } else {
        best = std::min({acc(i - 1, j - 1), acc(i - 1, j), acc(i, j - 1)});
      }
      acc(i, j) = c + best;
    }
  }

  AlignmentResult result;
  result.accumulated_cost = acc(n - 1, m - 1);
  std::size_t i = n - 1, j = m - 1;
  result.path.emplace_back(i, j);
  while (i > 0 || j > 0) {
    if (i == 0) {
      --j;
    } else if (j == 0) {
      --i;
    } else {
      const double diag = acc(i - 1, j - 1), up = acc(i - 1, j), left = acc(i, j - 1);
      if (diag <= up && diag <= left) {
        --i;
        --j;
      } else if (up <= left) {
        --i;
      } else {
        --j;
      }
    }
    result.path.emplace_back(i, j);
  }
  std::reverse(result.path.begin(), result.path.end());
  result.normalized_score = result.accumulated_cost / static_cast<double>(result.path.size());
  return result;
}

double soft_dtw_value(const Matrix& a, const Matrix& b, double gamma) {
  const auto t = soft_dtw_forward(a, b, gamma);
  return t.r(a.rows(), b.rows());
}

SoftDtwResult soft_dtw(const Matrix& a, const Matrix& b, double gamma) {
  auto t = soft_dtw_forward(a, b, gamma);
  const std::size_t n = a.rows(), m = b.rows();

  SoftDtwResult result;
  result.gamma = gamma;
  result.value = t.r(n, m);

  // Backward recursion: e(i, j) = d value / d cost(i, j).
  Matrix& r = t.r;
  for (std::size_t i = 1; i <= n; ++i) r(i, m + 1) = -kInf;
  for (std::size_t j = 1; j <= m; ++j) r(n + 1, j) = -kInf;
  r(n + 1, m + 1) = r(n, m);
  Matrix e(n + 2, m + 2, 0.0);
  e(n + 1, m + 1) = 1.0;
  for (std::size_t j = m; j >= 1; --j) {
    for (std::size_t i = n; i >= 1; --i) {
      const double wa = std::exp((r(i + 1, j) - r(i, j) - t.cost(i + 1, j)) / gamma);
      const double wb = std::exp((r(i, j + 1) - r(i, j) - t.cost(i, j + 1)) / gamma);
      const double wc = std::exp((r(i + 1, j + 1) - r(i, j) - t.cost(i + 1, j + 1)) / gamma);
      e(i, j) = e(i + 1, j) * wa + e(i, j + 1) * wb + e(i + 1, j + 1) * wc;
    }
  }

  result.gradient_wrt_first = Matrix(n, a.cols(), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    auto g = result.gradient_wrt_first.row(i);
    for (std::size_t j = 0; j < m; ++j) {
      const double w = e(i + 1, j + 1);
      if (w == 0.0) continue;
      for (std::size_t k = 0; k < a.cols(); ++k) g[k] += 2.0 * w * (a(i, k) - b(j, k));
    }
  }
  return result;
}

double triplet_loss(const Matrix& anchor, const Matrix& positive, const Matrix& negative, double gamma,
                    double margin) {
  if (!(margin >= 0.0)) throw InvalidArgument("margin must be non-negative");
  const double dp = soft_dtw_value(anchor, positive, gamma);
  const double dn = soft_dtw_value(anchor, negative, gamma);
  return std::max(0.0, dp - dn + margin);
}

TripletLossResult triplet_loss_with_gradient(const Matrix& anchor, const Matrix& positive, const Matrix& negative,
                                             double gamma, double margin) {
  if (!(margin >= 0.0)) throw InvalidArgument("margin must be non-negative");
  const auto pos = soft_dtw(anchor, positive, gamma);
  const auto neg = soft_dtw(anchor, negative, gamma);
  TripletLossResult out;
  out.loss = std::max(0.0, pos.value - neg.value + margin);
  out.gradient_wrt_anchor = Matrix(anchor.rows(), anchor.cols(), 0.0);
  if (out.loss > 0.0) {
    auto g = out.gradient_wrt_anchor.data();
    const auto gp = pos.gradient_wrt_first.data();
    const auto gn = neg.gradient_wrt_first.data();
    for (std::size_t k = 0; k < g.size(); ++k) g[k] = gp[k] - gn[k];
  }
  return out;
}

}  // namespace sigverify
