#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "sigverify/matrix.hpp"

namespace sigverify {

enum class LocalDistance { Euclidean, Cityblock, SquaredEuclidean };

double local_distance(std::span<const double> a, std::span<const double> b, LocalDistance kind);

/// Optimal DTW alignment. Indices in `path` are 0-based; the path runs from
/// (0, 0) to (n-1, m-1) with steps (1,0), (0,1) or (1,1).
struct AlignmentResult {
  double accumulated_cost = 0.0;
  std::vector<std::pair<std::size_t, std::size_t>> path;
  double normalized_score = 0.0;  // accumulated_cost / path_length()

  std::size_t path_length() const noexcept { return path.size(); }
};

/// Unconstrained DTW with the symmetric step set. Backtracking prefers the
/// diagonal step, then the vertical one (i-1, j), then the horizontal one.
AlignmentResult dtw(const Matrix& a, const Matrix& b, LocalDistance local = LocalDistance::Euclidean);

struct SoftDtwResult {
  double gamma = 1.0;
  double value = 0.0;
  Matrix gradient_wrt_first;  // d value / d a, same shape as a
};

/// soft-DTW with squared Euclidean local cost and the soft minimum
/// -gamma * log(sum exp(-r / gamma)); the gradient comes from the backward
/// recursion over the alignment-expectation matrix.
SoftDtwResult soft_dtw(const Matrix& a, const Matrix& b, double gamma);

/// Forward pass only.
double soft_dtw_value(const Matrix& a, const Matrix& b, double gamma);

/// max(0, sdtw(anchor, positive) - sdtw(anchor, negative) + margin)
double triplet_loss(const Matrix& anchor, const Matrix& positive, const Matrix& negative, double gamma,
                    double margin);

struct TripletLossResult {
  double loss = 0.0;
  Matrix gradient_wrt_anchor;
};

TripletLossResult triplet_loss_with_gradient(const Matrix& anchor, const Matrix& positive, const Matrix& negative,
                                             double gamma, double margin);

}  // namespace sigverify
