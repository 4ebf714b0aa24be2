#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <span>
#include <vector>

#include "sigverify/alignment.hpp"
#include "sigverify/features.hpp"
#include "sigverify/sigdata.hpp"

namespace sigverify {

double clamp_unit(double score);

// ---------------------------------------------------------------------------
// Baseline DTW

/// x, y and their first and second time derivatives as a 6-column matrix.
Matrix baseline_channels(const Signature& sig);

/// Pools the rows of both matrices and z-normalizes every column with the pooled
/// mean and population standard deviation (constant columns become zeros).
void znormalize_pair(Matrix& a, Matrix& b);

/// Path-normalized DTW distance between the baseline channel sets.
double baseline_dtw_distance(const Signature& reference, const Signature& questioned);

/// exp(-distance): 1 for identical inputs, decreasing with distance.
double baseline_dtw_score(const Signature& reference, const Signature& questioned);

// ---------------------------------------------------------------------------
// Local-threshold classifier

struct LocalThresholdModel {
  double genuine_threshold = 1.0;  // G_th
  double forgery_threshold = 2.0;  // F_th
  double scaling = 1.0;            // s

  /// Throws InvalidArgument unless scaling > 0 and scaling * F_th > G_th.
  void validate() const;
};

/// (s*F_th - d) / (s*F_th - G_th), unclamped.
double sigstat_local_score(double distance, const LocalThresholdModel& model);

/// Mean of the k = min(3, count) smallest distances, floored at kMinGenuineThreshold.
double genuine_threshold_from_distances(std::span<const double> reference_distances);

inline constexpr double kMinGenuineThreshold = 1e-9;

/// A scored development comparison: a distance and whether it was genuine.
struct LabeledDistance {
  double distance = 0.0;
  Truth truth = Truth::Genuine;
};

struct LocalThresholdGrid {
  std::vector<double> alphas;    // F_th = alpha * G_th
  std::vector<double> scalings;  // s

  /// alpha in {1.0, 1.25, ..., 4.0}, s in {0.5, 0.75, ..., 3.0}
  static LocalThresholdGrid standard();
};

struct LocalThresholdFit {
  LocalThresholdModel model;
  double alpha = 0.0;
  double dev_eer_percent = 0.0;
};

/// G_th from pairwise reference distances, then (alpha, s) by exhaustive grid
/// search minimizing the EER of clamped scores on `dev`. Grid points that
/// violate the model invariant are skipped; ties go to the smallest alpha, then
/// the smallest s.
LocalThresholdFit fit_local_thresholds_from_distances(std::span<const double> reference_distances,
                                                      std::span<const LabeledDistance> dev,
                                                      const LocalThresholdGrid& grid = LocalThresholdGrid::standard());

/// Distance used by the threshold classifiers: path-normalized Euclidean DTW over
/// (x, y, pressure) of signatures already preprocessed by the caller.
double sigstat_distance(const Signature& a, const Signature& b);

/// Computes all pairwise reference distances with sigstat_distance and delegates
/// to fit_local_thresholds_from_distances. Needs at least two references.
LocalThresholdFit fit_local_thresholds(std::span<const Signature> references, std::span<const LabeledDistance> dev,
                                       const LocalThresholdGrid& grid = LocalThresholdGrid::standard());

// ---------------------------------------------------------------------------
// Global-threshold classifier

struct GroupThresholds {
  double genuine_min = 0.0;    // d_g_min
  double forgery_median = 1.0;  // d_f_med
};

struct GlobalThresholdModel {
  std::map<InputKind, GroupThresholds> groups;
};

/// 1 - (d_f_med - d) / (d_f_med - d_g_min), pinned to 0 below d_g_min and to 1
/// above d_f_med. Higher means more forgery-like. Throws for a missing group.
double sigstat_global_score(double distance, const GlobalThresholdModel& model, InputKind group);

/// Score with the artifact-wide polarity (higher = more genuine): 1 - sigstat_global_score.
double sigstat_global_emit(double distance, const GlobalThresholdModel& model, InputKind group);

struct GroupedDistance {
  double distance = 0.0;
  InputKind input = InputKind::Stylus;
  Truth truth = Truth::Genuine;
};

/// Per input kind: minimum genuine distance and median forgery distance (even
/// counts average the middle two). Every input kind present needs both classes.
GlobalThresholdModel fit_global_thresholds(std::span<const GroupedDistance> dev);

// ---------------------------------------------------------------------------
// Score normalization and fusion

inline constexpr double kTanhEstimatorScale = 0.01;

/// 0.5 * (tanh(0.01 * (score - mu) / sigma) + 1)
double tanh_normalize(double score, double mu, double sigma);

struct TanhParams {
  double mu = 0.0;
  double sigma = 1.0;
};

struct FusionModel {
  std::vector<TanhParams> normalization;
  std::vector<double> weights;

  /// Throws unless sizes agree, sigma > 0, weights >= 0 and sum to 1 within 1e-12.
  void validate() const;
};

/// Convex combination of already-normalized scores.
double weighted_fusion(std::span<const double> scores, std::span<const double> weights);
double weighted_fusion(std::span<const double> scores, const FusionModel& model);

/// tanh-normalizes every raw stream value and fuses them.
double fuse_raw(std::span<const double> raw_scores, const FusionModel& model);

struct FusionFit {
  FusionModel model;
  double dev_eer_percent = 0.0;
  std::size_t candidates_evaluated = 0;
};

inline constexpr int kFusionGridDivisions = 20;  // weight step 0.05

/// `streams` holds one row per development comparison and one column per raw
/// score stream. mu/sigma come from each stream's genuine scores (sigma falls
/// back to 1 when they are constant). Weights are searched over the simplex
/// grid with step 1/kFusionGridDivisions in lexicographic order; the first
/// candidate reaching the minimum EER wins.
FusionFit fit_fusion_weights(const Matrix& streams, std::span<const Truth> labels);

// ---------------------------------------------------------------------------
// Multi-reference enrollment

enum class Aggregation { Mean, Max };

double aggregate_reference_scores(std::span<const double> per_reference, Aggregation mode = Aggregation::Mean);

// ---------------------------------------------------------------------------
// Feature-difference classifier shell

/// Binary scorer over a feature-difference vector; returns a value in [0, 1],
/// higher meaning more likely genuine.
class BinaryScorer {
 public:
  virtual ~BinaryScorer() = default;
  virtual double score(std::span<const double> features) const = 0;
};

/// sigmoid(bias - sum_i weight_i * feature_i / scale_i)
class LogisticDistanceScorer final : public BinaryScorer {
 public:
  LogisticDistanceScorer(std::vector<double> weights, std::vector<double> scales, double bias);

  double score(std::span<const double> features) const override;

  const std::vector<double>& weights() const noexcept { return weights_; }
  const std::vector<double>& scales() const noexcept { return scales_; }
  double bias() const noexcept { return bias_; }

  /// Logistic regression by batch gradient descent on scaled features.
  /// Scales are the per-feature standard deviations (1 when zero).
  static LogisticDistanceScorer fit(const Matrix& features, std::span<const Truth> labels, int iterations = 2000,
                                    double learning_rate = 0.5);

 private:
  std::vector<double> weights_;
  std::vector<double> scales_;
  double bias_;
};

}  // namespace sigverify
