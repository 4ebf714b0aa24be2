#include "sigverify/verifiers.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <optional>

#include "sigverify/error.hpp"
#include "sigverify/evaluation.hpp"
#include "sigverify/text.hpp"

namespace sigverify {

namespace {

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

void split_by_truth(std::span<const double> scores, std::span<const Truth> labels, std::vector<double>& genuine,
                    std::vector<double>& impostor) {
  genuine.clear();
  impostor.clear();
  for (std::size_t i = 0; i < scores.size(); ++i) {
    (labels[i] == Truth::Genuine ? genuine : impostor).push_back(scores[i]);
  }
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

}  // namespace

double clamp_unit(double score) { return std::clamp(score, 0.0, 1.0); }

// ---------------------------------------------------------------------------

Matrix baseline_channels(const Signature& sig) {
  static constexpr std::array<TimeFunction, 6> kChannels = {TimeFunction::X,  TimeFunction::Y,   TimeFunction::Dx,
                                                            TimeFunction::Dy, TimeFunction::Ddx, TimeFunction::Ddy};
  return time_functions(sig).to_matrix(kChannels);
}

void znormalize_pair(Matrix& a, Matrix& b) {
  if (a.cols() != b.cols()) throw InvalidArgument("channel mismatch in z-normalization");
  const double count = static_cast<double>(a.rows() + b.rows());
  for (std::size_t c = 0; c < a.cols(); ++c) {
    double sum = 0.0;
    for (std::size_t r = 0; r < a.rows(); ++r) sum += a(r, c);
    for (std::size_t r = 0; r < b.rows(); ++r) sum += b(r, c);
    const double mean = sum / count;
    double var = 0.0;
    for (std::size_t r = 0; r < a.rows(); ++r) var += (a(r, c) - mean) * (a(r, c) - mean);
    for (std::size_t r = 0; r < b.rows(); ++r) var += (b(r, c) - mean) * (b(r, c) - mean);
    const double sd = std::sqrt(var / count);
    const double inv = sd > 0.0 ? 1.0 / sd : 0.0;
    for (std::size_t r = 0; r < a.rows(); ++r) a(r, c) = (a(r, c) - mean) * inv;
    for (std::size_t r = 0; r < b.rows(); ++r) b(r, c) = (b(r, c) - mean) * inv;
  }
}

double baseline_dtw_distance(const Signature& reference, const Signature& questioned) {
  auto a = baseline_channels(reference);
  auto b = baseline_channels(questioned);
  znormalize_pair(a, b);
  return dtw(a, b, LocalDistance::Euclidean).normalized_score;
}

double baseline_dtw_score(const Signature& reference, const Signature& questioned) {
  return std::exp(-baseline_dtw_distance(reference, questioned));
}

// ---------------------------------------------------------------------------

void LocalThresholdModel::validate() const {
  if (!(scaling > 0.0)) throw InvalidArgument("scaling parameter must be positive");
  if (!(scaling * forgery_threshold > genuine_threshold)) {
    throw InvalidArgument("local threshold model needs s * F_th > G_th");
  }
}

double sigstat_local_score(double distance, const LocalThresholdModel& model) {
  model.validate();
  const double upper = model.scaling * model.forgery_threshold;
  return (upper - distance) / (upper - model.genuine_threshold);
}

double genuine_threshold_from_distances(std::span<const double> reference_distances) {
  if (reference_distances.empty()) throw InvalidArgument("need at least one reference-to-reference distance");
  std::vector<double> d(reference_distances.begin(), reference_distances.end());
  std::sort(d.begin(), d.end());
  const std::size_t k = std::min<std::size_t>(3, d.size());
  const double mean = std::accumulate(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(k), 0.0) / static_cast<double>(k);
  return std::max(mean, kMinGenuineThreshold);
}

LocalThresholdGrid LocalThresholdGrid::standard() {
  LocalThresholdGrid g;
  for (int i = 0; i <= 12; ++i) g.alphas.push_back(1.0 + 0.25 * i);
  for (int i = 0; i <= 10; ++i) g.scalings.push_back(0.5 + 0.25 * i);
  return g;
}

LocalThresholdFit fit_local_thresholds_from_distances(std::span<const double> reference_distances,
                                                      std::span<const LabeledDistance> dev,
                                                      const LocalThresholdGrid& grid) {
  const double g_th = genuine_threshold_from_distances(reference_distances);
  auto alphas = grid.alphas;
  auto scalings = grid.scalings;
  std::sort(alphas.begin(), alphas.end());
  std::sort(scalings.begin(), scalings.end());

  std::vector<double> genuine, impostor;
  std::optional<LocalThresholdFit> best;
  for (double alpha : alphas) {
    for (double s : scalings) {
      LocalThresholdModel model{g_th, alpha * g_th, s};
      if (!(s > 0.0) || !(s * model.forgery_threshold > model.genuine_threshold)) continue;
      genuine.clear();
      impostor.clear();
      for (const auto& item : dev) {
        const double score = clamp_unit(sigstat_local_score(item.distance, model));
        (item.truth == Truth::Genuine ? genuine : impostor).push_back(score);
      }
      const double eer = compute_eer(genuine, impostor).eer_percent;
      if (!best || eer < best->dev_eer_percent) best = LocalThresholdFit{model, alpha, eer};
    }
  }
  if (!best) throw InvalidArgument("no feasible (alpha, s) grid point");
  return *best;
}

double sigstat_distance(const Signature& a, const Signature& b) {
  const auto ma = Matrix::from_columns({a.xs(), a.ys(), a.pressures()});
  const auto mb = Matrix::from_columns({b.xs(), b.ys(), b.pressures()});
  return dtw(ma, mb, LocalDistance::Euclidean).normalized_score;
}

LocalThresholdFit fit_local_thresholds(std::span<const Signature> references, std::span<const LabeledDistance> dev,
                                       const LocalThresholdGrid& grid) {
  if (references.size() < 2) throw InvalidArgument("need at least 2 reference signatures");
  std::vector<double> distances;
  for (std::size_t i = 0; i < references.size(); ++i) {
    for (std::size_t j = i + 1; j < references.size(); ++j) {
      distances.push_back(sigstat_distance(references[i], references[j]));
    }
  }
  return fit_local_thresholds_from_distances(distances, dev, grid);
}

// ---------------------------------------------------------------------------

double sigstat_global_score(double distance, const GlobalThresholdModel& model, InputKind group) {
  const auto it = model.groups.find(group);
  if (it == model.groups.end()) {
    throw InvalidArgument("no global thresholds for input '" + std::string(to_string(group)) + "'");
  }
  const auto& g = it->second;
  if (!(g.forgery_median > g.genuine_min)) throw InvalidArgument("global thresholds need d_f_med > d_g_min");
  if (distance < g.genuine_min) return 0.0;
  if (distance > g.forgery_median) return 1.0;
  return 1.0 - (g.forgery_median - distance) / (g.forgery_median - g.genuine_min);
}

double sigstat_global_emit(double distance, const GlobalThresholdModel& model, InputKind group) {
  return 1.0 - sigstat_global_score(distance, model, group);
}

GlobalThresholdModel fit_global_thresholds(std::span<const GroupedDistance> dev) {
  std::map<InputKind, std::pair<std::vector<double>, std::vector<double>>> grouped;
  for (const auto& item : dev) {
    auto& [genuine, forgery] = grouped[item.input];
    (item.truth == Truth::Genuine ? genuine : forgery).push_back(item.distance);
  }
  if (grouped.empty()) throw InvalidArgument("no development comparisons");

  GlobalThresholdModel model;
  for (const auto& [input, lists] : grouped) {
    const auto& [genuine, forgery] = lists;
    const std::string name(to_string(input));
    if (genuine.empty()) throw InvalidArgument("group 'genuine " + name + "' is empty");
    if (forgery.empty()) throw InvalidArgument("group 'forgery " + name + "' is empty");
    GroupThresholds g{*std::min_element(genuine.begin(), genuine.end()), median_of(forgery)};
    if (!(g.forgery_median > g.genuine_min)) {
      throw InvalidArgument("input '" + name + "': median forgery distance " + text::format_double(g.forgery_median) +
                            " does not exceed minimum genuine distance " + text::format_double(g.genuine_min));
    }
    model.groups[input] = g;
  }
  return model;
}

// ---------------------------------------------------------------------------

double tanh_normalize(double score, double mu, double sigma) {
  if (!(sigma > 0.0)) throw InvalidArgument("tanh normalization needs sigma > 0");
  return 0.5 * (std::tanh(kTanhEstimatorScale * (score - mu) / sigma) + 1.0);
}

void FusionModel::validate() const {
  if (weights.size() != normalization.size()) throw InvalidArgument("fusion weights and normalizers differ in count");
  if (weights.empty()) throw InvalidArgument("fusion model has no streams");
  double sum = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!(weights[i] >= 0.0)) throw InvalidArgument("fusion weights must be non-negative");
    if (!(normalization[i].sigma > 0.0)) throw InvalidArgument("fusion sigma must be positive");
    sum += weights[i];
  }
  if (std::abs(sum - 1.0) > 1e-12) throw InvalidArgument("fusion weights must sum to 1");
}

double weighted_fusion(std::span<const double> scores, std::span<const double> weights) {
  if (scores.size() != weights.size()) {
    throw InvalidArgument("fusion expects " + std::to_string(weights.size()) + " scores, got " +
                          std::to_string(scores.size()));
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) acc += weights[i] * scores[i];
  return clamp_unit(acc);
}

double weighted_fusion(std::span<const double> scores, const FusionModel& model) {
  model.validate();
  return weighted_fusion(scores, std::span<const double>(model.weights));
}

double fuse_raw(std::span<const double> raw_scores, const FusionModel& model) {
  model.validate();
  if (raw_scores.size() != model.weights.size()) throw InvalidArgument("fusion stream count mismatch");
  std::vector<double> normalized(raw_scores.size());
  for (std::size_t i = 0; i < raw_scores.size(); ++i) {
    normalized[i] = tanh_normalize(raw_scores[i], model.normalization[i].mu, model.normalization[i].sigma);
  }
  return weighted_fusion(normalized, std::span<const double>(model.weights));
}

namespace {

// Calls visit(units) for every vector of `parts` non-negative integers summing to
// `total`, in lexicographic order.
template <typename Visit>
void for_each_composition(int total, std::size_t parts, std::vector<int>& units, Visit&& visit) {
  if (units.size() + 1 == parts) {
    units.push_back(total);
    visit(units);
    units.pop_back();
    return;
  }
  for (int u = 0; u <= total; ++u) {
    units.push_back(u);
    for_each_composition(total - u, parts, units, visit);
    units.pop_back();
  }
}

}  // namespace

FusionFit fit_fusion_weights(const Matrix& streams, std::span<const Truth> labels) {
  const std::size_t n = streams.rows(), k = streams.cols();
  if (k < 2) throw InvalidArgument("fusion needs at least 2 score streams");
  if (labels.size() != n) throw InvalidArgument("one label per development comparison required");
  const auto genuine_count = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), Truth::Genuine));
  if (genuine_count == 0 || genuine_count == n) throw InvalidArgument("fusion fitting needs both classes");

  FusionFit fit;
  fit.model.normalization.resize(k);
  Matrix normalized(n, k);
  for (std::size_t c = 0; c < k; ++c) {
    double sum = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      if (labels[r] == Truth::Genuine) sum += streams(r, c);
    }
    const double mu = sum / static_cast<double>(genuine_count);
    double var = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      if (labels[r] == Truth::Genuine) var += (streams(r, c) - mu) * (streams(r, c) - mu);
    }
    double sigma = std::sqrt(var / static_cast<double>(genuine_count));
    if (!(sigma > 0.0)) sigma = 1.0;
    fit.model.normalization[c] = {mu, sigma};
    for (std::size_t r = 0; r < n; ++r) normalized(r, c) = tanh_normalize(streams(r, c), mu, sigma);
  }

  std::vector<double> fused(n), genuine, impostor;
  std::vector<int> units;
  bool have_best = false;
  for_each_composition(kFusionGridDivisions, k, units, [&](const std::vector<int>& u) {
    ++fit.candidates_evaluated;
    std::vector<double> w(k);
    for (std::size_t c = 0; c < k; ++c) w[c] = static_cast<double>(u[c]) / kFusionGridDivisions;
    for (std::size_t r = 0; r < n; ++r) fused[r] = weighted_fusion(normalized.row(r), w);
    split_by_truth(fused, labels, genuine, impostor);
    const double eer = compute_eer(genuine, impostor).eer_percent;
    if (!have_best || eer < fit.dev_eer_percent) {
      have_best = true;
      fit.dev_eer_percent = eer;
      fit.model.weights = std::move(w);
    }
  });
  return fit;
}

// ---------------------------------------------------------------------------

double aggregate_reference_scores(std::span<const double> per_reference, Aggregation mode) {
  if (per_reference.empty()) throw InvalidArgument("no reference scores to aggregate");
  if (mode == Aggregation::Max) return *std::max_element(per_reference.begin(), per_reference.end());
  return std::accumulate(per_reference.begin(), per_reference.end(), 0.0) / static_cast<double>(per_reference.size());
}

// ---------------------------------------------------------------------------

LogisticDistanceScorer::LogisticDistanceScorer(std::vector<double> weights, std::vector<double> scales, double bias)
    : weights_(std::move(weights)), scales_(std::move(scales)), bias_(bias) {
  if (weights_.size() != scales_.size()) throw InvalidArgument("logistic weights and scales differ in length");
  for (double s : scales_) {
    if (!(s > 0.0)) throw InvalidArgument("logistic feature scales must be positive");
  }
}

double LogisticDistanceScorer::score(std::span<const double> features) const {
  if (features.size() != weights_.size()) {
    throw InvalidArgument("logistic scorer expects " + std::to_string(weights_.size()) + " features, got " +
                          std::to_string(features.size()));
  }
  double z = bias_;
  for (std::size_t i = 0; i < features.size(); ++i) z -= weights_[i] * features[i] / scales_[i];
  return sigmoid(z);
}

LogisticDistanceScorer LogisticDistanceScorer::fit(const Matrix& features, std::span<const Truth> labels,
                                                   int iterations, double learning_rate) {
  const std::size_t n = features.rows(), d = features.cols();
  if (n == 0 || labels.size() != n) throw InvalidArgument("one label per feature row required");

  std::vector<double> scales(d, 1.0);
  for (std::size_t c = 0; c < d; ++c) {
    double mean = 0.0;
    for (std::size_t r = 0; r < n; ++r) mean += features(r, c);
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t r = 0; r < n; ++r) var += (features(r, c) - mean) * (features(r, c) - mean);
    const double sd = std::sqrt(var / static_cast<double>(n));
    if (sd > 0.0) scales[c] = sd;
  }

  std::vector<double> w(d, 0.0), grad_w(d);
  double bias = 0.0;
  for (int it = 0; it < iterations; ++it) {
    std::fill(grad_w.begin(), grad_w.end(), 0.0);
    double grad_b = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      double z = bias;
      for (std::size_t c = 0; c < d; ++c) z -= w[c] * features(r, c) / scales[c];
      const double residual = sigmoid(z) - (labels[r] == Truth::Genuine ? 1.0 : 0.0);
      grad_b += residual;
      for (std::size_t c = 0; c < d; ++c) grad_w[c] -= residual * features(r, c) / scales[c];
    }
    bias -= learning_rate * grad_b / static_cast<double>(n);
    for (std::size_t c = 0; c < d; ++c) w[c] -= learning_rate * grad_w[c] / static_cast<double>(n);
  }
  return LogisticDistanceScorer(std::move(w), std::move(scales), bias);
}

}  // namespace sigverify
