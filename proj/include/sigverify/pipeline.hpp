#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sigverify/features.hpp"
#include "sigverify/sigdata.hpp"
#include "sigverify/verifiers.hpp"

namespace sigverify {

enum class VerifierKind {
  BaselineDtw,        // exp(-DTW) over x, y and their derivatives
  SigOnline,          // DTW over the 12 time functions, tanh-normalized
  SigstatLocal,       // local thresholds
  SigstatGlobal,      // global thresholds per input kind
  FeatureDifference,  // |F_enrolled - F_test| into a binary scorer
  Fusion,             // weighted sum of tanh-normalized streams
};

enum class Preprocessing { None, Mad, Sigstat };

std::string_view to_string(VerifierKind v);
std::string_view to_string(Preprocessing p);
std::optional<VerifierKind> verifier_kind_from_string(std::string_view s);

/// Verifier pipeline settings, read from a `key = value` text file. See the
/// README for the full key list.
struct PipelineConfig {
  VerifierKind verifier = VerifierKind::BaselineDtw;
  std::optional<Preprocessing> preprocess;  // unset: the verifier's default
  Aggregation aggregation = Aggregation::Mean;

  // sig_online
  LocalDistance online_distance = LocalDistance::Euclidean;
  TanhParams online_tanh;

  LocalThresholdModel local;
  GlobalThresholdModel global;

  // feature_difference
  GlobalFeatureSet feature_set = GlobalFeatureSet::Extended;
  std::vector<double> logistic_weights;
  std::vector<double> logistic_scales;
  double logistic_bias = 0.0;

  // fusion
  std::vector<VerifierKind> fusion_streams;
  FusionModel fusion;

  unsigned threads = 0;  // 0: hardware concurrency

  static PipelineConfig parse(std::string_view content, const std::string& source = "<memory>");
  static PipelineConfig load(const std::filesystem::path& path);
  /// Serializes back to the key = value format accepted by parse().
  std::string format() const;

  Preprocessing effective_preprocessing(VerifierKind kind) const;
  /// Throws InvalidArgument when the settings cannot drive the chosen verifier.
  void validate() const;
};

/// Applies a preprocessing convention. Sigstat removes zero-pressure samples
/// from stylus signatures and then applies normalize_sigstat.
Signature apply_preprocessing(const Signature& sig, Preprocessing p);

/// Path-normalized DTW distance over the 12 time functions (pressure-derived
/// channels dropped when either signature comes from finger input), with the
/// channels z-normalized over the pair.
double time_function_dtw_distance(const Signature& reference, const Signature& questioned,
                                  LocalDistance local = LocalDistance::Euclidean);

/// A configured verifier. Immutable and safe to share between threads.
class Pipeline {
 public:
  explicit Pipeline(PipelineConfig config);

  const PipelineConfig& config() const noexcept { return config_; }

  /// Emitted score in [0, 1], higher = more likely genuine. Inputs are raw
  /// signatures; preprocessing happens here.
  double score(const Signature& reference, const Signature& questioned) const;

  /// Scores against every reference and aggregates per config().aggregation.
  double score(std::span<const Signature> references, const Signature& questioned) const;

  /// Un-normalized, higher-is-genuine stream value used as fusion input.
  double raw_score(VerifierKind kind, const Signature& reference, const Signature& questioned) const;

 private:
  double emit(VerifierKind kind, const Signature& reference, const Signature& questioned) const;

  PipelineConfig config_;
  std::optional<LogisticDistanceScorer> logistic_;
};

}  // namespace sigverify
