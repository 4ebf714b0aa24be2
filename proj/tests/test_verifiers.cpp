#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "sigverify/error.hpp"
#include "sigverify/evaluation.hpp"
#include "sigverify/preprocess.hpp"
#include "sigverify/synth.hpp"
#include "sigverify/verifiers.hpp"

using namespace sigverify;
using doctest::Approx;

TEST_CASE("baseline dtw score") {
  std::mt19937_64 rng(1);
  const auto ref = normalize_mad(testutil::random_signature(rng, 40));
  CHECK(baseline_dtw_distance(ref, ref) == 0.0);
  CHECK(baseline_dtw_score(ref, ref) == 1.0);
  CHECK(std::exp(-std::log(2.0)) == Approx(0.5).epsilon(1e-15));

  const auto other = normalize_mad(testutil::random_signature(rng, 35));
  const double s = baseline_dtw_score(ref, other);
  CHECK(s > 0.0);
  CHECK(s < 1.0);
  CHECK(s == Approx(std::exp(-baseline_dtw_distance(ref, other))).epsilon(1e-15));
  CHECK(baseline_channels(ref).cols() == 6);
}

TEST_CASE("baseline dtw ranks a genuine pair above a skilled forgery pair") {
  const auto data = generate_synthetic_signatures(42, 4);
  int checked = 0;
  for (const auto& subj : data.subjects) {
    const auto ref = normalize_mad(subj.genuine[0]);
    const double genuine = baseline_dtw_score(ref, normalize_mad(subj.genuine[1]));
    const double skilled = baseline_dtw_score(ref, normalize_mad(subj.skilled[0]));
    CHECK(genuine > skilled);
    ++checked;
  }
  CHECK(checked == 4);
}

TEST_CASE("znormalize_pair uses pooled statistics") {
  Matrix a = Matrix::from_rows({{0, 5}, {2, 5}});
  Matrix b = Matrix::from_rows({{4, 5}, {6, 5}});
  znormalize_pair(a, b);
  // pooled column 0: mean 3, population std sqrt(5)
  CHECK(a(0, 0) == Approx(-3 / std::sqrt(5.0)));
  CHECK(b(1, 0) == Approx(3 / std::sqrt(5.0)));
  CHECK(a(0, 1) == 0.0);
  CHECK(b(1, 1) == 0.0);
}

TEST_CASE("local threshold score examples") {
  const LocalThresholdModel model{1.0, 2.0, 2.0};
  CHECK(std::abs(sigstat_local_score(1.0, model) - 1.0) <= 1e-12);
  CHECK(std::abs(sigstat_local_score(4.0, model) - 0.0) <= 1e-12);
  CHECK(std::abs(sigstat_local_score(2.5, model) - 0.5) <= 1e-12);
  CHECK(sigstat_local_score(0.0, model) > 1.0);
  CHECK(clamp_unit(sigstat_local_score(0.0, model)) == 1.0);
  CHECK(clamp_unit(sigstat_local_score(9.0, model)) == 0.0);

  double prev = sigstat_local_score(0.0, model);
  for (double d = 0.1; d < 6.0; d += 0.1) {
    const double cur = sigstat_local_score(d, model);
    CHECK(cur < prev);
    prev = cur;
  }

  CHECK_THROWS_AS((LocalThresholdModel{4.0, 1.0, 2.0}.validate()), InvalidArgument);
  CHECK_THROWS_AS((LocalThresholdModel{1.0, 2.0, 0.0}.validate()), InvalidArgument);
}

TEST_CASE("global threshold score examples") {
  GlobalThresholdModel model;
  model.groups[InputKind::Stylus] = {1.0, 3.0};
  CHECK(std::abs(sigstat_global_score(1.0, model, InputKind::Stylus) - 0.0) <= 1e-12);
  CHECK(std::abs(sigstat_global_score(3.0, model, InputKind::Stylus) - 1.0) <= 1e-12);
  CHECK(std::abs(sigstat_global_score(2.0, model, InputKind::Stylus) - 0.5) <= 1e-12);
  CHECK(sigstat_global_score(0.5, model, InputKind::Stylus) == 0.0);
  CHECK(sigstat_global_score(7.0, model, InputKind::Stylus) == 1.0);
  CHECK(sigstat_global_emit(1.0, model, InputKind::Stylus) == 1.0);
  CHECK(sigstat_global_emit(2.5, model, InputKind::Stylus) == Approx(0.25));
  CHECK_THROWS_AS(sigstat_global_score(1.0, model, InputKind::Finger), InvalidArgument);

  double prev = sigstat_global_score(1.0, model, InputKind::Stylus);
  for (double d = 1.05; d < 3.0; d += 0.05) {
    const double cur = sigstat_global_score(d, model, InputKind::Stylus);
    CHECK(cur > prev);
    prev = cur;
  }
}

TEST_CASE("genuine threshold from reference distances") {
  const std::vector<double> three{2, 4, 6};
  CHECK(genuine_threshold_from_distances(three) == 4.0);
  const std::vector<double> five{9, 1, 2, 3, 7};
  CHECK(genuine_threshold_from_distances(five) == 2.0);
  const std::vector<double> zeros{0, 0, 0};
  CHECK(genuine_threshold_from_distances(zeros) == kMinGenuineThreshold);
  CHECK_THROWS_AS(genuine_threshold_from_distances({}), InvalidArgument);
}

TEST_CASE("local threshold fitting") {
  const std::vector<double> refs{1, 1, 1};
  // Genuine distances at most 1.5, forgeries from 3 up.
  std::vector<LabeledDistance> dev;
  for (double d : {0.5, 1.0, 1.5}) dev.push_back({d, Truth::Genuine});
  for (double d : {3.0, 4.0, 5.0}) dev.push_back({d, Truth::Impostor});
  const auto fit = fit_local_thresholds_from_distances(refs, dev);
  CHECK(fit.dev_eer_percent == 0.0);
  CHECK(fit.model.genuine_threshold == 1.0);
  CHECK(fit.model.forgery_threshold == fit.alpha * 1.0);
  CHECK_NOTHROW(fit.model.validate());

  // When every grid point ties, the smallest alpha and the smallest valid s win.
  LocalThresholdGrid grid{{1.0, 2.0}, {0.5, 1.5, 2.0}};
  std::vector<LabeledDistance> flat{{1.0, Truth::Genuine}, {1.0, Truth::Impostor}};
  const auto tied = fit_local_thresholds_from_distances(refs, flat, grid);
  CHECK(tied.alpha == 1.0);
  CHECK(tied.model.scaling == 1.5);

  const auto gen = testutil::make_signature({0, 1, 2}, {0, 1, 0});
  const std::vector<Signature> one{gen};
  CHECK_THROWS_AS(fit_local_thresholds(one, dev), InvalidArgument);
  const std::vector<Signature> same{gen, gen, gen};
  CHECK(fit_local_thresholds(same, dev).model.genuine_threshold == kMinGenuineThreshold);
}

TEST_CASE("global threshold fitting") {
  std::vector<GroupedDistance> dev{
      {3, InputKind::Stylus, Truth::Genuine},  {5, InputKind::Stylus, Truth::Genuine},
      {2, InputKind::Stylus, Truth::Impostor}, {4, InputKind::Stylus, Truth::Impostor},
      {10, InputKind::Stylus, Truth::Impostor}, {1, InputKind::Finger, Truth::Genuine},
      {2, InputKind::Finger, Truth::Impostor}, {4, InputKind::Finger, Truth::Impostor},
  };
  const auto model = fit_global_thresholds(dev);
  CHECK(model.groups.at(InputKind::Stylus).genuine_min == 3.0);
  CHECK(model.groups.at(InputKind::Stylus).forgery_median == 4.0);
  CHECK(model.groups.at(InputKind::Finger).forgery_median == 3.0);

  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    auto shuffled = dev;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const auto again = fit_global_thresholds(shuffled);
    for (auto kind : {InputKind::Stylus, InputKind::Finger}) {
      CHECK(again.groups.at(kind).genuine_min == model.groups.at(kind).genuine_min);
      CHECK(again.groups.at(kind).forgery_median == model.groups.at(kind).forgery_median);
    }
  }

  std::vector<GroupedDistance> missing{{1, InputKind::Stylus, Truth::Genuine}};
  CHECK_THROWS_AS(fit_global_thresholds(missing), InvalidArgument);
}

TEST_CASE("tanh normalization") {
  CHECK(tanh_normalize(3.0, 3.0, 2.0) == 0.5);
  CHECK(tanh_normalize(1e300, 0.0, 1.0) == Approx(1.0));
  double prev = tanh_normalize(-50.0, 0.0, 1.0);
  for (double s = -49.0; s <= 50.0; s += 1.0) {
    const double cur = tanh_normalize(s, 0.0, 1.0);
    CHECK(cur > prev);
    CHECK(cur > 0.0);
    CHECK(cur < 1.0);
    prev = cur;
  }
  CHECK_THROWS_AS(tanh_normalize(0.0, 0.0, 0.0), InvalidArgument);
}

TEST_CASE("weighted fusion") {
  const std::vector<double> w10{1, 0}, half{0.5, 0.5};
  CHECK(weighted_fusion(std::vector<double>{0.3, 0.9}, w10) == 0.3);
  CHECK(weighted_fusion(std::vector<double>{0, 1}, half) == 0.5);
  const std::vector<double> w3{0.2, 0.3, 0.5};
  CHECK(weighted_fusion(std::vector<double>{0.7, 0.7, 0.7}, w3) == Approx(0.7).epsilon(1e-15));
  CHECK_THROWS_AS(weighted_fusion(std::vector<double>{0.1}, w3), InvalidArgument);

  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> s{u(rng), u(rng), u(rng)};
    const double base = weighted_fusion(s, w3);
    s[trial % 3] = std::min(1.0, s[trial % 3] + u(rng) * 0.5);
    CHECK(weighted_fusion(s, w3) >= base);
  }

  FusionModel bad{{{0, 1}, {0, 1}}, {0.6, 0.6}};
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  FusionModel zero_sigma{{{0, 0}}, {1.0}};
  CHECK_THROWS_AS(zero_sigma.validate(), InvalidArgument);
}

TEST_CASE("fusion weight fitting") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::size_t n = 200;
  Matrix streams(n, 2);
  std::vector<Truth> labels;
  for (std::size_t i = 0; i < n; ++i) {
    const bool genuine = i % 2 == 0;
    labels.push_back(genuine ? Truth::Genuine : Truth::Impostor);
    streams(i, 0) = u(rng);
    streams(i, 1) = genuine ? 10.0 + u(rng) : u(rng);
  }
  const auto fit = fit_fusion_weights(streams, labels);
  CHECK(fit.candidates_evaluated == 21);
  CHECK(fit.model.weights[1] >= 0.95);
  CHECK(fit.dev_eer_percent == 0.0);
  CHECK_NOTHROW(fit.model.validate());

  Matrix same(n, 2);
  for (std::size_t i = 0; i < n; ++i) same(i, 0) = same(i, 1) = streams(i, 0);
  const auto tied = fit_fusion_weights(same, labels);
  CHECK(tied.model.weights == std::vector<double>{0.0, 1.0});

  Matrix three(n, 3);
  for (std::size_t i = 0; i < n; ++i)
    for (int c = 0; c < 3; ++c) three(i, c) = u(rng);
  CHECK(fit_fusion_weights(three, labels).candidates_evaluated == 231);

  const std::vector<Truth> one_class(n, Truth::Genuine);
  CHECK_THROWS_AS(fit_fusion_weights(streams, one_class), InvalidArgument);
  CHECK_THROWS_AS(fit_fusion_weights(Matrix(n, 1), labels), InvalidArgument);
}

TEST_CASE("reference score aggregation") {
  const std::vector<double> two{0.2, 0.4}, one{0.7};
  CHECK(aggregate_reference_scores(two, Aggregation::Mean) == Approx(0.3).epsilon(1e-15));
  CHECK(aggregate_reference_scores(two, Aggregation::Max) == 0.4);
  CHECK(aggregate_reference_scores(two) == Approx(0.3).epsilon(1e-15));
  CHECK(aggregate_reference_scores(one, Aggregation::Mean) == 0.7);
  CHECK(aggregate_reference_scores(one, Aggregation::Max) == 0.7);
  CHECK_THROWS_AS(aggregate_reference_scores({}), InvalidArgument);
}

TEST_CASE("logistic distance scorer") {
  const LogisticDistanceScorer fixed({1.0, 2.0}, {1.0, 1.0}, 0.0);
  CHECK(fixed.score(std::vector<double>{0.0, 0.0}) == 0.5);
  CHECK(fixed.score(std::vector<double>{1.0, 0.0}) < 0.5);

  std::mt19937_64 rng(9);
  std::normal_distribution<double> noise(0.0, 0.2);
  const std::size_t n = 200;
  Matrix features(n, 2);
  std::vector<Truth> labels;
  for (std::size_t i = 0; i < n; ++i) {
    const bool genuine = i % 2 == 0;
    labels.push_back(genuine ? Truth::Genuine : Truth::Impostor);
    features(i, 0) = std::abs((genuine ? 0.2 : 1.5) + noise(rng));
    features(i, 1) = std::abs(noise(rng));
  }
  const auto fitted = LogisticDistanceScorer::fit(features, labels);
  std::vector<double> gen, imp;
  for (std::size_t i = 0; i < n; ++i) {
    const double s = fitted.score(features.row(i));
    CHECK(s >= 0.0);
    CHECK(s <= 1.0);
    (labels[i] == Truth::Genuine ? gen : imp).push_back(s);
  }
  CHECK(compute_eer(gen, imp).eer_percent < 5.0);
}
