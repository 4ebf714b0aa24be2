#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "sigverify/matrix.hpp"
#include "sigverify/sigdata.hpp"

namespace sigverify {

/// First-order derivative of `series` with respect to `timestamps`: central
/// differences inside, one-sided differences at both ends. Timestamps must be
/// strictly increasing.
std::vector<double> derivative(std::span<const double> series, std::span<const double> timestamps);

enum class TimeFunction : std::size_t { X, Y, Dx, Dy, Ddx, Ddy, V, Dv, A, Theta, P, Dp };

inline constexpr std::size_t kTimeFunctionCount = 12;
inline constexpr std::array<std::string_view, kTimeFunctionCount> kTimeFunctionNames = {
    "x", "y", "dx", "dy", "ddx", "ddy", "v", "dv", "a", "theta", "p", "dp"};

struct TimeFunctionSet {
  std::array<std::vector<double>, kTimeFunctionCount> channels;

  std::size_t length() const noexcept { return channels[0].size(); }
  const std::vector<double>& operator[](TimeFunction f) const { return channels[static_cast<std::size_t>(f)]; }

  /// Selected channels stacked as matrix columns, in the given order.
  Matrix to_matrix(std::span<const TimeFunction> selection) const;
};

/// The 12 time functions of a (preprocessed) signature.
///
/// Consecutive samples sharing a timestamp are collapsed (first one kept) for
/// differentiation, and the derivative of the kept sample is repeated for the
/// collapsed ones so every channel keeps the source sample count. Path angle is
/// defined as 0 where the velocity vector vanishes.
TimeFunctionSet time_functions(const Signature& sig);

enum class GlobalFeatureSet { Minimum, Extended };

inline constexpr std::array<std::string_view, 3> kMinimumGlobalFeatureNames = {"std_x", "std_y", "duration_ms"};
inline constexpr std::array<std::string_view, 12> kExtendedGlobalFeatureNames = {
    "std_x",  "std_y",        "duration_ms", "mean_v", "max_v", "mean_p",
    "std_p",  "sample_count", "path_length", "width",  "height", "aspect_ratio"};

struct GlobalFeatureVector {
  GlobalFeatureSet set = GlobalFeatureSet::Minimum;
  std::vector<double> values;

  std::span<const std::string_view> names() const;
  /// Throws InvalidArgument for a name outside the set.
  double get(std::string_view name) const;

  bool operator==(const GlobalFeatureVector&) const = default;
};

/// Population statistics over the whole signature. aspect_ratio is width/height
/// (0 when height is 0).
GlobalFeatureVector global_features(const Signature& sig, GlobalFeatureSet set);

/// Elementwise |enrolled - test|.
GlobalFeatureVector feature_difference(const GlobalFeatureVector& enrolled, const GlobalFeatureVector& test);

inline constexpr int kMaxPathSignatureDepth = 4;

/// Truncated signature of a 2-D path. Terms are stored level by level; inside a
/// level, words over {x, y} are in lexicographic order with x < y, so level 2
/// is (xx, xy, yx, yy).
struct PathSignatureVector {
  int depth = 0;
  std::vector<double> terms;

  static std::size_t term_count(int depth);
  /// Terms of level k (1 <= k <= depth).
  std::span<const double> level(int k) const;
};

/// Iterated integrals of the piecewise-linear path through (x, y) up to `depth`
/// (1..4), assembled segment by segment with Chen's identity.
PathSignatureVector path_signature(std::span<const double> x, std::span<const double> y, int depth);
PathSignatureVector path_signature(const Signature& sig, int depth);

/// Signature of a path obtained by traversing the path of `first` and then the
/// path of `second` (tensor product truncated at the common depth).
PathSignatureVector chen_combine(const PathSignatureVector& first, const PathSignatureVector& second);

}  // namespace sigverify
