#include "sigverify/features.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sigverify/error.hpp"

namespace sigverify {

namespace {

double mean_of(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double population_std(std::span<const double> v) {
  const double m = mean_of(v);
  double acc = 0.0;
  for (double x : v) acc += (x - m) * (x - m);
  return std::sqrt(acc / static_cast<double>(v.size()));
}

std::vector<double> expand(const std::vector<double>& collapsed, const std::vector<std::size_t>& group_of) {
  std::vector<double> out(group_of.size());
  for (std::size_t i = 0; i < group_of.size(); ++i) out[i] = collapsed[group_of[i]];
  return out;
}

}  // namespace

std::vector<double> derivative(std::span<const double> series, std::span<const double> timestamps) {
  const std::size_t n = series.size();
  if (n < 2) throw InvalidArgument("derivative needs at least 2 samples");
  if (timestamps.size() != n) throw InvalidArgument("series and timestamps differ in length");
  for (std::size_t i = 1; i < n; ++i) {
    if (!(timestamps[i] > timestamps[i - 1])) throw InvalidArgument("timestamps must be strictly increasing");
  }
  std::vector<double> out(n);
  out[0] = (series[1] - series[0]) / (timestamps[1] - timestamps[0]);
  out[n - 1] = (series[n - 1] - series[n - 2]) / (timestamps[n - 1] - timestamps[n - 2]);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    out[i] = (series[i + 1] - series[i - 1]) / (timestamps[i + 1] - timestamps[i - 1]);
  }
  return out;
}

Matrix TimeFunctionSet::to_matrix(std::span<const TimeFunction> selection) const {
  Matrix m(length(), selection.size());
  for (std::size_t c = 0; c < selection.size(); ++c) {
    const auto& ch = (*this)[selection[c]];
    for (std::size_t r = 0; r < ch.size(); ++r) m(r, c) = ch[r];
  }
  return m;
}

TimeFunctionSet time_functions(const Signature& sig) {
  const auto& samples = sig.samples();
  std::vector<std::size_t> group_of(samples.size());
  std::vector<double> t, x, y, p;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (i == 0 || samples[i].t != samples[i - 1].t) {
      t.push_back(static_cast<double>(samples[i].t));
      x.push_back(samples[i].x);
      y.push_back(samples[i].y);
      p.push_back(samples[i].pressure);
    }
    group_of[i] = t.size() - 1;
  }

  const auto dx = derivative(x, t);
  const auto dy = derivative(y, t);
  const auto ddx = derivative(dx, t);
  const auto ddy = derivative(dy, t);
  std::vector<double> v(t.size()), a(t.size()), theta(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    v[i] = std::hypot(dx[i], dy[i]);
    a[i] = std::hypot(ddx[i], ddy[i]);
    theta[i] = (dx[i] == 0.0 && dy[i] == 0.0) ? 0.0 : std::atan2(dy[i], dx[i]);
  }
  const auto dv = derivative(v, t);
  const auto dp = derivative(p, t);

  TimeFunctionSet set;
  auto ch = [&set](TimeFunction f) -> std::vector<double>& { return set.channels[static_cast<std::size_t>(f)]; };
  ch(TimeFunction::X) = sig.xs();
  ch(TimeFunction::Y) = sig.ys();
  ch(TimeFunction::Dx) = expand(dx, group_of);
  ch(TimeFunction::Dy) = expand(dy, group_of);
  ch(TimeFunction::Ddx) = expand(ddx, group_of);
  ch(TimeFunction::Ddy) = expand(ddy, group_of);
  ch(TimeFunction::V) = expand(v, group_of);
  ch(TimeFunction::Dv) = expand(dv, group_of);
  ch(TimeFunction::A) = expand(a, group_of);
  ch(TimeFunction::Theta) = expand(theta, group_of);
  ch(TimeFunction::P) = sig.pressures();
  ch(TimeFunction::Dp) = expand(dp, group_of);
  return set;
}

// ---------------------------------------------------------------------------
// Global features

std::span<const std::string_view> GlobalFeatureVector::names() const {
  if (set == GlobalFeatureSet::Minimum) return kMinimumGlobalFeatureNames;
  return kExtendedGlobalFeatureNames;
}

double GlobalFeatureVector::get(std::string_view name) const {
  const auto n = names();
  const auto it = std::find(n.begin(), n.end(), name);
  if (it == n.end() || static_cast<std::size_t>(it - n.begin()) >= values.size()) {
    throw InvalidArgument("unknown global feature '" + std::string(name) + "'");
  }
  return values[static_cast<std::size_t>(it - n.begin())];
}

GlobalFeatureVector global_features(const Signature& sig, GlobalFeatureSet set) {
  const auto x = sig.xs();
  const auto y = sig.ys();
  const auto& samples = sig.samples();

  GlobalFeatureVector out;
  out.set = set;
  out.values = {population_std(x), population_std(y),
                static_cast<double>(samples.back().t - samples.front().t)};
  if (set == GlobalFeatureSet::Minimum) return out;

  const auto tf = time_functions(sig);
  const auto& v = tf[TimeFunction::V];
  const auto p = sig.pressures();
  double path_length = 0.0;
  for (std::size_t i = 1; i < samples.size(); ++i) path_length += std::hypot(x[i] - x[i - 1], y[i] - y[i - 1]);
  const auto [xmin, xmax] = std::minmax_element(x.begin(), x.end());
  const auto [ymin, ymax] = std::minmax_element(y.begin(), y.end());
  const double width = *xmax - *xmin;
  const double height = *ymax - *ymin;

  out.values.push_back(mean_of(v));
  out.values.push_back(*std::max_element(v.begin(), v.end()));
  out.values.push_back(mean_of(p));
  out.values.push_back(population_std(p));
  out.values.push_back(static_cast<double>(samples.size()));
  out.values.push_back(path_length);
  out.values.push_back(width);
  out.values.push_back(height);
  out.values.push_back(height > 0.0 ? width / height : 0.0);
  return out;
}

GlobalFeatureVector feature_difference(const GlobalFeatureVector& enrolled, const GlobalFeatureVector& test) {
  if (enrolled.set != test.set || enrolled.values.size() != test.values.size()) {
    throw InvalidArgument("feature vectors differ in configuration or dimension");
  }
  GlobalFeatureVector out;
  out.set = enrolled.set;
  out.values.resize(enrolled.values.size());
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] = std::abs(enrolled.values[i] - test.values[i]);
  return out;
}

// ---------------------------------------------------------------------------
// Path signatures

namespace {

std::size_t level_offset(int k) { return (std::size_t{1} << k) - 2; }

void check_depth(int depth) {
  if (depth < 1 || depth > kMaxPathSignatureDepth) {
    throw InvalidArgument("path signature depth must be in [1, " + std::to_string(kMaxPathSignatureDepth) + "]");
  }
}

// exp of a single linear increment: level k holds delta^{(x)k} / k!
PathSignatureVector segment_signature(double dx, double dy, int depth) {
  PathSignatureVector s;
  s.depth = depth;
  s.terms.assign(PathSignatureVector::term_count(depth), 0.0);
  const double delta[2] = {dx, dy};
  double factorial = 1.0;
  for (int k = 1; k <= depth; ++k) {
    factorial *= k;
    const std::size_t width = std::size_t{1} << k;
    for (std::size_t word = 0; word < width; ++word) {
      double prod = 1.0;
      for (int letter = k - 1; letter >= 0; --letter) prod *= delta[(word >> letter) & 1U];
      s.terms[level_offset(k) + word] = prod / factorial;
    }
  }
  return s;
}

}  // namespace

std::size_t PathSignatureVector::term_count(int depth) { return (std::size_t{1} << (depth + 1)) - 2; }

std::span<const double> PathSignatureVector::level(int k) const {
  if (k < 1 || k > depth) throw InvalidArgument("path signature level out of range");
  return std::span<const double>(terms).subspan(level_offset(k), std::size_t{1} << k);
}

PathSignatureVector chen_combine(const PathSignatureVector& first, const PathSignatureVector& second) {
  const int depth = std::min(first.depth, second.depth);
  check_depth(depth);
  PathSignatureVector out;
  out.depth = depth;
  out.terms.assign(PathSignatureVector::term_count(depth), 0.0);
  for (int k = 1; k <= depth; ++k) {
    double* dst = out.terms.data() + level_offset(k);
    const auto a_k = first.level(k);
    const auto b_k = second.level(k);
    for (std::size_t w = 0; w < a_k.size(); ++w) dst[w] = a_k[w] + b_k[w];
    for (int i = 1; i < k; ++i) {
      const auto a = first.level(i);
      const auto b = second.level(k - i);
      for (std::size_t u = 0; u < a.size(); ++u) {
        for (std::size_t v = 0; v < b.size(); ++v) dst[u * b.size() + v] += a[u] * b[v];
      }
    }
  }
  return out;
}

PathSignatureVector path_signature(std::span<const double> x, std::span<const double> y, int depth) {
  check_depth(depth);
  if (x.size() != y.size()) throw InvalidArgument("x and y differ in length");
  if (x.size() < 2) throw InvalidArgument("path signature needs at least 2 points");
  auto acc = segment_signature(x[1] - x[0], y[1] - y[0], depth);
  for (std::size_t i = 2; i < x.size(); ++i) {
    acc = chen_combine(acc, segment_signature(x[i] - x[i - 1], y[i] - y[i - 1], depth));
  }
  return acc;
}

PathSignatureVector path_signature(const Signature& sig, int depth) {
  return path_signature(sig.xs(), sig.ys(), depth);
}

}  // namespace sigverify
