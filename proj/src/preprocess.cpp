#include "sigverify/preprocess.hpp"

#include <algorithm>
#include <numeric>

#include "sigverify/error.hpp"

namespace sigverify {

namespace {

// Affine map sending [min, max] onto [lo, hi]; constant input maps to `constant`.
std::vector<double> rescale(const std::vector<double>& c, double lo, double hi, double constant) {
  const auto [mn, mx] = std::minmax_element(c.begin(), c.end());
  const double cmin = *mn, cmax = *mx;
  std::vector<double> out(c.size(), constant);
  if (!(cmax > cmin)) return out;
  const double range = cmax - cmin;
  for (std::size_t i = 0; i < c.size(); ++i) out[i] = lo + (hi - lo) * ((c[i] - cmin) / range);
  return out;
}

std::vector<double> scale_then_center(const std::vector<double>& c) {
  auto out = rescale(c, 0.0, 1.0, 0.0);
  const double mean = std::accumulate(out.begin(), out.end(), 0.0) / static_cast<double>(out.size());
  for (double& v : out) v -= mean;
  return out;
}

}  // namespace

Signature remove_zero_pressure(const Signature& sig) {
  if (sig.meta().input != InputKind::Stylus) {
    throw InvalidArgument("zero-pressure removal applies to stylus signatures only");
  }
  std::vector<SignatureSample> kept;
  kept.reserve(sig.size());
  for (const auto& s : sig.samples()) {
    if (s.pressure > 0.0) kept.push_back(s);
  }
  if (kept.size() < 2) {
    throw InvalidArgument("degenerate signature: " + std::to_string(kept.size()) +
                          " samples left after zero-pressure removal");
  }
  return Signature(std::move(kept), sig.meta());
}

Signature normalize_sigstat(const Signature& sig) {
  return sig.with_channels(scale_then_center(sig.xs()), scale_then_center(sig.ys()),
                           scale_then_center(sig.pressures()));
}

Signature normalize_mad(const Signature& sig) {
  auto x = rescale(sig.xs(), -1.0, 1.0, 0.0);
  auto y = rescale(sig.ys(), -1.0, 1.0, 0.0);
  std::vector<double> p;
  if (sig.meta().input == InputKind::Finger) {
    p.assign(sig.size(), 1.0);
  } else {
    p = rescale(sig.pressures(), 0.0, 1.0, 1.0);
  }
  return sig.with_channels(x, y, p);
}

}  // namespace sigverify
