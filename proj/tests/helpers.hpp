#pragma once

#include <cmath>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include "sigverify/sigdata.hpp"

namespace testutil {

inline sigverify::Signature make_signature(const std::vector<double>& x, const std::vector<double>& y,
                                           std::vector<double> p = {}, std::vector<std::int64_t> t = {},
                                           sigverify::InputKind input = sigverify::InputKind::Stylus) {
  using namespace sigverify;
  const std::size_t n = x.size();
  if (p.empty()) p.assign(n, input == InputKind::Finger ? kMissingPressureFill : 100.0);
  if (t.empty()) {
    for (std::size_t i = 0; i < n; ++i) t.push_back(static_cast<std::int64_t>(10 * i));
  }
  std::vector<SignatureSample> samples;
  for (std::size_t i = 0; i < n; ++i) {
    samples.push_back({x[i], y[i], p[i], t[i], p[i] > 0 ? PenState::Down : PenState::Up});
  }
  SignatureMeta meta{"subj", input, input == InputKind::Stylus ? Scenario::Office : Scenario::Mobile,
                     Authenticity::Genuine, std::nullopt};
  return Signature(std::move(samples), std::move(meta));
}

inline sigverify::Signature random_signature(std::mt19937_64& rng, std::size_t n,
                                             sigverify::InputKind input = sigverify::InputKind::Stylus) {
  std::uniform_real_distribution<double> coord(-500.0, 500.0), pres(1.0, 1023.0);
  std::vector<double> x(n), y(n), p(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = coord(rng);
    y[i] = coord(rng);
    p[i] = input == sigverify::InputKind::Finger ? sigverify::kMissingPressureFill : pres(rng);
  }
  return make_signature(x, y, p, {}, input);
}

/// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& name) {
    path_ = std::filesystem::temp_directory_path() / ("sigverify_test_" + name + "_" + std::to_string(::getpid()));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& rel) const { return path_ / rel; }

 private:
  std::filesystem::path path_;
};

}  // namespace testutil
