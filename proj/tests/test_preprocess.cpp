#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "sigverify/error.hpp"
#include "sigverify/preprocess.hpp"

using namespace sigverify;
using doctest::Approx;

namespace {

void check_close(const std::vector<double>& a, const std::vector<double>& b, double tol) {
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) <= tol);
}

std::vector<double> affine(const std::vector<double>& v, double a, double b) {
  std::vector<double> out;
  for (double x : v) out.push_back(a * x + b);
  return out;
}

}  // namespace

TEST_CASE("remove_zero_pressure") {
  const auto sig = testutil::make_signature({1, 2, 3, 4}, {5, 6, 7, 8}, {0, 5, 0, 7});
  const auto out = remove_zero_pressure(sig);
  REQUIRE(out.size() == 2);
  CHECK(out.samples()[0] == sig.samples()[1]);
  CHECK(out.samples()[1] == sig.samples()[3]);

  const auto full = testutil::make_signature({1, 2, 3}, {1, 2, 3}, {1, 2, 3});
  CHECK(remove_zero_pressure(full) == full);

  CHECK_THROWS_AS(remove_zero_pressure(testutil::make_signature({1, 2}, {1, 2}, {0, 0})), InvalidArgument);
  CHECK_THROWS_AS(remove_zero_pressure(testutil::make_signature({1, 2}, {1, 2}, {}, {}, InputKind::Finger)),
                  InvalidArgument);
}

TEST_CASE("normalize_sigstat examples") {
  const auto two = normalize_sigstat(testutil::make_signature({0, 10}, {0, 10}, {3, 3}));
  CHECK(two.xs() == std::vector<double>{-0.5, 0.5});
  CHECK(two.ys() == std::vector<double>{-0.5, 0.5});
  CHECK(two.pressures() == std::vector<double>{0, 0});

  const auto three = normalize_sigstat(testutil::make_signature({2, 4, 6}, {0, 1, 0}));
  check_close(three.xs(), {-0.5, 0.0, 0.5}, 1e-15);
}

TEST_CASE("normalize_mad examples") {
  const auto two = normalize_mad(testutil::make_signature({0, 10}, {3, 3}, {10, 30}));
  CHECK(two.xs() == std::vector<double>{-1, 1});
  CHECK(two.ys() == std::vector<double>{0, 0});
  CHECK(two.pressures() == std::vector<double>{0, 1});

  const auto ones = normalize_mad(testutil::make_signature({1, 1, 1}, {0, 1, 2}));
  CHECK(ones.xs() == std::vector<double>{0, 0, 0});
  CHECK(ones.pressures() == std::vector<double>{1, 1, 1});

  const auto finger = normalize_mad(testutil::make_signature({0, 1, 2}, {0, 2, 1}, {}, {}, InputKind::Finger));
  CHECK(finger.pressures() == std::vector<double>{1, 1, 1});
}

TEST_CASE("normalization is invariant to positive affine rescaling") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> scale(0.01, 100.0), shift(-1000.0, 1000.0);
  for (int trial = 0; trial < 50; ++trial) {
    const auto sig = testutil::random_signature(rng, 5 + trial, InputKind::Stylus);
    const auto moved = sig.with_channels(affine(sig.xs(), scale(rng), shift(rng)),
                                         affine(sig.ys(), scale(rng), shift(rng)),
                                         affine(sig.pressures(), scale(rng), std::abs(shift(rng))));
    for (auto fn : {&normalize_sigstat, &normalize_mad}) {
      const auto a = fn(sig), b = fn(moved);
      check_close(a.xs(), b.xs(), 1e-9);
      check_close(a.ys(), b.ys(), 1e-9);
      check_close(a.pressures(), b.pressures(), 1e-9);
    }
  }
}

TEST_CASE("normalization is idempotent and keeps timestamps") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 30; ++trial) {
    const auto sig = testutil::random_signature(rng, 3 + trial);
    const auto mad = normalize_mad(sig);
    const auto mad2 = normalize_mad(mad);
    check_close(mad.xs(), mad2.xs(), 1e-12);
    check_close(mad.ys(), mad2.ys(), 1e-12);
    check_close(mad.pressures(), mad2.pressures(), 1e-12);

    const auto st = normalize_sigstat(sig);
    const auto st2 = normalize_sigstat(st);
    check_close(st.xs(), st2.xs(), 1e-12);
    check_close(st.ys(), st2.ys(), 1e-12);
    check_close(st.pressures(), st2.pressures(), 1e-12);

    CHECK(mad.times() == sig.times());
    CHECK(st.times() == sig.times());
    CHECK(st.size() == sig.size());
  }
}
