#include "ptlab/geometry.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace {

using namespace ptlab;

ComplexMatrix product_projector_offset() {
  ComplexMatrix p = ComplexMatrix::Zero(4, 4);
  p(0, 0) = 1.0;
  return p - ComplexMatrix::Identity(4, 4) / 4.0;
}

ComplexMatrix bell_offset() { return oracle::bell_projector() - ComplexMatrix::Identity(4, 4) / 4.0; }

TEST(Direction, TracelessUnitHermitian) {
  for (int n : {2, 4, 9}) {
    for (std::uint64_t i = 0; i < 20; ++i) {
      auto rng = make_stream(50, i);
      const Direction u = sample_direction(n, rng);
      EXPECT_LE(std::abs(u.entries.trace()), 1e-12);
      EXPECT_NEAR(u.entries.norm(), 1.0, 1e-12);
      EXPECT_LE(hermiticity_defect(u.entries), 1e-12);
    }
  }
  auto rng = make_stream(0, 0);
  EXPECT_THROW(sample_direction(1, rng), InvalidArgument);
}

TEST(Direction, SphereSymmetry) {
  // <u, F> for a fixed traceless F has mean zero under the uniform measure.
  const ComplexMatrix f = bell_offset() + 0.3 * product_projector_offset();
  const int draws = 100000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < draws; ++i) {
    auto rng = make_stream(51, i);
    const double v = hs_inner(sample_direction(4, rng).entries, f);
    sum += v;
    sum2 += v * v;
  }
  const double mean = sum / draws;
  const double se = std::sqrt((sum2 / draws - mean * mean) / draws);
  EXPECT_LE(std::abs(mean), 3.0 * se);
  // isotropy: E<u,F>^2 = |F|^2 / (dimension of the traceless space) = |F|^2 / 15
  EXPECT_NEAR(sum2 / draws, f.squaredNorm() / 15.0, 0.02 * f.squaredNorm() / 15.0);
}

TEST(SupportSeparable, ProductDirection) {
  const Direction u = make_direction(product_projector_offset());
  auto rng = make_stream(60, 0);
  const double h = support_separable(u, 2, 32, rng);
  EXPECT_NEAR(h, std::sqrt(3.0) / 2.0, 1e-9);
  EXPECT_NEAR(h, oracle::product_max_2x2(u.entries), 1e-9);
}

TEST(SupportSeparable, BellDirection) {
  const Direction u = make_direction(bell_offset());
  auto rng = make_stream(61, 0);
  const double h = support_separable(u, 2, 32, rng);
  EXPECT_NEAR(h, 1.0 / (2.0 * std::sqrt(3.0)), 1e-9);
  EXPECT_NEAR(h, oracle::product_max_2x2(u.entries), 1e-6);
}

TEST(SupportSeparable, NotCentrallySymmetric) {
  // Toward a product state the body reaches far (sqrt(3)/2); in the opposite
  // direction only 1/(2 sqrt(3)).
  const Direction u = make_direction(product_projector_offset());
  const Direction minus_u{-u.entries};
  auto rng = make_stream(62, 0);
  const double forward = support_separable(u, 2, 32, rng);
  const double backward = support_separable(minus_u, 2, 32, rng);
  EXPECT_NEAR(backward, oracle::product_max_2x2(minus_u.entries), 1e-6);
  EXPECT_GT(forward, backward + 0.5);

  // The Bell direction is the exception: both sides give 1/(2 sqrt(3)).
  const Direction b = make_direction(bell_offset());
  const Direction minus_b{-b.entries};
  EXPECT_NEAR(support_separable(minus_b, 2, 32, rng), oracle::product_max_2x2(minus_b.entries), 1e-6);
  EXPECT_NEAR(oracle::product_max_2x2(minus_b.entries), oracle::product_max_2x2(b.entries), 1e-6);
}

TEST(SupportSeparable, BoundedByStateSetAndMonotoneInRestarts) {
  for (std::uint64_t i = 0; i < 40; ++i) {
    auto rng = make_stream(63, i);
    const Direction u = sample_direction(9, rng);
    const double full = support_state_set(u);
    double previous = -1e300;
    for (int restarts : {1, 2, 4, 8, 16}) {
      auto r = make_stream(64, i);
      const double h = support_separable(u, 3, restarts, r);
      EXPECT_GE(h, previous);
      EXPECT_LE(h, full + 1e-12);
      previous = h;
    }
  }
  // strict for the direction of an entangled pure state
  const Direction bell = make_direction(bell_offset());
  auto rng = make_stream(65, 0);
  EXPECT_LT(support_separable(bell, 2, 32, rng), support_state_set(bell) - 0.5);
}

TEST(SupportSeparable, MatchesGridOracleOnRandomDirections) {
  for (std::uint64_t i = 0; i < 10; ++i) {
    auto rng = make_stream(66, i);
    const Direction u = sample_direction(4, rng);
    const SupportEstimate est = support_separable_detailed(u, 2, 32, rng);
    EXPECT_NEAR(est.value, oracle::product_max_2x2(u.entries), 1e-7);
    EXPECT_GE(est.restarts_at_best, 1);
  }
}

TEST(Gauge, Origin) { EXPECT_EQ(gauge_separable_2x2(ComplexMatrix::Zero(4, 4)), 0.0); }

TEST(Gauge, WernerBoundary) {
  EXPECT_NEAR(gauge_separable_2x2(bell_offset(), 1e-10), 3.0, 1e-6);
  // closed form: I/4 + x/t is the Werner state with p = 1/t
  EXPECT_NEAR(oracle::werner_pt_lambda_min(1.0 / 3.0), 0.0, 1e-16);
}

TEST(Gauge, ProductDirection) {
  // I/4 + (P - I/4)/t is separable for every t >= 1 and not a state below 1.
  EXPECT_NEAR(gauge_separable_2x2(product_projector_offset(), 1e-10), 1.0, 1e-8);
}

TEST(Gauge, PositiveHomogeneity) {
  const double precision = 1e-8;
  for (std::uint64_t i = 0; i < 10; ++i) {
    auto rng = make_stream(70, i);
    const ComplexMatrix x = sample_direction(4, rng).entries;
    const double g = gauge_separable_2x2(x, precision);
    for (double c : {0.5, 2.0, 10.0}) EXPECT_NEAR(gauge_separable_2x2(c * x, precision), c * g, (1 + c) * precision);
  }
}

TEST(Gauge, RejectsBadInput) {
  EXPECT_THROW(gauge_separable_2x2(ComplexMatrix::Identity(4, 4)), InvalidArgument);
  EXPECT_THROW(gauge_separable_2x2(ComplexMatrix::Zero(9, 9)), InvalidArgument);
  ComplexMatrix nonherm = ComplexMatrix::Zero(4, 4);
  nonherm(0, 1) = 1.0;
  EXPECT_THROW(gauge_separable_2x2(nonherm), InvalidArgument);
}

TEST(Gauge, SupportDuality) {
  // <x, u> <= gauge(x) h_S(u) for all x, u.
  for (std::uint64_t i = 0; i < 20; ++i) {
    auto rx = make_stream(71, i);
    const ComplexMatrix x = sample_direction(4, rx).entries;
    const double g = gauge_separable_2x2(x, 1e-10);
    for (std::uint64_t j = 0; j < 20; ++j) {
      auto ru = make_stream(72, 100 * i + j);
      const Direction u = sample_direction(4, ru);
      const double h = support_separable(u, 2, 32, ru);
      ASSERT_GT(h, 0.0);
      EXPECT_GE(g + 1e-8, hs_inner(x, u.entries) / h);
    }
  }
}

TEST(MeanWidth, DeterministicAndScaling) {
  const WidthEstimate a = mean_width_separable(2, 2000, 8, 5);
  const WidthEstimate b = mean_width_separable(2, 2000, 8, 5, 3);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.std_error, b.std_error);
  const WidthEstimate big = mean_width_separable(2, 4000, 8, 5);
  EXPECT_NEAR(big.std_error / a.std_error, 1.0 / std::sqrt(2.0), 0.05);
}

TEST(MeanWidth, SeparableSetIsNarrowerThanStateSet) {
  const WidthEstimate s = mean_width_separable(2, 2000, 16, 9);
  const WidthEstimate d = mean_width_state_set(2, 2000, 9);
  EXPECT_GT(s.mean, 0.0);
  EXPECT_LT(s.mean, d.mean);
}

TEST(MeanWidth, PolarProductAtLeastOne) {
  const WidthEstimate s = mean_width_separable(2, 2000, 16, 10);
  const WidthEstimate p = mean_width_polar_2x2(2000, 1e-8, 10);
  const double combined = std::hypot(s.std_error * p.mean, p.std_error * s.mean);
  EXPECT_GE(s.mean * p.mean, 1.0 - 2.0 * combined);
  const WidthEstimate again = mean_width_polar_2x2(2000, 1e-8, 10, 2);
  EXPECT_EQ(p.mean, again.mean);
}

TEST(Threshold, DeltaMethod) {
  const ThresholdEstimate a = threshold_s0_estimate({1.0, 0.0, 10, 0});
  EXPECT_EQ(a.s0, 1.0);
  EXPECT_EQ(a.std_error, 0.0);
  const ThresholdEstimate b = threshold_s0_estimate({2.0, 0.1, 10, 0});
  EXPECT_DOUBLE_EQ(b.s0, 4.0);
  EXPECT_DOUBLE_EQ(b.std_error, 0.4);
}

}  // namespace
