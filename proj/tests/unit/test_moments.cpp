#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "hweyl/errors.hpp"
#include "hweyl/moments.hpp"
#include "hweyl/surd_series.hpp"

using namespace hweyl;

namespace {
constexpr long double kPi = std::numbers::pi_v<long double>;

long double fact(int n) {
  long double f = 1.0L;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}
}  // namespace

TEST(Coefficients, XVariableExamples) {
  const ManifoldParams p(1);
  EXPECT_NEAR(static_cast<double>(predicted_coefficient_x(p, 2, 0.3L)), static_cast<double>(0.6L / (kPi * kPi)), 1e-17);
  EXPECT_NEAR(static_cast<double>(predicted_coefficient_x(p, 3, 1.0L)), static_cast<double>(2.0L / (kPi * kPi * kPi)),
              1e-17);
  EXPECT_THROW(predicted_coefficient_x(p, 1, 1.0L), ValidationError);
}

TEST(Coefficients, ThirdAndFourthMomentDisplays) {
  for (int l = 1; l <= 4; ++l) {
    const ManifoldParams p(l);
    const long double b = 0.731L;
    const long double k3 = std::pow(2.0L, 6.75L - 6 * l) * l * l * l * b /
                           (std::pow(fact(l), 3) * std::pow(kPi, 3.0L * l + 2.25L) * (1 + 12 * l));
    const long double k4 =
        std::pow(2.0L, 4.0L - 8 * l) * l * l * l * b / (std::pow(fact(l), 4) * std::pow(kPi, 4.0L * l + 3));
    EXPECT_NEAR(static_cast<double>(predicted_coefficient_t(p, 3, b) / k3), 1.0, 1e-15);
    EXPECT_NEAR(static_cast<double>(predicted_coefficient_t(p, 4, b) / k4), 1.0, 1e-15);
  }
}

TEST(Coefficients, ChangeOfVariables) {
  for (int l = 1; l <= 3; ++l) {
    const ManifoldParams p(l);
    for (int k = 2; k <= 9; ++k) {
      const long double lhs = predicted_coefficient_t(p, k, 1.7L) * (4 + k * (4 * l - 1)) / 4;
      const long double rhs = predicted_coefficient_x(p, k, 1.7L) * std::pow(2 * kPi, -k * (l - 0.25L));
      EXPECT_NEAR(static_cast<double>(lhs / rhs), 1.0, 1e-15) << l << " " << k;
    }
  }
}

TEST(Coefficients, MeanSquareConstant) {
  const TauTable tau(1, 100);
  long double sum = 0.0L;
  for (int n = 1; n <= 10; ++n) sum += tau.value(n) * tau.value(n) / std::pow(static_cast<long double>(n), 1.5L);
  const long double expected = std::sqrt(2.0L) / (5.0L * std::pow(kPi, 3.5L)) * sum;
  EXPECT_NEAR(static_cast<double>(c2l_constant(ManifoldParams(1), 10.0, tau) / expected), 1.0, 1e-15);

  for (int l = 1; l <= 3; ++l) {
    const TauTable t(l, 4096);
    const ManifoldParams p(l);
    const double b2 = b_k(t.values(), 2, 4096);
    EXPECT_NEAR(static_cast<double>(c2l_constant(p, 4096, t) / predicted_coefficient_t(p, 2, b2)), 1.0, 1e-13);
  }
  EXPECT_THROW(c2l_constant(ManifoldParams(1), 200.0, tau), ValidationError);
  EXPECT_THROW(c2l_constant(ManifoldParams(2), 10.0, tau), ValidationError);
}

TEST(Coefficients, MeanSquareConstantShrinkingIncrements) {
  const TauTable t(1, 4096);
  const ManifoldParams p(1);
  double prev = 1e9;
  for (int j = 6; j < 12; ++j) {
    const double inc = static_cast<double>(c2l_constant(p, std::ldexp(1.0, j + 1), t) - c2l_constant(p, std::ldexp(1.0, j), t));
    EXPECT_GT(inc, 0.0);
    EXPECT_LT(inc, prev);
    prev = inc;
  }
}

TEST(Report, RelativeDeviation) {
  const PredictionReport r = make_report(1.1, 1.0);
  EXPECT_NEAR(r.relative_deviation, 0.1, 1e-15);
  EXPECT_TRUE(std::isnan(make_report(1.0, 0.0).relative_deviation));
}

TEST(PowerIntegral, ClosedForms) {
  EXPECT_NEAR(static_cast<double>(power_integral(1.5L, 1.0L, 4.0L)), (32.0 - 1.0) / 2.5, 1e-15);
  EXPECT_NEAR(static_cast<double>(power_integral(-1.0L, 2.0L, 6.0L)), std::log(3.0), 1e-15);
  EXPECT_THROW(power_integral(1.0L, 2.0L, 1.0L), ValidationError);
}

TEST(Moments, EvenPowerModesAgreeExactly) {
  const ManifoldParams p(1);
  const auto s = moment_estimate(p, 2, 1e4, 2000, MomentMode::signed_power, 3);
  const auto a = moment_estimate(p, 2, 1e4, 2000, MomentMode::absolute, 3);
  EXPECT_EQ(s.estimate, a.estimate);
  EXPECT_GT(s.estimate, 0.0);
  EXPECT_GE(moment_estimate(p, 3, 1e4, 2000, MomentMode::absolute, 3).estimate, 0.0);
}

TEST(Moments, SeededAndThreadInvariant) {
  const ManifoldParams p(2);
  const auto a = moment_estimate(p, 3, 2e4, 3000, MomentMode::signed_power, 21, 1);
  const auto b = moment_estimate(p, 3, 2e4, 3000, MomentMode::signed_power, 21, 4);
  EXPECT_EQ(a.estimate, b.estimate);
  EXPECT_EQ(a.standard_error, b.standard_error);
  EXPECT_EQ(a.seed, 21u);
  EXPECT_EQ(a.samples, 3000);
  EXPECT_NE(a.estimate, moment_estimate(p, 3, 2e4, 3000, MomentMode::signed_power, 22).estimate);
}

TEST(Moments, EvenMomentsPositive) {
  for (double T : {1e3, 1e4, 1e5}) {
    for (int k : {2, 4}) {
      EXPECT_GT(moment_estimate(ManifoldParams(1), k, T, 2000, MomentMode::signed_power, 1).estimate, 0.0);
    }
  }
}

TEST(Moments, Normalization) {
  const ManifoldParams p(1);
  const auto m = moment_estimate(p, 2, 1e4, 2000, MomentMode::signed_power, 1);
  EXPECT_NEAR(m.normalized, m.estimate / static_cast<double>(power_integral(1.5L, 1e4L, 2e4L)), 1e-15 * m.normalized);
}

TEST(Moments, FirstMomentCancels) {
  const ManifoldParams p(1);
  const auto m1 = moment_estimate(p, 1, 1e5, 10000, MomentMode::signed_power, 4);
  const auto m2 = moment_estimate(p, 2, 1e5, 10000, MomentMode::signed_power, 4);
  EXPECT_LT(std::fabs(m1.normalized), 0.1 * std::sqrt(m2.normalized));
}

TEST(Moments, DoublingSamplesIsConsistent) {
  const ManifoldParams p(1);
  const auto a = moment_estimate(p, 2, 1e5, 5000, MomentMode::signed_power, 9);
  const auto b = moment_estimate(p, 2, 1e5, 10000, MomentMode::signed_power, 9);
  const double se = std::hypot(a.standard_error, b.standard_error) * a.normalized / a.estimate;
  EXPECT_LT(std::fabs(a.normalized - b.normalized), 3.0 * se + 1e-12);
}

TEST(Moments, Validation) {
  const ManifoldParams p(1);
  EXPECT_THROW(moment_estimate(p, 13, 1e4, 1000, MomentMode::signed_power, 1), ValidationError);
  EXPECT_THROW(moment_estimate(p, 0, 1e4, 1000, MomentMode::signed_power, 1), ValidationError);
  EXPECT_THROW(moment_estimate(p, 2, 999, 1000, MomentMode::signed_power, 1), ValidationError);
  EXPECT_THROW(moment_estimate(p, 2, 1e4, 999, MomentMode::signed_power, 1), ValidationError);
}

TEST(Distribution, HistogramIsNormalized) {
  const auto d = distribution_estimate(ManifoldParams(1), 1e4, 2e4, 5000, 40, 2);
  ASSERT_EQ(d.bin_edges.size(), 41u);
  ASSERT_EQ(d.densities.size(), 40u);
  double mass = 0.0;
  for (std::size_t i = 0; i < d.densities.size(); ++i) {
    EXPECT_LT(d.bin_edges[i], d.bin_edges[i + 1]);
    EXPECT_GE(d.densities[i], 0.0);
    mass += d.densities[i] * (d.bin_edges[i + 1] - d.bin_edges[i]);
  }
  EXPECT_NEAR(mass, 1.0, 1e-6);
  EXPECT_EQ(d.sorted_values.size(), 5000u);
  EXPECT_TRUE(std::is_sorted(d.sorted_values.begin(), d.sorted_values.end()));
  EXPECT_GT(d.sample_variance, 0.0);
  EXPECT_EQ(d.T_lo, 1e4);
  EXPECT_EQ(d.T_hi, 2e4);
}

TEST(Distribution, Validation) {
  EXPECT_THROW(distribution_estimate(ManifoldParams(1), 1e4, 1.5e4, 1000, 10, 1), ValidationError);
  EXPECT_THROW(distribution_estimate(ManifoldParams(1), 400, 1e4, 1000, 10, 1), ValidationError);
  EXPECT_THROW(distribution_estimate(ManifoldParams(1), 1e4, 2e4, 1000, 0, 1), ValidationError);
}

TEST(Kolmogorov, BruteForceAgreement) {
  const std::vector<double> a = {0.1, 0.4, 0.4, 0.9, 1.5};
  const std::vector<double> b = {0.2, 0.4, 1.0};
  double expected = 0.0;
  for (double u : {0.1, 0.2, 0.4, 0.9, 1.0, 1.5}) {
    const double fa = std::count_if(a.begin(), a.end(), [&](double x) { return x <= u; }) / 5.0;
    const double fb = std::count_if(b.begin(), b.end(), [&](double x) { return x <= u; }) / 3.0;
    expected = std::max(expected, std::fabs(fa - fb));
  }
  EXPECT_DOUBLE_EQ(kolmogorov_distance(a, b), expected);
  EXPECT_EQ(kolmogorov_distance(a, a), 0.0);
  EXPECT_EQ(kolmogorov_distance(std::vector<double>{1, 2}, std::vector<double>{3, 4}), 1.0);
}

TEST(Growth, ZeroExponentIsMeasure) {
  const std::vector<double> Ts = {1e3, 1e4};
  const auto g = abs_moment_growth(ManifoldParams(1), 0.0, Ts, 1000, 1);
  ASSERT_EQ(g.size(), 2u);
  for (const auto& pt : g) EXPECT_DOUBLE_EQ(pt.report.estimate, 1.0);
  EXPECT_EQ(g[0].report.relative_deviation, 0.0);
}

TEST(Growth, Validation) {
  const std::vector<double> Ts = {1e4, 1e3};
  const std::vector<double> ok = {1e3};
  EXPECT_THROW(abs_moment_growth(ManifoldParams(1), 2.0, Ts, 1000, 1), ValidationError);
  EXPECT_THROW(abs_moment_growth(ManifoldParams(1), 9.5, ok, 1000, 1), ValidationError);
}

TEST(Slopes, LeastSquares) {
  const std::vector<double> x = {1, 2, 4, 8};
  std::vector<double> y;
  for (double v : x) y.push_back(3.0 * std::pow(v, -0.5));
  EXPECT_NEAR(log_log_slope(x, y), -0.5, 1e-14);
  EXPECT_NEAR(least_squares_slope(x, std::vector<double>{1, 3, 7, 15}), 2.0, 1e-14);
  EXPECT_THROW(log_log_slope(std::vector<double>{1}, std::vector<double>{1}), ValidationError);
}
