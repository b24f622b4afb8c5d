#include <gtest/gtest.h>

#include <cmath>

#include "hweyl/errors.hpp"
#include "hweyl/sampling.hpp"

using namespace hweyl;

TEST(Stratified, OneDrawPerStratum) {
  const StratifiedPlan plan{10.0, 20.0, 1000, 4};
  const auto xs = stratified_points(plan);
  ASSERT_EQ(xs.size(), 1000u);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    EXPECT_GE(xs[i], 10.0 + 0.01 * static_cast<double>(i) - 1e-12);
    EXPECT_LE(xs[i], 10.0 + 0.01 * static_cast<double>(i + 1) + 1e-12);
  }
}

TEST(Stratified, SeededAndSeedSensitive) {
  const auto a = stratified_points({0.0, 1.0, 5000, 1});
  const auto b = stratified_points({0.0, 1.0, 5000, 1});
  const auto c = stratified_points({0.0, 1.0, 5000, 2});
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
}

TEST(Stratified, RejectedDrawsAreRedrawn) {
  const auto xs = stratified_points({0.0, 10.0, 10, 3}, [](double x) { return x - std::floor(x) < 0.5; });
  for (const double x : xs) EXPECT_GE(x - std::floor(x), 0.5);
}

TEST(Stratified, Validation) {
  EXPECT_THROW(stratified_points({1.0, 1.0, 10, 0}), ValidationError);
  EXPECT_THROW(stratified_points({0.0, 1.0, 0, 0}), ValidationError);
}

TEST(ParallelMap, IndependentOfThreadCount) {
  const auto xs = stratified_points({1.0, 2.0, 10007, 8});
  const auto f = [](double x) { return std::sin(1e3 * x) / x; };
  const auto one = parallel_map(xs, f, 1);
  for (int threads : {2, 3, 8, 0}) EXPECT_EQ(parallel_map(xs, f, threads), one);
  EXPECT_EQ(ordered_sum(one), ordered_sum(parallel_map(xs, f, 5)));
}

TEST(ParallelMap, PropagatesExceptions) {
  const std::vector<double> xs(100, 1.0);
  EXPECT_THROW(parallel_map(xs, [](double) -> double { throw ResourceError("boom"); }, 4), ResourceError);
}

TEST(ParallelMap, ResolveThreads) {
  EXPECT_GE(resolve_threads(0), 1);
  EXPECT_EQ(resolve_threads(3), 3);
}
