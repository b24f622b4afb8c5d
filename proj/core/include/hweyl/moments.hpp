#pragma once

// Monte Carlo estimation of power moments and of the empirical distribution
// of the normalized error term, next to the main terms predicted for them.
// All integrals run in the variable x = t / (2 pi) over [T, 2T].

#include <cstdint>
#include <span>
#include <vector>

#include "hweyl/spectrum.hpp"
#include "hweyl/tau.hpp"

namespace hweyl {

enum class MomentMode { signed_power, absolute };

struct MomentEstimate {
  int l = 1;
  double k = 0.0;  // integral for signed moments, real for absolute ones
  double T = 0.0;
  MomentMode mode = MomentMode::signed_power;
  double estimate = 0.0;        // approximation of int_T^{2T} R^k dx (or |R|^k)
  double standard_error = 0.0;  // collapsed-strata estimate
  double normalized = 0.0;      // estimate / int_T^{2T} x^{k(l-1/4)} dx
  std::int64_t samples = 0;
  std::uint64_t seed = 0;
};

struct PredictionReport {
  double estimate = 0.0;
  double predicted = 0.0;
  double relative_deviation = 0.0;
};

PredictionReport make_report(double estimate, double predicted);

inline constexpr int kMaxMomentOrder = 12;

// Stratified estimate (one uniform draw per stratum) of int_T^{2T} R_psi^k dx.
MomentEstimate moment_estimate(const ManifoldParams& p, int k, double T, std::int64_t samples, MomentMode mode,
                               std::uint64_t seed, int threads = 1);

// int_lo^hi x^a dx.
long double power_integral(long double a, long double lo, long double hi);

// 2^{1+k-lk} l^k B / ((l!)^k pi^k): coefficient of int x^{k(l-1/4)} dx.
long double predicted_coefficient_x(const ManifoldParams& p, int k, long double b_k_value);

// 2^{3+5k/4-2kl} l^k B / ((l!)^k pi^{3k/4+kl} (4 + k(4l-1))): coefficient of
// T^{1+k(l-1/4)} in int_1^T R^k(t) dt.
long double predicted_coefficient_t(const ManifoldParams& p, int k, long double b_k_value);

// 2^{9/2-4l} l^2 / ((l!)^2 pi^{2l+3/2} (4l+1)) sum_{n <= y} tau_l(n)^2 n^{-3/2}.
long double c2l_constant(const ManifoldParams& p, double y, const TauTable& tau);

struct DistributionEstimate {
  std::vector<double> bin_edges;
  std::vector<double> densities;
  double sample_mean = 0.0;
  double sample_variance = 0.0;
  double T_lo = 0.0;
  double T_hi = 0.0;
  std::vector<double> sorted_values;
};

// Samples of (2 pi x)^{-(l-1/4)} r_psi(x), x stratified-uniform on [T_lo, T_hi].
std::vector<double> normalized_error_samples(const ManifoldParams& p, double T_lo, double T_hi,
                                             std::int64_t samples, std::uint64_t seed, int threads = 1);

DistributionEstimate distribution_estimate(const ManifoldParams& p, double T_lo, double T_hi, std::int64_t samples,
                                           int bins, std::uint64_t seed, int threads = 1);

// sup_u |F_a(u) - F_b(u)| between two empirical distribution functions.
double kolmogorov_distance(std::span<const double> a, std::span<const double> b);

struct GrowthPoint {
  double T = 0.0;
  MomentEstimate moment;
  // estimate: int_T^{2T} |R_psi|^A dx / T^{1+A(l-1/4)}; predicted: the same
  // quantity at the previous T (the first point is its own reference).
  PredictionReport report;
};

std::vector<GrowthPoint> abs_moment_growth(const ManifoldParams& p, double A, std::span<const double> T_list,
                                           std::int64_t samples, std::uint64_t seed, int threads = 1);

// Ordinary least-squares slope of ys against xs.
double least_squares_slope(std::span<const double> xs, std::span<const double> ys);

// Least-squares slope of log(value) against log(T).
double log_log_slope(std::span<const double> xs, std::span<const double> values);

}  // namespace hweyl
