#include "hweyl/moments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hweyl/errors.hpp"
#include "hweyl/sampling.hpp"

namespace hweyl {

namespace {

constexpr long double kPi = std::numbers::pi_v<long double>;

long double factorial(int n) {
  long double f = 1.0L;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

MomentEstimate power_moment(const ManifoldParams& p, double exponent, double T, std::int64_t samples,
                            MomentMode mode, std::uint64_t seed, int threads) {
  const auto xs = stratified_points({T, 2.0 * T, samples, seed}, [](double x) { return near_integer_jump(x); });
  const bool absolute = mode == MomentMode::absolute;
  const auto values = parallel_map(
      xs,
      [&](double x) {
        const double r = r_psi(p, x);
        return absolute ? std::pow(std::fabs(r), exponent) : std::pow(r, exponent);
      },
      threads);

  const long double width = static_cast<long double>(T) / static_cast<long double>(samples);
  long double pair_sq = 0.0L;
  for (std::size_t i = 0; i + 1 < values.size(); i += 2) {
    const long double d = static_cast<long double>(values[i]) - values[i + 1];
    pair_sq += d * d;
  }

  MomentEstimate m;
  m.l = p.l();
  m.k = exponent;
  m.T = T;
  m.mode = mode;
  m.samples = samples;
  m.seed = seed;
  m.estimate = static_cast<double>(width * ordered_sum(values));
  m.standard_error = static_cast<double>(width * std::sqrt(pair_sq));
  m.normalized = static_cast<double>(m.estimate / power_integral(exponent * p.error_exponent(), T, 2.0L * T));
  return m;
}

}  // namespace

PredictionReport make_report(double estimate, double predicted) {
  PredictionReport r;
  r.estimate = estimate;
  r.predicted = predicted;
  r.relative_deviation = predicted != 0.0 ? std::fabs(estimate - predicted) / std::fabs(predicted)
                                          : std::numeric_limits<double>::quiet_NaN();
  return r;
}

long double power_integral(long double a, long double lo, long double hi) {
  require(hi >= lo && lo > 0.0L, "power_integral requires 0 < lo <= hi");
  if (std::fabs(a + 1.0L) < 1e-15L) return std::log(hi / lo);
  return (std::pow(hi, a + 1.0L) - std::pow(lo, a + 1.0L)) / (a + 1.0L);
}

MomentEstimate moment_estimate(const ManifoldParams& p, int k, double T, std::int64_t samples, MomentMode mode,
                               std::uint64_t seed, int threads) {
  require(k >= 1 && k <= kMaxMomentOrder, "moment order k must lie in [1, 12]");
  require(T >= 1e3 && std::isfinite(T), "moment estimates require T >= 1e3");
  require(samples >= 1000, "moment estimates require at least 1e3 samples");
  return power_moment(p, static_cast<double>(k), T, samples, mode, seed, threads);
}

long double predicted_coefficient_x(const ManifoldParams& p, int k, long double b_k_value) {
  require(k >= 2, "predicted coefficients require k >= 2");
  const int l = p.l();
  return std::ldexp(1.0L, 1 + k - l * k) * std::pow(static_cast<long double>(l), k) * b_k_value /
         (std::pow(factorial(l), k) * std::pow(kPi, k));
}

long double predicted_coefficient_t(const ManifoldParams& p, int k, long double b_k_value) {
  require(k >= 2, "predicted coefficients require k >= 2");
  const int l = p.l();
  const long double two_power = 3.0L + 1.25L * k - 2.0L * k * l;
  const long double pi_power = 0.75L * k + static_cast<long double>(k) * l;
  return std::pow(2.0L, two_power) * std::pow(static_cast<long double>(l), k) * b_k_value /
         (std::pow(factorial(l), k) * std::pow(kPi, pi_power) * (4.0L + k * (4.0L * l - 1.0L)));
}

long double c2l_constant(const ManifoldParams& p, double y, const TauTable& tau) {
  require(y >= 1.0, "C_{2,l} truncation requires y >= 1");
  require(tau.l() == p.l(), "tau table built for a different l");
  const auto terms = static_cast<std::int64_t>(std::floor(y));
  require(tau.limit() >= terms, "tau table shorter than the truncation");
  long double series = 0.0L;
  for (std::int64_t n = 1; n <= terms; ++n) {
    const long double t = tau.value(n);
    series += t * t / std::pow(static_cast<long double>(n), 1.5L);
  }
  const int l = p.l();
  const long double lf = factorial(l);
  return std::pow(2.0L, 4.5L - 4.0L * l) * l * l * series /
         (lf * lf * std::pow(kPi, 2.0L * l + 1.5L) * (4.0L * l + 1.0L));
}

std::vector<double> normalized_error_samples(const ManifoldParams& p, double T_lo, double T_hi,
                                             std::int64_t samples, std::uint64_t seed, int threads) {
  require(T_lo >= 1.0 && T_hi > T_lo, "normalized samples need 1 <= T_lo < T_hi");
  require(samples >= 1, "normalized samples need at least one sample");
  const auto xs = stratified_points({T_lo, T_hi, samples, seed}, [](double x) { return near_integer_jump(x); });
  return parallel_map(xs, [&](double x) { return sample_error_term(p, x).normalized; }, threads);
}

DistributionEstimate distribution_estimate(const ManifoldParams& p, double T_lo, double T_hi, std::int64_t samples,
                                           int bins, std::uint64_t seed, int threads) {
  require(T_lo >= 500.0 && T_hi >= 2.0 * T_lo, "distribution estimate requires T_hi >= 2 T_lo >= 1e3");
  require(bins >= 1, "distribution estimate requires at least one bin");
  require(samples >= 2, "distribution estimate requires at least two samples");

  DistributionEstimate d;
  d.T_lo = T_lo;
  d.T_hi = T_hi;
  d.sorted_values = normalized_error_samples(p, T_lo, T_hi, samples, seed, threads);

  const auto n = static_cast<long double>(d.sorted_values.size());
  const long double mean = ordered_sum(d.sorted_values) / n;
  long double sq = 0.0L;
  for (const double v : d.sorted_values) sq += (v - mean) * (v - mean);
  d.sample_mean = static_cast<double>(mean);
  d.sample_variance = static_cast<double>(sq / (n - 1.0L));

  std::sort(d.sorted_values.begin(), d.sorted_values.end());
  double lo = d.sorted_values.front();
  double hi = d.sorted_values.back();
  if (hi <= lo) hi = lo + 1.0;
  const double width = (hi - lo) / bins;
  d.bin_edges.resize(static_cast<std::size_t>(bins) + 1);
  for (int i = 0; i <= bins; ++i) d.bin_edges[static_cast<std::size_t>(i)] = lo + width * i;
  d.bin_edges.back() = hi;

  std::vector<std::int64_t> counts(static_cast<std::size_t>(bins), 0);
  for (const double v : d.sorted_values) {
    auto idx = static_cast<std::int64_t>((v - lo) / width);
    idx = std::clamp<std::int64_t>(idx, 0, bins - 1);
    ++counts[static_cast<std::size_t>(idx)];
  }
  d.densities.resize(static_cast<std::size_t>(bins));
  for (int i = 0; i < bins; ++i) {
    const auto u = static_cast<std::size_t>(i);
    d.densities[u] = static_cast<double>(counts[u]) / (static_cast<double>(n) * (d.bin_edges[u + 1] - d.bin_edges[u]));
  }
  return d;
}

double kolmogorov_distance(std::span<const double> a, std::span<const double> b) {
  require(!a.empty() && !b.empty(), "Kolmogorov distance needs two non-empty samples");
  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  const double na = static_cast<double>(sa.size());
  const double nb = static_cast<double>(sb.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double best = 0.0;
  while (i < sa.size() && j < sb.size()) {
    const double u = std::min(sa[i], sb[j]);
    while (i < sa.size() && sa[i] <= u) ++i;
    while (j < sb.size() && sb[j] <= u) ++j;
    best = std::max(best, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return best;
}

std::vector<GrowthPoint> abs_moment_growth(const ManifoldParams& p, double A, std::span<const double> T_list,
                                           std::int64_t samples, std::uint64_t seed, int threads) {
  require(A >= 0.0 && A <= 9.0, "absolute moment exponent A must lie in [0, 9]");
  require(!T_list.empty(), "growth study needs at least one T");
  require(std::is_sorted(T_list.begin(), T_list.end()) &&
              std::adjacent_find(T_list.begin(), T_list.end()) == T_list.end(),
          "T list must be strictly increasing");
  require(samples >= 1000, "growth study requires at least 1e3 samples");

  std::vector<GrowthPoint> out;
  for (const double T : T_list) {
    require(T >= 1e3, "growth study requires T >= 1e3");
    GrowthPoint g;
    g.T = T;
    g.moment = power_moment(p, A, T, samples, MomentMode::absolute, seed, threads);
    const double scaled =
        static_cast<double>(g.moment.estimate / std::pow(static_cast<long double>(T), 1.0L + A * p.error_exponent()));
    const double reference = out.empty() ? scaled : out.back().report.estimate;
    g.report = make_report(scaled, reference);
    out.push_back(g);
  }
  return out;
}

double least_squares_slope(std::span<const double> xs, std::span<const double> ys) {
  require(xs.size() == ys.size() && xs.size() >= 2, "slope fit needs two or more matching points");
  long double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const auto n = static_cast<long double>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += static_cast<long double>(xs[i]) * xs[i];
    sxy += static_cast<long double>(xs[i]) * ys[i];
  }
  const long double denom = n * sxx - sx * sx;
  require(denom != 0.0L, "slope fit needs distinct abscissae");
  return static_cast<double>((n * sxy - sx * sy) / denom);
}

double log_log_slope(std::span<const double> xs, std::span<const double> values) {
  require(xs.size() == values.size() && xs.size() >= 2, "slope fit needs two or more matching points");
  std::vector<double> lx(xs.size());
  std::vector<double> ly(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    require(xs[i] > 0.0 && values[i] > 0.0, "log-log slope needs positive data");
    lx[i] = std::log(xs[i]);
    ly[i] = std::log(values[i]);
  }
  return least_squares_slope(lx, ly);
}

}  // namespace hweyl
