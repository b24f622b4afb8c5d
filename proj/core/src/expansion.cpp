#include "hweyl/expansion.hpp"

#include <cmath>
#include <numbers>

#include "hweyl/errors.hpp"
#include "hweyl/sampling.hpp"

namespace hweyl {

PsiFourier psi_fourier(double u, double H) {
  require(H >= 2.0 && std::isfinite(H), "psi_fourier requires H >= 2");
  require(std::isfinite(u), "psi_fourier requires finite u");
  const double frac = u - std::floor(u);
  const auto terms = static_cast<std::int64_t>(std::floor(H));
  double sum = 0.0;
  for (std::int64_t h = 1; h <= terms; ++h) {
    const double hd = static_cast<double>(h);
    sum += std::sin(2.0 * std::numbers::pi * hd * frac) / hd;
  }
  PsiFourier out;
  out.approx = -sum / std::numbers::pi;
  const double dist = std::min(frac, 1.0 - frac);
  out.bound = dist == 0.0 ? 1.0 : std::min(1.0, 1.0 / (H * dist));
  return out;
}

ExpansionParams::ExpansionParams(int l, double y) : l_(l), y_(y), theta_(ManifoldParams(l).theta()) {
  require(y >= 1.0 && std::isfinite(y), "expansion length y must be >= 1");
}

double reduced_phase(double x, std::int64_t n) {
  const long double root = std::sqrt(static_cast<long double>(x) * static_cast<long double>(n));
  const long double frac = root - std::floor(root);
  return static_cast<double>(2.0L * std::numbers::pi_v<long double> * frac - std::numbers::pi_v<long double> / 4.0L);
}

CosineExpansion::CosineExpansion(const ExpansionParams& params, const TauTable& tau) : params_(params) {
  require(tau.l() == params.l(), "tau table built for a different l");
  const auto terms = static_cast<std::int64_t>(std::floor(params.y()));
  require(tau.limit() >= terms, "tau table shorter than the expansion length");
  for (std::int64_t n = 1; n <= terms; ++n) {
    const double t = tau.value(n);
    if (t == 0.0) continue;
    index_.push_back(n);
    coefficient_.push_back(t * std::pow(static_cast<double>(n), -0.75));
  }
}

double CosineExpansion::operator()(double x) const {
  require(x >= 1.0, "F_1 requires x >= 1");
  double sum = 0.0;
  for (std::size_t i = 0; i < index_.size(); ++i) sum += coefficient_[i] * std::cos(reduced_phase(x, index_[i]));
  return static_cast<double>(params_.theta() * std::pow(static_cast<long double>(x), params_.l() - 0.25L)) * sum;
}

double CosineExpansion::derivative(double x) const {
  require(x >= 1.0, "F_1 requires x >= 1");
  const double a = params_.l() - 0.25;
  double cos_sum = 0.0;
  double sin_sum = 0.0;
  for (std::size_t i = 0; i < index_.size(); ++i) {
    const double phase = reduced_phase(x, index_[i]);
    cos_sum += coefficient_[i] * std::cos(phase);
    sin_sum += coefficient_[i] * std::sin(phase) * std::sqrt(static_cast<double>(index_[i]));
  }
  const double theta = static_cast<double>(params_.theta());
  // d/dx cos(2 pi sqrt(x n) - pi/4) = -sin(.) pi sqrt(n) / sqrt(x)
  return theta * (a * std::pow(x, a - 1.0) * cos_sum - std::pow(x, a) * std::numbers::pi * sin_sum / std::sqrt(x));
}

double f1(const ExpansionParams& p, double x, const TauTable& tau) { return CosineExpansion(p, tau)(x); }

double max_expansion_length(double T) {
  require(T > 1.0, "T must exceed 1");
  const double L = std::log(T);
  return T / (L * L);
}

RemainderStatistic remainder_mean_square(const ManifoldParams& p, double T, double y, std::int64_t samples,
                                         std::uint64_t seed, int threads, TauEndpoint endpoint) {
  require(T >= 1e3, "remainder statistic requires T >= 1e3");
  require(y >= 1.0 && y <= max_expansion_length(T) * (1.0 + 1e-12), "remainder statistic requires 1 <= y <= T / log^2 T");
  require(samples >= 1000, "remainder statistic requires at least 1e3 samples");
  const TauTable tau(p.l(), static_cast<std::int64_t>(std::floor(y)), endpoint);
  const CosineExpansion expansion(ExpansionParams(p.l(), y), tau);
  const double exponent = 2.0 * p.l() - 0.5;

  const auto xs = stratified_points({T, 2.0 * T, samples, seed}, [](double x) { return near_integer_jump(x); });
  const auto values = parallel_map(
      xs,
      [&](double x) {
        const double diff = r_psi(p, x) - expansion(x);
        return diff * diff * std::pow(x, -exponent);
      },
      threads);

  RemainderStatistic out;
  out.emp = static_cast<double>(ordered_sum(values) / static_cast<long double>(values.size()));
  const double L = std::log(T);
  out.ref = std::pow(y, -0.5) * L * L * L;
  return out;
}

}  // namespace hweyl
