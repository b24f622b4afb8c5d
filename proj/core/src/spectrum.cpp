#include "hweyl/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "hweyl/errors.hpp"
#include "internal/checked.hpp"

namespace hweyl {

std::string to_string(Count value) {
  if (value == 0) return "0";
  std::string digits;
  while (value != 0) {
    digits.push_back(static_cast<char>('0' + static_cast<int>(value % 10)));
    value /= 10;
  }
  std::reverse(digits.begin(), digits.end());
  return digits;
}

long double to_long_double(Count value) { return static_cast<long double>(value); }

ManifoldParams::ManifoldParams(int l) : l_(l) {
  require(l >= kMinDimensionParameter && l <= kMaxDimensionParameter,
          "dimension parameter l must lie in [1, 6], got " + std::to_string(l));
}

Rational ManifoldParams::weyl_coefficient() const {
  std::int64_t num = std::int64_t{1} << (l_ + 1);
  for (int i = 2; i <= l_; ++i) num *= i;
  std::int64_t den = 1;
  for (int i = 2; i <= 2 * l_ + 1; ++i) den *= i;
  return Rational(num, den);
}

long double ManifoldParams::theta() const {
  long double factorial = 1.0L;
  for (int i = 2; i <= l_ - 1; ++i) factorial *= i;
  return std::ldexp(1.0L, 2 - l_) / (factorial * std::numbers::pi_v<long double>);
}

double sawtooth(double u) {
  const double frac = u - std::floor(u);
  // u - floor(u) can round up to 1 for tiny negative u.
  return (frac >= 1.0 ? 0.0 : frac) - 0.5;
}

double psi_argument_fraction(double x, std::int64_t m, int l) {
  const double whole = std::floor(x);
  require(whole < 0x1p62, "x too large for exact argument reduction");
  const auto xi = static_cast<std::int64_t>(whole);
  const double xf = x - whole;
  const std::int64_t period = 2 * m;
  std::int64_t rem = xi % period;
  if (rem < 0) rem += period;
  double a = (static_cast<double>(rem) + xf) / static_cast<double>(period);
  if (((m + l) & 1) != 0) a += 0.5;
  while (a >= 1.0) a -= 1.0;
  return a;
}

double r_psi(const ManifoldParams& p, double x) {
  require(x >= 0.0 && std::isfinite(x), "r_psi requires finite x >= 0");
  if (x < 1.0) return 0.0;
  const int l = p.l();
  double factorial = 1.0;
  for (int i = 2; i <= l - 1; ++i) factorial *= i;
  const double coefficient = -4.0 / (std::ldexp(1.0, l) * factorial);

  const std::int64_t m_max = detail::isqrt(static_cast<std::int64_t>(std::floor(x)));
  double sum = 0.0;
  for (std::int64_t m = 1; m <= m_max; ++m) {
    const double md = static_cast<double>(m);
    const double base = x - md * md;
    double weight = md;
    for (int i = 1; i < l; ++i) weight *= base;
    sum += weight * (psi_argument_fraction(x, m, l) - 0.5);
  }
  return coefficient * sum;
}

ErrorTermSample sample_error_term(const ManifoldParams& p, double x) {
  require(x >= 1.0, "error-term samples require x >= 1");
  ErrorTermSample s;
  s.x = x;
  s.r_psi = r_psi(p, x);
  const long double t = 2.0L * std::numbers::pi_v<long double> * x;
  s.normalized = static_cast<double>(s.r_psi * std::pow(t, -p.error_exponent()));
  return s;
}

Count n_ii_exact(const ManifoldParams& p, double x) {
  require(x >= 0.0 && std::isfinite(x), "n_ii_exact requires finite x >= 0");
  require(x < 0x1p62, "x too large for exact counting");
  const auto bound = static_cast<std::int64_t>(std::floor(x));
  const int l = p.l();
  Count total = 0;
  for (std::int64_t m = 1; m * (m + l) <= bound; ++m) {
    const std::int64_t q = bound / m - m - l;
    const std::int64_t n_max = q / 2;
    const Count binom = detail::binomial(static_cast<Count>(n_max) + l, l);
    Count weight = 2;
    for (int i = 0; i < l; ++i) weight = detail::checked_mul(weight, static_cast<Count>(m));
    total = detail::checked_add(total, detail::checked_mul(weight, binom));
  }
  return total;
}

Count n_i_exact(const ManifoldParams& p, double x) {
  require(x >= 0.0 && std::isfinite(x), "n_i_exact requires finite x >= 0");
  const long double radius_sq = static_cast<long double>(x) / (2.0L * std::numbers::pi_v<long double>);
  require(radius_sq < 1e8L, "n_i_exact is intended for modest x");
  const auto limit = static_cast<std::size_t>(std::floor(radius_sq));

  // reps[n] = #{k in Z^d : |k|^2 = n}, built one coordinate at a time.
  std::vector<Count> one(limit + 1, 0);
  for (std::size_t j = 0; j * j <= limit; ++j) one[j * j] = (j == 0) ? 1 : 2;
  std::vector<Count> reps = one;
  std::vector<Count> next(limit + 1);
  for (int dim = 2; dim <= 2 * p.l(); ++dim) {
    std::fill(next.begin(), next.end(), Count{0});
    for (std::size_t n = 0; n <= limit; ++n) {
      if (reps[n] == 0) continue;
      for (std::size_t j = 0; n + j * j <= limit; ++j) {
        next[n + j * j] = detail::checked_add(next[n + j * j], detail::checked_mul(reps[n], one[j * j]));
      }
    }
    reps.swap(next);
  }
  Count total = 0;
  for (const Count r : reps) total = detail::checked_add(total, r);
  return total;
}

ExactCount exact_count(const ManifoldParams& p, double x) {
  ExactCount c;
  c.n_i = n_i_exact(p, x);
  c.n_ii = n_ii_exact(p, x);
  c.total = detail::checked_add(c.n_i, c.n_ii);
  return c;
}

long double weyl_main_term(const ManifoldParams& p, double x) {
  require(x >= 0.0, "weyl_main_term requires x >= 0");
  return p.weyl_coefficient().value() * std::pow(static_cast<long double>(x), p.l() + 0.5L);
}

long double r_exact(const ManifoldParams& p, double x) {
  require(x >= 0.0 && std::isfinite(x), "r_exact requires finite x >= 0");
  if (near_spectral_jump(x)) {
    throw JumpPointError("x lies within the guard band of a spectral jump", x);
  }
  const ExactCount c = exact_count(p, x);
  return to_long_double(c.total) - weyl_main_term(p, x);
}

Count lattice_weight(const ManifoldParams& p, std::int64_t d, int n_power) {
  require(d >= 1, "lattice_weight requires d >= 1");
  require(n_power >= 0, "lattice_weight requires a non-negative power of n");
  const int l = p.l();
  Count total = 0;
  for (std::int64_t m = 1; m * (m + l) <= d; ++m) {
    if (d % m != 0) continue;
    const std::int64_t q = d / m - m - l;
    if (q < 0 || (q & 1) != 0) continue;
    const std::int64_t n = q / 2;
    Count term = 1;
    for (int i = 0; i < l; ++i) term = detail::checked_mul(term, static_cast<Count>(m));
    for (int i = 0; i < n_power; ++i) term = detail::checked_mul(term, static_cast<Count>(n));
    total = detail::checked_add(total, term);
  }
  return total;
}

Count f_r_weight(const ManifoldParams& p, std::int64_t d) { return lattice_weight(p, d, p.l() - 1); }

bool near_integer_jump(double x, double relative_width) {
  const double width = relative_width * std::max(std::fabs(x), 1.0);
  return std::fabs(x - std::nearbyint(x)) <= width;
}

bool near_spectral_jump(double x, double relative_width) {
  if (near_integer_jump(x, relative_width)) return true;
  const long double scaled = static_cast<long double>(x) / (2.0L * std::numbers::pi_v<long double>);
  const long double width = relative_width * std::max(std::fabs(scaled), 1.0L);
  return std::fabs(scaled - std::nearbyint(scaled)) <= width;
}

std::vector<CrossCheckPoint> cross_check_points(const ManifoldParams& p, double x_lo, double x_hi,
                                                std::int64_t samples, std::uint64_t seed) {
  require(x_lo >= 1.0 && x_hi > x_lo + 1.0, "cross check needs 1 <= x_lo < x_hi - 1");
  require(samples >= 1, "cross check needs at least one sample");
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> base(x_lo, x_hi - 1.0);
  std::uniform_real_distribution<double> offset(-0.25, 0.25);

  std::vector<CrossCheckPoint> out;
  out.reserve(static_cast<std::size_t>(samples));
  while (static_cast<std::int64_t>(out.size()) < samples) {
    const double x = std::floor(base(gen)) + 0.5 + offset(gen);
    if (near_spectral_jump(x)) continue;
    CrossCheckPoint c;
    c.x = x;
    c.r_exact = r_exact(p, x);
    c.r_psi = r_psi(p, x);
    c.scaled_deviation = static_cast<double>(std::fabs(c.r_exact - c.r_psi) *
                                             std::pow(static_cast<long double>(x), -(p.l() - 0.5L)));
    out.push_back(c);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.x < b.x; });
  return out;
}

}  // namespace hweyl
