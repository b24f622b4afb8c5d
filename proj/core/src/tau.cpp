#include "hweyl/tau.hpp"

#include <cmath>
#include <new>

#include "hweyl/errors.hpp"

namespace hweyl {

namespace {

__extension__ typedef __int128 Wide;

double pair_term(int l, std::int64_t h, std::int64_t q) {
  const double ratio = static_cast<double>(h) / static_cast<double>(q);
  double term = std::sqrt(ratio);
  const double shrink = 1.0 - ratio;
  for (int i = 1; i < l; ++i) term *= shrink;
  return ((static_cast<std::int64_t>(l) * h) & 1) != 0 ? -term : term;
}

double endpoint_term(int l, std::int64_t n, TauEndpoint endpoint) {
  if (endpoint == TauEndpoint::excluded) return 0.0;
  const std::int64_t h = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(n))));
  return h * h == n ? 0.5 * pair_term(l, h, h) : 0.0;
}

}  // namespace

double tau(int l, std::int64_t n, TauEndpoint endpoint) {
  require(l >= 1, "tau requires l >= 1");
  require(n >= 1, "tau requires n >= 1");
  double total = 0.0;
  for (std::int64_t h = 1; h * h < n; ++h) {
    if (n % h != 0) continue;
    const std::int64_t q = n / h;
    if (((q - h) & 1) != 0) continue;
    total += pair_term(l, h, q);
  }
  return total + endpoint_term(l, n, endpoint);
}

TruncationParams TruncationParams::for_height(double T) {
  require(T > std::exp(1.0), "truncation height must exceed e");
  const double L = std::log(T);
  TruncationParams t;
  t.H = T;
  t.J = static_cast<int>(std::floor((L - std::log(L)) / (2.0 * std::log(2.0))));
  return t;
}

double tau_truncated(int l, std::int64_t n, const TruncationParams& t, TauEndpoint endpoint) {
  require(l >= 1, "tau_truncated requires l >= 1");
  require(n >= 1, "tau_truncated requires n >= 1");
  require(t.J >= 0, "truncation J must be non-negative");
  // r <= h (2^{2J+1} + 1/2)  <=>  q <= h 2^{2J+2}.
  const int shift = 2 * t.J + 2;
  double total = 0.0;
  for (std::int64_t h = 1; h * h < n && static_cast<double>(h) <= t.H; ++h) {
    if (n % h != 0) continue;
    const std::int64_t q = n / h;
    if (((q - h) & 1) != 0) continue;
    if (shift < 64) {
      const Wide q_max = static_cast<Wide>(h) << shift;
      if (q > q_max) continue;
      if (q == q_max) {
        total += 0.5 * pair_term(l, h, q);
        continue;
      }
    }
    total += pair_term(l, h, q);
  }
  const auto root = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(n))));
  if (static_cast<double>(root) <= t.H) total += endpoint_term(l, n, endpoint);
  return total;
}

std::vector<std::uint32_t> divisor_count_sieve(std::int64_t limit) {
  require(limit >= 1, "divisor sieve requires limit >= 1");
  std::vector<std::uint32_t> d;
  try {
    d.assign(static_cast<std::size_t>(limit) + 1, 0);
  } catch (const std::bad_alloc&) {
    throw ResourceError("cannot allocate divisor table");
  }
  for (std::int64_t a = 1; a <= limit; ++a) {
    for (std::int64_t b = a; b <= limit; b += a) ++d[static_cast<std::size_t>(b)];
  }
  return d;
}

TauTable::TauTable(int l, std::int64_t limit, TauEndpoint endpoint) : l_(l), limit_(limit), endpoint_(endpoint) {
  require(l >= 1, "tau table requires l >= 1");
  require(limit >= 1, "tau table requires limit >= 1");
  try {
    values_.assign(static_cast<std::size_t>(limit) + 1, 0.0);
  } catch (const std::bad_alloc&) {
    throw ResourceError("cannot allocate tau table");
  }
  // Ascending h reproduces the per-n summation order of tau().
  for (std::int64_t h = 1; h * h <= limit; ++h) {
    for (std::int64_t q = h + 2; h * q <= limit; q += 2) {
      values_[static_cast<std::size_t>(h * q)] += pair_term(l, h, q);
    }
    if (endpoint == TauEndpoint::half) values_[static_cast<std::size_t>(h * h)] += 0.5 * pair_term(l, h, h);
  }
  divisors_ = divisor_count_sieve(limit);
}

}  // namespace hweyl
