#pragma once

// The divisor-type coefficient
//
//   tau_l(n) = sum_{n = h q, q > h, q = h mod 2} (-1)^{l h} (h/q)^{1/2} (1 - h/q)^{l-1},
//
// (q = 2r - h) which weights the cosine expansion of the error term, together
// with its range-truncated variant and the divisor function d(n).

#include <cstdint>
#include <span>
#include <vector>

namespace hweyl {

// Treatment of the boundary pair q = h (n = h^2). Its term carries the factor
// (1 - h/q)^{l-1}, so the choice only matters for l = 1. The sawtooth sum
// over m <= sqrt x places a stationary point exactly on its upper endpoint
// for every such pair, where it contributes half its weight; `half` is the
// convention under which the cosine expansion reproduces r_psi.
enum class TauEndpoint { excluded, half };

double tau(int l, std::int64_t n, TauEndpoint endpoint = TauEndpoint::excluded);

struct TruncationParams {
  double H = 2.0;
  int J = 0;

  // H = T and J = floor((L - log L) / (2 log 2)) with L = log T.
  static TruncationParams for_height(double T);
};

// tau restricted to h <= H and r <= h (2^{2J+1} + 1/2); the term sitting
// exactly on the upper endpoint (possible only for even h) counts one half.
double tau_truncated(int l, std::int64_t n, const TruncationParams& t,
                     TauEndpoint endpoint = TauEndpoint::excluded);

class TauTable {
 public:
  // Sieves over pairs (h, q) with h q <= limit instead of factoring each n.
  TauTable(int l, std::int64_t limit, TauEndpoint endpoint = TauEndpoint::excluded);

  int l() const noexcept { return l_; }
  TauEndpoint endpoint() const noexcept { return endpoint_; }
  std::int64_t limit() const noexcept { return limit_; }

  double value(std::int64_t n) const { return values_[static_cast<std::size_t>(n)]; }
  std::uint32_t divisor_count(std::int64_t n) const { return divisors_[static_cast<std::size_t>(n)]; }

  // Indexed 0..limit; slot 0 is unused and holds zero.
  std::span<const double> values() const noexcept { return values_; }
  std::span<const std::uint32_t> divisor_counts() const noexcept { return divisors_; }

 private:
  int l_;
  std::int64_t limit_;
  TauEndpoint endpoint_;
  std::vector<double> values_;
  std::vector<std::uint32_t> divisors_;
};

std::vector<std::uint32_t> divisor_count_sieve(std::int64_t limit);

}  // namespace hweyl
