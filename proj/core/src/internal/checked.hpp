#pragma once

#include <cmath>
#include <cstdint>

#include "hweyl/errors.hpp"
#include "hweyl/spectrum.hpp"

namespace hweyl::detail {

inline Count checked_mul(Count a, Count b) {
  Count out = 0;
  if (__builtin_mul_overflow(a, b, &out)) throw ResourceError("exact count overflowed 128 bits");
  return out;
}

inline Count checked_add(Count a, Count b) {
  Count out = 0;
  if (__builtin_add_overflow(a, b, &out)) throw ResourceError("exact count overflowed 128 bits");
  return out;
}

// C(n, k) for small k, exact; each partial product C(n-k+i, i) is an integer.
inline Count binomial(Count n, int k) {
  Count c = 1;
  for (int i = 1; i <= k; ++i) {
    c = checked_mul(c, n - static_cast<Count>(k) + static_cast<Count>(i)) / static_cast<Count>(i);
  }
  return c;
}

inline std::int64_t isqrt(std::int64_t n) {
  if (n <= 0) return 0;
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

}  // namespace hweyl::detail
