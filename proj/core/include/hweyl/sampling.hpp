#pragma once

// Seeded stratified sampling over an interval and a deterministic parallel
// map. Results never depend on the number of worker threads: random draws are
// keyed by fixed-size stratum blocks, and reductions run in index order.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace hweyl {

struct StratifiedPlan {
  double lo = 0.0;
  double hi = 1.0;
  std::int64_t samples = 1;
  std::uint64_t seed = 0;
};

// One uniform draw per equal-width stratum of [lo, hi]. Draws for which
// `reject` returns true are redrawn inside the same stratum.
std::vector<double> stratified_points(const StratifiedPlan& plan,
                                      const std::function<bool(double)>& reject = {});

// out[i] = f(in[i]) evaluated on `threads` workers (0 selects the hardware
// concurrency).
std::vector<double> parallel_map(std::span<const double> in, const std::function<double(double)>& f,
                                 int threads);

// Plain left-to-right sum; the one reduction every estimator uses.
long double ordered_sum(std::span<const double> values);

int resolve_threads(int threads);

}  // namespace hweyl
