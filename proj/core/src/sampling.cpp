#include "hweyl/sampling.hpp"

#include <algorithm>
#include <mutex>
#include <random>
#include <thread>

#include "hweyl/errors.hpp"

namespace hweyl {

namespace {

constexpr std::int64_t kBlock = 4096;
constexpr int kMaxRedraws = 64;

double unit_draw(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

}  // namespace

int resolve_threads(int threads) {
  require(threads >= 0, "thread count must be non-negative");
  if (threads == 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  return threads;
}

std::vector<double> stratified_points(const StratifiedPlan& plan, const std::function<bool(double)>& reject) {
  require(plan.samples >= 1, "stratified sampling needs at least one sample");
  require(plan.hi > plan.lo, "stratified sampling needs a non-empty interval");
  std::vector<double> xs;
  try {
    xs.resize(static_cast<std::size_t>(plan.samples));
  } catch (const std::bad_alloc&) {
    throw ResourceError("cannot allocate sample buffer");
  }
  const double width = (plan.hi - plan.lo) / static_cast<double>(plan.samples);
  for (std::int64_t block = 0; block * kBlock < plan.samples; ++block) {
    std::seed_seq seq{static_cast<std::uint32_t>(plan.seed), static_cast<std::uint32_t>(plan.seed >> 32),
                      static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32)};
    std::mt19937_64 gen(seq);
    const std::int64_t end = std::min(plan.samples, (block + 1) * kBlock);
    for (std::int64_t i = block * kBlock; i < end; ++i) {
      const double left = plan.lo + width * static_cast<double>(i);
      double x = left + width * unit_draw(gen);
      int redraws = 0;
      while (reject && reject(x)) {
        if (++redraws > kMaxRedraws) throw ValidationError("stratum is entirely inside the jump guard band");
        x = left + width * unit_draw(gen);
      }
      xs[static_cast<std::size_t>(i)] = x;
    }
  }
  return xs;
}

std::vector<double> parallel_map(std::span<const double> in, const std::function<double(double)>& f,
                                 int threads) {
  threads = resolve_threads(threads);
  std::vector<double> out(in.size());
  const std::size_t n = in.size();
  if (threads == 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) out[i] = f(in[i]);
    return out;
  }
  const auto workers = static_cast<std::size_t>(threads);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::exception_ptr failure;
  std::mutex failure_mutex;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += workers) out[i] = f(in[i]);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

long double ordered_sum(std::span<const double> values) {
  long double total = 0.0L;
  for (const double v : values) total += v;
  return total;
}

}  // namespace hweyl
