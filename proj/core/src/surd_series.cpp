#include "hweyl/surd_series.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <unordered_map>

#include "hweyl/errors.hpp"
#include "hweyl/spectrum.hpp"
#include "internal/checked.hpp"

namespace hweyl {

namespace {

constexpr int kMinOrder = 2;
constexpr int kMaxOrder = 9;
constexpr int kMaxHalf = 5;

void validate_series_args(std::span<const double> f, int k, int v, double y) {
  require(k >= kMinOrder && k <= kMaxOrder, "series order k must lie in [2, 9]");
  require(v >= 1 && v < k, "series split v must satisfy 1 <= v < k");
  require(y >= 1.0 && std::isfinite(y), "series cutoff y must be >= 1");
  require(static_cast<double>(f.size()) > std::floor(y), "weight table shorter than the series cutoff");
}

// Squarefree decomposition of every n <= limit.
struct SurdTable {
  std::vector<std::int64_t> kernel;
  std::vector<std::int64_t> multiplier;

  explicit SurdTable(std::int64_t limit)
      : kernel(static_cast<std::size_t>(limit) + 1), multiplier(static_cast<std::size_t>(limit) + 1, 1) {
    for (std::int64_t n = 0; n <= limit; ++n) kernel[static_cast<std::size_t>(n)] = n;
    std::vector<bool> composite(static_cast<std::size_t>(detail::isqrt(limit)) + 1, false);
    for (std::int64_t p = 2; p * p <= limit; ++p) {
      if (composite[static_cast<std::size_t>(p)]) continue;
      for (std::int64_t c = p * p; c * c <= limit; c += p) composite[static_cast<std::size_t>(c)] = true;
      const std::int64_t sq = p * p;
      for (std::int64_t n = sq; n <= limit; n += sq) {
        auto& ker = kernel[static_cast<std::size_t>(n)];
        while (ker % sq == 0) {
          ker /= sq;
          multiplier[static_cast<std::size_t>(n)] *= p;
        }
      }
    }
  }
};

struct Candidate {
  std::int64_t n;
  std::int64_t kernel;
  std::int64_t multiplier;
  double weight;
};

std::vector<Candidate> nonzero_candidates(std::span<const double> f, std::int64_t limit) {
  const SurdTable table(limit);
  std::vector<Candidate> out;
  for (std::int64_t n = 1; n <= limit; ++n) {
    const double fn = f[static_cast<std::size_t>(n)];
    if (fn == 0.0) continue;
    out.push_back({n, table.kernel[static_cast<std::size_t>(n)], table.multiplier[static_cast<std::size_t>(n)],
                   fn / std::pow(static_cast<double>(n), 0.75)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Kernel-class generating functions.

SeriesValue kernel_class_series(std::span<const double> f, int k, int v, double y) {
  const auto limit = static_cast<std::int64_t>(std::floor(y));
  const int left = v;
  const int right = k - v;
  const int max_power = std::max(left, right);
  const SurdTable table(limit);

  // Labeled accumulation over kernels: acc[a][b] sums over ordered fillings of
  // a left slots and b right slots by the kernels seen so far.
  std::vector<std::vector<double>> acc(left + 1, std::vector<double>(right + 1, 0.0));
  std::vector<std::vector<Count>> acc_count(left + 1, std::vector<Count>(right + 1, 0));
  acc[0][0] = 1.0;
  acc_count[0][0] = 1;

  std::array<std::array<Count, kMaxOrder + 1>, kMaxOrder + 1> binom{};
  for (int n = 0; n <= kMaxOrder; ++n) {
    binom[n][0] = 1;
    for (int r = 1; r <= n; ++r) binom[n][r] = binom[n - 1][r - 1] + (r <= n - 1 ? binom[n - 1][r] : 0);
  }

  std::vector<std::vector<double>> powers(max_power + 1);
  std::vector<std::vector<Count>> power_counts(max_power + 1);
  for (std::int64_t s = 1; s <= limit; ++s) {
    if (table.kernel[static_cast<std::size_t>(s)] != s) continue;
    const std::int64_t top = detail::isqrt(limit / s);
    std::vector<double> base(static_cast<std::size_t>(top) + 1, 0.0);
    std::vector<Count> base_count(static_cast<std::size_t>(top) + 1, 0);
    bool any = false;
    for (std::int64_t a = 1; a <= top; ++a) {
      const std::int64_t n = a * a * s;
      const double fn = f[static_cast<std::size_t>(n)];
      if (fn == 0.0) continue;
      base[static_cast<std::size_t>(a)] = fn / std::pow(static_cast<double>(n), 0.75);
      base_count[static_cast<std::size_t>(a)] = 1;
      any = true;
    }
    if (!any) continue;

    // powers[p][t]: ordered p-tuples of multipliers summing to t.
    powers[1] = base;
    power_counts[1] = base_count;
    for (int p = 2; p <= max_power; ++p) {
      const auto& prev = powers[p - 1];
      const auto& prev_count = power_counts[p - 1];
      std::vector<double> cur(prev.size() + base.size() - 1, 0.0);
      std::vector<Count> cur_count(cur.size(), 0);
      for (std::size_t i = 0; i < prev.size(); ++i) {
        if (prev_count[i] == 0) continue;
        for (std::size_t j = 1; j < base.size(); ++j) {
          if (base_count[j] == 0) continue;
          cur[i + j] += prev[i] * base[j];
          cur_count[i + j] = detail::checked_add(cur_count[i + j], prev_count[i]);
        }
      }
      powers[p] = std::move(cur);
      power_counts[p] = std::move(cur_count);
    }

    // balanced[p][q]: p left and q right slots of this kernel whose
    // multipliers cancel.
    std::array<std::array<double, kMaxOrder + 1>, kMaxOrder + 1> balanced{};
    std::array<std::array<Count, kMaxOrder + 1>, kMaxOrder + 1> balanced_count{};
    for (int p = 1; p <= left; ++p) {
      for (int q = 1; q <= right; ++q) {
        const std::size_t len = std::min(powers[p].size(), powers[q].size());
        double sum = 0.0;
        Count cnt = 0;
        for (std::size_t t = 0; t < len; ++t) {
          sum += powers[p][t] * powers[q][t];
          cnt = detail::checked_add(cnt, detail::checked_mul(power_counts[p][t], power_counts[q][t]));
        }
        balanced[p][q] = sum;
        balanced_count[p][q] = cnt;
      }
    }

    for (int a = left; a >= 1; --a) {
      for (int b = right; b >= 1; --b) {
        double add = 0.0;
        Count add_count = 0;
        for (int p = 1; p <= a; ++p) {
          for (int q = 1; q <= b; ++q) {
            if (balanced_count[p][q] == 0) continue;
            const Count ways = binom[a][p] * binom[b][q];
            add += acc[a - p][b - q] * balanced[p][q] * static_cast<double>(ways);
            add_count = detail::checked_add(
                add_count, detail::checked_mul(detail::checked_mul(acc_count[a - p][b - q], balanced_count[p][q]), ways));
          }
        }
        acc[a][b] += add;
        acc_count[a][b] = detail::checked_add(acc_count[a][b], add_count);
      }
    }
  }

  SeriesValue out;
  out.k = k;
  out.v = v;
  out.y = y;
  out.value = acc[left][right];
  if (acc_count[left][right] > std::numeric_limits<std::uint64_t>::max()) {
    throw ResourceError("solution count exceeds 64 bits");
  }
  out.term_count = static_cast<std::uint64_t>(acc_count[left][right]);
  return out;
}

// ---------------------------------------------------------------------------
// Meet in the middle.

// Sparse kernel -> signed multiplier vector, sorted by kernel, zeros dropped.
struct SparseKey {
  std::array<std::int64_t, kMaxHalf> kernel{};
  std::array<std::int64_t, kMaxHalf> coef{};
  int size = 0;

  void add(std::int64_t s, std::int64_t c) {
    int i = 0;
    while (i < size && kernel[i] < s) ++i;
    if (i < size && kernel[i] == s) {
      coef[i] += c;
      if (coef[i] == 0) {
        for (int j = i; j + 1 < size; ++j) {
          kernel[j] = kernel[j + 1];
          coef[j] = coef[j + 1];
        }
        --size;
      }
      return;
    }
    for (int j = size; j > i; --j) {
      kernel[j] = kernel[j - 1];
      coef[j] = coef[j - 1];
    }
    kernel[i] = s;
    coef[i] = c;
    ++size;
  }

  SparseKey negated() const {
    SparseKey out = *this;
    for (int i = 0; i < size; ++i) out.coef[i] = -coef[i];
    return out;
  }

  friend bool operator==(const SparseKey& a, const SparseKey& b) {
    if (a.size != b.size) return false;
    for (int i = 0; i < a.size; ++i) {
      if (a.kernel[i] != b.kernel[i] || a.coef[i] != b.coef[i]) return false;
    }
    return true;
  }
};

struct SparseKeyHash {
  std::size_t operator()(const SparseKey& key) const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ static_cast<std::uint64_t>(key.size);
    for (int i = 0; i < key.size; ++i) {
      h ^= static_cast<std::uint64_t>(key.kernel[i]) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      h ^= static_cast<std::uint64_t>(key.coef[i]) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

// Calls `visit(key, weight, indices)` for every assignment of candidates to
// slots [first, last), with slot signs from `pattern`.
void enumerate_half(const std::vector<Candidate>& cands, const SignPattern& pattern, int first, int last,
                    const std::function<void(const SparseKey&, double, const std::vector<std::size_t>&)>& visit) {
  std::vector<std::size_t> idx;
  idx.reserve(static_cast<std::size_t>(last - first));
  std::function<void(int, const SparseKey&, double)> rec = [&](int slot, const SparseKey& key, double weight) {
    if (slot == last) {
      visit(key, weight, idx);
      return;
    }
    const int sign = pattern.sign(slot);
    for (std::size_t i = 0; i < cands.size(); ++i) {
      SparseKey next = key;
      next.add(cands[i].kernel, sign * cands[i].multiplier);
      idx.push_back(i);
      rec(slot + 1, next, weight * cands[i].weight);
      idx.pop_back();
    }
  };
  rec(first, SparseKey{}, 1.0);
}

void check_mitm_budget(std::size_t candidates, int map_slots, int stream_slots, const SeriesBudget& budget,
                       std::size_t bytes_per_entry) {
  const double c = static_cast<double>(candidates);
  const double map_entries = std::pow(c, map_slots);
  if (map_entries * static_cast<double>(bytes_per_entry) > static_cast<double>(budget.max_map_bytes)) {
    throw ResourceError("half-sum map would exceed the memory budget; reduce y");
  }
  if (std::pow(c, stream_slots) > budget.max_streamed_tuples) {
    throw ResourceError("streamed half exceeds the enumeration budget; reduce y");
  }
}

SeriesValue mitm_series(std::span<const double> f, int k, int v, double y, const SeriesBudget& budget) {
  const auto limit = static_cast<std::int64_t>(std::floor(y));
  const auto cands = nonzero_candidates(f, limit);
  const SignPattern pattern = SignPattern::for_split(k, v);
  const int map_slots = k / 2;

  struct Acc {
    double weight = 0.0;
    std::uint64_t count = 0;
  };
  check_mitm_budget(cands.size(), map_slots, k - map_slots, budget, sizeof(SparseKey) + sizeof(Acc) + 32);

  std::unordered_map<SparseKey, Acc, SparseKeyHash> half;
  enumerate_half(cands, pattern, 0, map_slots, [&](const SparseKey& key, double w, const std::vector<std::size_t>&) {
    if (key.size > k - map_slots) return;
    auto& slot = half[key];
    slot.weight += w;
    ++slot.count;
  });

  double value = 0.0;
  std::uint64_t count = 0;
  enumerate_half(cands, pattern, map_slots, k, [&](const SparseKey& key, double w, const std::vector<std::size_t>&) {
    if (key.size > map_slots) return;
    const auto it = half.find(key.negated());
    if (it == half.end()) return;
    value += it->second.weight * w;
    count += it->second.count;
  });

  SeriesValue out;
  out.k = k;
  out.v = v;
  out.y = y;
  out.value = value;
  out.term_count = count;
  return out;
}

}  // namespace

CanonicalSurd canonical_surd(std::int64_t n) {
  require(n >= 1, "canonical_surd requires n >= 1");
  CanonicalSurd out;
  std::int64_t rest = n;
  for (std::int64_t p = 2; p * p <= rest; ++p) {
    int e = 0;
    while (rest % p == 0) {
      rest /= p;
      ++e;
    }
    for (int i = 0; i < e / 2; ++i) out.multiplier *= p;
    if (e % 2 == 1) out.kernel *= p;
  }
  out.kernel *= rest;
  return out;
}

SignPattern::SignPattern(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  for (const auto b : bits_) require(b <= 1, "sign pattern bits must be 0 or 1");
}

SignPattern SignPattern::for_split(int k, int v) {
  require(k >= 2 && v >= 1 && v < k, "sign pattern needs 1 <= v < k");
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(k - 1));
  for (int slot = 1; slot < k; ++slot) bits[static_cast<std::size_t>(slot - 1)] = slot < v ? 0 : 1;
  return SignPattern(std::move(bits));
}

int SignPattern::weight() const noexcept {
  int w = 0;
  for (const auto b : bits_) w += b;
  return w;
}

bool surd_relation_holds(std::span<const std::int64_t> ns, const SignPattern& pattern) {
  require(static_cast<int>(ns.size()) == pattern.k(), "tuple length must match the sign pattern");
  std::map<std::int64_t, std::int64_t> per_kernel;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const CanonicalSurd c = canonical_surd(ns[i]);
    per_kernel[c.kernel] += pattern.sign(static_cast<int>(i)) * c.multiplier;
  }
  return std::all_of(per_kernel.begin(), per_kernel.end(), [](const auto& kv) { return kv.second == 0; });
}

SeriesValue s_kv(std::span<const double> f, int k, int v, double y, SeriesMethod method,
                 const SeriesBudget& budget) {
  validate_series_args(f, k, v, y);
  if (method == SeriesMethod::meet_in_the_middle) return mitm_series(f, k, v, y, budget);
  return kernel_class_series(f, k, v, y);
}

std::vector<std::vector<std::int64_t>> surd_solutions(std::span<const double> f, int k, int v, double y,
                                                      const SeriesBudget& budget) {
  validate_series_args(f, k, v, y);
  const auto limit = static_cast<std::int64_t>(std::floor(y));
  const auto cands = nonzero_candidates(f, limit);
  const SignPattern pattern = SignPattern::for_split(k, v);
  const int map_slots = k / 2;
  check_mitm_budget(cands.size(), map_slots, k - map_slots, budget,
                    sizeof(SparseKey) + 32 + sizeof(std::int64_t) * static_cast<std::size_t>(map_slots));

  std::unordered_map<SparseKey, std::vector<std::size_t>, SparseKeyHash> half;
  enumerate_half(cands, pattern, 0, map_slots, [&](const SparseKey& key, double, const std::vector<std::size_t>& idx) {
    if (key.size > k - map_slots) return;
    auto& flat = half[key];
    flat.insert(flat.end(), idx.begin(), idx.end());
  });

  std::vector<std::vector<std::int64_t>> out;
  enumerate_half(cands, pattern, map_slots, k, [&](const SparseKey& key, double, const std::vector<std::size_t>& idx) {
    if (key.size > map_slots) return;
    const auto it = half.find(key.negated());
    if (it == half.end()) return;
    const auto& flat = it->second;
    for (std::size_t start = 0; start < flat.size(); start += static_cast<std::size_t>(map_slots)) {
      std::vector<std::int64_t> tuple;
      tuple.reserve(static_cast<std::size_t>(k));
      for (int j = 0; j < map_slots; ++j) tuple.push_back(cands[flat[start + static_cast<std::size_t>(j)]].n);
      for (const auto i : idx) tuple.push_back(cands[i].n);
      out.push_back(std::move(tuple));
    }
  });
  std::sort(out.begin(), out.end());
  return out;
}

double cos_quarter_pi(int j) {
  static constexpr double kTable[8] = {1.0, std::numbers::sqrt2 / 2, 0.0, -std::numbers::sqrt2 / 2,
                                       -1.0, -std::numbers::sqrt2 / 2, 0.0, std::numbers::sqrt2 / 2};
  return kTable[((j % 8) + 8) % 8];
}

double b_k(std::span<const double> f, int k, double y, SeriesMethod method, const SeriesBudget& budget) {
  require(k >= kMinOrder && k <= kMaxOrder, "B_k requires 2 <= k <= 9");
  double total = 0.0;
  double binom = 1.0;  // C(k-1, v)
  for (int v = 1; v < k; ++v) {
    binom = binom * static_cast<double>(k - v) / static_cast<double>(v);
    const double c = cos_quarter_pi(k - 2 * v);
    if (c == 0.0) continue;
    total += binom * s_kv(f, k, v, y, method, budget).value * c;
  }
  return total;
}

Rational s_k_exponent(int k) {
  require(k >= 2 && k <= 60, "s(k) requires 2 <= k <= 60");
  return Rational(std::int64_t{1} << (k - 2)) + Rational(k - 6, 4);
}

double default_series_cutoff(int k) {
  require(k >= kMinOrder && k <= kMaxOrder, "series order k must lie in [2, 9]");
  if (k <= 4) return 4096.0;
  if (k <= 6) return 512.0;
  return 128.0;
}

}  // namespace hweyl
