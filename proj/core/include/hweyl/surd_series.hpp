#pragma once

// Exact detection of additive relations between square roots and the
// truncated singular series
//
//   s_{k;v}(f; y) = sum_{sqrt n_1 + ... + sqrt n_v = sqrt n_{v+1} + ... + sqrt n_k, n_i <= y}
//                   f(n_1) ... f(n_k) / (n_1 ... n_k)^{3/4},
//
// together with the cosine-weighted combination B_k(f; y).
//
// A relation between square roots is decided in integers only: writing
// n = m^2 s with s squarefree, the roots sqrt s of distinct kernels are linearly
// independent over Q, so the relation holds iff for every kernel the signed
// multipliers cancel.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hweyl/rational.hpp"

namespace hweyl {

struct CanonicalSurd {
  std::int64_t multiplier = 1;  // m
  std::int64_t kernel = 1;      // s, squarefree

  friend bool operator==(const CanonicalSurd&, const CanonicalSurd&) = default;
};

CanonicalSurd canonical_surd(std::int64_t n);

// The vector i in {0,1}^{k-1}: slot j+1 carries sign (-1)^{bits[j]}, slot 0 is
// always positive.
class SignPattern {
 public:
  explicit SignPattern(std::vector<std::uint8_t> bits);

  // sqrt n_1 + ... + sqrt n_v - sqrt n_{v+1} - ... - sqrt n_k.
  static SignPattern for_split(int k, int v);

  int k() const noexcept { return static_cast<int>(bits_.size()) + 1; }
  int weight() const noexcept;
  int sign(int slot) const { return (slot == 0 || bits_[static_cast<std::size_t>(slot - 1)] == 0) ? 1 : -1; }
  std::span<const std::uint8_t> bits() const noexcept { return bits_; }

 private:
  std::vector<std::uint8_t> bits_;
};

// sqrt n_1 + (-1)^{i_1} sqrt n_2 + ... + (-1)^{i_{k-1}} sqrt n_k == 0, decided exactly.
bool surd_relation_holds(std::span<const std::int64_t> ns, const SignPattern& pattern);

enum class SeriesMethod {
  // Per-kernel generating functions: each kernel class must balance on its
  // own, so the series factorizes into a labeled product over kernels.
  kernel_classes,
  // Associative map from half-tuple signed kernel vectors, joined on negated
  // keys.
  meet_in_the_middle,
};

struct SeriesBudget {
  std::size_t max_map_bytes = std::size_t{1} << 30;
  double max_streamed_tuples = 4e9;
};

struct SeriesValue {
  int k = 0;
  int v = 0;
  double y = 0.0;
  double value = 0.0;
  // Solution tuples whose weights f(n_i) are all nonzero.
  std::uint64_t term_count = 0;
};

// `f` is indexed 0..N with N >= floor(y); f[0] is ignored.
SeriesValue s_kv(std::span<const double> f, int k, int v, double y,
                 SeriesMethod method = SeriesMethod::kernel_classes, const SeriesBudget& budget = {});

// All solution tuples with nonzero weights, in lexicographic order, enumerated
// by the meet-in-the-middle join.
std::vector<std::vector<std::int64_t>> surd_solutions(std::span<const double> f, int k, int v, double y,
                                                      const SeriesBudget& budget = {});

// sum_{v=1}^{k-1} C(k-1, v) s_{k;v}(f; y) cos(pi (k - 2v) / 4).
double b_k(std::span<const double> f, int k, double y, SeriesMethod method = SeriesMethod::kernel_classes,
           const SeriesBudget& budget = {});

// cos(pi j / 4) with exact zeros.
double cos_quarter_pi(int j);

// s(k) = 2^{k-2} + (k - 6)/4.
Rational s_k_exponent(int k);

// Desk-scale cutoff: 4096 for k <= 4, 512 for k <= 6, 128 for k <= 9.
double default_series_cutoff(int k);

}  // namespace hweyl
