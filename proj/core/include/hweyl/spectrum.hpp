#pragma once

// Exact spectral counting for the (2l+1)-dimensional Heisenberg manifold
// H_l/Gamma with metric diag(I_{2l}, 2*pi), and the O(sqrt x) sawtooth sum
// that approximates its Weyl-law error term.
//
// Everything here works in the variable x = t / (2*pi): the Laplace
// eigenvalue bound t is never used directly.

#include <cstdint>
#include <string>
#include <vector>

#include "hweyl/rational.hpp"

namespace hweyl {

// Exact eigenvalue counts. Wide enough for 2 m^l C(N+l, l) at every
// supported l; any overflow raises ResourceError instead of wrapping.
__extension__ typedef unsigned __int128 Count;

std::string to_string(Count value);
long double to_long_double(Count value);

inline constexpr int kMinDimensionParameter = 1;
inline constexpr int kMaxDimensionParameter = 6;

// The integer l fixing the manifold dimension 2l+1 and all derived constants.
class ManifoldParams {
 public:
  explicit ManifoldParams(int l);

  int l() const noexcept { return l_; }
  int dimension() const noexcept { return 2 * l_ + 1; }

  // 2^{l+1} l! / (2l+1)!, the coefficient of x^{l+1/2} in the Weyl term.
  Rational weyl_coefficient() const;
  // 2^{2-l} / ((l-1)! pi), the amplitude of the cosine expansion.
  long double theta() const;
  // l - 1/4: growth exponent of the error term.
  long double error_exponent() const noexcept { return static_cast<long double>(l_) - 0.25L; }

 private:
  int l_;
};

struct ExactCount {
  Count n_i = 0;   // torus part
  Count n_ii = 0;  // Heisenberg part
  Count total = 0;
};

// One evaluation of the sawtooth sum, normalized by t^{-(l-1/4)}, t = 2 pi x.
struct ErrorTermSample {
  double x = 0.0;
  double r_psi = 0.0;
  double normalized = 0.0;
};

// {u} - 1/2.
double sawtooth(double u);

// Fractional part of x/(2m) - m/2 - l/2, computed from the integer split of x
// so that it stays exact to the last bit of frac(x) for any magnitude of x.
double psi_argument_fraction(double x, std::int64_t m, int l);

// -(4 / (2^l (l-1)!)) sum_{1 <= m <= sqrt x} m (x - m^2)^{l-1} psi(x/(2m) - m/2 - l/2).
double r_psi(const ManifoldParams& p, double x);

ErrorTermSample sample_error_term(const ManifoldParams& p, double x);

// #{(m, n) : m >= 1, n >= 0, m^2 + m(2n + l) <= x} weighted by 2 m^l C(n+l-1, l-1).
Count n_ii_exact(const ManifoldParams& p, double x);

// #{k in Z^{2l} : |k|^2 <= x / (2 pi)} (flat-torus model of the torus part).
Count n_i_exact(const ManifoldParams& p, double x);

ExactCount exact_count(const ManifoldParams& p, double x);

// (2^{l+1} l! / (2l+1)!) x^{l+1/2}.
long double weyl_main_term(const ManifoldParams& p, double x);

// n_i_exact + n_ii_exact - weyl_main_term. Throws JumpPointError when x lies
// in the guard band of a jump of either count.
long double r_exact(const ManifoldParams& p, double x);

// sum over d = m(m + 2n + l), m > 0, n >= 0 of m^l n^{n_power} (0^0 = 1).
Count lattice_weight(const ManifoldParams& p, std::int64_t d, int n_power);

// The weight f_R(d) = lattice_weight(p, d, l - 1).
Count f_r_weight(const ManifoldParams& p, std::int64_t d);

inline constexpr double kJumpGuardRelativeWidth = 1e-9;

// True when x is within the relative guard band of an integer; every jump of
// r_psi and of the Heisenberg count lies on an integer.
bool near_integer_jump(double x, double relative_width = kJumpGuardRelativeWidth);

// True when x is additionally within the guard band of a torus jump, i.e. of a
// point where x / (2 pi) is an integer.
bool near_spectral_jump(double x, double relative_width = kJumpGuardRelativeWidth);

struct CrossCheckPoint {
  double x = 0.0;
  long double r_exact = 0.0L;
  double r_psi = 0.0;
  // |r_exact - r_psi| x^{-(l-1/2)}
  double scaled_deviation = 0.0;
};

// Seeded points x = floor(U) + 1/2 + delta, U uniform on [x_lo, x_hi],
// delta uniform on (-1/4, 1/4), redrawn inside the spectral guard band;
// returned in ascending x.
std::vector<CrossCheckPoint> cross_check_points(const ManifoldParams& p, double x_lo, double x_hi,
                                                std::int64_t samples, std::uint64_t seed);

}  // namespace hweyl
