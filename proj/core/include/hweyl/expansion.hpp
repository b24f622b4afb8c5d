#pragma once

// Finite Fourier approximation of the sawtooth and the truncated cosine
// expansion
//
//   F_1(x) = theta_l x^{l-1/4} sum_{n <= y} tau_l(n) n^{-3/4} cos(2 pi sqrt(x n) - pi/4)
//
// of the error term, with a mean-square probe of what it leaves unexplained.

#include <cstdint>
#include <vector>

#include "hweyl/spectrum.hpp"
#include "hweyl/tau.hpp"

namespace hweyl {

struct PsiFourier {
  double approx = 0.0;
  double bound = 1.0;  // min(1, 1 / (H ||u||))
};

// -sum_{h=1}^{floor H} sin(2 pi h u) / (pi h), H >= 2.
PsiFourier psi_fourier(double u, double H);

class ExpansionParams {
 public:
  ExpansionParams(int l, double y);

  int l() const noexcept { return l_; }
  double y() const noexcept { return y_; }
  long double theta() const noexcept { return theta_; }

 private:
  int l_;
  double y_;
  long double theta_;
};

// Evaluator for F_1 with the coefficients tau_l(n) n^{-3/4} precomputed.
class CosineExpansion {
 public:
  CosineExpansion(const ExpansionParams& params, const TauTable& tau);

  const ExpansionParams& params() const noexcept { return params_; }

  double operator()(double x) const;
  double derivative(double x) const;

 private:
  ExpansionParams params_;
  std::vector<std::int64_t> index_;
  std::vector<double> coefficient_;
};

double f1(const ExpansionParams& p, double x, const TauTable& tau);

// 2 pi frac(sqrt(x n)) - pi/4, with the square root taken in extended
// precision so the phase stays accurate for x n up to ~1e12 and beyond.
double reduced_phase(double x, std::int64_t n);

struct RemainderStatistic {
  double emp = 0.0;  // mean over [T, 2T] of (r_psi - F_1)^2 x^{-(2l-1/2)}
  double ref = 0.0;  // y^{-1/2} log^3 T
  double ratio() const { return emp / ref; }
};

RemainderStatistic remainder_mean_square(const ManifoldParams& p, double T, double y, std::int64_t samples,
                                         std::uint64_t seed, int threads = 1,
                                         TauEndpoint endpoint = TauEndpoint::half);

// The largest admissible expansion length T / log^2 T.
double max_expansion_length(double T);

}  // namespace hweyl
