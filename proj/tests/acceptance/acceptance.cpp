// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "hweyl/hweyl.hpp"
#include "oracles.hpp"

using namespace hweyl;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

constexpr int kThreads = 0;
constexpr std::uint64_t kSeed = 20240601;

std::string fmt(const char* pattern, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, pattern, a);
  return buf;
}

void note(const std::string& text) { std::printf("    note: %s\n", text.c_str()); }

bool rel_close(long double a, long double b, long double tol) {
  return std::fabs(a - b) <= tol * std::max(std::fabs(a), std::fabs(b));
}

Outcome cross_check() {
  constexpr double kBound = 2.0;
  Outcome o;
  for (int l : {1, 2}) {
    const auto pts = cross_check_points(ManifoldParams(l), 100.0, 1e4, 600, kSeed + static_cast<unsigned>(l));
    std::vector<double> lx, dev;
    double worst = 0.0;
    for (const auto& pt : pts) {
      lx.push_back(std::log(pt.x));
      dev.push_back(pt.scaled_deviation);
      worst = std::max(worst, pt.scaled_deviation);
    }
    const double slope = least_squares_slope(lx, dev);
    o.pass = o.pass && pts.size() >= 500 && worst <= kBound && slope <= 0.05;
    o.detail += "l=" + std::to_string(l) + " max=" + fmt("%.4f", worst) + " slope=" + fmt("%.4f", slope) + "; ";
  }
  o.detail += "C=" + fmt("%.1f", kBound);
  return o;
}

Outcome lattice_identity() {
  Outcome o;
  const ManifoldParams p1(1), p2(2);
  Count s1 = 0, s2 = 0;
  long checked = 0;
  for (std::int64_t x = 1; x <= 10000; ++x) {
    s1 += f_r_weight(p1, x);
    s2 += lattice_weight(p2, x, 1) + lattice_weight(p2, x, 0);
    const double xd = static_cast<double>(x);
    const Count a1 = n_ii_exact(p1, xd), a2 = n_ii_exact(p2, xd);
    if (a1 != 2 * s1 || a2 != 2 * s2) o.pass = false;
    if (x % 97 == 0 && (a1 != oracle::n_ii(1, xd) || a2 != oracle::n_ii(2, xd))) o.pass = false;
    ++checked;
  }
  o.detail = "integers checked=" + std::to_string(checked);
  return o;
}

Outcome tau_properties() {
  Outcome o;
  constexpr std::int64_t kLimit = 100000;
  long violations = 0;
  double sieve_gap = 0.0;
  for (int l = 1; l <= 3; ++l) {
    for (auto endpoint : {TauEndpoint::excluded, TauEndpoint::half}) {
      const TauTable table(l, kLimit, endpoint);
      for (std::int64_t n = 1; n <= kLimit; ++n) {
        const double t = table.value(n);
        if (std::fabs(t) > static_cast<double>(oracle::divisor_count(n)) + 1e-12) ++violations;
        if (n % 4 == 2 && t != 0.0) ++violations;
        if (n <= 10000) {
          sieve_gap = std::max(sieve_gap, std::fabs(t - tau(l, n, endpoint)));
          sieve_gap = std::max(
              sieve_gap,
              static_cast<double>(std::fabs(t - oracle::tau(l, n, endpoint == TauEndpoint::half))));
        }
      }
    }
  }
  o.pass = violations == 0 && sieve_gap <= 1e-12;
  o.detail = "violations=" + std::to_string(violations) + " max sieve/direct gap=" + fmt("%.2e", sieve_gap);
  return o;
}

Outcome surd_oracle() {
  Outcome o;
  constexpr std::int64_t kY = 60;
  const TauTable t1(1, kY);
  const std::vector<double> tau1(t1.values().begin(), t1.values().end());
  const std::vector<double> ones(kY + 1, 1.0);
  int cases = 0;
  double worst = 0.0;
  for (const auto* f : {&tau1, &ones}) {
    for (int k = 2; k <= 4; ++k) {
      for (int v = 1; v < k; ++v) {
        const auto ref = oracle::surd_series(*f, k, v, kY);
        const auto tuples = surd_solutions(*f, k, v, static_cast<double>(kY));
        const auto kern = s_kv(*f, k, v, static_cast<double>(kY), SeriesMethod::kernel_classes);
        const auto mitm = s_kv(*f, k, v, static_cast<double>(kY), SeriesMethod::meet_in_the_middle);
        const double scale = std::max(1.0, static_cast<double>(std::fabs(ref.value)));
        const double gap = std::max(std::fabs(kern.value - static_cast<double>(ref.value)),
                                    std::fabs(mitm.value - static_cast<double>(ref.value))) / scale;
        worst = std::max(worst, gap);
        const bool same_terms = tuples == ref.tuples && kern.term_count == ref.tuples.size() &&
                                mitm.term_count == ref.tuples.size();
        o.pass = o.pass && same_terms && gap <= 1e-12;
        ++cases;
      }
    }
  }
  o.detail = "cases=" + std::to_string(cases) + " y=60 max relative gap=" + fmt("%.2e", worst);
  return o;
}

Outcome truncation_decay() {
  Outcome o;
  for (auto endpoint : {TauEndpoint::excluded, TauEndpoint::half}) {
    const TauTable t1(1, 1 << 13, endpoint);
    for (int k : {2, 3}) {
      std::vector<double> ys, gaps;
      for (int j = 6; j <= 12; ++j) {
        const double y = std::ldexp(1.0, j);
        const double gap = s_kv(t1.values(), k, 1, 2 * y).value - s_kv(t1.values(), k, 1, y).value;
        ys.push_back(y);
        gaps.push_back(std::fabs(gap));
      }
      const double slope = log_log_slope(ys, gaps);
      const std::string tag = "(" + std::to_string(k) + ",1) slope=" + fmt("%.3f", slope);
      if (endpoint == TauEndpoint::excluded) {
        o.pass = o.pass && slope <= -0.35;
        o.detail += tag + "; ";
      } else {
        note("boundary pairs at half weight: " + tag);
      }
    }
  }
  o.detail += "threshold -0.35";
  return o;
}

Outcome coefficient_identities() {
  Outcome o;
  constexpr long double kPi = std::numbers::pi_v<long double>;
  const auto fact = [](int n) {
    long double f = 1.0L;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
  };
  long double worst = 0.0L;
  const auto track = [&](long double a, long double b) {
    worst = std::max(worst, std::fabs(a - b) / std::fabs(b));
    o.pass = o.pass && rel_close(a, b, 1e-12L);
  };
  for (int l = 1; l <= 3; ++l) {
    const ManifoldParams p(l);
    const long double b = 0.8173L;
    track(predicted_coefficient_t(p, 3, b), std::pow(2.0L, 6.75L - 6 * l) * l * l * l * b /
                                                (std::pow(fact(l), 3) * std::pow(kPi, 3.0L * l + 2.25L) * (1 + 12 * l)));
    track(predicted_coefficient_t(p, 4, b),
          std::pow(2.0L, 4.0L - 8 * l) * l * l * l * b / (std::pow(fact(l), 4) * std::pow(kPi, 4.0L * l + 3)));

    const TauTable tau(l, 4096);
    long double sum = 0.0L;
    for (std::int64_t n = 1; n <= 4096; ++n) {
      sum += static_cast<long double>(tau.value(n)) * tau.value(n) / std::pow(static_cast<long double>(n), 1.5L);
    }
    const long double c2 = std::pow(2.0L, 4.5L - 4 * l) * l * l /
                           (fact(l) * fact(l) * std::pow(kPi, 2.0L * l + 1.5L) * (4 * l + 1)) * sum;
    track(c2l_constant(p, 4096, tau), c2);
    track(predicted_coefficient_t(p, 2, sum), c2);

    for (int k = 2; k <= 9; ++k) {
      const long double lhs = predicted_coefficient_t(p, k, b) * (4 + k * (4 * l - 1)) / 4;
      track(lhs, predicted_coefficient_x(p, k, b) * std::pow(2 * kPi, -k * (l - 0.25L)));
    }
  }
  o.detail = "max relative error=" + fmt("%.2e", static_cast<double>(worst));
  return o;
}

Outcome mean_square() {
  const ManifoldParams p(1);
  const TauTable tau(1, 4096, TauEndpoint::half);
  const double b2 = b_k(tau.values(), 2, 4096);
  const auto m = moment_estimate(p, 2, 1e6, 200000, MomentMode::signed_power, kSeed, kThreads);
  const auto r = make_report(m.normalized, static_cast<double>(predicted_coefficient_x(p, 2, b2)));
  Outcome o;
  o.pass = std::fabs(r.relative_deviation) <= 0.15;
  o.detail = "estimate=" + fmt("%.5f", r.estimate) + " predicted=" + fmt("%.5f", r.predicted) +
             " deviation=" + fmt("%+.3f", r.relative_deviation);
  const TauTable excl(1, 4096);
  note("with boundary pairs excluded the prediction would be " +
       fmt("%.5f", static_cast<double>(predicted_coefficient_x(p, 2, b_k(excl.values(), 2, 4096)))));
  return o;
}

Outcome third_moment() {
  const ManifoldParams p(1);
  const TauTable tau(1, 4096, TauEndpoint::half);
  const double b3 = b_k(tau.values(), 3, 4096);
  const double predicted = static_cast<double>(predicted_coefficient_x(p, 3, b3));
  Outcome o;
  for (double T : {1e5, 1e6}) {
    const auto m = moment_estimate(p, 3, T, 200000, MomentMode::signed_power, kSeed, kThreads);
    const bool sign_ok = std::signbit(m.normalized) == std::signbit(b3);
    o.pass = o.pass && sign_ok;
    o.detail += "T=" + fmt("%.0e", T) + " estimate=" + fmt("%.5f", m.normalized) + "; ";
    if (T == 1e6) {
      const double dev = (m.normalized - predicted) / predicted;
      o.pass = o.pass && std::fabs(dev) <= 0.25;
      o.detail += "predicted=" + fmt("%.5f", predicted) + " deviation=" + fmt("%+.3f", dev);
    }
  }
  return o;
}

Outcome growth() {
  Outcome o;
  const std::vector<double> Ts = {1e4, 1e5, 1e6};
  for (double A : {2.0, 4.0}) {
    const auto g = abs_moment_growth(ManifoldParams(1), A, Ts, 100000, kSeed, kThreads);
    std::vector<double> vals;
    o.detail += "A=" + fmt("%.0f", A) + ":";
    for (const auto& pt : g) {
      vals.push_back(pt.report.estimate);
      o.pass = o.pass && std::fabs(pt.report.relative_deviation) < 0.20;
      o.detail += " " + fmt("%.4f", pt.report.estimate);
    }
    const double slope = log_log_slope(Ts, vals);
    o.pass = o.pass && slope <= 0.05;
    o.detail += " slope=" + fmt("%.3f", slope) + "; ";
  }
  return o;
}

double mean_of(const std::vector<double>& v) {
  long double s = 0.0L;
  for (double x : v) s += x;
  return static_cast<double>(s / static_cast<long double>(v.size()));
}

double stderr_of(const std::vector<double>& v, double mean) {
  long double s = 0.0L;
  for (double x : v) s += (x - mean) * (x - mean);
  return std::sqrt(static_cast<double>(s / static_cast<long double>(v.size() - 1)) / static_cast<double>(v.size()));
}

Outcome distribution() {
  const ManifoldParams p(1);
  auto a = normalized_error_samples(p, 1e5, 2e5, 100000, kSeed, kThreads);
  auto b = normalized_error_samples(p, 4e5, 8e5, 100000, kSeed + 1, kThreads);
  Outcome o;
  for (const auto* v : {&a, &b}) {
    const double m = mean_of(*v), se = stderr_of(*v, m);
    o.pass = o.pass && std::fabs(m) <= 3.0 * se;
    o.detail += "mean=" + fmt("%+.5f", m) + " (" + fmt("%.1f", m / se) + " SE); ";
  }
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double ks = kolmogorov_distance(a, b);
  o.pass = o.pass && ks <= 0.05;
  o.detail += "KS=" + fmt("%.4f", ks);
  return o;
}

Outcome remainder() {
  const ManifoldParams p(1);
  const double T = 1e5;
  const double y = max_expansion_length(T);
  const auto full = remainder_mean_square(p, T, y, 20000, kSeed, kThreads);
  const auto quarter = remainder_mean_square(p, T, y / 4.0, 20000, kSeed, kThreads);
  const double ratio = quarter.emp / full.emp;
  Outcome o;
  o.pass = ratio >= 1.3 && ratio <= 3.2;
  o.detail = "y=" + fmt("%.1f", y) + " emp(y)=" + fmt("%.3e", full.emp) + " emp(y/4)=" + fmt("%.3e", quarter.emp) +
             " ratio=" + fmt("%.3f", ratio);
  const auto ex_full = remainder_mean_square(p, T, y, 20000, kSeed, kThreads, TauEndpoint::excluded);
  const auto ex_quarter = remainder_mean_square(p, T, y / 4.0, 20000, kSeed, kThreads, TauEndpoint::excluded);
  note("with boundary pairs excluded the ratio would be " + fmt("%.3f", ex_quarter.emp / ex_full.emp));
  return o;
}

}  // namespace

int main() {
  using Criterion = Outcome (*)();
  const std::vector<Criterion> criteria = {
      cross_check,  lattice_identity, tau_properties, surd_oracle, truncation_decay, coefficient_identities,
      mean_square,  third_moment,     growth,         distribution, remainder,
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %zu: %s  %s  [%.1fs]\n", i + 1, o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
