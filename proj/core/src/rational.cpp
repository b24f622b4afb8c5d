#include "hweyl/rational.hpp"

#include <numeric>

#include "hweyl/errors.hpp"

namespace hweyl {

namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) throw ResourceError("rational overflow");
  return out;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) throw ResourceError("rational overflow");
  return out;
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  require(den != 0, "rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  num_ = num / g;
  den_ = den / g;
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational operator+(const Rational& a, const Rational& b) {
  const std::int64_t g = std::gcd(a.den(), b.den());
  const std::int64_t lhs = checked_mul(a.num(), b.den() / g);
  const std::int64_t rhs = checked_mul(b.num(), a.den() / g);
  return Rational(checked_add(lhs, rhs), checked_mul(a.den() / g, b.den()));
}

Rational operator*(const Rational& a, const Rational& b) {
  const std::int64_t g1 = std::gcd(a.num(), b.den());
  const std::int64_t g2 = std::gcd(b.num(), a.den());
  return Rational(checked_mul(a.num() / g1, b.num() / g2), checked_mul(a.den() / g2, b.den() / g1));
}

}  // namespace hweyl
